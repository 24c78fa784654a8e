use std::process::{Command, Output};

use nambu_core::brackets::bracket_ho;
use nambu_core::parse::parse;
use nambu_core::Signature;
use proptest::prelude::*;
use serde_json::Value;

fn nambu(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nambu")).args(args).output().expect("run nambu")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn ho_bracket_of_x1_with_xi1_xi2() {
    let o = nambu(&["bracket", "--kind", "ho", "--m", "2", "--n", "2", "x1", "xi1*xi2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "xi2\n");
}

#[test]
fn eval_prints_canonical_form() {
    let o = nambu(&["eval", "xi2*xi1 + x1*x1 - x1^2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "-xi1*xi2\n");
    let o = nambu(&["eval", "x1^5", "--trunc", "4"]);
    assert_eq!(stdout(&o), "0\n");
}

#[test]
fn parse_errors_exit_2() {
    let o = nambu(&["eval", "x1 +"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("parse error"));
    let o = nambu(&["eval", "x7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["error"]["position"], 1);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(nambu(&["bracket", "--kind", "ho", "x1"]).status.code(), Some(2));
    assert_eq!(nambu(&["bracket", "--kind", "poisson", "--m", "3", "x1", "x2"]).status.code(), Some(2));
    assert_eq!(nambu(&["check", "--identity", "jacobi", "--kind", "nambu"]).status.code(), Some(2));
    assert_eq!(nambu(&["counterexample", "--family", "step1", "--params", "6"]).status.code(), Some(2));
    assert_eq!(nambu(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn gauge_flag_twists_brackets() {
    let o = nambu(&["bracket", "--kind", "nambu", "--m", "2", "--n", "0", "--phi", "1+x1", "x1", "x2"]);
    assert_eq!(stdout(&o), "1 + 2*x1\n");
    let o = nambu(&["bracket", "--kind", "ko", "--m", "1", "--n", "1", "--tau", "--phi", "1+x1", "1", "xi1*tau"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn goodpair_preset_json_verdict() {
    let o = nambu(&["goodpair", "--preset", "a2-ho", "--size", "3", "--trunc", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["verdict"], true);
    assert_eq!(v["g2"]["generated"], true);
}

#[test]
fn goodpair_failure_exits_1() {
    let o = nambu(&["goodpair", "--mu", "xi1*xi2", "--arity", "2", "--m", "3", "--n", "3", "--trunc", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict: false"));
}

#[test]
fn counterexample_reports_marker() {
    let o = nambu(&["counterexample", "--family", "step1", "--params", "6,4", "--trunc", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["marker"], "xi2*xi3*xi4*xi6");
    assert_eq!(v["marker_coefficient"], "2");
}

#[test]
fn changevars_straightens_phi() {
    let o = nambu(&["changevars", "--phi", "1 + x1", "--m", "3", "--n", "3", "--trunc", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("symplectomorphism: PASS"));
    assert_eq!(nambu(&["changevars", "--phi", "1 + x1", "--m", "2", "--n", "3"]).status.code(), Some(2));
}

#[test]
fn sampled_checks_pass() {
    for args in [
        &["check", "--identity", "filippov", "--kind", "nambu", "--m", "3", "--n", "0", "--trunc", "6", "--samples", "3"][..],
        &["check", "--identity", "leibniz", "--kind", "dzhuma", "--m", "2", "--n", "0", "--samples", "3"],
        &["check", "--identity", "skew", "--kind", "nambu", "--m", "3", "--n", "0", "--swap", "1,3", "--samples", "3"],
        &["check", "--identity", "jacobi", "--kind", "ho", "--samples", "5"],
        &["check", "--identity", "odd-leibniz", "--kind", "ko", "--m", "1", "--n", "1", "--tau", "--samples", "5"],
    ] {
        let o = nambu(args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn explicit_check_arguments() {
    let o = nambu(&["check", "--identity", "skew", "--kind", "poisson", "--m", "2", "--n", "0", "x1", "x2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    assert_eq!(v["tuples"], 1);
    // Filippov for a 2-ary bracket takes three elements.
    let o = nambu(&["check", "--identity", "filippov", "--kind", "nambu", "--m", "2", "--n", "0", "x1", "x2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn demo_paper_is_deterministic() {
    let a = nambu(&["demo-paper"]);
    let b = nambu(&["demo-paper"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(stdout(&a), include_str!("golden/demo_paper.txt"));
    let v = json(&nambu(&["demo-paper", "--format", "json"]));
    assert_eq!(v["schema"], 1);
    assert!(v["rows"].as_array().unwrap().len() > 40);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn cli_bracket_matches_library(i in 1usize..=2, j in 1usize..=2, a in 0u32..3, b in 0u32..3) {
        let sig = Signature::ho(2, 4);
        let f = format!("x{i}^{a}*xi{j}");
        let g = format!("x{j}^{b}*xi1*xi2 + x{i}");
        let o = nambu(&["bracket", "--kind", "ho", &f, &g]);
        let want = bracket_ho(&parse(&f, sig).unwrap(), &parse(&g, sig).unwrap()).unwrap();
        prop_assert_eq!(stdout(&o), format!("{want}\n"));
    }
}
