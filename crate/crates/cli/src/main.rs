//! `nambu`: evaluate, bracket and check elements of `O(m, n)` from the command line.

mod demo;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nambu_core::brackets::{BracketKind, NaryBracket, OddBracket, Pairing};
use nambu_core::gauge::{change_of_variables, verify_symplectomorphism, Gauge};
use nambu_core::good_pairs::{
    classification_witness, counterexample_family, good_pair_report, Classification, Family, GradedPo,
};
use nambu_core::identities::{
    check_filippov, check_generalized_leibniz, check_odd_leibniz, check_skew, check_super_jacobi, IdentityReport,
};
use nambu_core::parse::parse;
use nambu_core::sample::Sampler;
use nambu_core::{Error, Signature, SuperElement};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "nambu", version, about = "Exact computations with Nambu brackets and odd Poisson superalgebras")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Global {
    /// Number of even variables x1..xm.
    #[arg(long, global = true, default_value_t = 2)]
    m: usize,
    /// Number of odd variables xi1..xin (not counting tau).
    #[arg(long, global = true, default_value_t = 2)]
    n: usize,
    /// Add the odd variable tau = xi(n+1).
    #[arg(long, global = true)]
    tau: bool,
    /// Truncation order in the even variables.
    #[arg(long, global = true, default_value_t = 4)]
    trunc: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for sampled inputs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Kind {
    Ho,
    Ko,
    Poisson,
    Lagrange,
    Nambu,
    Dzhuma,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum IdentityName {
    Filippov,
    Skew,
    Leibniz,
    OddLeibniz,
    Jacobi,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an expression and print its canonical form.
    Eval { expr: String },
    /// Apply a bracket to the given elements.
    Bracket {
        #[arg(long, value_enum)]
        kind: Kind,
        /// Gauge factor: evaluate phi^-1 [phi a_1, ..., phi a_k].
        #[arg(long)]
        phi: Option<String>,
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Check an identity on given or sampled elements.
    Check {
        #[arg(long, value_enum)]
        identity: IdentityName,
        #[arg(long, value_enum)]
        kind: Kind,
        #[arg(long)]
        phi: Option<String>,
        /// Number of sampled tuples when no elements are given.
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Transposed positions for the skew check.
        #[arg(long, value_delimiter = ',', default_value = "1,2")]
        swap: Vec<usize>,
        exprs: Vec<String>,
    },
    /// Report the good-pair conditions G1, G2, G3.
    Goodpair {
        #[arg(long, value_parser = parse_preset, conflicts_with = "mu")]
        preset: Option<Classification>,
        /// h for the a1 presets, n for the a2 presets.
        #[arg(long, default_value_t = 1)]
        size: usize,
        /// mu in the global signature (O(n, n), or O(n, n+1) with --tau).
        #[arg(long, requires = "arity")]
        mu: Option<String>,
        #[arg(long)]
        arity: Option<usize>,
        /// Degree cap (defaults to --trunc).
        #[arg(long)]
        cap: Option<u32>,
        /// Gauge factor; with a preset, mu is replaced by phi^-1 mu.
        #[arg(long)]
        phi: Option<String>,
    },
    /// Build a G3 counterexample and evaluate its commutator chain.
    Counterexample {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// n,k
        #[arg(long, value_delimiter = ',', required = true)]
        params: Vec<usize>,
    },
    /// Straighten phi*xi1...xin by a change of variables in O(n, n).
    Changevars {
        #[arg(long)]
        phi: String,
    },
    /// Reproduce the worked computations as a pass/fail table.
    DemoPaper,
}

fn parse_preset(s: &str) -> Result<Classification, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Outcome of a subcommand: text lines, a JSON body and whether every check passed.
struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = cli.global.format;
    match run(&cli) {
        Ok(out) => {
            match format {
                Format::Text => print!("{}", out.text),
                Format::Json => {
                    let mut body = out.json;
                    body["schema"] = json!(1);
                    println!("{}", serde_json::to_string_pretty(&body).expect("json"));
                }
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            match format {
                Format::Text => eprintln!("error: {e}"),
                Format::Json => {
                    let mut err = json!({ "message": e.to_string() });
                    match &e {
                        Error::Parse { position, .. } | Error::UnknownVariable { position, .. } => {
                            err["position"] = json!(position);
                        }
                        _ => {}
                    }
                    println!("{}", json!({ "schema": 1, "error": err }));
                }
            }
            ExitCode::from(2)
        }
    }
}

fn signature(g: &Global) -> nambu_core::Result<Signature> {
    Signature::new(g.m, g.n, g.tau, g.trunc)
}

fn parse_all(exprs: &[String], sig: Signature) -> nambu_core::Result<Vec<SuperElement>> {
    exprs.iter().map(|e| parse(e, sig)).collect()
}

fn run(cli: &Cli) -> nambu_core::Result<Outcome> {
    let g = &cli.global;
    match &cli.command {
        Command::Eval { expr } => {
            let e = parse(expr, signature(g)?)?;
            Ok(Outcome {
                text: format!("{e}\n"),
                json: json!({ "command": "eval", "result": e.to_string() }),
                ok: true,
            })
        }
        Command::Bracket { kind, phi, exprs } => {
            let sig = signature(g)?;
            let args = parse_all(exprs, sig)?;
            let phi = phi.as_deref().map(|p| parse(p, sig)).transpose()?;
            let r = apply_bracket(*kind, sig, phi, &args)?;
            Ok(Outcome {
                text: format!("{r}\n"),
                json: json!({ "command": "bracket", "result": r.to_string() }),
                ok: true,
            })
        }
        Command::Check { identity, kind, phi, samples, swap, exprs } => {
            let sig = signature(g)?;
            let phi = phi.as_deref().map(|p| parse(p, sig)).transpose()?;
            let given = parse_all(exprs, sig)?;
            let (report, count) = run_check(*identity, *kind, sig, phi, &given, *samples, swap, g.seed)?;
            Ok(report_outcome("check", &report, count))
        }
        Command::Goodpair { preset, size, mu, arity, cap, phi } => {
            let cap = cap.unwrap_or(g.trunc);
            let (pair, mu, arity) = match (preset, mu) {
                (Some(kind), _) => {
                    let w = classification_witness(*kind, *size, g.trunc)?;
                    match phi {
                        Some(p) => {
                            let phi = parse(p, w.pair.signature())?;
                            let mu = (phi.invert()? * &w.mu).with_trunc(g.trunc);
                            (w.pair.with_gauge(phi)?, mu, w.arity)
                        }
                        None => (w.pair, w.mu, w.arity),
                    }
                }
                (None, Some(mu)) => {
                    let sig = signature(g)?;
                    let pair = GradedPo::from_signature(sig)?;
                    let pair = match phi {
                        Some(p) => pair.with_gauge(parse(p, sig)?)?,
                        None => pair,
                    };
                    (pair, parse(mu, sig)?, arity.expect("clap enforces --arity"))
                }
                (None, None) => return Err(Error::InvalidParameter("give --preset or --mu".into())),
            };
            let report = good_pair_report(&pair, &mu, arity, cap)?;
            let mut text = format!("pair: {} with mu = {mu}, arity {arity}, degree cap {cap}\n", pair.signature());
            text += &format!("g1: {}\n", verdict_line(&report.g1));
            text += &format!(
                "g2: {}{}\n",
                if report.g2.generated { "generated" } else { "not generated" },
                if report.g2.missing.is_empty() {
                    String::new()
                } else {
                    format!(" (missing: {})", report.g2.missing.join(", "))
                }
            );
            text += &format!("g3: {}\n", verdict_line(&report.g3));
            text += &format!("verdict: {}\n", report.verdict);
            let mut body = serde_json::to_value(&report).expect("report serializes");
            body["command"] = json!("goodpair");
            Ok(Outcome { text, json: body, ok: report.verdict })
        }
        Command::Counterexample { family, params } => {
            let [n, k] = params[..] else {
                return Err(Error::InvalidParameter(format!("--params takes n,k, got {} values", params.len())));
            };
            let c = counterexample_family(*family, n, k, g.trunc, None)?;
            let coefficient = c.marker_coefficient();
            let chain: Vec<String> = c.chain.iter().map(ToString::to_string).collect();
            let ok = !c.value.is_zero() && coefficient != nambu_core::algebra::scalar(0);
            let text = format!(
                "mu: {}\nchain (innermost first): {}\nvalue: {}\nmarker {}: coefficient {}\n",
                c.mu,
                chain.join(", "),
                c.value,
                c.marker,
                coefficient
            );
            Ok(Outcome {
                text,
                json: json!({
                    "command": "counterexample",
                    "mu": c.mu.to_string(),
                    "chain": chain,
                    "value": c.value.to_string(),
                    "marker": c.marker.to_string(),
                    "marker_coefficient": coefficient.to_string(),
                    "violates_g3": ok,
                }),
                ok,
            })
        }
        Command::Changevars { phi } => {
            if g.m != g.n || g.tau {
                return Err(Error::IncompatibleSignature("changevars needs --m equal to --n and no --tau".into()));
            }
            let sig = Signature::ho(g.n, g.trunc);
            let phi = parse(phi, sig)?;
            let coords = change_of_variables(&phi)?;
            let report = verify_symplectomorphism(&coords)?;
            let (xs, xis) = coords.truncated();
            let top = SuperElement::product(sig, &xis)?;
            let xi_all: Vec<SuperElement> = (1..=g.n).map(|i| SuperElement::xi(sig, i)).collect::<nambu_core::Result<_>>()?;
            let want = &phi * SuperElement::product(sig, &xi_all)?;
            let top_ok = top == want;
            let mut text = String::new();
            for (i, x) in xs.iter().enumerate() {
                text += &format!("x'{} = {x}\n", i + 1);
            }
            for (i, xi) in xis.iter().enumerate() {
                text += &format!("xi'{} = {xi}\n", i + 1);
            }
            text += &format!("symplectomorphism: {}\n", verdict_line(&report));
            text += &format!("xi'1*...*xi'{} = {top}: {}\n", g.n, if top_ok { "PASS" } else { "FAIL" });
            Ok(Outcome {
                text,
                json: json!({
                    "command": "changevars",
                    "x": xs.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "xi": xis.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "symplectomorphism": report,
                    "top_form": top.to_string(),
                    "top_form_matches": top_ok,
                }),
                ok: report.passed && top_ok,
            })
        }
        Command::DemoPaper => {
            let rows = demo::rows(g.seed)?;
            let failed = rows.iter().filter(|r| !r.passed).count();
            Ok(Outcome { text: demo::render(&rows, g.seed), json: demo::to_json(&rows, g.seed), ok: failed == 0 })
        }
    }
}

fn verdict_line(r: &IdentityReport) -> String {
    match &r.witness {
        None => "PASS".into(),
        Some(w) => format!(
            "FAIL at ({}) with residual {}",
            w.rendered_inputs().join(", "),
            w.rendered_residual()
        ),
    }
}

fn report_outcome(command: &str, r: &IdentityReport, count: usize) -> Outcome {
    let text = format!("{}: {} ({count} tuple{})\n", r.identity, verdict_line(r), if count == 1 { "" } else { "s" });
    let mut body = serde_json::to_value(r).expect("report serializes");
    body["command"] = json!(command);
    body["tuples"] = json!(count);
    Outcome { text, json: body, ok: r.passed }
}

fn bracket_kind(kind: Kind, sig: Signature, arity: Option<usize>) -> nambu_core::Result<BracketKind> {
    Ok(match kind {
        Kind::Ho => BracketKind::Ho,
        Kind::Ko => BracketKind::Ko,
        Kind::Poisson => {
            if !sig.even.is_multiple_of(2) {
                return Err(Error::IncompatibleSignature(format!("the Poisson bracket needs an even --m, got {}", sig.even)));
            }
            BracketKind::Poisson(Pairing::canonical(sig.even / 2))
        }
        Kind::Lagrange => {
            if sig.even % 2 != 1 {
                return Err(Error::IncompatibleSignature(format!("the Lagrange bracket needs an odd --m, got {}", sig.even)));
            }
            BracketKind::Lagrange(Pairing::contact(sig.even / 2))
        }
        Kind::Nambu => BracketKind::Nambu(arity.unwrap_or(sig.even)),
        Kind::Dzhuma => BracketKind::Dzhumadildaev(arity.unwrap_or(sig.even + 1)),
    })
}

fn apply_bracket(kind: Kind, sig: Signature, phi: Option<SuperElement>, args: &[SuperElement]) -> nambu_core::Result<SuperElement> {
    let base = bracket_kind(kind, sig, Some(args.len()))?;
    match (phi, kind) {
        (None, _) => base.apply(args),
        (Some(phi), Kind::Ho | Kind::Ko) => {
            if args.len() != 2 {
                return Err(Error::Arity { expected: 2, got: args.len() });
            }
            Gauge::odd(phi, base)?.bracket(&args[0], &args[1])
        }
        (Some(phi), _) => Gauge::new(phi, base)?.apply(args),
    }
}

/// A bracket seen both as n-ary and (for HO/KO) as odd, possibly gauged.
enum Subject {
    Nary(Box<dyn NaryBracket>),
    Odd(Box<dyn OddBracket>),
}

fn subject(kind: Kind, sig: Signature, phi: Option<SuperElement>) -> nambu_core::Result<Subject> {
    let base = bracket_kind(kind, sig, None)?;
    Ok(match (kind, phi) {
        (Kind::Ho | Kind::Ko, None) => Subject::Odd(Box::new(base)),
        (Kind::Ho | Kind::Ko, Some(phi)) => Subject::Odd(Box::new(Gauge::odd(phi, base)?)),
        (_, None) => Subject::Nary(Box::new(base)),
        (_, Some(phi)) => Subject::Nary(Box::new(Gauge::new(phi, base)?)),
    })
}

#[allow(clippy::too_many_arguments)]
fn run_check(
    identity: IdentityName,
    kind: Kind,
    sig: Signature,
    phi: Option<SuperElement>,
    given: &[SuperElement],
    samples: usize,
    swap: &[usize],
    seed: u64,
) -> nambu_core::Result<(IdentityReport, usize)> {
    let subject = subject(kind, sig, phi)?;
    let mut sampler = Sampler::new(seed);
    let (arity, odd) = match &subject {
        Subject::Nary(b) => (b.arity(), false),
        Subject::Odd(_) => (2, true),
    };
    let width = match identity {
        IdentityName::Filippov => 2 * arity - 1,
        IdentityName::Skew => arity,
        IdentityName::Leibniz => arity + 1,
        IdentityName::OddLeibniz | IdentityName::Jacobi => 3,
    };
    let tuples: Vec<Vec<SuperElement>> = if given.is_empty() {
        (0..samples)
            .map(|_| {
                (0..width)
                    .map(|_| if odd { sampler.any_homogeneous(sig) } else { sampler.even_poly(sig, 2) })
                    .collect()
            })
            .collect()
    } else {
        if given.len() != width {
            return Err(Error::Arity { expected: width, got: given.len() });
        }
        vec![given.to_vec()]
    };
    let name = match identity {
        IdentityName::Filippov => "filippov",
        IdentityName::Skew => "skew",
        IdentityName::Leibniz => "generalized-leibniz",
        IdentityName::OddLeibniz => "odd-leibniz",
        IdentityName::Jacobi => "jacobi",
    };
    for t in &tuples {
        let r = match (&subject, identity) {
            (Subject::Nary(b), IdentityName::Filippov) => check_filippov(b.as_ref(), t)?,
            (Subject::Nary(b), IdentityName::Skew) => {
                if swap.len() != 2 {
                    return Err(Error::InvalidParameter("--swap takes two positions".into()));
                }
                check_skew(b.as_ref(), t, (swap[0], swap[1]))?
            }
            (Subject::Nary(b), IdentityName::Leibniz) => {
                check_generalized_leibniz(b.as_ref(), &t[..arity - 1], &t[arity - 1], &t[arity])?
            }
            (Subject::Odd(b), IdentityName::OddLeibniz) => check_odd_leibniz(b.as_ref(), &t[0], &t[1], &t[2])?,
            (Subject::Odd(b), IdentityName::Jacobi) => check_super_jacobi(b.as_ref(), &t[0], &t[1], &t[2])?,
            (Subject::Odd(_), _) => {
                return Err(Error::Unsupported(format!("{name} applies to n-ary brackets; use odd-leibniz or jacobi")))
            }
            (Subject::Nary(_), _) => {
                return Err(Error::Unsupported(format!("{name} applies to the odd brackets ho and ko")))
            }
        };
        if !r.passed {
            return Ok((r, tuples.len()));
        }
    }
    Ok((IdentityReport::pass(name), tuples.len()))
}
