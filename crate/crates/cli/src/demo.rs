//! The worked computations, recomputed and compared against their stated values.

use std::sync::Arc;

use itertools::Itertools;
use nambu_core::brackets::{bracket_ho, bracket_ko, BracketKind, NaryBracket, OddBracket};
use nambu_core::calculus::{d_dtau, d_dx, d_dxi, euler_e, integral_x};
use nambu_core::gauge::{change_of_variables, gauge_nambu, verify_symplectomorphism, Gauge};
use nambu_core::good_pairs::{
    check_g2, check_g3, classification_witness, good_pair_report, nambu_from_pair, p0_coefficients, Classification,
    GradedPo,
};
use nambu_core::identities::{check_filippov, check_generalized_leibniz, check_odd_leibniz, check_skew};
use nambu_core::parse::parse;
use nambu_core::sample::Sampler;
use nambu_core::universal::{gw_membership, mu_from_nambu, FiniteSuperSpace, MultiMap};
use nambu_core::algebra::{monomials, ratio, scalar};
use nambu_core::{Parity, Result, Signature, SuperElement};
use rand::Rng;
use serde_json::{json, Value};

pub struct Row {
    pub section: &'static str,
    pub claim: String,
    pub passed: bool,
    pub computed: String,
}

impl Row {
    fn eq(section: &'static str, claim: impl Into<String>, expected: &SuperElement, computed: &SuperElement) -> Row {
        Row { section, claim: claim.into(), passed: expected == computed, computed: computed.to_string() }
    }

    fn check(section: &'static str, claim: impl Into<String>, passed: bool, computed: impl Into<String>) -> Row {
        Row { section, claim: claim.into(), passed, computed: computed.into() }
    }

    /// A claim checked on `total` inputs of which `good` agreed.
    fn count(section: &'static str, claim: impl Into<String>, good: usize, total: usize) -> Row {
        Row::check(section, claim, good == total, format!("{good}/{total}"))
    }
}

fn el(s: &str, sig: Signature) -> Result<SuperElement> {
    parse(s, sig)
}

fn xi_prod(sig: Signature, idx: impl IntoIterator<Item = usize>) -> Result<SuperElement> {
    let v: Vec<SuperElement> = idx.into_iter().map(|i| SuperElement::xi(sig, i)).collect::<Result<_>>()?;
    SuperElement::product(sig, &v)
}

fn int(sig: Signature, c: i64) -> SuperElement {
    SuperElement::integer(sig, c)
}

/// Every row, in a fixed order; `seed` drives the sampled inputs.
pub fn rows(seed: u64) -> Result<Vec<Row>> {
    let mut s = Sampler::new(seed);
    let mut out = Vec::new();
    po2(&mut s, &mut out)?;
    pon(&mut s, &mut out)?;
    po2h1(&mut s, &mut out)?;
    pontau(&mut s, &mut out)?;
    grading(&mut out)?;
    brackets(&mut s, &mut out)?;
    good_pairs(&mut out)?;
    reconstruction(&mut out)?;
    gauge(&mut s, &mut out)?;
    universal(&mut s, &mut out)?;
    Ok(out)
}

fn po2(s: &mut Sampler, out: &mut Vec<Row>) -> Result<()> {
    const SEC: &str = "PO2";
    for h in 1..=2 {
        let w = classification_witness(Classification::A1Ho, h, 4)?;
        let (sig, mu) = (w.pair.signature(), &w.mu);
        for i in 1..=h {
            let v = bracket_ho(&SuperElement::x(sig, i)?, mu)?;
            out.push(Row::eq(SEC, format!("h={h}: [x{i}, mu]_HO = xi{}", h + i), &SuperElement::xi(sig, h + i)?, &v));
            let v = bracket_ho(&SuperElement::x(sig, h + i)?, mu)?;
            out.push(Row::eq(SEC, format!("h={h}: [x{}, mu]_HO = -xi{i}", h + i), &-SuperElement::xi(sig, i)?, &v));
        }
        let mut good = 0;
        for _ in 0..20 {
            let f = s.even_poly(sig, 4);
            if bracket_ho(mu, &bracket_ho(&f, mu)?)?.is_zero() {
                good += 1;
            }
        }
        out.push(Row::count(SEC, format!("h={h}: [mu, [f, mu]_HO]_HO = 0 for random f in P_-1"), good, 20));
    }
    Ok(())
}

fn pon(s: &mut Sampler, out: &mut Vec<Row>) -> Result<()> {
    const SEC: &str = "POn";
    let w = classification_witness(Classification::A2Ho, 3, 4)?;
    let (sig, mu) = (w.pair.signature(), &w.mu);
    let x = |i| SuperElement::x(sig, i);
    let v = bracket_ho(&x(2)?, &bracket_ho(&x(1)?, mu)?)?;
    out.push(Row::eq(SEC, "n=3: [x2, [x1, mu]_HO]_HO = xi3", &SuperElement::xi(sig, 3)?, &v));

    let mut good = 0;
    for _ in 0..10 {
        let fs: Vec<SuperElement> = (0..3).map(|_| s.even_poly(sig, 3)).collect();
        let f = (1..=3).try_fold(SuperElement::zero(sig), |acc, i| Ok::<_, nambu_core::Error>(acc + &fs[i - 1] * SuperElement::xi(sig, i)?))?;
        let div = (1..=3).try_fold(SuperElement::zero(sig), |acc, i| Ok::<_, nambu_core::Error>(acc + d_dx(i, &fs[i - 1])?))?;
        if bracket_ho(&f, mu)? == div * mu {
            good += 1;
        }
    }
    out.push(Row::count(SEC, "n=3: [sum f_i xi_i, mu]_HO = (sum_i df_i/dx_i) xi1*xi2*xi3 for random f_i", good, 10));

    // Elements [[mu, a1], a2] are divergence free, hence commute with mu.
    let gens: Vec<SuperElement> = monomials(sig, 2, Some(&[0]))
        .into_iter()
        .map(|m| SuperElement::from_term(sig, m, scalar(1)))
        .collect();
    let (mut div_free, mut commute, mut total) = (0, 0, 0);
    for (a1, a2) in gens.iter().cartesian_product(&gens) {
        let f = bracket_ho(&bracket_ho(mu, a1)?, a2)?;
        let coeffs = p0_coefficients(&f)?;
        let div = coeffs.iter().enumerate().try_fold(SuperElement::zero(sig), |acc, (i, c)| {
            Ok::<_, nambu_core::Error>(acc + d_dx(i + 1, c)?)
        })?;
        total += 1;
        div_free += usize::from(div.is_zero());
        commute += usize::from(bracket_ho(mu, &f)?.is_zero());
    }
    out.push(Row::count(SEC, "n=3: sum_i df_i/dx_i = 0 for f = [[mu, a1], a2], a1, a2 monomials of degree <= 2", div_free, total));
    out.push(Row::count(SEC, "n=3: [mu, [[mu, a1], a2]]_HO = 0 on the same tuples", commute, total));
    Ok(())
}

fn po2h1(s: &mut Sampler, out: &mut Vec<Row>) -> Result<()> {
    const SEC: &str = "PO2h+1";
    let h = 1;
    let w = classification_witness(Classification::A1Ko, h, 4)?;
    let (sig, mu) = (w.pair.signature(), &w.mu);
    let xi = |i| SuperElement::xi(sig, i);
    let x = |i| SuperElement::x(sig, i);
    let v = bracket_ko(&int(sig, 1), mu)?;
    out.push(Row::eq(SEC, "h=1: [1, mu]_KO = 2 xi2", &xi(h + 1)?.scale(&scalar(2)), &v));
    for i in 1..=h + 1 {
        let want = xi(i + h + 1)? - x(i)? * xi(h + 1)?;
        let v = bracket_ko(&x(i)?, mu)?;
        out.push(Row::eq(SEC, format!("h=1: [x{i}, mu]_KO = {want}"), &want, &v));
    }
    for i in 1..=h {
        let want = -xi(i)? - x(i + h + 1)? * xi(h + 1)?;
        let v = bracket_ko(&x(i + h + 1)?, mu)?;
        out.push(Row::eq(SEC, format!("h=1: [x{}, mu]_KO = {want}", i + h + 1), &want, &v));
    }
    let (mut formula, mut chain) = (0, 0);
    for _ in 0..20 {
        let f = s.even_poly(sig, 4);
        let mut want = d_dx(h + 1, &f)? * xi(2 * h + 2)? - (euler_e(&f) - f.scale(&scalar(2))) * xi(h + 1)?;
        for i in 1..=h {
            want = want + d_dx(i, &f)? * xi(i + h + 1)? - d_dx(i + h + 1, &f)? * xi(i)?;
        }
        let fm = bracket_ko(&f, mu)?;
        formula += usize::from(fm == want);
        chain += usize::from(bracket_ko(mu, &fm)?.is_zero());
    }
    out.push(Row::count(
        SEC,
        "h=1: [f, mu]_KO = sum_i (df/dx_i xi_{i+h+1} - df/dx_{i+h+1} xi_i) + df/dx_{h+1} tau - (E-2)(f) xi_{h+1}",
        formula,
        20,
    ));
    out.push(Row::count(SEC, "h=1: [mu, [f, mu]_KO]_KO = 0 for random f in P_-1", chain, 20));
    Ok(())
}

fn pontau(s: &mut Sampler, out: &mut Vec<Row>) -> Result<()> {
    const SEC: &str = "POntau";
    for n in 1..=4 {
        let w = classification_witness(Classification::A2Ko, n, 3)?;
        let sig = w.pair.signature();
        let sign = if n % 2 == 1 { 2 } else { -2 };
        let want = xi_prod(sig, 1..=n)?.scale(&scalar(sign));
        out.push(Row::eq(SEC, format!("n={n}: [1, {}]_KO = {want}", w.mu), &want, &bracket_ko(&int(sig, 1), &w.mu)?));
    }
    for n in 2..=3 {
        let sig = Signature::ko(n, 3);
        let top = xi_prod(sig, 1..=n)?;
        let (mut good, mut total) = (0, 0);
        for perm in (1..=n).permutations(n) {
            let mut acc = top.clone();
            for &i in perm[..n - 1].iter().rev() {
                acc = bracket_ko(&SuperElement::x(sig, i)?, &acc)?;
            }
            let target = SuperElement::xi(sig, perm[n - 1])?;
            total += 1;
            good += usize::from(acc == target || acc == -target);
        }
        out.push(Row::count(
            SEC,
            format!("n={n}: [x_i1, [..., [x_i{}, {top}]_KO]_KO] = +-xi_i{n} for distinct indices", n - 1),
            good,
            total,
        ));
    }
    let n = 3;
    let sig = Signature::ko(n, 3);
    let tau = SuperElement::tau(sig)?;
    for i in 1..=n {
        let tail = xi_prod(sig, i..=n)?;
        let sign = if (n - i) % 2 == 0 { 1 } else { -1 };
        let want = xi_prod(sig, i + 1..=n)? * &tau + (SuperElement::x(sig, i)? * &tail).scale(&scalar(sign));
        let arg = tail * &tau;
        let v = bracket_ko(&SuperElement::x(sig, i)?, &arg)?;
        out.push(Row::eq(SEC, format!("n=3: [x{i}, {arg}]_KO = {want}"), &want, &v));
    }

    // div_1(f) = sum_i df_i/dx_i + (E - n) f_{n+1} = 0, solved for f_1.
    let (n, t) = (2, 3);
    let w = classification_witness(Classification::A2Ko, n, t + 1)?;
    let (sig, mu) = (w.pair.signature(), &w.mu);
    let mut good = 0;
    for _ in 0..10 {
        let mut fs: Vec<SuperElement> = (0..=n).map(|_| s.even_poly(sig, t)).collect();
        let mut rest = euler_e(&fs[n]) - fs[n].scale(&scalar(n as i64));
        for i in 2..=n {
            rest = rest + d_dx(i, &fs[i - 1])?;
        }
        fs[0] = -integral_x(1, &rest)?;
        let f = (1..=n + 1).try_fold(SuperElement::zero(sig), |acc, i| Ok::<_, nambu_core::Error>(acc + &fs[i - 1] * SuperElement::xi(sig, i)?))?;
        let div1 = (1..=n).try_fold(SuperElement::zero(sig), |acc, i| Ok::<_, nambu_core::Error>(acc + d_dx(i, &d_dxi(i, &f)?)?))?
            + euler_e(&d_dtau(&f))
            - d_dtau(&f).scale(&scalar(n as i64));
        let v = bracket_ko(&f, mu)?;
        good += usize::from(div1.with_trunc(t).is_zero() && v.with_trunc(t).is_zero());
    }
    out.push(Row::count(SEC, "n=2: [sum f_i xi_i, mu]_KO = 0 for random f with div_1(f) = 0", good, 10));
    Ok(())
}

fn grading(out: &mut Vec<Row>) -> Result<()> {
    const SEC: &str = "grading";
    let show = |v: Vec<SuperElement>| v.iter().map(ToString::to_string).sorted().join(", ");
    let p = GradedPo::ho(2, 2);
    let got = show(p.component(-1, 1)?);
    out.push(Row::check(SEC, "PO(2,2): P_-1 up to degree 1 = {1, x1, x2}", got == "1, x1, x2", got));
    let got = show(p.component(1, 0)?);
    out.push(Row::check(SEC, "PO(2,2): P_1 in degree 0 = {xi1*xi2}", got == "xi1*xi2", got));
    let p = GradedPo::ko(1, 2);
    let got = show(p.component(0, 0)?);
    out.push(Row::check(SEC, "PO(1,2): P_0 in degree 0 = {xi1, tau}", got == "tau, xi1", got));
    let sig = Signature::ho(3, 2);
    let z = xi_prod(sig, 1..=3)?.z_degree();
    out.push(Row::check(SEC, "xi1*xi2*xi3 has degree 3", z == Some(3), z.map_or("none".into(), |d| d.to_string())));
    let sig = Signature::ko(2, 2);
    let e = euler_e(&SuperElement::tau(sig)?);
    out.push(Row::eq(SEC, "E(tau) = 0", &SuperElement::zero(sig), &e));
    Ok(())
}

fn brackets(s: &mut Sampler, out: &mut Vec<Row>) -> Result<()> {
    const SEC: &str = "brackets";
    let sig = Signature::even(3, 4);
    let nambu = BracketKind::Nambu(3);
    let (mut fil, mut unit) = (0, 0);
    for _ in 0..5 {
        let args: Vec<SuperElement> = (0..5).map(|_| s.even_poly(sig, 2)).collect();
        fil += usize::from(check_filippov(&nambu, &args)?.passed);
        unit += usize::from(nambu.apply(&[args[0].clone(), args[1].clone(), int(sig, 1)])?.is_zero());
    }
    out.push(Row::count(SEC, "Nambu n=3: Filippov-Jacobi on random quintuples", fil, 5));
    out.push(Row::count(SEC, "Nambu n=3: {a1, a2, 1} = 0", unit, 5));
    for (kind, name, sig) in [(BracketKind::Ho, "HO", Signature::ho(2, 3)), (BracketKind::Ko, "KO", Signature::ko(2, 3))] {
        let mut good = 0;
        for _ in 0..10 {
            let (a, b, c) = (s.any_homogeneous(sig), s.any_homogeneous(sig), s.element(sig));
            good += usize::from(check_odd_leibniz(&kind, &a, &b, &c)?.passed);
        }
        let d = if name == "HO" { "D = 0" } else { "D = -2 d/dtau" };
        out.push(Row::count(SEC, format!("{name}: generalized odd Leibniz with {d}"), good, 10));
    }
    Ok(())
}

fn good_pairs(out: &mut Vec<Row>) -> Result<()> {
    const SEC: &str = "good pairs";
    let w = classification_witness(Classification::A1Ho, 1, 3)?;
    let r = check_g3(&w.pair, &w.mu, 2, 3)?;
    out.push(Row::check(SEC, "(PO(2,2), xi1*xi2): G3 up to degree 3", r.passed, verdict(r.passed)));
    let w = classification_witness(Classification::A2Ho, 3, 3)?;
    let r = check_g3(&w.pair, &w.mu, 3, 3)?;
    out.push(Row::check(SEC, "(PO(3,3), xi1*xi2*xi3): G3 up to degree 3", r.passed, verdict(r.passed)));
    let r = check_g2(&w.pair, &w.mu, 1)?;
    out.push(Row::check(SEC, "(PO(3,3), xi1*xi2*xi3): G2 up to degree 1", r.generated, verdict(r.generated)));
    let p = GradedPo::ho(3, 3);
    let r = check_g2(&p, &el("xi1*xi2", p.signature())?, 1)?;
    let ok = !r.generated && r.missing.iter().any(|m| m == "xi3");
    out.push(Row::check(SEC, "(PO(3,3), xi1*xi2): G2 fails, xi3 is not generated", ok, format!("{} elements missing", r.missing.len())));
    let p = GradedPo::ko(1, 3);
    let r = check_g2(&p, &el("xi1*tau", p.signature())?, 1)?;
    out.push(Row::check(SEC, "(PO(1,2), xi1*tau): G2 up to degree 1", r.generated, verdict(r.generated)));
    for (kind, size, label) in [
        (Classification::A1Ho, 1, "a1-HO h=1"),
        (Classification::A2Ho, 3, "a2-HO n=3"),
        (Classification::A1Ko, 1, "a1-KO h=1"),
        (Classification::A2Ko, 2, "a2-KO n=2"),
    ] {
        let w = classification_witness(kind, size, 2)?;
        let r = good_pair_report(&w.pair, &w.mu, w.arity, 2)?;
        out.push(Row::check(SEC, format!("{label}: good {}-pair up to degree 2", w.arity), r.verdict, verdict(r.verdict)));
    }
    Ok(())
}

fn verdict(b: bool) -> &'static str {
    if b {
        "holds"
    } else {
        "fails"
    }
}

/// All tuples of x-monomials of degree at most 2 in `sig`.
fn monomial_tuples(sig: Signature, n: usize) -> Vec<Vec<SuperElement>> {
    let gens: Vec<SuperElement> = monomials(sig, 2, Some(&[0]))
        .into_iter()
        .map(|m| SuperElement::from_term(sig, m, scalar(1)))
        .collect();
    (0..n).map(|_| gens.iter().cloned()).multi_cartesian_product().collect()
}

fn reconstruction(out: &mut Vec<Row>) -> Result<()> {
    const SEC: &str = "reconstruction";
    let w = classification_witness(Classification::A2Ho, 3, 4)?;
    let induced = nambu_from_pair(&w.pair, &w.mu, 3)?;
    let e = Signature::even(3, 4);
    let tuples = monomial_tuples(e, 3);
    let mut good = 0;
    for t in &tuples {
        good += usize::from(induced.apply(t)? == BracketKind::Nambu(3).apply(t)?);
    }
    out.push(Row::count(SEC, "(PO(3,3), xi1*xi2*xi3) induces the Nambu bracket", good, tuples.len()));

    // The pair (PO(2,3), xi1*xi2*tau) is isomorphic to (PO(2,3), -1/2 xi1*xi2*tau).
    let w = classification_witness(Classification::A2Ko, 2, 4)?;
    let mu = w.mu.scale(&ratio(-1, 2));
    let induced = nambu_from_pair(&w.pair, &mu, 3)?;
    let e = Signature::even(2, 4);
    let tuples = monomial_tuples(e, 3);
    let mut good = 0;
    for t in &tuples {
        good += usize::from(induced.apply(t)? == BracketKind::Dzhumadildaev(3).apply(t)?);
    }
    out.push(Row::count(SEC, "(PO(2,3), xi1*xi2*tau), mu rescaled by -1/2, induces the Dzhumadildaev bracket", good, tuples.len()));

    let w = classification_witness(Classification::A2Ho, 3, 3)?;
    let sig = w.pair.signature();
    let phi = el("1 + x1", sig)?;
    let gp = w.pair.with_gauge(phi.clone())?;
    let induced = nambu_from_pair(&gp, &(phi.invert()? * &w.mu), 3)?;
    let e = Signature::even(3, 3);
    let phi_e = el("1 + x1", e)?;
    let tuples: Vec<_> = monomial_tuples(e, 3).into_iter().step_by(7).collect();
    let mut good = 0;
    for t in &tuples {
        good += usize::from(induced.apply(t)? == gauge_nambu(&phi_e, &BracketKind::Nambu(3), t)?);
    }
    out.push(Row::count(SEC, "(P^phi, phi^-1 xi1*xi2*xi3), phi = 1+x1, induces the twisted Nambu bracket", good, tuples.len()));
    Ok(())
}

fn gauge(s: &mut Sampler, out: &mut Vec<Row>) -> Result<()> {
    const SEC: &str = "gauge";
    let sig = Signature::even(3, 4);
    let g = Gauge::new(el("1 + x1", sig)?, BracketKind::Nambu(3))?;
    let (mut skew, mut fil, mut leib) = (0, 0, 0);
    for _ in 0..5 {
        let a: Vec<SuperElement> = (0..5).map(|_| s.even_poly(sig, 2)).collect();
        skew += usize::from(check_skew(&g, &a[..3], (1, 3))?.passed);
        fil += usize::from(check_filippov(&g, &a)?.passed);
        leib += usize::from(check_generalized_leibniz(&g, &a[..2], &a[2], &a[3])?.passed);
    }
    out.push(Row::count(SEC, "twisted Nambu, phi = 1+x1: skew-symmetric", skew, 5));
    out.push(Row::count(SEC, "twisted Nambu, phi = 1+x1: Filippov-Jacobi", fil, 5));
    out.push(Row::count(SEC, "twisted Nambu, phi = 1+x1: generalized Leibniz", leib, 5));

    let sig = Signature::ko(2, 4);
    let phi = el("1 + x1", sig)?;
    let g = Gauge::odd(phi.clone(), BracketKind::Ko)?;
    let (mut dphi, mut leib) = (0, 0);
    for _ in 0..5 {
        let a = s.any_homogeneous(sig);
        let want = bracket_ko(&phi, &a)? - BracketKind::Ko.derivation(&phi)? * &a;
        dphi += usize::from(g.derivation(&a)? == want);
        let (b, c) = (s.any_homogeneous(sig), s.element(sig));
        leib += usize::from(check_odd_leibniz(&g, &a, &b, &c)?.passed);
    }
    out.push(Row::count(SEC, "twisted KO, phi = 1+x1: D_phi(a) = [phi, a] - D(phi) a", dphi, 5));
    out.push(Row::count(SEC, "twisted KO, phi = 1+x1: generalized odd Leibniz with D_phi", leib, 5));

    let sig = Signature::ho(3, 5);
    let phi = el("1 + x1", sig)?;
    let coords = change_of_variables(&phi)?;
    let r = verify_symplectomorphism(&coords)?;
    out.push(Row::check(SEC, "phi = 1+x1, n=3: {x'_i, xi'_j}_HO = delta_ij, other brackets 0", r.passed, verdict(r.passed)));
    let (_, xis) = coords.truncated();
    let top = SuperElement::product(sig, &xis)?;
    out.push(Row::eq(SEC, "phi = 1+x1, n=3: xi'1*xi'2*xi'3 = phi*xi1*xi2*xi3", &(&phi * xi_prod(sig, 1..=3)?), &top));
    Ok(())
}

fn universal(s: &mut Sampler, out: &mut Vec<Row>) -> Result<()> {
    const SEC: &str = "universal";
    let space = Arc::new(FiniteSuperSpace::grassmann(2)?);
    let mut good = 0;
    for _ in 0..5 {
        let x = MultiMap::random(&space, 0, Parity::Even, s.rng())?;
        let i = s.rng().gen_range(0..space.dim());
        let a = MultiMap::basis_element(&space, i);
        let boxed = x.box_product(&a)?;
        good += usize::from(boxed.as_vector() == x.get(&[i]));
    }
    out.push(Row::count(SEC, "Lambda(2): X box a = X(a) for X in W_0, a in W_-1", good, 5));
    let space = Arc::new(FiniteSuperSpace::truncated_polynomial(Signature::even(2, 2))?);
    let mu = mu_from_nambu(&space, &BracketKind::Nambu(2))?;
    let r = gw_membership(&mu)?;
    out.push(Row::check(SEC, "mu from the Nambu bracket (n=2) is a generalized multiderivation", r.passed, verdict(r.passed)));
    Ok(())
}

pub fn render(rows: &[Row], seed: u64) -> String {
    let width = rows.iter().map(|r| r.section.len()).max().unwrap_or(0);
    let mut s = format!("worked computations (seed {seed})\n");
    for r in rows {
        let status = if r.passed { "PASS" } else { "FAIL" };
        s += &format!("{status}  {:<width$}  {}  [{}]\n", r.section, r.claim, r.computed);
    }
    let failed = rows.iter().filter(|r| !r.passed).count();
    s += &format!("{} passed, {failed} failed\n", rows.len() - failed);
    s
}

pub fn to_json(rows: &[Row], seed: u64) -> Value {
    let failed = rows.iter().filter(|r| !r.passed).count();
    json!({
        "command": "demo-paper",
        "seed": seed,
        "rows": rows.iter().map(|r| json!({
            "section": r.section,
            "claim": r.claim,
            "passed": r.passed,
            "computed": r.computed,
        })).collect::<Vec<_>>(),
        "passed": rows.len() - failed,
        "failed": failed,
    })
}
