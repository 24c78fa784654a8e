//! Residual-based identity checks with counterexample witnesses.
//!
//! Every checker evaluates at a raised working truncation and compares the
//! residual modulo the inputs' own truncation, so that truncation error never
//! produces a spurious failure. A check passes exactly when the residual is
//! the zero element.

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::algebra::{monomials, scalar, sign_flip, Parity, Signature, SuperElement};
use crate::brackets::{NaryBracket, OddBracket};
use crate::error::{Error, Result};

/// Failing inputs and the nonzero residual they produce.
#[derive(Clone, Debug, PartialEq)]
pub enum Witness {
    Elements { inputs: Vec<SuperElement>, residual: SuperElement },
    Table { inputs: Vec<String>, residual: String },
}

impl Witness {
    pub fn rendered_inputs(&self) -> Vec<String> {
        match self {
            Witness::Elements { inputs, .. } => inputs.iter().map(ToString::to_string).collect(),
            Witness::Table { inputs, .. } => inputs.clone(),
        }
    }

    pub fn rendered_residual(&self) -> String {
        match self {
            Witness::Elements { residual, .. } => residual.to_string(),
            Witness::Table { residual, .. } => residual.clone(),
        }
    }

    pub fn residual_element(&self) -> Option<&SuperElement> {
        match self {
            Witness::Elements { residual, .. } => Some(residual),
            Witness::Table { .. } => None,
        }
    }
}

/// Verdict of one identity check. `passed` holds exactly when `witness` is absent.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub identity: String,
    pub passed: bool,
    pub witness: Option<Witness>,
}

impl IdentityReport {
    pub fn pass(identity: impl Into<String>) -> Self {
        IdentityReport { identity: identity.into(), passed: true, witness: None }
    }

    pub fn fail(identity: impl Into<String>, witness: Witness) -> Self {
        IdentityReport { identity: identity.into(), passed: false, witness: Some(witness) }
    }

    /// First failure among `reports`, renamed to `identity`; a pass when all pass.
    pub fn all(identity: impl Into<String>, reports: impl IntoIterator<Item = IdentityReport>) -> Self {
        let identity = identity.into();
        for r in reports {
            if !r.passed {
                return IdentityReport { identity, ..r };
            }
        }
        IdentityReport::pass(identity)
    }
}

impl Serialize for IdentityReport {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct W {
            inputs: Vec<String>,
            residual: String,
        }
        let n = if self.witness.is_some() { 3 } else { 2 };
        let mut st = s.serialize_struct("IdentityReport", n)?;
        st.serialize_field("identity", &self.identity)?;
        st.serialize_field("passed", &self.passed)?;
        if let Some(w) = &self.witness {
            st.serialize_field("witness", &W { inputs: w.rendered_inputs(), residual: w.rendered_residual() })?;
        }
        st.end()
    }
}

/// Upper bound on single-monomial restrictions tried while minimizing a witness.
const MAX_RESTRICTIONS: usize = 4096;

/// Evaluate a residual; on failure, look for a smaller witness among single-monomial restrictions.
pub(crate) fn run_check<F>(identity: &str, inputs: &[SuperElement], residual: F) -> Result<IdentityReport>
where
    F: Fn(&[SuperElement]) -> Result<SuperElement>,
{
    let r = residual(inputs)?;
    if r.is_zero() {
        return Ok(IdentityReport::pass(identity));
    }
    let (inputs, r) = minimize(inputs, &residual).unwrap_or((inputs.to_vec(), r));
    Ok(IdentityReport::fail(identity, Witness::Elements { inputs, residual: r }))
}

fn minimize<F>(inputs: &[SuperElement], residual: &F) -> Option<(Vec<SuperElement>, SuperElement)>
where
    F: Fn(&[SuperElement]) -> Result<SuperElement>,
{
    let pieces: Vec<Vec<SuperElement>> = inputs
        .iter()
        .map(|e| {
            if e.is_zero() {
                vec![e.clone()]
            } else {
                e.terms().map(|(m, c)| SuperElement::from_term(e.signature(), m.clone(), c.clone())).collect()
            }
        })
        .collect();
    let total = pieces.iter().try_fold(1usize, |acc, p| acc.checked_mul(p.len()))?;
    if total <= 1 {
        return None;
    }
    for idx in 0..total.min(MAX_RESTRICTIONS) {
        let mut rest = idx;
        let choice: Vec<SuperElement> = pieces
            .iter()
            .map(|p| {
                let k = rest % p.len();
                rest /= p.len();
                p[k].clone()
            })
            .collect();
        if let Ok(r) = residual(&choice) {
            if !r.is_zero() {
                return Some((choice, r));
            }
        }
    }
    None
}

/// Common signature of the inputs.
pub(crate) fn common_signature(args: &[SuperElement]) -> Result<Signature> {
    let sig = args.first().ok_or(Error::Arity { expected: 1, got: 0 })?.signature();
    for a in args {
        if a.signature() != sig {
            return Err(Error::SignatureMismatch(sig, a.signature()));
        }
    }
    Ok(sig)
}

/// Inputs raised to truncation `T + slack`.
pub(crate) fn lift(args: &[SuperElement], slack: u32) -> Result<(Signature, Vec<SuperElement>)> {
    let sig = common_signature(args)?;
    Ok((sig, args.iter().map(|a| a.with_trunc(sig.trunc + slack)).collect()))
}

/// Residual read modulo the original truncation.
pub(crate) fn lower(r: SuperElement, sig: Signature) -> SuperElement {
    r.with_trunc(sig.trunc)
}

fn parity_of(a: &SuperElement, what: &str) -> Result<Parity> {
    a.homogeneous_parity()
        .ok_or_else(|| Error::InvalidParameter(format!("{what} must be homogeneous, got {a}")))
}

fn signed(flip: bool, e: SuperElement) -> SuperElement {
    if flip {
        -e
    } else {
        e
    }
}

/// `{f_1..f_{n−1},{g_1..g_n}} − Σ_i {g_1, …, {f_1..f_{n−1}, g_i}, …, g_n}`.
pub fn check_filippov(br: &dyn NaryBracket, args: &[SuperElement]) -> Result<IdentityReport> {
    let n = br.arity();
    if args.len() != 2 * n - 1 {
        return Err(Error::Arity { expected: 2 * n - 1, got: args.len() });
    }
    run_check("filippov", args, |inp| {
        let (sig, a) = lift(inp, 2)?;
        let (fs, gs) = a.split_at(n - 1);
        let with = |last: &SuperElement| -> Result<SuperElement> {
            let mut v = fs.to_vec();
            v.push(last.clone());
            br.apply(&v)
        };
        let mut r = with(&br.apply(gs)?)?;
        for i in 0..n {
            let mut v = gs.to_vec();
            v[i] = with(&gs[i])?;
            r = r - br.apply(&v)?;
        }
        Ok(lower(r, sig))
    })
}

/// `{args} + {args with positions i and j swapped}` (1-based positions).
pub fn check_skew(br: &dyn NaryBracket, args: &[SuperElement], swap: (usize, usize)) -> Result<IdentityReport> {
    let n = br.arity();
    if args.len() != n {
        return Err(Error::Arity { expected: n, got: args.len() });
    }
    let (i, j) = swap;
    if i == j || i == 0 || j == 0 || i > n || j > n {
        return Err(Error::InvalidParameter(format!("invalid transposition ({i}, {j}) for arity {n}")));
    }
    run_check("skew", args, |inp| {
        let (sig, a) = lift(inp, 1)?;
        let mut b = a.clone();
        b.swap(i - 1, j - 1);
        Ok(lower(br.apply(&a)? + br.apply(&b)?, sig))
    })
}

/// `{a, bc} − {a, b}c − b{a, c} + {a, 1}bc` for an n-ary bracket and `n−1` leading arguments `a`.
pub fn check_generalized_leibniz(
    br: &dyn NaryBracket,
    a: &[SuperElement],
    b: &SuperElement,
    c: &SuperElement,
) -> Result<IdentityReport> {
    let n = br.arity();
    if a.len() + 1 != n {
        return Err(Error::Arity { expected: n, got: a.len() + 1 });
    }
    let mut inputs = a.to_vec();
    inputs.push(b.clone());
    inputs.push(c.clone());
    run_check("generalized-leibniz", &inputs, |inp| {
        let (sig, v) = lift(inp, 2)?;
        let (lead, bc) = v.split_at(n - 1);
        let (b, c) = (&bc[0], &bc[1]);
        let with = |last: SuperElement| -> Result<SuperElement> {
            let mut w = lead.to_vec();
            w.push(last);
            br.apply(&w)
        };
        let one = SuperElement::one(b.signature());
        let r = with(b * c)? - with(b.clone())? * c - b * with(c.clone())? + with(one)? * b * c;
        Ok(lower(r, sig))
    })
}

/// `[a, bc] − [a,b]c − (−1)^{(p(a)+1)p(b)} b[a,c] − (−1)^{p(a)+1} D(a)bc` with `D(a) = [1, a]`.
pub fn check_odd_leibniz(
    br: &dyn OddBracket,
    a: &SuperElement,
    b: &SuperElement,
    c: &SuperElement,
) -> Result<IdentityReport> {
    parity_of(a, "a")?;
    parity_of(b, "b")?;
    run_check("odd-leibniz", &[a.clone(), b.clone(), c.clone()], |inp| {
        let (sig, v) = lift(inp, 2)?;
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        let pa = a.homogeneous_parity().expect("restrictions stay homogeneous");
        let pb = b.homogeneous_parity().expect("restrictions stay homogeneous");
        let r = br.bracket(a, &(b * c))?
            - br.bracket(a, b)? * c
            - signed(sign_flip(pa.flip(), pb), b * br.bracket(a, c)?)
            - signed(pa.flip().is_odd(), br.derivation(a)? * b * c);
        Ok(lower(r, sig))
    })
}

/// `[a,[b,c]] − [[a,b],c] − (−1)^{p̄(a)p̄(b)} [b,[a,c]]` with shifted parities `p̄ = p + 1`.
pub fn check_super_jacobi(
    br: &dyn OddBracket,
    a: &SuperElement,
    b: &SuperElement,
    c: &SuperElement,
) -> Result<IdentityReport> {
    parity_of(a, "a")?;
    parity_of(b, "b")?;
    run_check("jacobi", &[a.clone(), b.clone(), c.clone()], |inp| {
        let (sig, v) = lift(inp, 3)?;
        let (a, b, c) = (&v[0], &v[1], &v[2]);
        let pa = a.homogeneous_parity().expect("homogeneous").flip();
        let pb = b.homogeneous_parity().expect("homogeneous").flip();
        let r = br.bracket(a, &br.bracket(b, c)?)?
            - br.bracket(&br.bracket(a, b)?, c)?
            - signed(sign_flip(pa, pb), br.bracket(b, &br.bracket(a, c)?)?);
        Ok(lower(r, sig))
    })
}

/// `[a,b] + (−1)^{p̄(a)p̄(b)} [b,a]`.
pub fn check_odd_skew(br: &dyn OddBracket, a: &SuperElement, b: &SuperElement) -> Result<IdentityReport> {
    parity_of(a, "a")?;
    parity_of(b, "b")?;
    run_check("odd-skew", &[a.clone(), b.clone()], |inp| {
        let (sig, v) = lift(inp, 1)?;
        let pa = v[0].homogeneous_parity().expect("homogeneous").flip();
        let pb = v[1].homogeneous_parity().expect("homogeneous").flip();
        let r = br.bracket(&v[0], &v[1])? + signed(sign_flip(pa, pb), br.bracket(&v[1], &v[0])?);
        Ok(lower(r, sig))
    })
}

/// `D` is an odd derivation of both products:
/// `D(bc) = D(b)c + (−1)^{p(b)} b D(c)` and `D[b,c] = [Db,c] + (−1)^{p̄(b)} [b,Dc]`.
pub fn check_derivation(br: &dyn OddBracket, b: &SuperElement, c: &SuperElement) -> Result<IdentityReport> {
    parity_of(b, "b")?;
    let product = run_check("derivation-product", &[b.clone(), c.clone()], |inp| {
        let (sig, v) = lift(inp, 1)?;
        let (b, c) = (&v[0], &v[1]);
        let pb = b.homogeneous_parity().expect("homogeneous");
        let r = br.derivation(&(b * c))? - br.derivation(b)? * c - signed(pb.is_odd(), b * br.derivation(c)?);
        Ok(lower(r, sig))
    })?;
    let bracket = run_check("derivation-bracket", &[b.clone(), c.clone()], |inp| {
        let (sig, v) = lift(inp, 2)?;
        let (b, c) = (&v[0], &v[1]);
        let pb = b.homogeneous_parity().expect("homogeneous").flip();
        let r = br.derivation(&br.bracket(b, c)?)?
            - br.bracket(&br.derivation(b)?, c)?
            - signed(pb.is_odd(), br.bracket(b, &br.derivation(c)?)?);
        Ok(lower(r, sig))
    })?;
    Ok(IdentityReport::all("derivation", [product, bracket]))
}

/// All monomials with x-degree at most `max_x` and odd degree at most `max_odd`, as elements.
pub fn monomial_grid(sig: Signature, max_x: u32, max_odd: usize) -> Vec<SuperElement> {
    let degrees: Vec<usize> = (0..=max_odd).collect();
    monomials(sig, max_x, Some(&degrees))
        .into_iter()
        .map(|m| SuperElement::from_term(sig, m, scalar(1)))
        .collect()
}

/// Run `check` on every ordered `arity`-tuple from `grid`, in parallel; the
/// reported failure is the first one in lexicographic tuple order.
pub fn check_grid<F>(identity: &str, grid: &[SuperElement], arity: usize, check: F) -> Result<IdentityReport>
where
    F: Fn(&[SuperElement]) -> Result<IdentityReport> + Sync + Send,
{
    if grid.is_empty() {
        return Ok(IdentityReport::pass(identity));
    }
    let total = grid
        .len()
        .checked_pow(arity as u32)
        .ok_or_else(|| Error::InvalidParameter("grid too large".into()))?;
    let tuple = |mut idx: usize| -> Vec<SuperElement> {
        let mut v = vec![grid[0].clone(); arity];
        for slot in v.iter_mut().rev() {
            *slot = grid[idx % grid.len()].clone();
            idx /= grid.len();
        }
        v
    };
    let found = (0..total).into_par_iter().find_map_first(|idx| match check(&tuple(idx)) {
        Ok(r) if r.passed => None,
        other => Some(other),
    });
    match found {
        None => Ok(IdentityReport::pass(identity)),
        Some(Err(e)) => Err(e),
        Some(Ok(r)) => Ok(IdentityReport { identity: identity.to_string(), ..r }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::{BracketKind, FnBracket};
    use crate::parse::parse;

    fn product_bracket(arity: usize) -> FnBracket<impl Fn(&[SuperElement]) -> Result<SuperElement> + Sync> {
        FnBracket {
            arity,
            name: "product".into(),
            f: |args: &[SuperElement]| SuperElement::product(args[0].signature(), args),
        }
    }

    #[test]
    fn filippov_passes_for_nambu_and_fails_for_product() {
        let sig = Signature::even(3, 4);
        let p = |s: &str| parse(s, sig).unwrap();
        let args = [p("x1^2 + x2"), p("x2*x3"), p("x1 - x3^2"), p("x1*x2 + 1"), p("x3")];
        assert!(check_filippov(&BracketKind::Nambu(3), &args).unwrap().passed);

        let sig2 = Signature::even(2, 6);
        let q = |s: &str| parse(s, sig2).unwrap();
        let prod = product_bracket(3);
        let args = [q("x1"), q("x2"), q("x1"), q("x2"), q("x1")];
        let rep = check_filippov(&prod, &args).unwrap();
        assert!(!rep.passed);
        let w = rep.witness.unwrap();
        assert!(!w.residual_element().unwrap().is_zero());

        let zeros = vec![SuperElement::zero(sig); 5];
        assert!(check_filippov(&BracketKind::Nambu(3), &zeros).unwrap().passed);
        assert!(matches!(check_filippov(&BracketKind::Nambu(3), &zeros[..4]), Err(Error::Arity { .. })));
    }

    #[test]
    fn skew_checks() {
        let sig = Signature::even(3, 3);
        let xs: Vec<_> = (1..=3).map(|i| SuperElement::x(sig, i).unwrap()).collect();
        assert!(check_skew(&BracketKind::Nambu(3), &xs, (1, 2)).unwrap().passed);
        let s2 = Signature::even(2, 3);
        let sym = product_bracket(2);
        let args = [SuperElement::x(s2, 1).unwrap(), SuperElement::x(s2, 2).unwrap()];
        assert!(!check_skew(&sym, &args, (1, 2)).unwrap().passed);
        assert!(check_skew(&sym, &args, (1, 1)).is_err());
    }

    #[test]
    fn odd_leibniz_with_unit_argument() {
        let sig = Signature::ko(2, 3);
        let one = SuperElement::one(sig);
        let b = parse("x1*xi1 + tau", sig).unwrap();
        let c = parse("x2*xi2*tau - 2*x1", sig).unwrap();
        assert!(check_odd_leibniz(&BracketKind::Ko, &one, &b, &c).unwrap().passed);
        assert!(check_odd_leibniz(&BracketKind::Ko, &(&one + &b), &b, &c).is_err());
    }

    #[test]
    fn jacobi_on_repeated_odd_generator() {
        let sig = Signature::ho(2, 3);
        let xi = SuperElement::xi(sig, 1).unwrap();
        assert!(check_super_jacobi(&BracketKind::Ho, &xi, &xi, &xi).unwrap().passed);
    }

    #[test]
    fn witness_is_minimized_to_single_monomials() {
        let s2 = Signature::even(2, 4);
        let sym = product_bracket(2);
        let a = parse("x1 + x2^2 + 3", s2).unwrap();
        let b = parse("x2 - x1", s2).unwrap();
        let rep = check_skew(&sym, &[a, b], (1, 2)).unwrap();
        match rep.witness.unwrap() {
            Witness::Elements { inputs, residual } => {
                assert!(inputs.iter().all(|e| e.len() == 1));
                assert!(!residual.is_zero());
            }
            Witness::Table { .. } => panic!("element witness expected"),
        }
    }

    #[test]
    fn report_json_shape() {
        let pass = IdentityReport::pass("skew");
        assert_eq!(serde_json::to_string(&pass).unwrap(), r#"{"identity":"skew","passed":true}"#);
        let sig = Signature::even(1, 1);
        let fail = IdentityReport::fail(
            "skew",
            Witness::Elements { inputs: vec![SuperElement::x(sig, 1).unwrap()], residual: SuperElement::one(sig) },
        );
        assert_eq!(
            serde_json::to_string(&fail).unwrap(),
            r#"{"identity":"skew","passed":false,"witness":{"inputs":["x1"],"residual":"1"}}"#
        );
    }

    #[test]
    fn grid_check_finds_first_failure() {
        let sig = Signature::ho(1, 2);
        let grid = monomial_grid(sig, 1, 1);
        assert_eq!(grid.len(), 4);
        let rep = check_grid("odd-skew", &grid, 2, |v| check_odd_skew(&BracketKind::Ho, &v[0], &v[1])).unwrap();
        assert!(rep.passed);
        let sym = product_bracket(2);
        let rep = check_grid("skew", &grid, 2, |v| check_skew(&sym, v, (1, 2))).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.identity, "skew");
    }
}
