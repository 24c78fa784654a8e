//! The binary odd brackets (HO, KO), the even Poisson and Lagrange brackets,
//! and the n-ary Nambu and Dzhumadildaev brackets.

use std::fmt;

use crate::algebra::{Scalar, Signature, SuperElement};
use crate::calculus::{d_dtau, d_dx0, d_dxi0, euler_shift};
use crate::error::{Error, Result};

/// An n-ary bracket on elements of one signature.
pub trait NaryBracket: Sync {
    fn arity(&self) -> usize;
    fn apply(&self, args: &[SuperElement]) -> Result<SuperElement>;
    fn name(&self) -> String;
}

/// An odd bracket `[·,·]` on a superalgebra, with derivation `D(a) = [1, a]`.
pub trait OddBracket: Sync {
    fn bracket(&self, a: &SuperElement, b: &SuperElement) -> Result<SuperElement>;

    fn derivation(&self, a: &SuperElement) -> Result<SuperElement> {
        self.bracket(&SuperElement::one(a.signature()), a)
    }

    fn name(&self) -> String;
}

impl<T: NaryBracket + ?Sized> NaryBracket for &T {
    fn arity(&self) -> usize {
        (**self).arity()
    }
    fn apply(&self, args: &[SuperElement]) -> Result<SuperElement> {
        (**self).apply(args)
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

impl<T: OddBracket + ?Sized> OddBracket for &T {
    fn bracket(&self, a: &SuperElement, b: &SuperElement) -> Result<SuperElement> {
        (**self).bracket(a, b)
    }
    fn derivation(&self, a: &SuperElement) -> Result<SuperElement> {
        (**self).derivation(a)
    }
    fn name(&self) -> String {
        (**self).name()
    }
}

/// Split of the even variables into canonical pairs `(p_i, q_i)` and an optional `t`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub p: Vec<usize>,
    pub q: Vec<usize>,
    pub t: Option<usize>,
}

impl Pairing {
    /// `p_i = x_i`, `q_i = x_{k+i}`.
    pub fn canonical(k: usize) -> Self {
        Pairing { p: (1..=k).collect(), q: (k + 1..=2 * k).collect(), t: None }
    }

    /// The canonical split followed by `t = x_{2k+1}`.
    pub fn contact(k: usize) -> Self {
        Pairing { t: Some(2 * k + 1), ..Self::canonical(k) }
    }

    fn validate(&self, sig: &Signature, need_t: bool) -> Result<()> {
        if sig.odd_total() != 0 {
            return Err(Error::IncompatibleSignature(format!("{sig} has odd variables")));
        }
        if self.p.len() != self.q.len() {
            return Err(Error::InvalidParameter("p and q lists differ in length".into()));
        }
        if self.t.is_some() != need_t {
            return Err(Error::InvalidParameter(if need_t {
                "the Lagrange bracket needs a t variable".into()
            } else {
                "the Poisson bracket takes no t variable".into()
            }));
        }
        let mut all: Vec<usize> = self.p.iter().chain(&self.q).chain(self.t.iter()).copied().collect();
        for &i in &all {
            sig.check_x(i)?;
        }
        all.sort_unstable();
        all.dedup();
        if all.len() != sig.even || all.len() != 2 * self.p.len() + usize::from(need_t) {
            return Err(Error::IncompatibleSignature(format!(
                "pairing does not split the {} even variables of {sig}",
                sig.even
            )));
        }
        Ok(())
    }
}

/// The brackets provided by the crate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BracketKind {
    Ho,
    Ko,
    Poisson(Pairing),
    Lagrange(Pairing),
    Nambu(usize),
    Dzhumadildaev(usize),
}

impl fmt::Display for BracketKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BracketKind::Ho => f.write_str("ho"),
            BracketKind::Ko => f.write_str("ko"),
            BracketKind::Poisson(_) => f.write_str("poisson"),
            BracketKind::Lagrange(_) => f.write_str("lagrange"),
            BracketKind::Nambu(n) => write!(f, "nambu{n}"),
            BracketKind::Dzhumadildaev(n) => write!(f, "dzhumadildaev{n}"),
        }
    }
}

impl NaryBracket for BracketKind {
    fn arity(&self) -> usize {
        match self {
            BracketKind::Nambu(n) | BracketKind::Dzhumadildaev(n) => *n,
            _ => 2,
        }
    }

    fn apply(&self, args: &[SuperElement]) -> Result<SuperElement> {
        if args.len() != self.arity() {
            return Err(Error::Arity { expected: self.arity(), got: args.len() });
        }
        match self {
            BracketKind::Ho => bracket_ho(&args[0], &args[1]),
            BracketKind::Ko => bracket_ko(&args[0], &args[1]),
            BracketKind::Poisson(p) => bracket_poisson(p, &args[0], &args[1]),
            BracketKind::Lagrange(p) => bracket_lagrange(p, &args[0], &args[1]),
            BracketKind::Nambu(_) => bracket_nambu(args),
            BracketKind::Dzhumadildaev(_) => bracket_dzhumadildaev(args),
        }
    }

    fn name(&self) -> String {
        self.to_string()
    }
}

impl OddBracket for BracketKind {
    fn bracket(&self, a: &SuperElement, b: &SuperElement) -> Result<SuperElement> {
        match self {
            BracketKind::Ho => bracket_ho(a, b),
            BracketKind::Ko => bracket_ko(a, b),
            other => Err(Error::Unsupported(format!("{other} is not an odd bracket"))),
        }
    }

    fn derivation(&self, a: &SuperElement) -> Result<SuperElement> {
        match self {
            BracketKind::Ho => {
                check_ho(&a.signature())?;
                Ok(SuperElement::zero(a.signature()))
            }
            BracketKind::Ko => {
                check_ko(&a.signature())?;
                Ok(d_dtau(a).scale(&Scalar::from_integer((-2).into())))
            }
            other => Err(Error::Unsupported(format!("{other} is not an odd bracket"))),
        }
    }

    fn name(&self) -> String {
        self.to_string()
    }
}

/// A bracket given by a closure, for experiments and negative tests.
pub struct FnBracket<F> {
    pub arity: usize,
    pub name: String,
    pub f: F,
}

impl<F> NaryBracket for FnBracket<F>
where
    F: Fn(&[SuperElement]) -> Result<SuperElement> + Sync,
{
    fn arity(&self) -> usize {
        self.arity
    }
    fn apply(&self, args: &[SuperElement]) -> Result<SuperElement> {
        if args.len() != self.arity {
            return Err(Error::Arity { expected: self.arity, got: args.len() });
        }
        (self.f)(args)
    }
    fn name(&self) -> String {
        self.name.clone()
    }
}

fn check_ho(sig: &Signature) -> Result<()> {
    if sig.tau || sig.even != sig.odd {
        return Err(Error::IncompatibleSignature(format!("HO needs O(n, n) without tau, got {sig}")));
    }
    Ok(())
}

fn check_ko(sig: &Signature) -> Result<()> {
    if !sig.tau || sig.even != sig.odd {
        return Err(Error::IncompatibleSignature(format!("KO needs O(n, n+1) with tau, got {sig}")));
    }
    Ok(())
}

fn same_sig(a: &SuperElement, b: &SuperElement) -> Result<Signature> {
    if a.signature() != b.signature() {
        return Err(Error::SignatureMismatch(a.signature(), b.signature()));
    }
    Ok(a.signature())
}

/// `Σ_i ∂f/∂x_i ∂g/∂ξ_i + (−1)^{p(f)} ∂f/∂ξ_i ∂g/∂x_i` over `i = 1..n`, applied per parity component.
fn ho_part(f: &SuperElement, g: &SuperElement) -> SuperElement {
    let sig = f.signature();
    let alpha_f = f.parity_involution();
    let mut out = SuperElement::zero(sig);
    for k in 0..sig.even {
        let fx = d_dx0(k, f);
        if !fx.is_zero() {
            let gxi = d_dxi0(k, g);
            if !gxi.is_zero() {
                out = out + fx * gxi;
            }
        }
        let fxi = d_dxi0(k, &alpha_f);
        if !fxi.is_zero() {
            let gx = d_dx0(k, g);
            if !gx.is_zero() {
                out = out + fxi * gx;
            }
        }
    }
    out
}

/// The Buttin bracket on `O(n, n)`.
pub fn bracket_ho(f: &SuperElement, g: &SuperElement) -> Result<SuperElement> {
    let sig = same_sig(f, g)?;
    check_ho(&sig)?;
    Ok(ho_part(f, g))
}

/// `[f,g]_KO = [f,g]_HO + (E−2)(f) ∂g/∂τ + (−1)^{p(f)} ∂f/∂τ (E−2)(g)` on `O(n, n+1)`.
pub fn bracket_ko(f: &SuperElement, g: &SuperElement) -> Result<SuperElement> {
    let sig = same_sig(f, g)?;
    check_ko(&sig)?;
    let mut out = ho_part(f, g);
    let gt = d_dtau(g);
    if !gt.is_zero() {
        out = out + euler_shift(f, 2) * gt;
    }
    let ft = d_dtau(&f.parity_involution());
    if !ft.is_zero() {
        out = out + ft * euler_shift(g, 2);
    }
    Ok(out)
}

/// `Σ_i (∂f/∂p_i ∂g/∂q_i − ∂f/∂q_i ∂g/∂p_i)`.
pub fn bracket_poisson(pairing: &Pairing, f: &SuperElement, g: &SuperElement) -> Result<SuperElement> {
    let sig = same_sig(f, g)?;
    pairing.validate(&sig, false)?;
    Ok(poisson_part(pairing, f, g))
}

fn poisson_part(pairing: &Pairing, f: &SuperElement, g: &SuperElement) -> SuperElement {
    let mut out = SuperElement::zero(f.signature());
    for (&p, &q) in pairing.p.iter().zip(&pairing.q) {
        out = out + d_dx0(p - 1, f) * d_dx0(q - 1, g) - d_dx0(q - 1, f) * d_dx0(p - 1, g);
    }
    out
}

/// `{f,g}_P + (2−E)f ∂g/∂t − ∂f/∂t (2−E)g` with `E = Σ p_i ∂/∂p_i + q_i ∂/∂q_i`.
pub fn bracket_lagrange(pairing: &Pairing, f: &SuperElement, g: &SuperElement) -> Result<SuperElement> {
    let sig = same_sig(f, g)?;
    pairing.validate(&sig, true)?;
    let t = pairing.t.expect("validated") - 1;
    let two_minus_e = |a: &SuperElement| {
        a.map_terms(|m, c| {
            let w = m.x_degree() as i64 - i64::from(m.exps()[t]);
            Some((m.clone(), c * Scalar::from_integer((2 - w).into())))
        })
    };
    let out = poisson_part(pairing, f, g) + two_minus_e(f) * d_dx0(t, g) - d_dx0(t, f) * two_minus_e(g);
    Ok(out)
}

fn common_sig(args: &[SuperElement]) -> Result<Signature> {
    let sig = args.first().ok_or(Error::Arity { expected: 1, got: 0 })?.signature();
    for a in args {
        if a.signature() != sig {
            return Err(Error::SignatureMismatch(sig, a.signature()));
        }
    }
    Ok(sig)
}

/// `det(∂f_i/∂x_j)` on `𝔽[x_1, …, x_n]`.
pub fn bracket_nambu(args: &[SuperElement]) -> Result<SuperElement> {
    let sig = common_sig(args)?;
    let n = args.len();
    if sig.odd_total() != 0 || sig.even != n {
        return Err(Error::IncompatibleSignature(format!(
            "the {n}-ary Nambu bracket needs {n} even and no odd variables, got {sig}"
        )));
    }
    let matrix: Vec<Vec<SuperElement>> =
        args.iter().map(|f| (0..n).map(|j| d_dx0(j, f)).collect()).collect();
    Ok(determinant(sig, &matrix))
}

/// Determinant with first row `(f_1, …, f_n)` and row `i+1` equal to `(∂f_j/∂x_i)`, on `𝔽[x_1, …, x_{n−1}]`.
pub fn bracket_dzhumadildaev(args: &[SuperElement]) -> Result<SuperElement> {
    let sig = common_sig(args)?;
    let n = args.len();
    if sig.odd_total() != 0 || sig.even + 1 != n {
        return Err(Error::IncompatibleSignature(format!(
            "the {n}-ary Dzhumadildaev bracket needs {} even and no odd variables, got {sig}",
            n.saturating_sub(1)
        )));
    }
    let mut matrix = vec![args.to_vec()];
    for i in 0..n - 1 {
        matrix.push(args.iter().map(|f| d_dx0(i, f)).collect());
    }
    Ok(determinant(sig, &matrix))
}

/// Determinant of a square matrix over the (commutative) even part of the algebra.
///
/// Small sizes use the permutation sum; larger sizes use a division-free
/// expansion by minors, since the truncated ring has zero divisors.
pub fn determinant(sig: Signature, matrix: &[Vec<SuperElement>]) -> SuperElement {
    if matrix.len() <= 4 {
        determinant_permutations(sig, matrix)
    } else {
        determinant_minors(sig, matrix)
    }
}

/// `Σ_σ sign(σ) Π_i M[i][σ(i)]`.
pub fn determinant_permutations(sig: Signature, matrix: &[Vec<SuperElement>]) -> SuperElement {
    let n = matrix.len();
    let mut out = SuperElement::zero(sig);
    let mut perm: Vec<usize> = (0..n).collect();
    permutations(&mut perm, 0, false, &mut |p, odd| {
        let mut term = SuperElement::one(sig);
        for (i, &j) in p.iter().enumerate() {
            if term.is_zero() {
                return;
            }
            term = term * &matrix[i][j];
        }
        out = if odd { &out - &term } else { &out + &term };
    });
    out
}

fn permutations(p: &mut Vec<usize>, k: usize, odd: bool, f: &mut impl FnMut(&[usize], bool)) {
    if k == p.len() {
        f(p, odd);
        return;
    }
    for i in k..p.len() {
        p.swap(k, i);
        permutations(p, k + 1, odd ^ (i != k), f);
        p.swap(k, i);
    }
}

/// Row-by-row expansion: `D[S ∪ {c}] += (−1)^{#{s ∈ S : s > c}} M[r][c] D[S]`,
/// where `D[S]` is the minor on the first `|S|` rows and the columns `S`.
pub fn determinant_minors(sig: Signature, matrix: &[Vec<SuperElement>]) -> SuperElement {
    use std::collections::BTreeMap;
    let n = matrix.len();
    let mut layer: BTreeMap<u32, SuperElement> = BTreeMap::new();
    layer.insert(0, SuperElement::one(sig));
    for row in matrix {
        let mut next: BTreeMap<u32, SuperElement> = BTreeMap::new();
        for (&s, minor) in &layer {
            if minor.is_zero() {
                continue;
            }
            for (c, entry) in row.iter().enumerate().take(n) {
                if s & (1 << c) != 0 || entry.is_zero() {
                    continue;
                }
                let above = (s >> c >> 1).count_ones();
                let term = minor * entry;
                let slot = next.entry(s | (1 << c)).or_insert_with(|| SuperElement::zero(sig));
                *slot = if above % 2 == 1 { &*slot - &term } else { &*slot + &term };
            }
        }
        layer = next;
    }
    layer.remove(&((1u32 << n) - 1)).unwrap_or_else(|| SuperElement::zero(sig))
}

/// `c` as a constant element.
#[cfg(test)]
pub(crate) fn constant(sig: Signature, c: i64) -> SuperElement {
    SuperElement::constant(sig, Scalar::from_integer(c.into()))
}
