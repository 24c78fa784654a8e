//! Exact arithmetic in `O(m, n) = Λ(n)[[x_1, …, x_m]]` truncated at a total x-degree.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Exact rational coefficient, always stored in lowest terms.
pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Scalar {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Maximum number of odd variables (odd monomials are stored as a `u64` mask).
pub const MAX_ODD: usize = 64;

/// Ambient algebra descriptor.
///
/// With `tau` set, the odd variables are `ξ_1, …, ξ_odd` followed by `τ = ξ_{odd+1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Signature {
    pub even: usize,
    pub odd: usize,
    pub tau: bool,
    pub trunc: u32,
}

impl Signature {
    pub fn new(even: usize, odd: usize, tau: bool, trunc: u32) -> Result<Self> {
        let sig = Signature { even, odd, tau, trunc };
        if sig.odd_total() > MAX_ODD {
            return Err(Error::InvalidParameter(format!(
                "at most {MAX_ODD} odd variables are supported"
            )));
        }
        Ok(sig)
    }

    /// `O(n, n)`, the home of the HO bracket.
    pub fn ho(n: usize, trunc: u32) -> Self {
        Signature { even: n, odd: n, tau: false, trunc }
    }

    /// `O(n, n+1)` with `τ`, the home of the KO bracket.
    pub fn ko(n: usize, trunc: u32) -> Self {
        Signature { even: n, odd: n, tau: true, trunc }
    }

    /// Purely even polynomial algebra in `m` variables.
    pub fn even(m: usize, trunc: u32) -> Self {
        Signature { even: m, odd: 0, tau: false, trunc }
    }

    pub fn odd_total(&self) -> usize {
        self.odd + usize::from(self.tau)
    }

    /// 1-based index of `τ` among the odd variables.
    pub fn tau_index(&self) -> Option<usize> {
        self.tau.then_some(self.odd + 1)
    }

    pub fn with_trunc(self, trunc: u32) -> Self {
        Signature { trunc, ..self }
    }

    /// Equal up to the truncation order.
    pub fn same_shape(&self, other: &Signature) -> bool {
        self.even == other.even && self.odd == other.odd && self.tau == other.tau
    }

    pub(crate) fn check_x(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.even {
            return Err(Error::IndexOutOfRange { kind: "even", index: i, max: self.even });
        }
        Ok(i - 1)
    }

    pub(crate) fn check_xi(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.odd_total() {
            return Err(Error::IndexOutOfRange { kind: "odd", index: i, max: self.odd_total() });
        }
        Ok(i - 1)
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "O({}, {}", self.even, self.odd)?;
        if self.tau {
            write!(f, "+tau")?;
        }
        write!(f, "; T={})", self.trunc)
    }
}

/// Superalgebra parity of a homogeneous element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_bit(odd: bool) -> Self {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn of_count(k: usize) -> Self {
        Parity::from_bit(k % 2 == 1)
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn bit(self) -> u32 {
        u32::from(self.is_odd())
    }

    /// The parity shift `p ↦ p + 1`.
    pub fn flip(self) -> Self {
        Parity::from_bit(!self.is_odd())
    }

    pub fn plus(self, other: Parity) -> Self {
        Parity::from_bit(self.is_odd() != other.is_odd())
    }
}

/// Result of [`SuperElement::parity`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ParityClass {
    Even,
    Odd,
    Mixed,
}

/// `(-1)^{a·b}` as a boolean "negate" flag.
pub(crate) fn sign_flip(a: Parity, b: Parity) -> bool {
    a.is_odd() && b.is_odd()
}

/// `x^α · ξ_S`, with `S` stored as a bit mask (bit `i` is `ξ_{i+1}`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: Vec<u32>,
    odd: u64,
    deg: u32,
}

impl Monomial {
    pub fn one(even: usize) -> Self {
        Monomial { exps: vec![0; even], odd: 0, deg: 0 }
    }

    pub fn new(exps: Vec<u32>, odd: u64) -> Self {
        let deg = exps.iter().sum();
        Monomial { exps, odd, deg }
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn odd_mask(&self) -> u64 {
        self.odd
    }

    /// 1-based odd indices in increasing order.
    pub fn odd_indices(&self) -> Vec<usize> {
        mask_indices(self.odd).map(|i| i + 1).collect()
    }

    pub fn x_degree(&self) -> u32 {
        self.deg
    }

    pub fn odd_degree(&self) -> usize {
        self.odd.count_ones() as usize
    }

    pub fn parity(&self) -> Parity {
        Parity::of_count(self.odd_degree())
    }

    pub fn is_even_only(&self) -> bool {
        self.odd == 0
    }

    pub(crate) fn with_exps(&self, exps: Vec<u32>) -> Self {
        Monomial::new(exps, self.odd)
    }

    pub(crate) fn with_odd(&self, odd: u64) -> Self {
        Monomial { exps: self.exps.clone(), odd, deg: self.deg }
    }

    /// Product of two monomials: `None` when an odd index repeats, else the sign flag and result.
    pub fn mul(&self, other: &Monomial) -> Option<(bool, Monomial)> {
        if self.odd & other.odd != 0 {
            return None;
        }
        let negate = merge_sign(self.odd, other.odd);
        let exps = self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect();
        Some((negate, Monomial { exps, odd: self.odd | other.odd, deg: self.deg + other.deg }))
    }
}

/// Sign of `ξ_A ξ_B → ξ_{A∪B}`: parity of the pairs `i ∈ A, j ∈ B` with `i > j`.
pub(crate) fn merge_sign(a: u64, b: u64) -> bool {
    let mut inversions = 0u32;
    for j in mask_indices(b) {
        inversions += (a >> j >> 1).count_ones();
    }
    inversions % 2 == 1
}

pub(crate) fn mask_indices(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            return None;
        }
        let i = mask.trailing_zeros() as usize;
        mask &= mask - 1;
        Some(i)
    })
}

/// Lexicographic comparison of two odd masks read as increasing index lists.
fn cmp_masks(mut a: u64, mut b: u64) -> Ordering {
    loop {
        match (a == 0, b == 0) {
            (true, true) => return Ordering::Equal,
            (true, false) => return Ordering::Less,
            (false, true) => return Ordering::Greater,
            _ => {}
        }
        let (la, lb) = (a.trailing_zeros(), b.trailing_zeros());
        if la != lb {
            return la.cmp(&lb);
        }
        a &= a - 1;
        b &= b - 1;
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg
            .cmp(&other.deg)
            .then_with(|| self.exps.cmp(&other.exps))
            .then_with(|| cmp_masks(self.odd, other.odd))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A sparse exact linear combination of monomials in a fixed signature.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SuperElement {
    sig: Signature,
    terms: BTreeMap<Monomial, Scalar>,
}

impl SuperElement {
    pub fn zero(sig: Signature) -> Self {
        SuperElement { sig, terms: BTreeMap::new() }
    }

    pub fn one(sig: Signature) -> Self {
        Self::constant(sig, Scalar::one())
    }

    pub fn constant(sig: Signature, c: Scalar) -> Self {
        Self::from_term(sig, Monomial::one(sig.even), c)
    }

    pub fn integer(sig: Signature, c: i64) -> Self {
        Self::constant(sig, scalar(c))
    }

    /// The even variable `x_i` (1-based).
    pub fn x(sig: Signature, i: usize) -> Result<Self> {
        let k = sig.check_x(i)?;
        let mut exps = vec![0; sig.even];
        exps[k] = 1;
        Ok(Self::from_term(sig, Monomial::new(exps, 0), Scalar::one()))
    }

    /// The odd variable `ξ_i` (1-based; `τ` is the last index when present).
    pub fn xi(sig: Signature, i: usize) -> Result<Self> {
        let k = sig.check_xi(i)?;
        Ok(Self::from_term(sig, Monomial::new(vec![0; sig.even], 1 << k), Scalar::one()))
    }

    pub fn tau(sig: Signature) -> Result<Self> {
        match sig.tau_index() {
            Some(i) => Self::xi(sig, i),
            None => Err(Error::IncompatibleSignature(format!("{sig} has no tau"))),
        }
    }

    /// `c · x^exps · ξ_{odd[0]} ξ_{odd[1]} …` with the odd indices in the given order.
    pub fn monomial(sig: Signature, exps: &[u32], odd: &[usize], c: Scalar) -> Result<Self> {
        if exps.len() != sig.even {
            return Err(Error::InvalidParameter(format!(
                "expected {} exponents, got {}",
                sig.even,
                exps.len()
            )));
        }
        let mut out = Self::from_term(sig, Monomial::new(exps.to_vec(), 0), c);
        for &i in odd {
            out = out.try_mul(&Self::xi(sig, i)?)?;
        }
        Ok(out)
    }

    /// Single term, dropped if it exceeds the truncation or the coefficient is zero.
    pub fn from_term(sig: Signature, m: Monomial, c: Scalar) -> Self {
        let mut out = Self::zero(sig);
        if m.deg <= sig.trunc && !c.is_zero() {
            out.terms.insert(m, c);
        }
        out
    }

    pub fn from_terms<I: IntoIterator<Item = (Monomial, Scalar)>>(sig: Signature, terms: I) -> Self {
        let mut acc = Accumulator::new(sig);
        for (m, c) in terms {
            acc.add(m, c);
        }
        acc.finish()
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&Monomial::one(self.sig.even))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Even, odd, or mixed; zero counts as even.
    pub fn parity(&self) -> ParityClass {
        let mut seen = [false, false];
        for m in self.terms.keys() {
            seen[m.parity().bit() as usize] = true;
        }
        match seen {
            [_, false] => ParityClass::Even,
            [false, true] => ParityClass::Odd,
            [true, true] => ParityClass::Mixed,
        }
    }

    /// The parity when homogeneous.
    pub fn homogeneous_parity(&self) -> Option<Parity> {
        match self.parity() {
            ParityClass::Even => Some(Parity::Even),
            ParityClass::Odd => Some(Parity::Odd),
            ParityClass::Mixed => None,
        }
    }

    /// Common odd degree `|S|` of all terms (the `𝒬_j` index); `None` for zero or mixed.
    pub fn z_degree(&self) -> Option<usize> {
        let mut it = self.terms.keys().map(Monomial::odd_degree);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    /// Largest total x-degree among the terms.
    pub fn x_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::x_degree).max()
    }

    /// True when no term contains an odd variable.
    pub fn is_even_only(&self) -> bool {
        self.terms.keys().all(Monomial::is_even_only)
    }

    /// Terms of odd degree `j`.
    pub fn z_component(&self, j: usize) -> Self {
        self.filter(|m| m.odd_degree() == j)
    }

    pub fn parity_component(&self, p: Parity) -> Self {
        self.filter(|m| m.parity() == p)
    }

    pub(crate) fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> Self {
        SuperElement {
            sig: self.sig,
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    pub(crate) fn map_terms(&self, f: impl Fn(&Monomial, &Scalar) -> Option<(Monomial, Scalar)>) -> Self {
        Self::from_terms(self.sig, self.terms.iter().filter_map(|(m, c)| f(m, c)))
    }

    /// The parity involution `Σ (−1)^{p(m)} c_m m`.
    pub fn parity_involution(&self) -> Self {
        SuperElement {
            sig: self.sig,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), if m.parity().is_odd() { -c } else { c.clone() }))
                .collect(),
        }
    }

    /// Same element at another truncation order (dropping terms above it).
    pub fn with_trunc(&self, trunc: u32) -> Self {
        let sig = self.sig.with_trunc(trunc);
        SuperElement {
            sig,
            terms: self.terms.iter().filter(|(m, _)| m.deg <= trunc).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }

    /// Move the element into another signature.
    ///
    /// Purely even elements move between any signatures with the same number of
    /// even variables; elements with odd content need the same odd layout.
    pub fn recast(&self, sig: Signature) -> Result<Self> {
        if sig.even != self.sig.even {
            return Err(Error::IncompatibleSignature(format!("cannot recast {} into {sig}", self.sig)));
        }
        if !self.is_even_only() && (sig.odd != self.sig.odd || sig.tau != self.sig.tau) {
            return Err(Error::IncompatibleSignature(format!(
                "element with odd content cannot move from {} to {sig}",
                self.sig
            )));
        }
        let mut out = self.with_trunc(sig.trunc);
        out.sig = sig;
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.sig);
        }
        SuperElement { sig: self.sig, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    fn ensure_same(&self, other: &Self) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(self.sig, other.sig));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.ensure_same(other)?;
        let mut acc = Accumulator::from_element(self.clone());
        for (m, c) in &other.terms {
            acc.add_ref(m, c);
        }
        Ok(acc.finish())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.ensure_same(other)?;
        let mut acc = Accumulator::new(self.sig);
        let t = self.sig.trunc;
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if ma.deg + mb.deg > t {
                    continue;
                }
                if let Some((negate, m)) = ma.mul(mb) {
                    let c = ca * cb;
                    acc.add(m, if negate { -c } else { c });
                }
            }
        }
        Ok(acc.finish())
    }

    /// Product of several factors (empty product is `1`).
    pub fn product(sig: Signature, factors: &[SuperElement]) -> Result<Self> {
        let mut out = Self::one(sig);
        for f in factors {
            out = out.try_mul(f)?;
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.sig);
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Multiplicative inverse of a purely even element with nonzero constant term,
    /// via the geometric series `c^{-1} Σ (−u)^k` with `a = c(1 + u)`.
    pub fn invert(&self) -> Result<Self> {
        if !self.is_even_only() {
            return Err(Error::Unsupported(format!("inverse of an element with odd variables: {self}")));
        }
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::NotInvertible(self.to_string()));
        }
        let c_inv = c.recip();
        let u = self.scale(&c_inv) - Self::one(self.sig);
        let neg_u = -&u;
        let mut out = Self::one(self.sig);
        let mut power = Self::one(self.sig);
        for _ in 0..self.sig.trunc {
            power = &power * &neg_u;
            if power.is_zero() {
                break;
            }
            out = &out + &power;
        }
        Ok(out.scale(&c_inv))
    }
}

/// Coefficient accumulator that drops zeros and respects truncation.
pub(crate) struct Accumulator {
    sig: Signature,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Accumulator {
    pub(crate) fn new(sig: Signature) -> Self {
        Accumulator { sig, terms: BTreeMap::new() }
    }

    pub(crate) fn from_element(e: SuperElement) -> Self {
        Accumulator { sig: e.sig, terms: e.terms }
    }

    pub(crate) fn add(&mut self, m: Monomial, c: Scalar) {
        if m.deg > self.sig.trunc || c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn add_ref(&mut self, m: &Monomial, c: &Scalar) {
        if let Some(v) = self.terms.get_mut(m) {
            *v += c;
            if v.is_zero() {
                self.terms.remove(m);
            }
        } else {
            self.add(m.clone(), c.clone());
        }
    }

    pub(crate) fn finish(self) -> SuperElement {
        SuperElement { sig: self.sig, terms: self.terms }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&SuperElement> for &SuperElement {
            type Output = SuperElement;
            fn $method(self, rhs: &SuperElement) -> SuperElement {
                self.$try(rhs).expect("operands must share a signature")
            }
        }
        impl $trait<SuperElement> for SuperElement {
            type Output = SuperElement;
            fn $method(self, rhs: SuperElement) -> SuperElement {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&SuperElement> for SuperElement {
            type Output = SuperElement;
            fn $method(self, rhs: &SuperElement) -> SuperElement {
                (&self).$method(rhs)
            }
        }
        impl $trait<SuperElement> for &SuperElement {
            type Output = SuperElement;
            fn $method(self, rhs: SuperElement) -> SuperElement {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);

impl Neg for &SuperElement {
    type Output = SuperElement;
    fn neg(self) -> SuperElement {
        SuperElement { sig: self.sig, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for SuperElement {
    type Output = SuperElement;
    fn neg(self) -> SuperElement {
        -&self
    }
}

fn write_monomial(f: &mut fmt::Formatter<'_>, sig: &Signature, m: &Monomial) -> fmt::Result {
    let mut first = true;
    let mut sep = |f: &mut fmt::Formatter<'_>| -> fmt::Result {
        if !std::mem::replace(&mut first, false) {
            f.write_str("*")?;
        }
        Ok(())
    };
    for (i, &e) in m.exps.iter().enumerate() {
        match e {
            0 => {}
            1 => {
                sep(f)?;
                write!(f, "x{}", i + 1)?;
            }
            _ => {
                sep(f)?;
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
    }
    for i in mask_indices(m.odd) {
        sep(f)?;
        if sig.tau_index() == Some(i + 1) {
            f.write_str("tau")?;
        } else {
            write!(f, "xi{}", i + 1)?;
        }
    }
    Ok(())
}

impl fmt::Display for SuperElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.is_negative();
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            let unit = m.deg == 0 && m.odd == 0;
            if unit {
                write!(f, "{abs}")?;
            } else {
                if !abs.is_one() {
                    write!(f, "{abs}*")?;
                }
                write_monomial(f, &self.sig, m)?;
            }
        }
        Ok(())
    }
}

/// All monomials of the signature with x-degree at most `max_deg` (in canonical order).
pub fn monomials(sig: Signature, max_deg: u32, odd_degrees: Option<&[usize]>) -> Vec<Monomial> {
    let mut out = Vec::new();
    let n = sig.odd_total();
    let masks: Vec<u64> = (0..(1u64 << n))
        .filter(|m| odd_degrees.is_none_or(|ds| ds.contains(&(m.count_ones() as usize))))
        .collect();
    for exps in exponent_vectors(sig.even, max_deg.min(sig.trunc)) {
        for &mask in &masks {
            out.push(Monomial::new(exps.clone(), mask));
        }
    }
    out.sort();
    out
}

/// Exponent vectors in `m` variables of total degree at most `max_deg`.
pub fn exponent_vectors(m: usize, max_deg: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = vec![0u32; m];
    fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == cur.len() {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur[i] = e;
            rec(i + 1, left - e, cur, out);
        }
        cur[i] = 0;
    }
    rec(0, max_deg, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sig() -> Signature {
        Signature::ho(3, 4)
    }

    fn x(i: usize) -> SuperElement {
        SuperElement::x(sig(), i).unwrap()
    }

    fn xi(i: usize) -> SuperElement {
        SuperElement::xi(sig(), i).unwrap()
    }

    #[test]
    fn addition_and_cancellation() {
        assert_eq!(x(1) + x(1), SuperElement::integer(sig(), 2) * x(1));
        assert!((xi(1) * xi(2) - xi(1) * xi(2)).is_zero());
    }

    #[test]
    fn truncation_drops_high_degree() {
        let s = Signature::even(1, 1);
        let a = SuperElement::x(s, 1).unwrap();
        assert!((&a * &a + SuperElement::zero(s)).is_zero());
        let t = Signature::even(1, 3);
        let b = SuperElement::x(t, 1).unwrap();
        let sq = &b * &b;
        assert_eq!(sq.with_trunc(1), SuperElement::zero(t.with_trunc(1)));
    }

    #[test]
    fn anticommutation() {
        assert_eq!(xi(2) * xi(1), -(xi(1) * xi(2)));
        assert!((xi(1) * xi(1)).is_zero());
        assert_eq!((xi(3) * xi(1) * xi(2)).to_string(), "xi1*xi2*xi3");
        assert_eq!((xi(3) * xi(2) * xi(1)).to_string(), "-xi1*xi2*xi3");
    }

    #[test]
    fn parity_and_degree() {
        assert_eq!((xi(1) * xi(2)).parity(), ParityClass::Even);
        assert_eq!((x(1) * xi(3)).parity(), ParityClass::Odd);
        let one = SuperElement::one(sig());
        assert_eq!((&one + &xi(1)).parity(), ParityClass::Mixed);
        assert_eq!((xi(1) * xi(2) * xi(3)).z_degree(), Some(3));
        assert_eq!((x(1) * x(1) * x(2)).z_degree(), Some(0));
        assert_eq!((&one + &xi(1)).z_degree(), None);
    }

    #[test]
    fn inverse_of_one_plus_x() {
        let s = Signature::even(1, 3);
        let one = SuperElement::one(s);
        let x1 = SuperElement::x(s, 1).unwrap();
        let inv = (&one + &x1).invert().unwrap();
        assert_eq!(inv.to_string(), "1 - x1 + x1^2 - x1^3");
        assert_eq!(one.invert().unwrap(), one);
        assert!(matches!(x1.invert(), Err(Error::NotInvertible(_))));
        let o = SuperElement::xi(Signature::ho(1, 2), 1).unwrap();
        assert!(matches!((SuperElement::one(o.signature()) + o).invert(), Err(Error::Unsupported(_))));
    }

    #[test]
    fn inverse_with_nonunit_constant() {
        let s = Signature::even(2, 4);
        let f = SuperElement::integer(s, 3) + SuperElement::x(s, 2).unwrap() * SuperElement::x(s, 1).unwrap();
        assert_eq!(&f * &f.invert().unwrap(), SuperElement::one(s));
    }

    #[test]
    fn rendering_order_and_format() {
        let s = Signature::ko(2, 3);
        let e = SuperElement::monomial(s, &[2, 0], &[1, 2], ratio(3, 2)).unwrap()
            - SuperElement::tau(s).unwrap()
            + SuperElement::integer(s, 5)
            + SuperElement::monomial(s, &[0, 1], &[], ratio(-1, 3)).unwrap();
        assert_eq!(e.to_string(), "5 - tau - 1/3*x2 + 3/2*x1^2*xi1*xi2");
        assert_eq!(SuperElement::zero(s).to_string(), "0");
    }

    #[test]
    fn mismatched_signatures_error() {
        let a = SuperElement::one(Signature::ho(1, 2));
        let b = SuperElement::one(Signature::ho(2, 2));
        assert!(matches!(a.try_add(&b), Err(Error::SignatureMismatch(..))));
        assert!(matches!(a.try_mul(&b), Err(Error::SignatureMismatch(..))));
    }

    #[test]
    fn index_range_errors() {
        assert!(SuperElement::x(sig(), 0).is_err());
        assert!(SuperElement::x(sig(), 4).is_err());
        assert!(SuperElement::xi(sig(), 4).is_err());
        assert!(SuperElement::tau(sig()).is_err());
    }

    #[test]
    fn monomial_enumeration_counts() {
        // 3 even variables up to degree 2 give 10 exponent vectors.
        assert_eq!(exponent_vectors(3, 2).len(), 10);
        assert_eq!(monomials(Signature::ho(2, 5), 1, None).len(), 3 * 4);
        assert_eq!(monomials(Signature::ho(2, 5), 1, Some(&[1])).len(), 3 * 2);
    }
}
