//! Supersymmetric multilinear maps on `ΠA` for a finite-dimensional unital
//! supercommutative algebra `A`: the box product, the bracket of `W(ΠA)`,
//! the concatenation product, and the generalized Leibniz conditions that cut
//! out `GW^as(ΠA)`.
//!
//! A map of degree `k` takes `k + 1` arguments. Values are stored only on
//! canonical (non-decreasing) index tuples without repeated Π-odd indices;
//! any other ordering is recovered with the Koszul sign.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use itertools::Itertools;
use num_traits::{One, Zero};
use rand::Rng;
use rayon::prelude::*;

use crate::algebra::{monomials, scalar, sign_flip, Monomial, Parity, Scalar, Signature, SuperElement};
use crate::brackets::NaryBracket;
use crate::error::{Error, Result};
use crate::identities::{IdentityReport, Witness};
use crate::linalg::{nullspace, SparseVec};

/// Dense coordinates with respect to the basis of a [`FiniteSuperSpace`].
pub type Vector = Vec<Scalar>;

/// Largest basis admitted by the constructors.
pub const MAX_DIM: usize = 16;

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn add_scaled(acc: &mut [Scalar], c: &Scalar, v: &[Scalar]) {
    if c.is_zero() {
        return;
    }
    for (a, b) in acc.iter_mut().zip(v) {
        if !b.is_zero() {
            *a += c * b;
        }
    }
}

/// How the Leibniz conditions treat products that leave a truncated basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TruncationMode {
    /// `A` is the quotient algebra; every basis pair is constrained.
    Quotient,
    /// `A` models a power-series algebra at desk scale; pairs whose product
    /// exceeds the truncation are left unconstrained.
    Model,
}

#[derive(Clone, Debug, PartialEq)]
struct ProductTable {
    table: Vec<Vec<Vector>>,
    overflow: Vec<Vec<bool>>,
    unit: usize,
    mode: TruncationMode,
}

/// A finite-dimensional parity-graded space, optionally carrying a unital
/// supercommutative product (then it is the algebra `A`; maps act on `ΠA`).
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteSuperSpace {
    labels: Vec<String>,
    parity: Vec<Parity>,
    product: Option<ProductTable>,
    signature: Option<Signature>,
    basis: Vec<Monomial>,
}

impl FiniteSuperSpace {
    /// Plain space with the given Π-parities and no product.
    pub fn vector_space(labels: Vec<String>, pi_parity: Vec<Parity>) -> Result<Self> {
        if labels.len() != pi_parity.len() || labels.len() > MAX_DIM {
            return Err(Error::InvalidParameter("labels and parities must match, dimension at most 16".into()));
        }
        Ok(FiniteSuperSpace {
            labels,
            parity: pi_parity.into_iter().map(Parity::flip).collect(),
            product: None,
            signature: None,
            basis: Vec::new(),
        })
    }

    /// Algebra from an explicit structure-constant table (`table[i][j]` is `e_i e_j`).
    pub fn from_table(labels: Vec<String>, parity: Vec<Parity>, table: Vec<Vec<Vector>>, unit: usize) -> Result<Self> {
        let dim = labels.len();
        if parity.len() != dim || dim > MAX_DIM || table.len() != dim || unit >= dim {
            return Err(Error::InvalidParameter("inconsistent multiplication table".into()));
        }
        if table.iter().any(|row| row.len() != dim || row.iter().any(|v| v.len() != dim)) {
            return Err(Error::InvalidParameter("multiplication table must be dim x dim x dim".into()));
        }
        let space = FiniteSuperSpace {
            labels,
            parity,
            product: Some(ProductTable {
                table,
                overflow: vec![vec![false; dim]; dim],
                unit,
                mode: TruncationMode::Quotient,
            }),
            signature: None,
            basis: Vec::new(),
        };
        let laws = space.verify_algebra_laws();
        if !laws.passed {
            let w = laws.witness.map(|w| w.rendered_inputs().join(", ")).unwrap_or_default();
            return Err(Error::InvalidParameter(format!("table violates {} at ({w})", laws.identity)));
        }
        Ok(space)
    }

    /// The monomial basis of a signature at its truncation, with the truncated product.
    pub fn from_signature(sig: Signature, mode: TruncationMode) -> Result<Self> {
        let basis = monomials(sig, sig.trunc, None);
        let dim = basis.len();
        if dim > MAX_DIM {
            return Err(Error::InvalidParameter(format!("{sig} has dimension {dim} > {MAX_DIM}")));
        }
        let index: BTreeMap<&Monomial, usize> = basis.iter().enumerate().map(|(i, m)| (m, i)).collect();
        let mut table = vec![vec![vec![Scalar::zero(); dim]; dim]; dim];
        let mut overflow = vec![vec![false; dim]; dim];
        for (i, a) in basis.iter().enumerate() {
            for (j, b) in basis.iter().enumerate() {
                if let Some((negate, m)) = a.mul(b) {
                    if m.x_degree() > sig.trunc {
                        overflow[i][j] = true;
                    } else {
                        table[i][j][index[&m]] = if negate { -Scalar::one() } else { Scalar::one() };
                    }
                }
            }
        }
        let labels = basis.iter().map(|m| SuperElement::from_term(sig, m.clone(), Scalar::one()).to_string()).collect();
        Ok(FiniteSuperSpace {
            labels,
            parity: basis.iter().map(Monomial::parity).collect(),
            product: Some(ProductTable { table, overflow, unit: 0, mode }),
            signature: Some(sig),
            basis,
        })
    }

    /// The Grassmann algebra `Λ(n)`.
    pub fn grassmann(n: usize) -> Result<Self> {
        Self::from_signature(Signature { even: 0, odd: n, tau: false, trunc: 0 }, TruncationMode::Quotient)
    }

    /// Truncated (super)polynomials standing in for power series.
    pub fn truncated_polynomial(sig: Signature) -> Result<Self> {
        Self::from_signature(sig, TruncationMode::Model)
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Parity of a basis element in `A`.
    pub fn parity(&self, i: usize) -> Parity {
        self.parity[i]
    }

    /// Parity of a basis element in `ΠA`.
    pub fn pi_parity(&self, i: usize) -> Parity {
        self.parity[i].flip()
    }

    pub fn signature(&self) -> Option<Signature> {
        self.signature
    }

    pub fn has_product(&self) -> bool {
        self.product.is_some()
    }

    pub fn unit(&self) -> Option<usize> {
        self.product.as_ref().map(|p| p.unit)
    }

    fn table(&self) -> Result<&ProductTable> {
        self.product.as_ref().ok_or_else(|| Error::Unsupported("the space carries no multiplication".into()))
    }

    /// Whether the product `e_i e_j` leaves the truncated basis (model mode only).
    pub fn overflows(&self, i: usize, j: usize) -> bool {
        self.product.as_ref().is_some_and(|p| p.mode == TruncationMode::Model && p.overflow[i][j])
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        let mut v = vec![Scalar::zero(); self.dim()];
        v[i] = Scalar::one();
        v
    }

    /// Product in `A` of two coordinate vectors.
    pub fn multiply(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vector> {
        let t = self.table()?;
        let mut out = vec![Scalar::zero(); self.dim()];
        for (i, a) in u.iter().enumerate().filter(|(_, a)| !a.is_zero()) {
            for (j, b) in v.iter().enumerate().filter(|(_, b)| !b.is_zero()) {
                add_scaled(&mut out, &(a * b), &t.table[i][j]);
            }
        }
        Ok(out)
    }

    /// Coordinates of an element of the underlying signature.
    pub fn to_vector(&self, e: &SuperElement) -> Result<Vector> {
        let sig = self.signature.ok_or_else(|| Error::Unsupported("space has no signature".into()))?;
        let e = e.recast(sig)?;
        let mut v = vec![Scalar::zero(); self.dim()];
        for (m, c) in e.terms() {
            let i = self.basis.binary_search(m).map_err(|_| Error::InvalidParameter(format!("{e} not in basis")))?;
            v[i] = c.clone();
        }
        Ok(v)
    }

    pub fn from_vector(&self, v: &[Scalar]) -> Result<SuperElement> {
        let sig = self.signature.ok_or_else(|| Error::Unsupported("space has no signature".into()))?;
        Ok(SuperElement::from_terms(sig, self.basis.iter().cloned().zip(v.iter().cloned())))
    }

    /// Π-parity of a nonzero homogeneous vector.
    pub fn vector_pi_parity(&self, v: &[Scalar]) -> Option<Parity> {
        let mut seen: Option<Parity> = None;
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            match seen {
                None => seen = Some(self.pi_parity(i)),
                Some(p) if p != self.pi_parity(i) => return None,
                _ => {}
            }
        }
        seen
    }

    pub fn render_vector(&self, v: &[Scalar]) -> String {
        if let Some(sig) = self.signature {
            return SuperElement::from_terms(sig, self.basis.iter().cloned().zip(v.iter().cloned())).to_string();
        }
        let parts: Vec<String> = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| if c.is_one() { self.labels[i].clone() } else { format!("{c}*{}", self.labels[i]) })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    /// Exhaustive check of supercommutativity, associativity and the unit.
    pub fn verify_algebra_laws(&self) -> IdentityReport {
        let Some(t) = &self.product else {
            return IdentityReport::pass("algebra-laws");
        };
        let d = self.dim();
        let fail = |name: &str, idx: &[usize], residual: Vector| {
            IdentityReport::fail(
                name,
                Witness::Table {
                    inputs: idx.iter().map(|&i| self.labels[i].clone()).collect(),
                    residual: self.render_vector(&residual),
                },
            )
        };
        for i in 0..d {
            let e = self.basis_vector(i);
            let left = self.multiply(&self.basis_vector(t.unit), &e).expect("product present");
            if left != e {
                return fail("unit", &[i], left);
            }
            for j in 0..d {
                let mut r = t.table[i][j].clone();
                let s = if sign_flip(self.parity[i], self.parity[j]) { Scalar::one() } else { -Scalar::one() };
                add_scaled(&mut r, &s, &t.table[j][i]);
                if !is_zero_vec(&r) {
                    return fail("supercommutativity", &[i, j], r);
                }
                for k in 0..d {
                    let lhs = self.multiply(&t.table[i][j], &self.basis_vector(k)).expect("product");
                    let rhs = self.multiply(&self.basis_vector(i), &t.table[j][k]).expect("product");
                    if lhs != rhs {
                        let mut r = lhs;
                        add_scaled(&mut r, &-Scalar::one(), &rhs);
                        return fail("associativity", &[i, j, k], r);
                    }
                }
            }
        }
        IdentityReport::pass("algebra-laws")
    }

    /// Sort an index tuple; the flag records an odd number of Π-odd swaps.
    /// `None` when a Π-odd index repeats (the value is forced to zero).
    pub fn canonicalize(&self, idx: &[usize]) -> Option<(bool, Vec<usize>)> {
        let mut v = idx.to_vec();
        let mut negate = false;
        for i in 1..v.len() {
            let mut j = i;
            while j > 0 && v[j - 1] > v[j] {
                if self.pi_parity(v[j - 1]).is_odd() && self.pi_parity(v[j]).is_odd() {
                    negate = !negate;
                }
                v.swap(j - 1, j);
                j -= 1;
            }
        }
        if v.windows(2).any(|w| w[0] == w[1] && self.pi_parity(w[0]).is_odd()) {
            return None;
        }
        Some((negate, v))
    }

    /// Canonical index tuples of the given length.
    pub fn canonical_keys(&self, len: usize) -> Vec<Vec<usize>> {
        (0..self.dim())
            .combinations_with_replacement(len)
            .filter(|k| !k.windows(2).any(|w| w[0] == w[1] && self.pi_parity(w[0]).is_odd()))
            .collect()
    }

    /// Koszul sign `ε_a` of listing positions `first` then `second` (each increasing)
    /// for the arguments `args`: the parity of Π-odd pairs that change order.
    pub fn shuffle_sign(&self, args: &[usize], first: &[usize], second: &[usize]) -> bool {
        let mut negate = false;
        for &s in first {
            if !self.pi_parity(args[s]).is_odd() {
                continue;
            }
            for &c in second {
                if c < s && self.pi_parity(args[c]).is_odd() {
                    negate = !negate;
                }
            }
        }
        negate
    }
}

/// A supersymmetric `(k+1)`-linear map `S^{k+1}(ΠA) → ΠA` of degree `k ≥ −1`.
///
/// `parity` is the parity in `W(ΠA)`; degree −1 maps are vectors of `ΠA`.
/// Internally a zero map may carry degree −2, standing for the zero space `W_{−2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiMap {
    space: Arc<FiniteSuperSpace>,
    degree: i32,
    parity: Parity,
    entries: BTreeMap<Vec<usize>, Vector>,
}

fn sign_scalar(negate: bool) -> Scalar {
    if negate {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

impl MultiMap {
    pub fn zero(space: &Arc<FiniteSuperSpace>, degree: i32, parity: Parity) -> Result<Self> {
        if degree < -1 {
            return Err(Error::Degree(format!("degree {degree} < -1")));
        }
        Ok(Self::zero_ext(space, degree, parity))
    }

    fn zero_ext(space: &Arc<FiniteSuperSpace>, degree: i32, parity: Parity) -> Self {
        MultiMap { space: space.clone(), degree: degree.max(-2), parity, entries: BTreeMap::new() }
    }

    /// A homogeneous vector of `ΠA` as a degree −1 map; zero counts as Π-even.
    pub fn from_vector(space: &Arc<FiniteSuperSpace>, v: Vector) -> Result<Self> {
        if v.len() != space.dim() {
            return Err(Error::InvalidParameter("vector length does not match the space".into()));
        }
        let parity = if is_zero_vec(&v) {
            Parity::Even
        } else {
            space.vector_pi_parity(&v).ok_or_else(|| Error::InvalidParameter("vector is not homogeneous".into()))?
        };
        let mut entries = BTreeMap::new();
        if !is_zero_vec(&v) {
            entries.insert(Vec::new(), v);
        }
        Ok(MultiMap { space: space.clone(), degree: -1, parity, entries })
    }

    pub fn basis_element(space: &Arc<FiniteSuperSpace>, i: usize) -> Self {
        Self::from_vector(space, space.basis_vector(i)).expect("basis vectors are homogeneous")
    }

    /// The unit `1 ∈ A`, seen in `W_{−1} = ΠA`.
    pub fn unit(space: &Arc<FiniteSuperSpace>) -> Result<Self> {
        let u = space.table()?.unit;
        Ok(Self::basis_element(space, u))
    }

    /// Tabulate `f` on the canonical tuples; the values must respect the parity.
    pub fn from_fn<F>(space: &Arc<FiniteSuperSpace>, degree: i32, parity: Parity, mut f: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Result<Vector>,
    {
        if degree < -1 {
            return Err(Error::Degree(format!("degree {degree} < -1")));
        }
        let mut entries = BTreeMap::new();
        for key in space.canonical_keys((degree + 1) as usize) {
            let v = f(&key)?;
            if v.len() != space.dim() {
                return Err(Error::InvalidParameter("value has the wrong length".into()));
            }
            if is_zero_vec(&v) {
                continue;
            }
            let expected = key.iter().fold(parity, |p, &i| p.plus(space.pi_parity(i)));
            if space.vector_pi_parity(&v) != Some(expected) {
                return Err(Error::InvalidParameter(format!(
                    "value on {key:?} does not have parity {expected:?}"
                )));
            }
            entries.insert(key, v);
        }
        Ok(MultiMap { space: space.clone(), degree, parity, entries })
    }

    /// Random map with coefficients in `{−2, …, 2}` on every admissible entry.
    pub fn random<R: Rng>(space: &Arc<FiniteSuperSpace>, degree: i32, parity: Parity, rng: &mut R) -> Result<Self> {
        Self::from_fn(space, degree, parity, |key| {
            let target = key.iter().fold(parity, |p, &i| p.plus(space.pi_parity(i)));
            Ok((0..space.dim())
                .map(|e| if space.pi_parity(e) == target { scalar(rng.gen_range(-2..=2)) } else { Scalar::zero() })
                .collect())
        })
    }

    pub fn space(&self) -> &Arc<FiniteSuperSpace> {
        &self.space
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    /// Parity in `W(ΠA)`.
    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// Parity in `ΠW(ΠA)`, the algebra parity of the concatenation product.
    pub fn algebra_parity(&self) -> Parity {
        self.parity.flip()
    }

    pub fn arity(&self) -> usize {
        (self.degree + 1).max(0) as usize
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &BTreeMap<Vec<usize>, Vector> {
        &self.entries
    }

    /// The vector of a degree −1 map.
    pub fn as_vector(&self) -> Vector {
        self.entries.get(&Vec::new()).cloned().unwrap_or_else(|| vec![Scalar::zero(); self.space.dim()])
    }

    /// Value on basis arguments in any order.
    pub fn get(&self, idx: &[usize]) -> Vector {
        let dim = self.space.dim();
        match self.space.canonicalize(idx) {
            None => vec![Scalar::zero(); dim],
            Some((negate, key)) => match self.entries.get(&key) {
                None => vec![Scalar::zero(); dim],
                Some(v) if negate => v.iter().map(|c| -c).collect(),
                Some(v) => v.clone(),
            },
        }
    }

    /// `X(v, a_1, …)` with a vector in the first slot.
    pub fn eval_first(&self, v: &[Scalar], rest: &[usize]) -> Vector {
        let mut out = vec![Scalar::zero(); self.space.dim()];
        let mut idx = Vec::with_capacity(rest.len() + 1);
        for (e, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            idx.clear();
            idx.push(e);
            idx.extend_from_slice(rest);
            add_scaled(&mut out, c, &self.get(&idx));
        }
        out
    }

    /// `X(a_0, …, v)` with a vector in the last slot.
    pub fn eval_last(&self, prefix: &[usize], v: &[Scalar]) -> Vector {
        let mut out = vec![Scalar::zero(); self.space.dim()];
        let mut idx = prefix.to_vec();
        idx.push(0);
        for (e, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            *idx.last_mut().expect("nonempty") = e;
            add_scaled(&mut out, c, &self.get(&idx));
        }
        out
    }

    fn same_space(&self, other: &MultiMap) -> Result<()> {
        if !Arc::ptr_eq(&self.space, &other.space) && self.space != other.space {
            return Err(Error::IncompatibleSignature("maps live on different spaces".into()));
        }
        Ok(())
    }

    /// `self + c·other`; a zero operand adopts the other's degree and parity.
    fn combine(&self, c: &Scalar, other: &MultiMap) -> Result<MultiMap> {
        self.same_space(other)?;
        if other.is_zero() || c.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.scale(c));
        }
        if self.degree != other.degree || self.parity != other.parity {
            return Err(Error::Degree(format!(
                "cannot add maps of degree/parity {}/{:?} and {}/{:?}",
                self.degree, self.parity, other.degree, other.parity
            )));
        }
        let mut out = self.clone();
        for (k, v) in &other.entries {
            let slot = out.entries.entry(k.clone()).or_insert_with(|| vec![Scalar::zero(); self.space.dim()]);
            add_scaled(slot, c, v);
            if is_zero_vec(slot) {
                out.entries.remove(k);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &MultiMap) -> Result<MultiMap> {
        self.combine(&Scalar::one(), other)
    }

    pub fn sub(&self, other: &MultiMap) -> Result<MultiMap> {
        self.combine(&-Scalar::one(), other)
    }

    pub fn scale(&self, c: &Scalar) -> MultiMap {
        if c.is_zero() {
            return Self::zero_ext(&self.space, self.degree, self.parity);
        }
        MultiMap {
            space: self.space.clone(),
            degree: self.degree,
            parity: self.parity,
            entries: self.entries.iter().map(|(k, v)| (k.clone(), v.iter().map(|x| x * c).collect())).collect(),
        }
    }

    #[cfg(test)]
    fn signed(&self, negate: bool) -> MultiMap {
        if negate {
            self.scale(&-Scalar::one())
        } else {
            self.clone()
        }
    }

    /// Box product `X □ Y`; the result has degree `deg X + deg Y ≥ −1`.
    pub fn box_product(&self, other: &MultiMap) -> Result<MultiMap> {
        if self.degree + other.degree < -1 {
            return Err(Error::Degree(format!(
                "box product of degrees {} and {} falls below -1",
                self.degree, other.degree
            )));
        }
        self.box_ext(other)
    }

    fn box_ext(&self, other: &MultiMap) -> Result<MultiMap> {
        self.same_space(other)?;
        let (p, q) = (self.degree, other.degree);
        let degree = p + q;
        let parity = self.parity.plus(other.parity);
        if p < 0 || q < -1 || degree < -1 || self.is_zero() || other.is_zero() {
            return Ok(Self::zero_ext(&self.space, degree, parity));
        }
        let space = self.space.clone();
        let len = (degree + 1) as usize;
        let inner = (q + 1) as usize;
        let keys = space.canonical_keys(len);
        let entries: BTreeMap<Vec<usize>, Vector> = keys
            .into_par_iter()
            .filter_map(|key| {
                let mut acc = vec![Scalar::zero(); space.dim()];
                for first in (0..len).combinations(inner) {
                    let second: Vec<usize> = (0..len).filter(|i| !first.contains(i)).collect();
                    let y_args: Vec<usize> = first.iter().map(|&i| key[i]).collect();
                    let y = other.get(&y_args);
                    if is_zero_vec(&y) {
                        continue;
                    }
                    let rest: Vec<usize> = second.iter().map(|&i| key[i]).collect();
                    let val = self.eval_first(&y, &rest);
                    add_scaled(&mut acc, &sign_scalar(space.shuffle_sign(&key, &first, &second)), &val);
                }
                (!is_zero_vec(&acc)).then_some((key, acc))
            })
            .collect();
        Ok(MultiMap { space, degree, parity, entries })
    }

    /// `[X, Y] = X □ Y − (−1)^{p̄(X)p̄(Y)} Y □ X`.
    pub fn w_bracket(&self, other: &MultiMap) -> Result<MultiMap> {
        if self.degree + other.degree < -1 {
            return Err(Error::Degree(format!(
                "bracket of degrees {} and {} falls below -1",
                self.degree, other.degree
            )));
        }
        self.bracket_ext(other)
    }

    fn bracket_ext(&self, other: &MultiMap) -> Result<MultiMap> {
        let xy = self.box_ext(other)?;
        let yx = other.box_ext(self)?;
        xy.combine(&sign_scalar(!sign_flip(self.parity, other.parity)), &yx)
    }

    /// Concatenation product `X ∧ Y` of degree `deg X + deg Y + 1`.
    pub fn concat(&self, other: &MultiMap) -> Result<MultiMap> {
        self.same_space(other)?;
        self.space.table()?;
        let degree = self.degree + other.degree + 1;
        let parity = self.parity.plus(other.parity).flip();
        if self.degree < -1 || other.degree < -1 || self.is_zero() || other.is_zero() {
            return Ok(Self::zero_ext(&self.space, degree, parity));
        }
        let space = self.space.clone();
        let h = (self.degree + 1) as usize;
        let len = (degree + 1) as usize;
        let p_y = other.algebra_parity();
        let entries: BTreeMap<Vec<usize>, Vector> = space
            .canonical_keys(len)
            .into_par_iter()
            .filter_map(|key| {
                let mut acc = vec![Scalar::zero(); space.dim()];
                for first in (0..len).combinations(h) {
                    let second: Vec<usize> = (0..len).filter(|i| !first.contains(i)).collect();
                    let xv = self.get(&first.iter().map(|&i| key[i]).collect::<Vec<_>>());
                    if is_zero_vec(&xv) {
                        continue;
                    }
                    let yv = other.get(&second.iter().map(|&i| key[i]).collect::<Vec<_>>());
                    if is_zero_vec(&yv) {
                        continue;
                    }
                    let odd_first = first.iter().filter(|&&i| space.pi_parity(key[i]).is_odd()).count();
                    let negate = space.shuffle_sign(&key, &first, &second) ^ (p_y.is_odd() && odd_first % 2 == 1);
                    let prod = space.multiply(&xv, &yv).expect("product present");
                    add_scaled(&mut acc, &sign_scalar(negate), &prod);
                }
                (!is_zero_vec(&acc)).then_some((key, acc))
            })
            .collect();
        Ok(MultiMap { space, degree, parity, entries })
    }

    /// First nonzero entry, for witnesses.
    fn first_entry(&self) -> String {
        match self.entries.iter().next() {
            None => "0".into(),
            Some((k, v)) => {
                let args: Vec<&str> = k.iter().map(|&i| self.space.labels[i].as_str()).collect();
                format!("({}) -> {}", args.join(", "), self.space.render_vector(v))
            }
        }
    }
}

impl fmt::Display for MultiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "W_{}[{:?}]{{", self.degree, self.parity)?;
        for (n, (k, v)) in self.entries.iter().enumerate() {
            if n > 0 {
                f.write_str("; ")?;
            }
            let args: Vec<&str> = k.iter().map(|&i| self.space.labels[i].as_str()).collect();
            write!(f, "({}) -> {}", args.join(", "), self.space.render_vector(v))?;
        }
        f.write_str("}")
    }
}

/// `X(a_0..a_{k−1}, bc) = X(a.., b)c + (−1)^{p(b)p(c)} X(a.., c)b − X(a.., 1)bc` on all basis tuples.
pub fn gw_membership(x: &MultiMap) -> Result<IdentityReport> {
    leibniz_report("generalized-leibniz", x)
}

/// The degree-0 case: `X(bc) = X(b)c + (−1)^{p(b)p(c)} X(c)b − X(1)bc`.
pub fn is_generalized_derivation(x: &MultiMap) -> Result<IdentityReport> {
    if x.degree != 0 {
        return Err(Error::Degree(format!("generalized derivations have degree 0, got {}", x.degree)));
    }
    leibniz_report("generalized-derivation", x)
}

fn leibniz_report(name: &str, x: &MultiMap) -> Result<IdentityReport> {
    let space = x.space.clone();
    let t = space.table()?;
    if x.degree < 0 {
        return Ok(IdentityReport::pass(name));
    }
    let d = space.dim();
    let prefixes = space.canonical_keys(x.degree as usize);
    let unit = space.basis_vector(t.unit);
    let failure = prefixes.par_iter().find_map_first(|a| {
        for b in 0..d {
            for c in 0..d {
                if space.overflows(b, c) {
                    continue;
                }
                let bc = &t.table[b][c];
                let mut r = x.eval_last(a, bc);
                let xb = x.eval_last(a, &space.basis_vector(b));
                add_scaled(&mut r, &-Scalar::one(), &space.multiply(&xb, &space.basis_vector(c)).expect("product"));
                let xc = x.eval_last(a, &space.basis_vector(c));
                let s = sign_scalar(!sign_flip(space.parity(b), space.parity(c)));
                add_scaled(&mut r, &s, &space.multiply(&xc, &space.basis_vector(b)).expect("product"));
                let x1 = x.eval_last(a, &unit);
                add_scaled(&mut r, &Scalar::one(), &space.multiply(&x1, bc).expect("product"));
                if !is_zero_vec(&r) {
                    let mut inputs: Vec<String> = a.iter().map(|&i| space.labels[i].clone()).collect();
                    inputs.push(space.labels[b].clone());
                    inputs.push(space.labels[c].clone());
                    return Some(IdentityReport::fail(
                        name,
                        Witness::Table { inputs, residual: space.render_vector(&r) },
                    ));
                }
            }
        }
        None
    });
    Ok(failure.unwrap_or_else(|| IdentityReport::pass(name)))
}

/// Basis of the degree-`k` component of `GW^as(ΠA)` with the given W-parity.
pub fn gw_basis(space: &Arc<FiniteSuperSpace>, degree: i32, parity: Parity) -> Result<Vec<MultiMap>> {
    let t = space.table()?;
    if degree < -1 {
        return Err(Error::Degree(format!("degree {degree} < -1")));
    }
    let d = space.dim();
    if degree == -1 {
        return Ok((0..d).filter(|&i| space.pi_parity(i) == parity).map(|i| MultiMap::basis_element(space, i)).collect());
    }
    // Unknowns: (canonical key, output index) pairs allowed by parity.
    let keys = space.canonical_keys((degree + 1) as usize);
    let mut unknowns: Vec<(usize, usize)> = Vec::new();
    let mut slot: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (ki, key) in keys.iter().enumerate() {
        let target = key.iter().fold(parity, |p, &i| p.plus(space.pi_parity(i)));
        for e in (0..d).filter(|&e| space.pi_parity(e) == target) {
            slot.insert((ki, e), unknowns.len());
            unknowns.push((ki, e));
        }
    }
    let key_index: BTreeMap<&Vec<usize>, usize> = keys.iter().enumerate().map(|(i, k)| (k, i)).collect();
    // X(a.., f)_e as a sparse combination of unknowns.
    let coord = |prefix: &[usize], f: usize, e: usize| -> Option<(usize, bool)> {
        let mut idx = prefix.to_vec();
        idx.push(f);
        let (negate, key) = space.canonicalize(&idx)?;
        let ki = key_index[&key];
        slot.get(&(ki, e)).map(|&u| (u, negate))
    };
    let mut rows: Vec<SparseVec<usize>> = Vec::new();
    let push = |row: &mut SparseVec<usize>, u: Option<(usize, bool)>, c: Scalar| {
        if let Some((u, negate)) = u {
            let c = if negate { -c } else { c };
            let e = row.entry(u).or_insert_with(Scalar::zero);
            *e += c;
            if e.is_zero() {
                row.remove(&u);
            }
        }
    };
    for a in space.canonical_keys(degree as usize) {
        for b in 0..d {
            for c in 0..d {
                if space.overflows(b, c) {
                    continue;
                }
                // Residual component e, written as Σ coefficient · unknown.
                let mut residual: Vec<SparseVec<usize>> = vec![SparseVec::new(); d];
                for (f, coef) in t.table[b][c].iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                    for (e, r) in residual.iter_mut().enumerate() {
                        push(r, coord(&a, f, e), coef.clone());
                    }
                }
                // − X(a, b)·c − (−1)^{p(b)p(c)} X(a, c)·b + X(a, 1)·bc
                let terms: [(usize, Vector, Scalar); 3] = [
                    (b, space.basis_vector(c), -Scalar::one()),
                    (c, space.basis_vector(b), sign_scalar(!sign_flip(space.parity(b), space.parity(c)))),
                    (t.unit, t.table[b][c].clone(), Scalar::one()),
                ];
                for (arg, right, s) in terms {
                    for f in 0..d {
                        // (X(a,arg)_f e_f) · right
                        let prod = space.multiply(&space.basis_vector(f), &right).expect("product");
                        for (e, pc) in prod.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                            push(&mut residual[e], coord(&a, arg, f), &s * pc);
                        }
                    }
                }
                rows.extend(residual.into_iter().filter(|r| !r.is_empty()));
            }
        }
    }
    let ns = nullspace(rows, unknowns.len());
    let mut out = Vec::new();
    for v in ns {
        let mut entries: BTreeMap<Vec<usize>, Vector> = BTreeMap::new();
        for (u, c) in v.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
            let (ki, e) = unknowns[u];
            entries.entry(keys[ki].clone()).or_insert_with(|| vec![Scalar::zero(); d])[e] = c.clone();
        }
        out.push(MultiMap { space: space.clone(), degree, parity, entries });
    }
    Ok(out)
}

fn table_report(name: &str, inputs: [&MultiMap; 3], residuals: &[MultiMap]) -> IdentityReport {
    match residuals.iter().find(|r| !r.is_zero()) {
        None => IdentityReport::pass(name),
        Some(r) => IdentityReport::fail(
            name,
            Witness::Table { inputs: inputs.iter().map(|m| m.to_string()).collect(), residual: r.first_entry() },
        ),
    }
}

/// Both product laws linking `□` and `∧`:
/// `X□(Y∧Z) = (X□Y)∧Z + (−1)^{p̄(X)p(Y)} Y∧(X□Z) − (X□1)∧Y∧Z` and
/// `(X∧Y)□Z = X∧(Y□Z) + (−1)^{p(Y)p̄(Z)} (X□Z)∧Y`.
pub fn verify_uogp_laws(x: &MultiMap, y: &MultiMap, z: &MultiMap) -> Result<IdentityReport> {
    x.same_space(y)?;
    x.same_space(z)?;
    let one = MultiMap::unit(&x.space)?;
    let p_y = y.algebra_parity();
    let first = x
        .box_ext(&y.concat(z)?)?
        .sub(&x.box_ext(y)?.concat(z)?)?
        .combine(&sign_scalar(!sign_flip(x.parity, p_y)), &y.concat(&x.box_ext(z)?)?)?
        .add(&x.box_ext(&one)?.concat(y)?.concat(z)?)?;
    let second = x
        .concat(y)?
        .box_ext(z)?
        .sub(&x.concat(&y.box_ext(z)?)?)?
        .combine(&sign_scalar(!sign_flip(p_y, z.parity)), &x.box_ext(z)?.concat(y)?)?;
    Ok(table_report("uogp-laws", [x, y, z], &[first, second]))
}

/// `[X,[Y,Z]] − [[X,Y],Z] − (−1)^{p̄(X)p̄(Y)} [Y,[X,Z]]`.
pub fn verify_w_jacobi(x: &MultiMap, y: &MultiMap, z: &MultiMap) -> Result<IdentityReport> {
    let r = x
        .bracket_ext(&y.bracket_ext(z)?)?
        .sub(&x.bracket_ext(y)?.bracket_ext(z)?)?
        .combine(&sign_scalar(!sign_flip(x.parity, y.parity)), &y.bracket_ext(&x.bracket_ext(z)?)?)?;
    Ok(table_report("w-jacobi", [x, y, z], &[r]))
}

/// Tabulate an n-ary skew-symmetric bracket on the monomial basis of `Π𝒩`.
pub fn mu_from_nambu(space: &Arc<FiniteSuperSpace>, bracket: &dyn NaryBracket) -> Result<MultiMap> {
    let sig = space.signature().ok_or_else(|| Error::Unsupported("space has no signature".into()))?;
    if sig.odd_total() != 0 {
        return Err(Error::IncompatibleSignature(format!("{sig} is not purely even")));
    }
    let n = bracket.arity();
    let elems: Vec<SuperElement> = (0..space.dim()).map(|i| space.from_vector(&space.basis_vector(i))).collect::<Result<_>>()?;
    let eval = |idx: &[usize]| -> Result<Vector> {
        let args: Vec<SuperElement> = idx.iter().map(|&i| elems[i].clone()).collect();
        space.to_vector(&bracket.apply(&args)?)
    };
    let parity = Parity::of_count(n + 1);
    // Skew-symmetry on the basis, including vanishing on repeated arguments.
    for key in (0..space.dim()).combinations_with_replacement(n) {
        let v = eval(&key)?;
        if key.windows(2).any(|w| w[0] == w[1]) {
            if !is_zero_vec(&v) {
                return Err(Error::InvalidParameter(format!(
                    "{} does not vanish on repeated arguments {:?}",
                    bracket.name(),
                    key.iter().map(|&i| &space.labels[i]).collect::<Vec<_>>()
                )));
            }
            continue;
        }
        for i in 0..n.saturating_sub(1) {
            let mut swapped = key.clone();
            swapped.swap(i, i + 1);
            let mut w = eval(&swapped)?;
            add_scaled(&mut w, &Scalar::one(), &v);
            if !is_zero_vec(&w) {
                return Err(Error::InvalidParameter(format!(
                    "{} is not skew-symmetric on {:?}",
                    bracket.name(),
                    key.iter().map(|&i| &space.labels[i]).collect::<Vec<_>>()
                )));
            }
        }
    }
    MultiMap::from_fn(space, n as i32 - 1, parity, |key| eval(key))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::{BracketKind, FnBracket};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn lambda2() -> Arc<FiniteSuperSpace> {
        Arc::new(FiniteSuperSpace::grassmann(2).unwrap())
    }

    /// Independent `ε_a`: apply the permutation by adjacent swaps and count Π-odd exchanges.
    fn epsilon_oracle(space: &FiniteSuperSpace, args: &[usize], order: &[usize]) -> bool {
        let mut perm = order.to_vec();
        let mut negate = false;
        loop {
            let mut swapped = false;
            for i in 0..perm.len().saturating_sub(1) {
                if perm[i] > perm[i + 1] {
                    if space.pi_parity(args[perm[i]]).is_odd() && space.pi_parity(args[perm[i + 1]]).is_odd() {
                        negate = !negate;
                    }
                    perm.swap(i, i + 1);
                    swapped = true;
                }
            }
            if !swapped {
                return negate;
            }
        }
    }

    #[test]
    fn shuffle_sign_matches_permutation_oracle() {
        let space = FiniteSuperSpace::grassmann(3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..300 {
            let len = rng.gen_range(1..=6);
            let args: Vec<usize> = (0..len).map(|_| rng.gen_range(0..space.dim())).collect();
            let k = rng.gen_range(0..=len);
            let first: Vec<usize> = (0..len).combinations(k).nth(rng.gen_range(0..binom(len, k))).unwrap();
            let second: Vec<usize> = (0..len).filter(|i| !first.contains(i)).collect();
            let order: Vec<usize> = first.iter().chain(&second).copied().collect();
            assert_eq!(space.shuffle_sign(&args, &first, &second), epsilon_oracle(&space, &args, &order));
        }
    }

    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn grassmann_table_is_an_algebra() {
        let s = FiniteSuperSpace::grassmann(3).unwrap();
        assert_eq!(s.dim(), 8);
        assert!(s.verify_algebra_laws().passed);
        let bad = FiniteSuperSpace::from_table(
            vec!["1".into(), "e".into()],
            vec![Parity::Even, Parity::Odd],
            vec![
                vec![vec![scalar(1), scalar(0)], vec![scalar(0), scalar(1)]],
                vec![vec![scalar(0), scalar(1)], vec![scalar(1), scalar(0)]],
            ],
            0,
        );
        assert!(bad.is_err());
    }

    #[test]
    fn box_with_a_vector_is_partial_evaluation() {
        let s = lambda2();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x0 = MultiMap::random(&s, 0, Parity::Odd, &mut rng).unwrap();
        let x1 = MultiMap::random(&s, 1, Parity::Even, &mut rng).unwrap();
        for i in 0..s.dim() {
            let a = MultiMap::basis_element(&s, i);
            assert_eq!(x0.box_product(&a).unwrap().as_vector(), x0.get(&[i]));
            let part = x1.box_product(&a).unwrap();
            assert_eq!(part.degree(), 0);
            for j in 0..s.dim() {
                assert_eq!(part.get(&[j]), x1.get(&[i, j]));
            }
        }
        let a = MultiMap::basis_element(&s, 1);
        assert!(a.box_product(&x0).unwrap().is_zero());
        assert!(matches!(a.w_bracket(&a), Err(Error::Degree(_))));
    }

    /// Brute force: sum over all orderings of the arguments, weighted to reproduce the shuffle sum.
    #[test]
    fn box_matches_brute_force_over_all_orderings() {
        let s = lambda2();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (p, q) in [(1, 0), (0, 1), (1, 1), (2, 0)] {
            let x = MultiMap::random(&s, p, Parity::Odd, &mut rng).unwrap();
            let y = MultiMap::random(&s, q, Parity::Even, &mut rng).unwrap();
            let xy = x.box_product(&y).unwrap();
            let len = (p + q + 1) as usize;
            let (qa, pa) = ((q + 1) as usize, p as usize);
            for key in s.canonical_keys(len) {
                let mut acc = vec![Scalar::zero(); s.dim()];
                for order in (0..len).permutations(len) {
                    // Keep orderings whose two blocks are increasing: exactly the shuffles.
                    if !order[..qa].windows(2).all(|w| w[0] < w[1]) || !order[qa..].windows(2).all(|w| w[0] < w[1]) {
                        continue;
                    }
                    let yv = y.get(&order[..qa].iter().map(|&i| key[i]).collect::<Vec<_>>());
                    let val = x.eval_first(&yv, &order[qa..qa + pa].iter().map(|&i| key[i]).collect::<Vec<_>>());
                    add_scaled(&mut acc, &sign_scalar(epsilon_oracle(&s, &key, &order)), &val);
                }
                assert_eq!(xy.get(&key), acc, "p={p} q={q} key={key:?}");
            }
        }
    }

    #[test]
    fn self_bracket_of_odd_degree_zero_map() {
        let s = lambda2();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = MultiMap::random(&s, 0, Parity::Odd, &mut rng).unwrap();
        assert_eq!(x.w_bracket(&x).unwrap(), x.box_product(&x).unwrap().scale(&scalar(2)));
    }

    #[test]
    fn concat_unit_and_products() {
        let s = lambda2();
        let one = MultiMap::unit(&s).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for deg in -1..=1 {
            for par in [Parity::Even, Parity::Odd] {
                let x = MultiMap::random(&s, deg, par, &mut rng).unwrap();
                assert_eq!(one.concat(&x).unwrap(), x);
                assert_eq!(x.concat(&one).unwrap(), x);
            }
        }
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                let ab = MultiMap::basis_element(&s, i).concat(&MultiMap::basis_element(&s, j)).unwrap();
                assert_eq!(ab.as_vector(), s.multiply(&s.basis_vector(i), &s.basis_vector(j)).unwrap());
            }
        }
    }

    #[test]
    fn concat_is_supercommutative_and_associative() {
        let s = lambda2();
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..30 {
            let mk = |rng: &mut ChaCha8Rng| {
                let d = rng.gen_range(-1..=1);
                let p = Parity::from_bit(rng.gen_bool(0.5));
                MultiMap::random(&s, d, p, rng).unwrap()
            };
            let (x, y, z) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            let xy = x.concat(&y).unwrap();
            let yx = y.concat(&x).unwrap();
            let flip = sign_flip(x.algebra_parity(), y.algebra_parity());
            assert!(xy.sub(&yx.signed(flip)).unwrap().is_zero());
            let l = x.concat(&y).unwrap().concat(&z).unwrap();
            let r = x.concat(&y.concat(&z).unwrap()).unwrap();
            assert!(l.sub(&r).unwrap().is_zero());
        }
    }

    #[test]
    fn w_bracket_jacobi_on_random_maps() {
        let s = Arc::new(FiniteSuperSpace::from_signature(Signature::ho(1, 1), TruncationMode::Quotient).unwrap());
        assert_eq!(s.dim(), 4);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let mk = |rng: &mut ChaCha8Rng| {
                let d = rng.gen_range(-1..=1);
                let p = Parity::from_bit(rng.gen_bool(0.5));
                MultiMap::random(&s, d, p, rng).unwrap()
            };
            let (x, y, z) = (mk(&mut rng), mk(&mut rng), mk(&mut rng));
            assert!(verify_w_jacobi(&x, &y, &z).unwrap().passed);
        }
    }

    #[test]
    fn generalized_derivation_examples() {
        let s = lambda2();
        let zero = MultiMap::zero(&s, 0, Parity::Even).unwrap();
        assert!(is_generalized_derivation(&zero).unwrap().passed);
        // Multiplication by u = xi1 (an odd element of A; the map is odd on ΠA as well).
        let u = s.basis_vector(1);
        let mult = MultiMap::from_fn(&s, 0, Parity::Odd, |k| s.multiply(&u, &s.basis_vector(k[0]))).unwrap();
        assert!(is_generalized_derivation(&mult).unwrap().passed);
        // Break it on one entry.
        let mut broken = mult.clone();
        broken.entries.insert(vec![2], s.basis_vector(3));
        let rep = is_generalized_derivation(&broken).unwrap();
        assert!(!rep.passed);
        assert!(rep.witness.is_some());
        assert!(is_generalized_derivation(&MultiMap::zero(&s, 1, Parity::Even).unwrap()).is_err());
    }

    #[test]
    fn degree_zero_membership_agrees_with_derivation_check() {
        let s = lambda2();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..20 {
            let x = MultiMap::random(&s, 0, Parity::from_bit(rng.gen_bool(0.5)), &mut rng).unwrap();
            assert_eq!(gw_membership(&x).unwrap().passed, is_generalized_derivation(&x).unwrap().passed);
        }
        for b in gw_basis(&s, 0, Parity::Even).unwrap() {
            assert!(is_generalized_derivation(&b).unwrap().passed);
        }
    }

    #[test]
    fn random_maps_fail_membership() {
        let s = lambda2();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = MultiMap::random(&s, 1, Parity::Odd, &mut rng).unwrap();
        assert!(!gw_membership(&x).unwrap().passed);
    }

    #[test]
    fn gw_basis_elements_pass_membership() {
        let s = lambda2();
        for deg in 0..=2 {
            for par in [Parity::Even, Parity::Odd] {
                let basis = gw_basis(&s, deg, par).unwrap();
                for b in &basis {
                    assert!(gw_membership(b).unwrap().passed, "deg {deg} {par:?}: {b}");
                }
            }
        }
    }

    #[test]
    fn prolongation_coherence() {
        let s = lambda2();
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let mut candidates = Vec::new();
        for par in [Parity::Even, Parity::Odd] {
            let basis = gw_basis(&s, 1, par).unwrap();
            for b in &basis {
                candidates.push(b.clone());
                candidates.push(b.add(&MultiMap::random(&s, 1, par, &mut rng).unwrap()).unwrap());
            }
        }
        for x in candidates {
            let member = gw_membership(&x).unwrap().passed;
            let partials = (0..s.dim())
                .all(|i| gw_membership(&x.box_product(&MultiMap::basis_element(&s, i)).unwrap()).unwrap().passed);
            assert_eq!(member, partials);
        }
    }

    #[test]
    fn uogp_laws_on_low_degree_gw_basis() {
        let s = lambda2();
        let mut basis = Vec::new();
        for deg in -1..=0 {
            for par in [Parity::Even, Parity::Odd] {
                basis.extend(gw_basis(&s, deg, par).unwrap());
            }
        }
        assert!(basis.len() >= 8);
        for x in &basis {
            for y in &basis {
                for z in &basis {
                    let rep = verify_uogp_laws(x, y, z).unwrap();
                    assert!(rep.passed, "{:?}", rep.witness);
                }
            }
        }
    }

    #[test]
    fn uogp_laws_need_generalized_leibniz() {
        let s = lambda2();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let found = (0..20).any(|_| {
            let x = MultiMap::random(&s, 1, Parity::Odd, &mut rng).unwrap();
            let y = MultiMap::random(&s, 0, Parity::Even, &mut rng).unwrap();
            let z = MultiMap::random(&s, 0, Parity::Odd, &mut rng).unwrap();
            !verify_uogp_laws(&x, &y, &z).unwrap().passed
        });
        assert!(found);
    }

    #[test]
    fn nambu_mu_is_generalized_leibniz() {
        let s = Arc::new(FiniteSuperSpace::truncated_polynomial(Signature::even(2, 2)).unwrap());
        let mu = mu_from_nambu(&s, &BracketKind::Nambu(2)).unwrap();
        assert_eq!(mu.degree(), 1);
        assert!(gw_membership(&mu).unwrap().passed);
        let zero_bracket = FnBracket {
            arity: 2,
            name: "zero".into(),
            f: |a: &[SuperElement]| Ok(SuperElement::zero(a[0].signature())),
        };
        assert!(mu_from_nambu(&s, &zero_bracket).unwrap().is_zero());
        let sym = FnBracket { arity: 2, name: "product".into(), f: |a: &[SuperElement]| Ok(&a[0] * &a[1]) };
        assert!(mu_from_nambu(&s, &sym).is_err());
    }

    #[test]
    fn dzhumadildaev_mu_is_supersymmetric() {
        let s = Arc::new(FiniteSuperSpace::truncated_polynomial(Signature::even(2, 2)).unwrap());
        let mu = mu_from_nambu(&s, &BracketKind::Dzhumadildaev(3)).unwrap();
        assert_eq!(mu.degree(), 2);
        for key in (0..s.dim()).permutations(3) {
            let (negate, sorted) = s.canonicalize(&key).unwrap();
            let expected: Vector = mu.get(&sorted).iter().map(|c| if negate { -c } else { c.clone() }).collect();
            assert_eq!(mu.get(&key), expected);
        }
        assert!(gw_membership(&mu).unwrap().passed);
    }
}
