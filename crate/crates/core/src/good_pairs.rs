//! Graded components of `PO(n,n)` and `PO(n,n+1)`, the good-pair conditions
//! G1 to G3 at a degree cap, the n-ary bracket induced by a pair, the four
//! classification witnesses and the counterexample families.

use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{monomials, Monomial, Scalar, Signature, SuperElement};
use crate::brackets::{BracketKind, NaryBracket, OddBracket};
use crate::calculus::d_dxi;
use crate::error::{Error, Result};
use crate::gauge::Gauge;
use crate::identities::{IdentityReport, Witness};
use crate::linalg::{nullspace, Echelon, SparseVec};

/// `PO(n,n)` or `PO(n,n+1)` with the grading `deg x_i = 0`, `deg ξ_i = deg τ = 1`,
/// optionally gauge-twisted by an invertible purely even `φ`.
#[derive(Clone, Debug)]
pub struct GradedPo {
    sig: Signature,
    gauge: Option<Gauge<BracketKind>>,
}

impl GradedPo {
    /// `PO(n,n)` with the HO bracket.
    pub fn ho(n: usize, trunc: u32) -> Self {
        GradedPo { sig: Signature::ho(n, trunc), gauge: None }
    }

    /// `PO(n,n+1)` with the KO bracket.
    pub fn ko(n: usize, trunc: u32) -> Self {
        GradedPo { sig: Signature::ko(n, trunc), gauge: None }
    }

    pub fn from_signature(sig: Signature) -> Result<Self> {
        if sig.even != sig.odd || sig.even == 0 {
            return Err(Error::IncompatibleSignature(format!("{sig} is neither O(n, n) nor O(n, n+1)")));
        }
        Ok(GradedPo { sig, gauge: None })
    }

    /// The gauge-equivalent algebra `P^φ`; the grading is unchanged.
    pub fn with_gauge(&self, phi: SuperElement) -> Result<Self> {
        let phi = phi.recast(self.sig)?;
        Ok(GradedPo { sig: self.sig, gauge: Some(Gauge::odd(phi, self.kind())?) })
    }

    pub fn signature(&self) -> Signature {
        self.sig
    }

    pub fn kind(&self) -> BracketKind {
        if self.sig.tau {
            BracketKind::Ko
        } else {
            BracketKind::Ho
        }
    }

    pub fn phi(&self) -> Option<&SuperElement> {
        self.gauge.as_ref().map(Gauge::phi)
    }

    pub fn is_gauged(&self) -> bool {
        self.gauge.is_some()
    }

    /// Number of odd generators, so components run over `j = −1, …, odd − 1`.
    pub fn odd_count(&self) -> usize {
        self.sig.odd_total()
    }

    /// Monomial basis of `𝒫_j` with x-degree at most `d`.
    pub fn component(&self, j: i32, d: u32) -> Result<Vec<SuperElement>> {
        if j < -1 {
            return Err(Error::Degree(format!("components start at -1, got {j}")));
        }
        let sig = self.sig.with_trunc(self.sig.trunc.max(d));
        Ok(monomials(sig, d, Some(&[(j + 1) as usize]))
            .into_iter()
            .map(|m| SuperElement::from_term(sig, m, Scalar::one()))
            .collect())
    }

    /// Even generators `x^a` of `𝒫_{−1}` with x-degree at most `d`.
    fn minus_one(&self, d: u32, sig: Signature) -> Vec<SuperElement> {
        monomials(sig.with_trunc(sig.trunc.max(d)), d, Some(&[0]))
            .into_iter()
            .map(|m| SuperElement::from_term(sig, m, Scalar::one()))
            .collect()
    }
}

impl OddBracket for GradedPo {
    fn bracket(&self, a: &SuperElement, b: &SuperElement) -> Result<SuperElement> {
        match &self.gauge {
            Some(g) => g.bracket(a, b),
            None => self.kind().bracket(a, b),
        }
    }

    fn name(&self) -> String {
        match &self.gauge {
            Some(g) => OddBracket::name(g),
            None => OddBracket::name(&self.kind()),
        }
    }
}

/// G2 outcome at a degree cap.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct G2Report {
    pub generated: bool,
    pub missing: Vec<String>,
    pub degree_cap: u32,
}

/// All three conditions at one degree cap.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GoodPairReport {
    pub g1: IdentityReport,
    pub g2: G2Report,
    pub g3: IdentityReport,
    pub verdict: bool,
}

/// Transitivity: no nonzero `a ∈ 𝒫_j`, `j ≥ 0`, x-degree at most `d`, commutes with
/// every generator `x^b` of `𝒫_{−1}` with `|b| ≤ d + 1`.
pub fn check_g1(p: &GradedPo, d: u32) -> Result<IdentityReport> {
    let work = p.sig.with_trunc(2 * d + 2);
    let gens = p.minus_one(d + 1, work);
    check_g1_with_generators(p, d, &gens)
}

/// Transitivity tested against an explicit list of purely even generators.
pub fn check_g1_with_generators(p: &GradedPo, d: u32, generators: &[SuperElement]) -> Result<IdentityReport> {
    let work = p.sig.with_trunc(p.sig.trunc.max(2 * d + 2));
    let gens: Vec<SuperElement> = generators
        .iter()
        .map(|g| {
            if !g.is_even_only() {
                return Err(Error::InvalidParameter(format!("{g} is not in the (-1)-component")));
            }
            Ok(g.recast(work)?.with_trunc(work.trunc))
        })
        .collect::<Result<_>>()?;
    for j in 0..p.odd_count() as i32 {
        let basis: Vec<SuperElement> = p.component(j, d)?.iter().map(|a| a.recast(work)).collect::<Result<_>>()?;
        // Column c holds the coordinates of ([a_c, g])_g.
        let columns: Vec<Vec<((usize, Monomial), Scalar)>> = basis
            .par_iter()
            .map(|a| {
                let mut col = Vec::new();
                for (gi, g) in gens.iter().enumerate() {
                    for (m, c) in p.bracket(a, g)?.terms() {
                        col.push(((gi, m.clone()), c.clone()));
                    }
                }
                Ok(col)
            })
            .collect::<Result<_>>()?;
        let mut rows: BTreeMap<(usize, Monomial), SparseVec<usize>> = BTreeMap::new();
        for (c, col) in columns.into_iter().enumerate() {
            for (key, v) in col {
                rows.entry(key).or_default().insert(c, v);
            }
        }
        if let Some(v) = nullspace(rows.into_values(), basis.len()).into_iter().next() {
            let a = SuperElement::from_terms(
                p.sig.with_trunc(p.sig.trunc.max(d)),
                basis.iter().zip(&v).flat_map(|(b, c)| b.terms().map(move |(m, _)| (m.clone(), c.clone()))),
            );
            return Ok(IdentityReport::fail(
                "g1-transitivity",
                Witness::Table {
                    inputs: vec![a.to_string()],
                    residual: format!("[a, x^b] = 0 for all {} generators", gens.len()),
                },
            ));
        }
    }
    Ok(IdentityReport::pass("g1-transitivity"))
}

fn check_mu(p: &GradedPo, mu: &SuperElement, arity: Option<usize>) -> Result<usize> {
    if !p.sig.same_shape(&mu.signature()) {
        return Err(Error::SignatureMismatch(p.sig, mu.signature()));
    }
    let z = mu
        .z_degree()
        .ok_or_else(|| Error::InvalidParameter(format!("mu = {mu} is not homogeneous in the grading")))?;
    if z == 0 {
        return Err(Error::InvalidParameter("mu must lie in a component of degree >= 0".into()));
    }
    if let Some(n) = arity {
        if z != n {
            return Err(Error::InvalidParameter(format!(
                "mu = {mu} lies in P_{} but an {n}-pair needs P_{}",
                z as i32 - 1,
                n as i32 - 1
            )));
        }
    }
    Ok(z)
}

/// `[…[[μ, a_1], a_2], …, a_k]`.
pub fn nested_bracket(p: &GradedPo, mu: &SuperElement, args: &[SuperElement]) -> Result<SuperElement> {
    args.iter().try_fold(mu.clone(), |acc, a| p.bracket(&acc, a))
}

/// `[μ, [[μ, a_1], …, a_{n−1}]] = 0` for monomials `a_i ∈ 𝒫_{−1}` of x-degree at most `d`,
/// computed with slack above the truncation of `P` and compared modulo it.
pub fn check_g3(p: &GradedPo, mu: &SuperElement, n: usize, d: u32) -> Result<IdentityReport> {
    check_mu(p, mu, Some(n))?;
    let work = p.sig.with_trunc(p.sig.trunc.max(d) + n as u32 + 1);
    let mu_w = mu.recast(work)?;
    let gens = p.minus_one(d, work);
    let tuples: Vec<Vec<usize>> = (0..gens.len()).combinations_with_replacement(n - 1).collect();
    let found = tuples.par_iter().find_map_first(|t| {
        let args: Vec<SuperElement> = t.iter().map(|&i| gens[i].clone()).collect();
        let r = nested_bracket(p, &mu_w, &args).and_then(|inner| p.bracket(&mu_w, &inner));
        match r {
            Ok(r) => {
                let r = r.with_trunc(p.sig.trunc);
                (!r.is_zero()).then_some(Ok((args, r)))
            }
            Err(e) => Some(Err(e)),
        }
    });
    match found {
        None => Ok(IdentityReport::pass("g3")),
        Some(Err(e)) => Err(e),
        Some(Ok((args, r))) => {
            let inputs = std::iter::once(mu.clone())
                .chain(args.iter().map(|a| a.with_trunc(p.sig.trunc)))
                .collect();
            Ok(IdentityReport::fail("g3", Witness::Elements { inputs, residual: r.recast(p.sig)? }))
        }
    }
}

/// An element of the closure with the x-degree up to which its terms are exact.
#[derive(Clone)]
struct Tracked {
    elem: SuperElement,
    exact: u32,
}

fn sparse(e: &SuperElement, cap: u32) -> SparseVec<Monomial> {
    e.terms().filter(|(m, _)| m.x_degree() <= cap).map(|(m, c)| (m.clone(), c.clone())).collect()
}

/// Generation: close `{x^a : |a| ≤ d + 2} ∪ {μ}` under the bracket and the product and
/// compare its image modulo x-degree `> d` with all monomials of x-degree `≤ d`.
///
/// Without a gauge every element kept is an exact polynomial of x-degree at most `d + 2`.
/// With a gauge, elements are truncated series and each carries the degree up to which
/// it is exact; those exact below `d` are dropped.
pub fn check_g2(p: &GradedPo, mu: &SuperElement, d: u32) -> Result<G2Report> {
    check_mu(p, mu, None)?;
    let cap = d + 2;
    let work = p.sig.with_trunc(2 * cap);
    let targets: Vec<Monomial> = monomials(work, d, None);
    let mut full: Echelon<Monomial> = Echelon::new();
    let mut image: Echelon<Monomial> = Echelon::new();
    let mut all: Vec<Tracked> = Vec::new();
    let gauged = p.is_gauged();
    let seed_exact = if gauged { work.trunc } else { u32::MAX };

    let admit = |t: Tracked, full: &mut Echelon<Monomial>, image: &mut Echelon<Monomial>, all: &mut Vec<Tracked>| {
        if t.elem.is_zero() || t.elem.z_degree().is_none() {
            return;
        }
        if full.insert(sparse(&t.elem, t.exact)) {
            image.insert(sparse(&t.elem, d));
            all.push(t);
        }
    };

    let mut seeds = p.minus_one(cap, work);
    seeds.push(mu.recast(work)?);
    for s in seeds {
        admit(Tracked { elem: s, exact: seed_exact }, &mut full, &mut image, &mut all);
    }
    let mut frontier = 0;
    while frontier < all.len() && image.rank() < targets.len() {
        let end = all.len();
        for i in frontier..end {
            let a = all[i].clone();
            let products: Vec<Tracked> = (0..=i)
                .into_par_iter()
                .map(|j| {
                    let b = &all[j];
                    let exact = a.exact.min(b.exact);
                    let mut out = Vec::with_capacity(2);
                    let wedge = a.elem.try_mul(&b.elem)?;
                    out.push(Tracked { elem: wedge, exact });
                    let br = p.bracket(&a.elem, &b.elem)?;
                    out.push(Tracked { elem: br, exact: exact.saturating_sub(1) });
                    Ok(out)
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .filter_map(|t| {
                    if gauged {
                        (t.exact >= d).then(|| Tracked { elem: t.elem.with_trunc(t.exact), exact: t.exact })
                    } else {
                        (t.elem.x_degree().unwrap_or(0) <= cap).then_some(t)
                    }
                })
                .collect();
            for t in products {
                admit(t, &mut full, &mut image, &mut all);
                if image.rank() == targets.len() {
                    break;
                }
            }
            if image.rank() == targets.len() {
                break;
            }
        }
        frontier = end;
    }
    let sig = p.sig.with_trunc(p.sig.trunc.max(d));
    let missing: Vec<String> = targets
        .into_iter()
        .filter(|m| !image.contains(BTreeMap::from([(m.clone(), Scalar::one())])))
        .map(|m| SuperElement::from_term(sig, m, Scalar::one()).to_string())
        .collect();
    Ok(G2Report { generated: missing.is_empty(), missing, degree_cap: d })
}

/// G1, G2 and G3 at degree cap `d`.
pub fn good_pair_report(p: &GradedPo, mu: &SuperElement, n: usize, d: u32) -> Result<GoodPairReport> {
    let g1 = check_g1(p, d)?;
    let g2 = check_g2(p, mu, d)?;
    let g3 = check_g3(p, mu, n, d)?;
    let verdict = g1.passed && g2.generated && g3.passed;
    Ok(GoodPairReport { g1, g2, g3, verdict })
}

/// Monomials of `𝒫_0` with x-degree at most `d` not spanned by the products
/// `[[μ, a_1], …, a_{k−1}] b` with monomial `a_i` (x-degree `≤ d + 1`) and `b` (`≤ d`).
pub fn p0_spanning_missing(p: &GradedPo, mu: &SuperElement, k: usize, d: u32) -> Result<Vec<Monomial>> {
    check_mu(p, mu, Some(k))?;
    let work = p.sig.with_trunc(p.sig.trunc.max(3 * d + k as u32 + 2));
    let mu_w = mu.recast(work)?;
    let a_gens = p.minus_one(d + 1, work);
    let b_gens = p.minus_one(d, work);
    let heads: Vec<SuperElement> = (0..a_gens.len())
        .combinations_with_replacement(k - 1)
        .collect::<Vec<_>>()
        .par_iter()
        .map(|t| nested_bracket(p, &mu_w, &t.iter().map(|&i| a_gens[i].clone()).collect::<Vec<_>>()))
        .collect::<Result<_>>()?;
    let mut span: Echelon<Monomial> = Echelon::new();
    for h in heads.iter().filter(|h| !h.is_zero()) {
        for b in &b_gens {
            span.insert(sparse(&(h * b), d));
        }
    }
    Ok(monomials(work, d, Some(&[1]))
        .into_iter()
        .filter(|m| !span.contains(BTreeMap::from([(m.clone(), Scalar::one())])))
        .collect())
}

/// The n-ary bracket `{f_1, …, f_n} = […[[μ, f_1], f_2], …, f_n]` on `Π𝒫_{−1}`.
#[derive(Clone, Debug)]
pub struct InducedBracket {
    pair: GradedPo,
    mu: SuperElement,
    arity: usize,
}

impl NaryBracket for InducedBracket {
    fn arity(&self) -> usize {
        self.arity
    }

    /// Arguments are purely even, in any signature with the same even variables;
    /// the value comes back in the signature of the first argument.
    fn apply(&self, args: &[SuperElement]) -> Result<SuperElement> {
        if args.len() != self.arity {
            return Err(Error::Arity { expected: self.arity, got: args.len() });
        }
        let out_sig = args[0].signature();
        let work = self.pair.sig.with_trunc(out_sig.trunc + self.arity as u32 + 1);
        let lifted: Vec<SuperElement> = args
            .iter()
            .map(|a| {
                if !a.is_even_only() {
                    return Err(Error::InvalidParameter(format!("{a} is not purely even")));
                }
                a.recast(work)
            })
            .collect::<Result<_>>()?;
        let r = nested_bracket(&self.pair, &self.mu.recast(work)?, &lifted)?;
        if !r.is_even_only() {
            return Err(Error::InvalidParameter(format!("induced bracket left the (-1)-component: {r}")));
        }
        Ok(r.recast(out_sig)?.with_trunc(out_sig.trunc))
    }

    fn name(&self) -> String {
        format!("induced[{}; {}]", OddBracket::name(&self.pair), self.mu)
    }
}

/// The n-ary bracket induced by a pair `(P, μ)` with `μ ∈ 𝒫_{n−1}`.
pub fn nambu_from_pair(p: &GradedPo, mu: &SuperElement, n: usize) -> Result<InducedBracket> {
    check_mu(p, mu, Some(n))?;
    Ok(InducedBracket { pair: p.clone(), mu: mu.clone(), arity: n })
}

/// The four families of good pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// `PO(2h, 2h)`, `μ = Σ_{i≤h} ξ_i ξ_{i+h}`, a 2-pair.
    A1Ho,
    /// `PO(n, n)`, `μ = ξ_1⋯ξ_n`, an n-pair.
    A2Ho,
    /// `PO(2h+1, 2h+2)`, `μ = Σ_{i≤h+1} ξ_i ξ_{i+h+1}` with `ξ_{2h+2} = τ`, a 2-pair.
    A1Ko,
    /// `PO(n, n+1)`, `μ = ξ_1⋯ξ_n τ`, an (n+1)-pair.
    A2Ko,
}

impl std::str::FromStr for Classification {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "a1-ho" => Ok(Classification::A1Ho),
            "a2-ho" => Ok(Classification::A2Ho),
            "a1-ko" => Ok(Classification::A1Ko),
            "a2-ko" => Ok(Classification::A2Ko),
            other => Err(Error::InvalidParameter(format!("unknown preset {other}"))),
        }
    }
}

/// A pair together with the arity it is good for.
#[derive(Clone, Debug)]
pub struct PairInstance {
    pub pair: GradedPo,
    pub mu: SuperElement,
    pub arity: usize,
}

fn xi_product(sig: Signature, idx: &[usize]) -> Result<SuperElement> {
    SuperElement::monomial(sig, &vec![0; sig.even], idx, Scalar::one())
}

/// `size` is `h` for the a1 families and `n` for the a2 families.
pub fn classification_witness(kind: Classification, size: usize, trunc: u32) -> Result<PairInstance> {
    if size == 0 {
        return Err(Error::InvalidParameter("size must be positive".into()));
    }
    let (pair, mu, arity) = match kind {
        Classification::A1Ho => {
            let p = GradedPo::ho(2 * size, trunc);
            let mu = (1..=size).try_fold(SuperElement::zero(p.sig), |acc, i| {
                Ok::<_, Error>(acc + xi_product(p.sig, &[i, i + size])?)
            })?;
            (p, mu, 2)
        }
        Classification::A2Ho => {
            let p = GradedPo::ho(size, trunc);
            let mu = xi_product(p.sig, &(1..=size).collect::<Vec<_>>())?;
            (p, mu, size)
        }
        Classification::A1Ko => {
            let p = GradedPo::ko(2 * size + 1, trunc);
            let mu = (1..=size + 1).try_fold(SuperElement::zero(p.sig), |acc, i| {
                Ok::<_, Error>(acc + xi_product(p.sig, &[i, i + size + 1])?)
            })?;
            (p, mu, 2)
        }
        Classification::A2Ko => {
            let p = GradedPo::ko(size, trunc);
            let mu = xi_product(p.sig, &(1..=size + 1).collect::<Vec<_>>())?;
            (p, mu, size + 1)
        }
    };
    Ok(PairInstance { pair, mu, arity })
}

/// Families of elements violating G3.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Family {
    /// In `PO(n,n)`, `2 < k < n−1`: `μ = ξ_1⋯ξ_k + ξ_1⋯ξ_{k−2} ξ_{k+1} ξ_{k+2}`.
    Step1,
    /// In `PO(n,n+1)`, `2 ≤ k < n−1`: `μ = ξ_1⋯ξ_k τ + ξ_1⋯ξ_{k−1} ξ_{k+1} ξ_{k+2}`.
    KStep1Eq1,
    /// In `PO(n,n+1)`: `μ = ξ_1⋯ξ_k τ + ξ_1 ξ_{k+1} τ ξ_{k+2}⋯ξ_{2k−1}`, which needs
    /// `3 ≤ k` and `n ≥ 2k − 1`. At `k = 2` the shape collapses to `ξ_1(ξ_2 + ξ_3)τ`,
    /// a linear change away from a single monomial, and the chain vanishes.
    KStep1Eq2,
}

impl std::str::FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "step1" => Ok(Family::Step1),
            "kstep1-1" => Ok(Family::KStep1Eq1),
            "kstep1-2" => Ok(Family::KStep1Eq2),
            other => Err(Error::InvalidParameter(format!("unknown family {other}"))),
        }
    }
}

/// A G3 violation: `[μ, [a_r, …, [a_1, μ]…]]` with the chain `a_1, …, a_r` listed innermost first.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub pair: GradedPo,
    pub mu: SuperElement,
    pub chain: Vec<SuperElement>,
    pub value: SuperElement,
    /// The constant-order monomial whose survival the construction guarantees.
    pub marker: SuperElement,
}

impl Counterexample {
    /// Coefficient of the marker monomial in the value.
    pub fn marker_coefficient(&self) -> Scalar {
        match self.marker.terms().next() {
            Some((m, _)) => self.value.coefficient(m),
            None => Scalar::zero(),
        }
    }
}

/// `[μ, [a_r, …, [a_1, μ]…]]`, the left-nested chain of the proofs.
pub fn chain_value(p: &GradedPo, mu: &SuperElement, chain: &[SuperElement]) -> Result<SuperElement> {
    let inner = chain.iter().try_fold(mu.clone(), |acc, a| p.bracket(a, &acc))?;
    p.bracket(mu, &inner)
}

fn x_mono(sig: Signature, exps: &[(usize, u32)]) -> Result<SuperElement> {
    let mut e = vec![0; sig.even];
    for &(i, k) in exps {
        sig.check_x(i)?;
        e[i - 1] = k;
    }
    SuperElement::monomial(sig, &e, &[], Scalar::one())
}

/// Build a family member with zero remainders, or add `remainder` (a positive-order
/// element of the same component) after checking it vanishes at `x = 0`.
pub fn counterexample_family(
    family: Family,
    n: usize,
    k: usize,
    trunc: u32,
    remainder: Option<&SuperElement>,
) -> Result<Counterexample> {
    type Chain = Vec<(usize, u32)>;
    let range_err = |what: &str| Err(Error::InvalidParameter(format!("{what}: got n = {n}, k = {k}")));
    let (pair, mut mu, chain_spec, marker_idx): (GradedPo, SuperElement, Vec<Chain>, Vec<usize>) =
        match family {
            Family::Step1 => {
                if !(2 < k && k + 1 < n) {
                    return range_err("Step1 needs 2 < k < n - 1");
                }
                let p = GradedPo::ho(n, trunc);
                let h = k - 2;
                let mut second: Vec<usize> = (1..=h).collect();
                second.extend([k + 1, k + 2]);
                let mu = xi_product(p.sig, &(1..=k).collect::<Vec<_>>())? + xi_product(p.sig, &second)?;
                let mut chain = vec![vec![(k + 1, 1)], vec![(1, 2)]];
                chain.extend((2..=h).map(|i| vec![(i, 1)]));
                let mut marker: Vec<usize> = (2..=k).collect();
                marker.push(k + 2);
                (p, mu, chain, marker)
            }
            Family::KStep1Eq1 => {
                if !(2 <= k && k + 1 < n) {
                    return range_err("KStep1 needs 2 <= k < n - 1");
                }
                let p = GradedPo::ko(n, trunc);
                let tau = n + 1;
                let h = k - 1;
                let mut first: Vec<usize> = (1..=k).collect();
                first.push(tau);
                let mut second: Vec<usize> = (1..=h).collect();
                second.extend([k + 1, k + 2]);
                let mu = xi_product(p.sig, &first)? + xi_product(p.sig, &second)?;
                let mut chain = vec![vec![(k + 1, 1)], vec![(1, 2)]];
                chain.extend((2..=h).map(|i| vec![(i, 1)]));
                let mut marker: Vec<usize> = (2..=k).collect();
                marker.extend([k + 2, tau]);
                (p, mu, chain, marker)
            }
            Family::KStep1Eq2 => {
                if !(2 <= k && k + 1 < n) {
                    return range_err("KStep1 needs 2 <= k < n - 1");
                }
                if k < 3 || n + 1 < 2 * k {
                    return range_err("the (eq2) shape needs 3 <= k and n >= 2k - 1");
                }
                let p = GradedPo::ko(n, trunc);
                let tau = n + 1;
                let mut first: Vec<usize> = (1..=k).collect();
                first.push(tau);
                let mut second = vec![1, k + 1];
                second.extend(k + 2..=2 * k - 1);
                second.push(tau);
                let mu = xi_product(p.sig, &first)? + xi_product(p.sig, &second)?;
                let mut chain = vec![vec![], vec![(1, 2)]];
                chain.extend((k + 2..=2 * k - 1).map(|i| vec![(i, 1)]));
                let mut marker: Vec<usize> = (2..=k + 1).collect();
                marker.push(tau);
                (p, mu, chain, marker)
            }
        };
    if let Some(r) = remainder {
        let r = r.recast(pair.sig)?;
        if r.terms().any(|(m, _)| m.x_degree() == 0) {
            return Err(Error::InvalidParameter(format!("remainder {r} must vanish at x = 0")));
        }
        if !r.is_zero() && r.z_degree() != mu.z_degree() {
            return Err(Error::InvalidParameter(format!("remainder {r} lies in the wrong component")));
        }
        mu = mu + r;
    }
    let work = pair.sig.with_trunc(trunc + chain_spec.len() as u32 + 3);
    let chain: Vec<SuperElement> = chain_spec.iter().map(|e| x_mono(work, e)).collect::<Result<_>>()?;
    let value = chain_value(&pair, &mu.recast(work)?, &chain)?.with_trunc(trunc).recast(pair.sig)?;
    let marker = xi_product(pair.sig, &marker_idx)?;
    let chain = chain.iter().map(|c| c.recast(pair.sig)).collect::<Result<_>>()?;
    Ok(Counterexample { pair, mu, chain, value, marker })
}

/// The coefficients `f_i` of `f = Σ f_i ξ_i ∈ 𝒫_0`.
pub fn p0_coefficients(f: &SuperElement) -> Result<Vec<SuperElement>> {
    let sig = f.signature();
    (1..=sig.odd_total()).map(|i| d_dxi(i, f)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::ratio;
    use crate::brackets::{bracket_dzhumadildaev, bracket_nambu};
    use crate::calculus::{d_dtau, d_dx, euler_e};
    use crate::gauge::gauge_nambu;
    use crate::parse::parse;

    fn el(text: &str, sig: Signature) -> SuperElement {
        parse(text, sig).unwrap()
    }

    fn strings(v: &[SuperElement]) -> Vec<String> {
        v.iter().map(ToString::to_string).collect()
    }

    #[test]
    fn components() {
        let p = GradedPo::ho(2, 4);
        assert_eq!(strings(&p.component(-1, 1).unwrap()), ["1", "x2", "x1"]);
        assert_eq!(strings(&p.component(1, 0).unwrap()), ["xi1*xi2"]);
        let k = GradedPo::ko(1, 4);
        assert_eq!(strings(&k.component(0, 0).unwrap()), ["xi1", "tau"]);
        assert!(p.component(-2, 0).is_err());
    }

    #[test]
    fn transitivity() {
        assert!(check_g1(&GradedPo::ho(2, 2), 2).unwrap().passed);
        assert!(check_g1(&GradedPo::ko(1, 2), 2).unwrap().passed);
        let p = GradedPo::ho(2, 2);
        let only_one = [SuperElement::one(p.signature())];
        let rep = check_g1_with_generators(&p, 1, &only_one).unwrap();
        assert!(!rep.passed);
        assert!(rep.witness.is_some());
        let odd = [el("xi1", p.signature())];
        assert!(check_g1_with_generators(&p, 1, &odd).is_err());
    }

    #[test]
    fn g3_on_worked_pairs() {
        let a1 = classification_witness(Classification::A1Ho, 1, 3).unwrap();
        assert!(check_g3(&a1.pair, &a1.mu, 2, 3).unwrap().passed);
        let a2 = classification_witness(Classification::A2Ho, 3, 3).unwrap();
        assert!(check_g3(&a2.pair, &a2.mu, 3, 3).unwrap().passed);
        let k1 = classification_witness(Classification::A1Ko, 1, 3).unwrap();
        assert!(check_g3(&k1.pair, &k1.mu, 2, 3).unwrap().passed);
        let k2 = classification_witness(Classification::A2Ko, 2, 3).unwrap();
        assert!(check_g3(&k2.pair, &k2.mu, 3, 3).unwrap().passed);
        assert!(check_g3(&a2.pair, &a2.mu, 2, 1).is_err());
        let mixed = el("xi1 + xi1*xi2", a2.pair.signature());
        assert!(check_g3(&a2.pair, &mixed, 2, 1).is_err());
    }

    #[test]
    fn g3_failure_carries_witness() {
        let p = GradedPo::ho(6, 2);
        let mu = el("xi1*xi2*xi3*xi4 + xi1*xi2*xi5*xi6", p.signature());
        let rep = check_g3(&p, &mu, 4, 2).unwrap();
        assert!(!rep.passed);
        let w = rep.witness.unwrap();
        assert!(!w.residual_element().unwrap().is_zero());
        assert_eq!(w.rendered_inputs().len(), 4);
    }

    #[test]
    fn generation() {
        let a2 = classification_witness(Classification::A2Ho, 3, 1).unwrap();
        let g = check_g2(&a2.pair, &a2.mu, 1).unwrap();
        assert!(g.generated, "{:?}", g.missing);
        let p = GradedPo::ho(3, 1);
        let g = check_g2(&p, &el("xi1*xi2", p.signature()), 1).unwrap();
        assert!(!g.generated);
        assert!(g.missing.iter().any(|m| m == "xi3"));
        assert!(g.missing.iter().all(|m| m.contains("xi3")));
        let k = GradedPo::ko(1, 1);
        let g = check_g2(&k, &el("xi1*tau", k.signature()), 1).unwrap();
        assert!(g.generated, "{:?}", g.missing);
    }

    #[test]
    fn induced_bracket_is_nambu() {
        let a2 = classification_witness(Classification::A2Ho, 3, 4).unwrap();
        let induced = nambu_from_pair(&a2.pair, &a2.mu, 3).unwrap();
        let e = Signature::even(3, 4);
        let grid = crate::identities::monomial_grid(e, 2, 0);
        for t in grid.iter().combinations(3) {
            let args: Vec<SuperElement> = t.into_iter().cloned().collect();
            assert_eq!(induced.apply(&args).unwrap(), bracket_nambu(&args).unwrap());
        }
    }

    #[test]
    fn induced_bracket_is_dzhumadildaev_up_to_scale() {
        let a2 = classification_witness(Classification::A2Ko, 2, 4).unwrap();
        let induced = nambu_from_pair(&a2.pair, &a2.mu, 3).unwrap();
        let e = Signature::even(2, 4);
        let grid = crate::identities::monomial_grid(e, 2, 0);
        for t in grid.iter().combinations(3) {
            let args: Vec<SuperElement> = t.into_iter().cloned().collect();
            let d = bracket_dzhumadildaev(&args).unwrap();
            assert_eq!(induced.apply(&args).unwrap(), d.scale(&ratio(-2, 1)));
        }
    }

    #[test]
    fn gauge_pairs() {
        for inst in [
            classification_witness(Classification::A2Ho, 3, 2).unwrap(),
            classification_witness(Classification::A2Ko, 2, 2).unwrap(),
        ] {
            let sig = inst.pair.signature();
            let phi = el("1 + x1", sig);
            let gp = inst.pair.with_gauge(phi.clone()).unwrap();
            let mu = (phi.invert().unwrap() * &inst.mu).with_trunc(sig.trunc);
            assert!(check_g3(&gp, &mu, inst.arity, 2).unwrap().passed);
            assert!(check_g3(&inst.pair, &inst.mu, inst.arity, 2).unwrap().passed);
        }
        let a2 = classification_witness(Classification::A2Ho, 3, 3).unwrap();
        let sig = a2.pair.signature();
        let phi = el("1 + x1", sig);
        let gp = a2.pair.with_gauge(phi.clone()).unwrap();
        let mu = phi.invert().unwrap() * &a2.mu;
        let induced = nambu_from_pair(&gp, &mu, 3).unwrap();
        let e = Signature::even(3, 3);
        let args = [el("x1^2", e), el("x2 + x3", e), el("x3*x1", e)];
        let want = gauge_nambu(&el("1 + x1", e), &BracketKind::Nambu(3), &args).unwrap();
        assert_eq!(induced.apply(&args).unwrap(), want);
    }

    #[test]
    fn p0_is_spanned() {
        let a2 = classification_witness(Classification::A2Ho, 3, 2).unwrap();
        assert!(p0_spanning_missing(&a2.pair, &a2.mu, 3, 1).unwrap().is_empty());
        let p = GradedPo::ho(3, 2);
        let missing = p0_spanning_missing(&p, &el("xi1*xi2", p.signature()), 2, 1).unwrap();
        assert!(missing.iter().all(|m| m.odd_indices() == [3]));
        assert!(!missing.is_empty());
    }

    /// Buttin and KO brackets written out from the public derivatives.
    fn oracle(f: &SuperElement, g: &SuperElement) -> SuperElement {
        let sig = f.signature();
        let mut out = SuperElement::zero(sig);
        let sign = |e: &SuperElement| if e.homogeneous_parity().unwrap().is_odd() { -1 } else { 1 };
        for (mf, cf) in f.terms() {
            let fm = SuperElement::from_term(sig, mf.clone(), cf.clone());
            let s = sign(&fm);
            for i in 1..=sig.even {
                out = out + d_dx(i, &fm).unwrap() * d_dxi(i, g).unwrap();
                out = out + d_dxi(i, &fm).unwrap().scale(&ratio(s, 1)) * d_dx(i, g).unwrap();
            }
            if sig.tau {
                let e_minus = |h: &SuperElement| euler_e(h) - h.scale(&ratio(2, 1));
                out = out + e_minus(&fm) * d_dtau(g);
                out = out + d_dtau(&fm).scale(&ratio(s, 1)) * e_minus(g);
            }
        }
        out
    }

    #[test]
    fn oracle_agrees_with_graded_bracket() {
        let p = GradedPo::ko(2, 3);
        let sig = p.signature();
        let fs = ["x1*xi1*tau", "xi2 + x2^2*tau", "x1*x2*xi1*xi2"];
        for f in fs {
            for g in fs {
                let (f, g) = (el(f, sig), el(g, sig));
                assert_eq!(p.bracket(&f, &g).unwrap(), oracle(&f, &g));
            }
        }
    }

    #[test]
    fn counterexamples() {
        let c = counterexample_family(Family::Step1, 6, 4, 3, None).unwrap();
        assert_eq!(c.mu.to_string(), "xi1*xi2*xi3*xi4 + xi1*xi2*xi5*xi6");
        assert_eq!(c.value.to_string(), "2*xi2*xi3*xi4*xi6");
        let mut via_oracle = c.mu.with_trunc(8);
        for a in &c.chain {
            via_oracle = oracle(&a.with_trunc(8), &via_oracle);
        }
        assert_eq!(oracle(&c.mu.with_trunc(8), &via_oracle).with_trunc(3).recast(c.mu.signature()).unwrap(), c.value);

        let e1 = counterexample_family(Family::KStep1Eq1, 5, 2, 3, None).unwrap();
        assert_eq!(e1.marker.to_string(), "xi2*xi4*tau");
        assert_eq!(e1.marker_coefficient(), ratio(-2, 1));
        let e2 = counterexample_family(Family::KStep1Eq2, 5, 3, 3, None).unwrap();
        assert_eq!(e2.marker.to_string(), "xi2*xi3*xi4*tau");
        assert!(!e2.marker_coefficient().is_zero());

        // A positive-order remainder leaves the marker alone.
        let r = el("x3*xi1*xi2*xi5*xi6", Signature::ho(6, 3));
        let c = counterexample_family(Family::Step1, 6, 4, 3, Some(&r)).unwrap();
        assert_eq!(c.marker_coefficient(), ratio(2, 1));
        let bad = el("xi1*xi3*xi5*xi6", Signature::ho(6, 3));
        assert!(counterexample_family(Family::Step1, 6, 4, 3, Some(&bad)).is_err());
        assert!(counterexample_family(Family::Step1, 5, 4, 3, None).is_err());
        assert!(counterexample_family(Family::KStep1Eq2, 4, 2, 3, None).is_err());
    }

    #[test]
    fn kstep1_eq1_with_unrelated_second_monomial() {
        let p = GradedPo::ko(5, 3);
        let sig = p.signature();
        let mu = el("xi1*xi2*tau + xi3*xi4*xi5", sig);
        let v = chain_value(&p, &mu.with_trunc(6), &[el("x5", sig.with_trunc(6)), el("x1*x3", sig.with_trunc(6))])
            .unwrap()
            .with_trunc(3);
        let m = el("xi2*xi4*tau", sig.with_trunc(3));
        assert!(!v.coefficient(m.terms().next().unwrap().0).is_zero());
    }

    #[test]
    fn report_serializes() {
        let a1 = classification_witness(Classification::A1Ho, 1, 1).unwrap();
        let r = good_pair_report(&a1.pair, &a1.mu, 2, 1).unwrap();
        assert!(r.verdict);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["g2"]["degree_cap"], 1);
        assert_eq!(v["verdict"], true);
    }
}
