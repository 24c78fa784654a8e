//! Seeded random elements for property checks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{monomials, scalar, Monomial, Parity, Signature, SuperElement};

/// Deterministic sampler: coefficients in `{−2, …, 2}`, monomials up to x-degree 2 by default.
pub struct Sampler {
    rng: ChaCha8Rng,
    pub coeff_bound: i64,
    pub max_x_degree: u32,
    pub max_terms: usize,
}

impl Sampler {
    pub fn new(seed: u64) -> Self {
        Sampler { rng: ChaCha8Rng::seed_from_u64(seed), coeff_bound: 2, max_x_degree: 2, max_terms: 4 }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    fn coefficient(&mut self) -> i64 {
        self.rng.gen_range(-self.coeff_bound..=self.coeff_bound)
    }

    fn combine(&mut self, sig: Signature, pool: &[Monomial]) -> SuperElement {
        if pool.is_empty() {
            return SuperElement::zero(sig);
        }
        let k = self.rng.gen_range(1..=self.max_terms);
        let terms: Vec<(Monomial, _)> =
            (0..k).map(|_| (pool.choose(&mut self.rng).unwrap().clone(), scalar(self.coefficient()))).collect();
        SuperElement::from_terms(sig, terms)
    }

    /// Arbitrary (possibly mixed) element.
    pub fn element(&mut self, sig: Signature) -> SuperElement {
        let pool = monomials(sig, self.max_x_degree, None);
        self.combine(sig, &pool)
    }

    /// Homogeneous element of the given parity.
    pub fn homogeneous(&mut self, sig: Signature, parity: Parity) -> SuperElement {
        let pool: Vec<_> =
            monomials(sig, self.max_x_degree, None).into_iter().filter(|m| m.parity() == parity).collect();
        self.combine(sig, &pool)
    }

    /// Homogeneous element of a random parity.
    pub fn any_homogeneous(&mut self, sig: Signature) -> SuperElement {
        let p = Parity::from_bit(self.rng.gen_bool(0.5));
        self.homogeneous(sig, p)
    }

    /// Element of odd degree exactly `j`.
    pub fn with_odd_degree(&mut self, sig: Signature, j: usize) -> SuperElement {
        let pool = monomials(sig, self.max_x_degree, Some(&[j]));
        self.combine(sig, &pool)
    }

    /// Purely even polynomial of x-degree at most `max_deg`.
    pub fn even_poly(&mut self, sig: Signature, max_deg: u32) -> SuperElement {
        let pool = monomials(sig, max_deg, Some(&[0]));
        self.combine(sig, &pool)
    }
}
