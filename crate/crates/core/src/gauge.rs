//! Gauge twists `[a,b]^φ = φ^{−1}[φa, φb]` and `{f_1..f_n}^φ = φ^{−1}{φf_1, …, φf_n}`,
//! and the change of variables that straightens a twisted HO structure.

use crate::algebra::{Signature, SuperElement};
use crate::brackets::{bracket_ho, BracketKind, NaryBracket, OddBracket};
use crate::calculus::{d_dx, integral_x};
use crate::error::{Error, Result};
use crate::identities::{IdentityReport, Witness};

/// A base bracket twisted by an invertible, purely even `φ`.
#[derive(Clone, Debug)]
pub struct Gauge<B> {
    phi: SuperElement,
    phi_inverse: SuperElement,
    base: B,
}

impl<B> Gauge<B> {
    /// Twist `base` by `phi`; `phi` must be purely even with nonzero constant term.
    pub fn new(phi: SuperElement, base: B) -> Result<Self> {
        if !phi.is_even_only() {
            return Err(Error::Unsupported(format!("gauge factor must be purely even, got {phi}")));
        }
        let phi_inverse = phi.invert()?;
        Ok(Gauge { phi, phi_inverse, base })
    }

    pub fn phi(&self) -> &SuperElement {
        &self.phi
    }

    pub fn phi_inverse(&self) -> &SuperElement {
        &self.phi_inverse
    }

    pub fn base(&self) -> &B {
        &self.base
    }

    /// `φ` and `φ^{−1}` in the signature of the arguments.
    fn factors(&self, sig: Signature) -> Result<(SuperElement, SuperElement)> {
        let own = self.phi.signature();
        if sig == own {
            return Ok((self.phi.clone(), self.phi_inverse.clone()));
        }
        let phi = self.phi.recast(sig)?;
        let inv = if sig.trunc <= own.trunc { self.phi_inverse.recast(sig)? } else { phi.invert()? };
        Ok((phi, inv))
    }
}

impl<B: OddBracket> Gauge<B> {
    /// Twist of an odd bracket, checking the side condition `[φ, φ] = 0`.
    pub fn odd(phi: SuperElement, base: B) -> Result<Self> {
        let g = Gauge::new(phi, base)?;
        let self_bracket = g.base.bracket(&g.phi, &g.phi)?;
        if !self_bracket.is_zero() {
            return Err(Error::InvalidParameter(format!("[phi, phi] = {self_bracket} is not zero")));
        }
        Ok(g)
    }
}

impl<B: OddBracket> OddBracket for Gauge<B> {
    fn bracket(&self, a: &SuperElement, b: &SuperElement) -> Result<SuperElement> {
        let (phi, inv) = self.factors(a.signature())?;
        Ok(inv * self.base.bracket(&(&phi * a), &(&phi * b))?)
    }

    fn name(&self) -> String {
        format!("{}^phi", self.base.name())
    }
}

impl<B: NaryBracket> NaryBracket for Gauge<B> {
    fn arity(&self) -> usize {
        self.base.arity()
    }

    fn apply(&self, args: &[SuperElement]) -> Result<SuperElement> {
        let sig = args.first().ok_or(Error::Arity { expected: self.arity(), got: 0 })?.signature();
        let (phi, inv) = self.factors(sig)?;
        let twisted: Vec<SuperElement> = args.iter().map(|f| &phi * f).collect();
        Ok(inv * self.base.apply(&twisted)?)
    }

    fn name(&self) -> String {
        format!("{}^phi", self.base.name())
    }
}

/// `[a, b]^φ` for an odd base bracket.
pub fn gauge_bracket<B: OddBracket>(ctx: &Gauge<B>, a: &SuperElement, b: &SuperElement) -> Result<SuperElement> {
    ctx.bracket(a, b)
}

/// `φ^{−1}{φf_1, …, φf_n}` under an n-ary base bracket.
pub fn gauge_nambu(phi: &SuperElement, base: &BracketKind, args: &[SuperElement]) -> Result<SuperElement> {
    Gauge::new(phi.clone(), base.clone())?.apply(args)
}

/// Primed generators `x′_i`, `ξ′_i`, held at a working truncation above `target`.
#[derive(Clone, Debug, PartialEq)]
pub struct PrimedCoordinates {
    pub xs: Vec<SuperElement>,
    pub xis: Vec<SuperElement>,
    pub target: Signature,
}

impl PrimedCoordinates {
    /// Wrap existing generators; they are compared modulo `target.trunc`.
    pub fn new(xs: Vec<SuperElement>, xis: Vec<SuperElement>, target: Signature) -> Self {
        PrimedCoordinates { xs, xis, target }
    }

    /// The generators read at the target truncation.
    pub fn truncated(&self) -> (Vec<SuperElement>, Vec<SuperElement>) {
        let t = self.target.trunc;
        (self.xs.iter().map(|e| e.with_trunc(t)).collect(), self.xis.iter().map(|e| e.with_trunc(t)).collect())
    }
}

/// Extra degrees carried while building primed generators. Each derivative
/// costs one degree of exactness and `{ξ′_i, ξ′_j}` sees two of them.
const CHANGE_SLACK: u32 = 2;

/// `x′_1 = Φ = ∫_0^{x_1} φ^{−1} dt`, `x′_i = x_i`, `ξ′_1 = φξ_1`, `ξ′_i = ξ_i − φ (∂Φ/∂x_i) ξ_1`.
pub fn change_of_variables(phi: &SuperElement) -> Result<PrimedCoordinates> {
    let target = phi.signature();
    if target.tau || target.even != target.odd || target.even == 0 {
        return Err(Error::IncompatibleSignature(format!("change of variables needs O(n, n), got {target}")));
    }
    if !phi.is_even_only() {
        return Err(Error::Unsupported(format!("phi must be purely even, got {phi}")));
    }
    let w = target.with_trunc(target.trunc + CHANGE_SLACK);
    let phi_w = phi.with_trunc(w.trunc);
    let big_phi = integral_x(1, &phi_w.invert()?)?;
    let n = target.even;
    let xi1 = SuperElement::xi(w, 1)?;
    let mut xs = vec![big_phi.clone()];
    let mut xis = vec![&phi_w * &xi1];
    for i in 2..=n {
        xs.push(SuperElement::x(w, i)?);
        let correction = &phi_w * d_dx(i, &big_phi)? * &xi1;
        xis.push(SuperElement::xi(w, i)? - correction);
    }
    Ok(PrimedCoordinates { xs, xis, target })
}

/// Check `{x′_i, x′_j} = 0`, `{x′_i, ξ′_j} = δ_ij`, `{ξ′_i, ξ′_j} = 0` modulo the target truncation.
pub fn verify_symplectomorphism(coords: &PrimedCoordinates) -> Result<IdentityReport> {
    let name = "symplectomorphism";
    let (xs, xis) = (&coords.xs, &coords.xis);
    if xs.len() != xis.len() {
        return Err(Error::InvalidParameter(format!("{} primed x versus {} primed xi", xs.len(), xis.len())));
    }
    let t = coords.target.trunc;
    let check = |a: &SuperElement, b: &SuperElement, expected: i64| -> Result<Option<IdentityReport>> {
        let value = bracket_ho(a, b)?;
        let residual = (value - SuperElement::integer(a.signature(), expected)).with_trunc(t);
        if residual.is_zero() {
            return Ok(None);
        }
        Ok(Some(IdentityReport::fail(
            name,
            Witness::Elements { inputs: vec![a.with_trunc(t), b.with_trunc(t)], residual },
        )))
    };
    for i in 0..xs.len() {
        for j in 0..xs.len() {
            if j > i {
                if let Some(r) = check(&xs[i], &xs[j], 0)? {
                    return Ok(r);
                }
                if let Some(r) = check(&xis[i], &xis[j], 0)? {
                    return Ok(r);
                }
            }
            if let Some(r) = check(&xs[i], &xis[j], i64::from(i == j))? {
                return Ok(r);
            }
        }
        if let Some(r) = check(&xis[i], &xis[i], 0)? {
            return Ok(r);
        }
    }
    Ok(IdentityReport::pass(name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::identities::{check_generalized_leibniz, check_odd_leibniz};
    use crate::parse::parse;
    use crate::sample::Sampler;

    #[test]
    fn identity_gauge_is_base_bracket() {
        let sig = Signature::ko(2, 3);
        let g = Gauge::odd(SuperElement::one(sig), BracketKind::Ko).unwrap();
        let mut s = Sampler::new(5);
        for _ in 0..20 {
            let a = s.any_homogeneous(sig);
            let b = s.any_homogeneous(sig);
            assert_eq!(gauge_bracket(&g, &a, &b).unwrap(), BracketKind::Ko.bracket(&a, &b).unwrap());
        }
    }

    #[test]
    fn twisted_derivation_formula() {
        let sig = Signature::ko(2, 4);
        let phi = parse("1 + x1 + x2^2", sig).unwrap();
        let g = Gauge::odd(phi.clone(), BracketKind::Ko).unwrap();
        let mut s = Sampler::new(9);
        for _ in 0..20 {
            let a = s.any_homogeneous(sig);
            let lhs = g.derivation(&a).unwrap();
            let rhs = BracketKind::Ko.bracket(&phi, &a).unwrap() - BracketKind::Ko.derivation(&phi).unwrap() * &a;
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn inverse_twist_cancels() {
        let sig = Signature::ko(2, 4);
        let phi = parse("1 + x1", sig).unwrap();
        let inner = Gauge::odd(phi.invert().unwrap(), BracketKind::Ko).unwrap();
        let outer = Gauge::odd(phi.clone(), inner).unwrap();
        let mut s = Sampler::new(13);
        for _ in 0..10 {
            let a = s.any_homogeneous(sig);
            let b = s.any_homogeneous(sig);
            assert_eq!(outer.bracket(&a, &b).unwrap(), BracketKind::Ko.bracket(&a, &b).unwrap());
        }
    }

    #[test]
    fn twisted_nambu_basics() {
        let sig = Signature::even(3, 3);
        let one = SuperElement::one(sig);
        let xs: Vec<_> = (1..=3).map(|i| SuperElement::x(sig, i).unwrap()).collect();
        assert_eq!(gauge_nambu(&one, &BracketKind::Nambu(3), &xs).unwrap(), SuperElement::one(sig));
        let phi = parse("1 + x1", sig).unwrap();
        let ones = vec![one.clone(); 3];
        assert!(gauge_nambu(&phi, &BracketKind::Nambu(3), &ones).unwrap().is_zero());
        assert!(gauge_nambu(&xs[0], &BracketKind::Nambu(3), &xs).is_err());
        let g = Gauge::new(phi, BracketKind::Nambu(3)).unwrap();
        let p = |s: &str| parse(s, sig).unwrap();
        let r = check_generalized_leibniz(&g, &[p("x1*x2 + x3"), p("x2^2 - 1")], &p("x1 + x3^2"), &p("x2*x3"))
            .unwrap();
        assert!(r.passed);
    }

    #[test]
    fn twisted_ko_odd_leibniz_uses_twisted_derivation() {
        let sig = Signature::ko(1, 3);
        let g = Gauge::odd(parse("1 + x1", sig).unwrap(), BracketKind::Ko).unwrap();
        let mut s = Sampler::new(21);
        for _ in 0..10 {
            let (a, b, c) = (s.any_homogeneous(sig), s.any_homogeneous(sig), s.element(sig));
            assert!(check_odd_leibniz(&g, &a, &b, &c).unwrap().passed);
        }
    }

    #[test]
    fn change_of_variables_identity_and_top_form() {
        let sig = Signature::ho(3, 5);
        let coords = change_of_variables(&SuperElement::one(sig)).unwrap();
        let (xs, xis) = coords.truncated();
        for i in 0..3 {
            assert_eq!(xs[i], SuperElement::x(sig, i + 1).unwrap());
            assert_eq!(xis[i], SuperElement::xi(sig, i + 1).unwrap());
        }
        let phi = parse("1 + x1", sig).unwrap();
        let coords = change_of_variables(&phi).unwrap();
        assert!(verify_symplectomorphism(&coords).unwrap().passed);
        let (_, xis) = coords.truncated();
        let top = SuperElement::product(sig, &xis).unwrap();
        assert_eq!(top, phi * parse("xi1*xi2*xi3", sig).unwrap());
    }

    #[test]
    fn scaled_generator_fails_symplectic_check() {
        let sig = Signature::ho(3, 5);
        let phi = parse("1 + x1", sig).unwrap();
        let mut coords = change_of_variables(&phi).unwrap();
        coords.xis[0] = coords.xis[0].scale(&crate::algebra::scalar(2));
        let rep = verify_symplectomorphism(&coords).unwrap();
        assert!(!rep.passed);
        assert_eq!(rep.witness.unwrap().rendered_residual(), "1");
        let unprimed = PrimedCoordinates::new(
            (1..=3).map(|i| SuperElement::x(sig, i).unwrap()).collect(),
            (1..=3).map(|i| SuperElement::xi(sig, i).unwrap()).collect(),
            sig,
        );
        assert!(verify_symplectomorphism(&unprimed).unwrap().passed);
    }
}
