//! Partial derivatives, the Euler operator and formal integration.

#[cfg(test)]
use crate::algebra::mask_indices;
use crate::algebra::{scalar, SuperElement};
use crate::error::Result;

/// `∂a/∂x_i` (1-based).
pub fn d_dx(i: usize, a: &SuperElement) -> Result<SuperElement> {
    let k = a.signature().check_x(i)?;
    Ok(d_dx0(k, a))
}

pub(crate) fn d_dx0(k: usize, a: &SuperElement) -> SuperElement {
    a.map_terms(|m, c| {
        let e = m.exps()[k];
        if e == 0 {
            return None;
        }
        let mut exps = m.exps().to_vec();
        exps[k] = e - 1;
        Some((m.with_exps(exps), c * scalar(i64::from(e))))
    })
}

/// Left odd derivative `∂a/∂ξ_i` (1-based; `τ` is the last odd index).
///
/// On `ξ_{j1} … ξ_{jk}` with `j_r = i` this gives `(−1)^{r−1}` times the
/// monomial with `ξ_i` removed.
pub fn d_dxi(i: usize, a: &SuperElement) -> Result<SuperElement> {
    let k = a.signature().check_xi(i)?;
    Ok(d_dxi0(k, a))
}

pub(crate) fn d_dxi0(k: usize, a: &SuperElement) -> SuperElement {
    let bit = 1u64 << k;
    a.map_terms(|m, c| {
        if m.odd_mask() & bit == 0 {
            return None;
        }
        let before = (m.odd_mask() & (bit - 1)).count_ones();
        let c = if before % 2 == 1 { -c } else { c.clone() };
        Some((m.with_odd(m.odd_mask() & !bit), c))
    })
}

/// `∂a/∂τ`; zero when the signature has no `τ`.
pub fn d_dtau(a: &SuperElement) -> SuperElement {
    match a.signature().tau_index() {
        Some(i) => d_dxi0(i - 1, a),
        None => SuperElement::zero(a.signature()),
    }
}

/// Euler operator `Σ x_i ∂/∂x_i + Σ ξ_i ∂/∂ξ_i`, the odd sum excluding `τ`.
pub fn euler_e(a: &SuperElement) -> SuperElement {
    let sig = a.signature();
    let non_tau = if sig.odd >= 64 { u64::MAX } else { (1u64 << sig.odd) - 1 };
    a.map_terms(|m, c| {
        let w = m.x_degree() as i64 + i64::from((m.odd_mask() & non_tau).count_ones());
        Some((m.clone(), c * scalar(w)))
    })
}

/// `(E − s)(a)`.
pub(crate) fn euler_shift(a: &SuperElement, s: i64) -> SuperElement {
    let e = euler_e(a);
    e - a.scale(&scalar(s))
}

/// `∫_0^{x_i} a dt` with zero constant of integration, truncated.
pub fn integral_x(i: usize, a: &SuperElement) -> Result<SuperElement> {
    let k = a.signature().check_x(i)?;
    Ok(a.map_terms(|m, c| {
        let mut exps = m.exps().to_vec();
        exps[k] += 1;
        Some((m.with_exps(exps.clone()), c / scalar(i64::from(exps[k]))))
    }))
}

#[cfg(test)]
/// Odd degree counted without `τ`, an oracle for the Euler weight.
pub(crate) fn non_tau_degree(sig_odd: usize, mask: u64) -> usize {
    mask_indices(mask).filter(|&i| i < sig_odd).count()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{monomials, ratio, Signature};

    fn s() -> Signature {
        Signature::ho(3, 4)
    }
    fn x(i: usize) -> SuperElement {
        SuperElement::x(s(), i).unwrap()
    }
    fn xi(i: usize) -> SuperElement {
        SuperElement::xi(s(), i).unwrap()
    }

    #[test]
    fn even_derivatives() {
        assert_eq!(d_dx(1, &(x(1) * x(1))).unwrap(), SuperElement::integer(s(), 2) * x(1));
        assert!(d_dx(2, &(x(1) * xi(1))).unwrap().is_zero());
        assert_eq!(d_dx(1, &(x(1) * x(2) * xi(3))).unwrap(), x(2) * xi(3));
        assert!(d_dx(4, &x(1)).is_err());
    }

    #[test]
    fn left_odd_derivative() {
        assert_eq!(d_dxi(2, &(xi(1) * xi(2))).unwrap(), -xi(1));
        assert!(d_dxi(1, &x(1)).unwrap().is_zero());
        assert!(d_dxi(0, &x(1)).is_err());
    }

    #[test]
    fn odd_derivative_of_top_form_matches_transposition_count() {
        for n in 1..=5 {
            let sig = Signature::ho(n, 1);
            let top = SuperElement::product(sig, &(1..=n).map(|i| SuperElement::xi(sig, i).unwrap()).collect::<Vec<_>>())
                .unwrap();
            for i in 1..=n {
                // Oracle: move ξ_i to the front by i−1 adjacent swaps, then strip it.
                let rest: Vec<_> = (1..=n).filter(|&j| j != i).map(|j| SuperElement::xi(sig, j).unwrap()).collect();
                let mut expected = SuperElement::product(sig, &rest).unwrap();
                if (i - 1) % 2 == 1 {
                    expected = -expected;
                }
                assert_eq!(d_dxi(i, &top).unwrap(), expected, "n={n} i={i}");
            }
        }
    }

    #[test]
    fn euler_operator() {
        let k = Signature::ko(1, 3);
        let x1 = SuperElement::x(k, 1).unwrap();
        let xi1 = SuperElement::xi(k, 1).unwrap();
        let tau = SuperElement::tau(k).unwrap();
        assert_eq!(euler_e(&(&x1 * &xi1)), SuperElement::integer(k, 2) * &x1 * &xi1);
        assert!(euler_e(&tau).is_zero());
        assert!(euler_e(&SuperElement::one(k)).is_zero());
    }

    #[test]
    fn euler_weight_on_every_monomial() {
        let k = Signature::ko(2, 3);
        for m in monomials(k, 3, None) {
            let e = SuperElement::from_term(k, m.clone(), scalar(1));
            let w = m.x_degree() as i64 + non_tau_degree(k.odd, m.odd_mask()) as i64;
            assert_eq!(euler_e(&e), e.scale(&scalar(w)));
        }
    }

    #[test]
    fn integration() {
        let e = Signature::even(1, 3);
        let one = SuperElement::one(e);
        let t = SuperElement::x(e, 1).unwrap();
        assert_eq!(integral_x(1, &one).unwrap(), t);
        let f = &one - &t + &t * &t;
        let expected = &t - t.pow(2).scale(&ratio(1, 2)) + t.pow(3).scale(&ratio(1, 3));
        assert_eq!(integral_x(1, &f).unwrap(), expected);
        let g = &one + t.pow(2).scale(&ratio(5, 7));
        assert_eq!(d_dx(1, &integral_x(1, &g).unwrap()).unwrap(), g);
    }
}
