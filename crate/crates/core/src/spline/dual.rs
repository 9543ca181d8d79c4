use crate::error::{QiError, Result};
use crate::scalar::{factorial, Real};

use super::KnotVector;

/// de Boor–Fix dual functional of `B_i` evaluated at `tau`.
///
/// `derivs[l]` holds `D^l f(tau)` for `l = 0..=m`. With
/// `psi(t) = prod_{r=1}^{m} (t_{i+r} - t)` the functional is
/// `(1/m!) sum_l (-1)^(m-l) D^(m-l) psi(tau) D^l f(tau)`,
/// which returns the exact B-spline coefficient of any polynomial of degree `<= m`.
pub fn deboor_fix<T: Real>(kv: &KnotVector<T>, i: usize, tau: T, derivs: &[T]) -> Result<T> {
    kv.check_index(i)?;
    let m = kv.degree();
    if derivs.len() != m + 1 {
        return Err(QiError::Input(format!(
            "need derivatives of orders 0..={m}, got {} values",
            derivs.len()
        )));
    }
    let (lo, hi) = kv.support(i);
    if !(tau >= lo && tau <= hi) {
        return Err(QiError::Domain {
            x: tau.as_f64(),
            lo: lo.as_f64(),
            hi: hi.as_f64(),
        });
    }
    // psi(tau + s) = prod (d_r - s), d_r = t_{i+r} - tau; coefficients in s.
    let mut coeffs = vec![T::one()];
    for &t in kv.interior_knots(i) {
        let d = t - tau;
        let mut next = vec![T::zero(); coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k] += c * d;
            next[k + 1] -= c;
        }
        coeffs = next;
    }
    let mut acc = T::zero();
    for (l, &dl) in derivs.iter().enumerate() {
        let order = m - l;
        let psi_deriv = coeffs[order] * factorial::<T>(order);
        let term = psi_deriv * dl;
        acc = if order.is_multiple_of(2) { acc + term } else { acc - term };
    }
    Ok(acc / factorial::<T>(m))
}

/// Derivatives `D^l x^r` at `x` for `l = 0..=max_order`.
pub fn monomial_derivatives<T: Real>(r: usize, x: T, max_order: usize) -> Vec<T> {
    (0..=max_order)
        .map(|l| {
            if l > r {
                T::zero()
            } else {
                let falling = (r - l + 1..=r).fold(T::one(), |acc, k| acc * T::from_usize_lossy(k));
                falling * x.powi((r - l) as i32)
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::{greville, symmetric_mean};
    use super::*;

    fn kv() -> KnotVector<f64> {
        KnotVector::new(vec![0.0, 0.1, 0.15, 0.4, 0.55, 0.6, 0.9, 1.3, 1.4, 2.0], 3).unwrap()
    }

    #[test]
    fn constant_maps_to_one() {
        let kv = kv();
        for i in 0..kv.num_basis() {
            let (lo, hi) = kv.support(i);
            let tau = 0.3 * lo + 0.7 * hi;
            let v = deboor_fix(&kv, i, tau, &monomial_derivatives(0, tau, 3)).unwrap();
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn linear_and_quadratic_give_greville_pair() {
        let kv = kv();
        for i in 0..kv.num_basis() {
            let (lo, hi) = kv.support(i);
            let tau = 0.5 * (lo + hi);
            let g = greville(&kv, i).unwrap();
            let v1 = deboor_fix(&kv, i, tau, &monomial_derivatives(1, tau, 3)).unwrap();
            let v2 = deboor_fix(&kv, i, tau, &monomial_derivatives(2, tau, 3)).unwrap();
            assert!((v1 - g.theta).abs() < 1e-13);
            assert!((v2 - g.theta2).abs() < 1e-13);
            let v3 = deboor_fix(&kv, i, tau, &monomial_derivatives(3, tau, 3)).unwrap();
            assert!((v3 - symmetric_mean(&kv, i, 3).unwrap()).abs() < 1e-13);
        }
    }

    #[test]
    fn tau_outside_support() {
        let kv = kv();
        let err = deboor_fix(&kv, 0, 1.0, &[1.0, 0.0, 0.0, 0.0]).unwrap_err();
        assert!(matches!(err, QiError::Domain { .. }));
    }

    #[test]
    fn wrong_derivative_count() {
        let kv = kv();
        assert!(matches!(deboor_fix(&kv, 0, 0.1, &[1.0, 0.0, 0.0]), Err(QiError::Input(_))));
    }
}
