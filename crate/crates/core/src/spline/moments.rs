use crate::error::{QiError, Result};
use crate::quadrature::gauss_legendre;
use crate::scalar::{binomial, Real};

use super::{complete_symmetric, KnotVector};

/// `<e_r, M_i>` for the unit-integral B-spline `M_i = (m+1) B_i / (t_{i+m+1} - t_i)`.
///
/// Closed form: `h_r(t_i, ..., t_{i+m+1}) / C(m+1+r, r)` with `h_r` the complete
/// homogeneous symmetric function. For a zero-width support this is the point
/// mass limit `t_i^r`.
pub fn moment<T: Real>(kv: &KnotVector<T>, i: usize, r: usize) -> Result<T> {
    kv.check_index(i)?;
    let m = kv.degree();
    let knots = &kv.knots()[i..=i + m + 1];
    let h = complete_symmetric(knots, r);
    Ok(h[r] / binomial::<T>(m + 1 + r, r))
}

pub fn default_nodes_per_span(degree: usize) -> usize {
    (degree + 6).div_ceil(2)
}

/// `<f, M_i>` by Gauss–Legendre on each knot span of the support.
pub fn inner_product<T: Real, F: Fn(T) -> T>(f: F, kv: &KnotVector<T>, i: usize) -> Result<T> {
    inner_product_with(f, kv, i, default_nodes_per_span(kv.degree()))
}

pub fn inner_product_with<T: Real, F: Fn(T) -> T>(
    f: F,
    kv: &KnotVector<T>,
    i: usize,
    nodes_per_span: usize,
) -> Result<T> {
    kv.check_index(i)?;
    let m = kv.degree();
    let t = kv.knots();
    let (lo, hi) = kv.support(i);
    let checked = |x: T| -> Result<T> {
        let v = f(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QiError::Evaluation { at: x.as_f64() })
        }
    };
    if hi == lo {
        return checked(lo);
    }
    let rule = gauss_legendre::<T>(nodes_per_span.max(1));
    let scale = T::from_usize_lossy(m + 1) / (hi - lo);
    let mut acc = T::zero();
    for k in i..=i + m {
        let (a, b) = (t[k], t[k + 1]);
        if b <= a {
            continue;
        }
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
            let s = mid + half * x;
            let b_val = single_basis(t, m, i, s);
            acc += w * half * b_val * checked(s)?;
        }
    }
    Ok(acc * scale)
}

/// `B_i(s)` from its own `m + 2` knots, with right-open spans.
/// Works for supports extending past the active domain.
pub(crate) fn single_basis<T: Real>(t: &[T], m: usize, i: usize, s: T) -> T {
    let mut n: Vec<T> = (0..=m)
        .map(|r| {
            if t[i + r] <= s && s < t[i + r + 1] {
                T::one()
            } else {
                T::zero()
            }
        })
        .collect();
    for d in 1..=m {
        for r in 0..=m - d {
            let dl = t[i + r + d] - t[i + r];
            let dr = t[i + r + d + 1] - t[i + r + 1];
            let a = if dl > T::zero() { (s - t[i + r]) / dl * n[r] } else { T::zero() };
            let b = if dr > T::zero() { (t[i + r + d + 1] - s) / dr * n[r + 1] } else { T::zero() };
            n[r] = a + b;
        }
    }
    n[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kv() -> KnotVector<f64> {
        KnotVector::new(vec![0.0, 0.2, 0.25, 0.7, 1.0, 1.1, 1.6, 2.0], 2).unwrap()
    }

    #[test]
    fn zeroth_moment_is_one() {
        let kv = kv();
        for i in 0..kv.num_basis() {
            assert!((moment(&kv, i, 0).unwrap() - 1.0).abs() < 1e-15);
            assert!((inner_product(|_| 1.0, &kv, i).unwrap() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn first_moment_is_mean_of_support_knots() {
        let kv = kv();
        for i in 0..kv.num_basis() {
            let mean: f64 = kv.knots()[i..=i + 3].iter().sum::<f64>() / 4.0;
            assert!((moment(&kv, i, 1).unwrap() - mean).abs() < 1e-15);
        }
    }

    #[test]
    fn nonfinite_integrand_reported() {
        let kv = kv();
        let err = inner_product(|x: f64| if x > 0.5 { f64::NAN } else { x }, &kv, 2).unwrap_err();
        assert!(matches!(err, QiError::Evaluation { .. }));
    }

    #[test]
    fn zero_width_support_is_point_mass() {
        let kv = KnotVector::<f64>::clamped(1, &[0.0, 0.5, 1.0]).unwrap();
        // knots 0 0 0.5 1 1 ; B_0 support [0, 0.5] is fine, no zero-width here
        assert!((inner_product(|x: f64| x, &kv, 0).unwrap() - 1.0 / 6.0).abs() < 1e-15);
    }
}
