use crate::error::{QiError, Result};
use crate::scalar::Real;

use super::basis::bernstein_basis;
use super::partial_inverse::partial_inverse;

/// `D^k (B_n f)(x) = n!/(n-k)! sum_{i<=n-k} Δ^k f(i/n) b_i^(n-k)(x)`.
fn bernstein_derivative<T: Real>(n: usize, k: usize, samples: &[T], x: T) -> T {
    if k > n {
        return T::zero();
    }
    let mut diff = samples.to_vec();
    for _ in 0..k {
        diff = diff.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let falling = (n - k + 1..=n).fold(T::one(), |acc, v| acc * T::from_usize_lossy(v));
    let b = bernstein_basis(n - k, x);
    diff.iter().zip(&b).map(|(&d, &bi)| d * bi).sum::<T>() * falling
}

/// Left Bernstein quasi-interpolant `A_n^(r)(B_n f)` at `x`.
pub fn left_bqi_apply<T: Real, F: Fn(T) -> T>(n: usize, r: usize, f: F, x: T) -> Result<T> {
    let coeffs = partial_inverse::<T>(n, r)?;
    let nf = T::from_usize_lossy(n);
    let samples = (0..=n)
        .map(|i| {
            let t = T::from_usize_lossy(i) / nf;
            let v = f(t);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(QiError::Evaluation { at: t.as_f64() })
            }
        })
        .collect::<Result<Vec<T>>>()?;
    Ok((0..=r)
        .map(|k| coeffs.eval(k, x) * bernstein_derivative(n, k, &samples, x))
        .sum())
}

/// Right Bernstein quasi-interpolant `B_n(A_n^(r) f)` at `x`.
///
/// `derivs(t)` returns `[f(t), f'(t), ..., f^(r)(t)]` (at least `r + 1` values).
pub fn right_bqi_apply<T: Real, F: Fn(T) -> Vec<T>>(n: usize, r: usize, derivs: F, x: T) -> Result<T> {
    let coeffs = partial_inverse::<T>(n, r)?;
    let nf = T::from_usize_lossy(n);
    let b = bernstein_basis(n, x);
    let mut acc = T::zero();
    for (i, bi) in b.into_iter().enumerate() {
        let t = T::from_usize_lossy(i) / nf;
        let d = derivs(t);
        if d.len() < r + 1 {
            return Err(QiError::Input(format!(
                "need derivatives up to order {r} at t = {t}, got {} values",
                d.len()
            )));
        }
        acc += coeffs.apply(t, &d[..=r]) * bi;
    }
    Ok(acc)
}
