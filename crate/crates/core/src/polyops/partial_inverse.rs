use crate::error::{QiError, Result};
use crate::scalar::{factorial, Real};

use super::basis::eval_monomial;

/// Polynomial coefficients `alpha_k` of the differential operator
/// `sum_{k=0}^{r} alpha_k D^k`; `polys[k]` holds monomial coefficients of `alpha_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialCoefficients<T> {
    pub polys: Vec<Vec<T>>,
}

impl<T: Real> DifferentialCoefficients<T> {
    pub fn order(&self) -> usize {
        self.polys.len() - 1
    }

    pub fn eval(&self, k: usize, x: T) -> T {
        eval_monomial(&self.polys[k], x)
    }

    /// `sum_k alpha_k(x) derivs[k]`.
    pub fn apply(&self, x: T, derivs: &[T]) -> T {
        self.polys
            .iter()
            .zip(derivs)
            .map(|(p, &d)| eval_monomial(p, x) * d)
            .sum()
    }
}

/// Stirling numbers of the second kind `S(s, k)` for `s, k <= max`.
fn stirling2<T: Real>(max: usize) -> Vec<Vec<T>> {
    let mut s = vec![vec![T::zero(); max + 1]; max + 1];
    s[0][0] = T::one();
    for i in 1..=max {
        for k in 1..=i {
            s[i][k] = T::from_usize_lossy(k) * s[i - 1][k] + s[i - 1][k - 1];
        }
    }
    s
}

/// Action of `B_n` on monomials: `action[s][k]` is the coefficient of `x^k` in `B_n e_s`,
/// from `(i/n)^s = n^-s sum_k S(s,k) i^(k falling)` and `sum_i i^(k) b_i = n^(k) x^k`.
pub fn bernstein_action<T: Real>(n: usize, max_degree: usize) -> Vec<Vec<T>> {
    let st = stirling2::<T>(max_degree);
    let nf = T::from_usize_lossy(n);
    (0..=max_degree)
        .map(|s| {
            (0..=max_degree)
                .map(|k| {
                    if k > s || k > n {
                        return T::zero();
                    }
                    let falling = (0..k).fold(T::one(), |acc, j| acc * T::from_usize_lossy(n - j));
                    st[s][k] * falling / nf.powi(s as i32)
                })
                .collect()
        })
        .collect()
}

/// Inverts a degree-preserving operator given by its (lower-triangular in `[s][k]`)
/// monomial action and extracts the coefficients of its first `r + 1` differential terms.
pub fn partial_inverse_from_action<T: Real>(action: &[Vec<T>], r: usize) -> Result<DifferentialCoefficients<T>> {
    if action.len() <= r {
        return Err(QiError::Input(format!(
            "action known up to degree {}, need {r}",
            action.len().saturating_sub(1)
        )));
    }
    // inverse images A e_s as monomial coefficients
    let mut inv: Vec<Vec<T>> = Vec::with_capacity(r + 1);
    for s in 0..=r {
        let mut p = vec![T::zero(); s + 1];
        for j in (0..=s).rev() {
            let rhs = if j == s { T::one() } else { T::zero() };
            let acc: T = (j + 1..=s).map(|k| p[k] * action[k][j]).sum();
            let diag = action[j][j];
            if diag.abs() <= T::epsilon() {
                return Err(QiError::Undefined(format!("operator is singular on degree {j}")));
            }
            p[j] = (rhs - acc) / diag;
        }
        inv.push(p);
    }
    let mut polys: Vec<Vec<T>> = Vec::with_capacity(r + 1);
    for s in 0..=r {
        // s! alpha_s = A e_s - sum_{k<s} alpha_k s!/(s-k)! x^{s-k}
        let mut rem = inv[s].clone();
        for (k, alpha_k) in polys.iter().enumerate() {
            let falling = (s - k + 1..=s).fold(T::one(), |acc, v| acc * T::from_usize_lossy(v));
            for (d, &c) in alpha_k.iter().enumerate() {
                let deg = d + s - k;
                if deg < rem.len() {
                    rem[deg] -= c * falling;
                } else if c != T::zero() {
                    return Err(QiError::Undefined("coefficient degree overflow".into()));
                }
            }
        }
        let fs = factorial::<T>(s);
        let mut alpha: Vec<T> = rem.into_iter().map(|c| c / fs).collect();
        alpha.truncate(s + 1);
        polys.push(alpha);
    }
    Ok(DifferentialCoefficients { polys })
}

/// `A_n^(r) = sum_{k<=r} alpha_k^(n) D^k`, the truncated inverse of the Bernstein operator.
pub fn partial_inverse<T: Real>(n: usize, r: usize) -> Result<DifferentialCoefficients<T>> {
    if n == 0 {
        return Err(QiError::Parameter("degree n must be at least 1".into()));
    }
    if r > n {
        return Err(QiError::Order { r, n });
    }
    partial_inverse_from_action(&bernstein_action::<T>(n, r), r)
}
