//! Gauss–Legendre and Gauss–Jacobi rules.
//!
//! Legendre nodes come from Newton iteration on the three-term recurrence.
//! Jacobi rules use Golub–Welsch: the nodes are the eigenvalues of the
//! symmetric Jacobi matrix and the weights the squared first components of
//! its eigenvectors, so they are returned normalized to unit total mass.

use crate::error::{QiError, Result};
use crate::scalar::Real;

/// Quadrature nodes and weights on a reference interval.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule<T> {
    pub nodes: Vec<T>,
    pub weights: Vec<T>,
}

impl<T: Real> Rule<T> {
    /// Maps a rule on `[-1, 1]` to `[a, b]`, rescaling weights by the half-length.
    pub fn mapped(&self, a: T, b: T) -> Rule<T> {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        Rule {
            nodes: self.nodes.iter().map(|&x| mid + half * x).collect(),
            weights: self.weights.iter().map(|&w| w * half).collect(),
        }
    }

    pub fn integrate<F: FnMut(T) -> T>(&self, a: T, b: T, mut f: F) -> T {
        let half = (b - a) / T::lit(2.0);
        let mid = (a + b) / T::lit(2.0);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<T>()
            * half
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

/// `n`-point Gauss–Legendre rule on `[-1, 1]`, exact for degree `2n - 1`.
pub fn gauss_legendre<T: Real>(n: usize) -> Rule<T> {
    assert!(n >= 1, "Gauss-Legendre rule needs at least one node");
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = T::from_usize_lossy(n);
    for i in 0..n.div_ceil(2) {
        let guess = (T::PI() * (T::from_usize_lossy(i) + T::lit(0.75)) / (nf + T::lit(0.5))).cos();
        let mut x = guess;
        let mut dp = T::one();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= T::epsilon() * T::lit(4.0) {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != T::zero() {
            dp = d;
        }
        let w = T::lit(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = T::zero();
    }
    Rule { nodes, weights }
}

fn legendre_with_derivative<T: Real>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    for k in 2..=n {
        let kf = T::from_usize_lossy(k);
        let p2 = ((T::lit(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (T::one(), T::zero());
    }
    let nf = T::from_usize_lossy(n);
    let d = nf * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// `n`-point Gauss rule for the probability density of `Beta(a, b)` on `[0, 1]`
/// (weight `t^(a-1) (1-t)^(b-1)` normalized to unit mass).
pub fn gauss_beta<T: Real>(n: usize, a: T, b: T) -> Result<Rule<T>> {
    if !(a > T::zero() && b > T::zero()) {
        return Err(QiError::Parameter(format!(
            "beta parameters must be positive, got ({a}, {b})"
        )));
    }
    let jac = gauss_jacobi(n, b - T::one(), a - T::one())?;
    Ok(Rule {
        nodes: jac.nodes.iter().map(|&x| (T::one() + x) / T::lit(2.0)).collect(),
        weights: jac.weights,
    })
}

/// `n`-point Gauss–Jacobi rule for weight `(1-x)^alpha (1+x)^beta` on `[-1, 1]`,
/// weights normalized to sum to one.
pub fn gauss_jacobi<T: Real>(n: usize, alpha: T, beta: T) -> Result<Rule<T>> {
    if n == 0 {
        return Err(QiError::Parameter("Gauss-Jacobi rule needs at least one node".into()));
    }
    if !(alpha > -T::one() && beta > -T::one()) {
        return Err(QiError::Parameter(format!(
            "Jacobi exponents must exceed -1, got ({alpha}, {beta})"
        )));
    }
    let two = T::lit(2.0);
    let ab = alpha + beta;
    let mut diag = vec![T::zero(); n];
    let mut off = vec![T::zero(); n];
    for (k, d) in diag.iter_mut().enumerate() {
        let kf = T::from_usize_lossy(k);
        let s = two * kf + ab;
        *d = if k == 0 {
            (beta - alpha) / (ab + two)
        } else {
            (beta * beta - alpha * alpha) / (s * (s + two))
        };
    }
    for k in 1..n {
        let kf = T::from_usize_lossy(k);
        let s = two * kf + ab;
        let b2 = if k == 1 {
            T::lit(4.0) * (T::one() + alpha) * (T::one() + beta) / ((two + ab) * (two + ab) * (T::lit(3.0) + ab))
        } else {
            T::lit(4.0) * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + T::one()) * (s - T::one()))
        };
        off[k] = b2.sqrt();
    }
    let (nodes, first) = tridiagonal_eigen(diag, off)?;
    let mut pairs: Vec<(T, T)> = nodes.into_iter().zip(first.into_iter().map(|v| v * v)).collect();
    pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let total: T = pairs.iter().map(|p| p.1).sum();
    Ok(Rule {
        nodes: pairs.iter().map(|p| p.0).collect(),
        weights: pairs.iter().map(|p| p.1 / total).collect(),
    })
}

/// Implicit QL on a symmetric tridiagonal matrix; `off[k]` couples rows `k-1` and `k`.
/// Returns eigenvalues and the first component of each normalized eigenvector.
fn tridiagonal_eigen<T: Real>(mut d: Vec<T>, off: Vec<T>) -> Result<(Vec<T>, Vec<T>)> {
    let n = d.len();
    let mut e: Vec<T> = (0..n).map(|i| if i + 1 < n { off[i + 1] } else { T::zero() }).collect();
    let mut z = vec![T::zero(); n];
    z[0] = T::one();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= T::epsilon() * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(QiError::Undefined("tridiagonal eigensolver did not converge".into()));
            }
            let mut g = (d[l + 1] - d[l]) / (T::lit(2.0) * e[l]);
            let mut r = g.hypot(T::one());
            g = d[m] - d[l] + e[l] / (g + if g >= T::zero() { r.abs() } else { -r.abs() });
            let mut s = T::one();
            let mut c = T::one();
            let mut p = T::zero();
            let mut i = m;
            let mut underflow = false;
            while i > l {
                i -= 1;
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == T::zero() {
                    d[i + 1] -= p;
                    e[m] = T::zero();
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + T::lit(2.0) * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                f = z[i + 1];
                z[i + 1] = s * z[i] + c * f;
                z[i] = c * z[i] - s * f;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = T::zero();
        }
    }
    Ok((d, z))
}

/// `int_a^b |p|` for a polynomial `p` of degree at most `degree`.
///
/// `p` is evaluated only at `degree + 1` Chebyshev points; the interpolant is
/// split at sign changes found on a sample grid and refined by bisection.
pub fn abs_integral_poly<T: Real, F: Fn(T) -> T>(p: F, a: T, b: T, degree: usize) -> T {
    if b <= a {
        return T::zero();
    }
    let k = degree + 1;
    let half = (b - a) / T::lit(2.0);
    let mid = (a + b) / T::lit(2.0);
    let nodes: Vec<T> = (0..k)
        .map(|j| (T::PI() * (T::from_usize_lossy(2 * j + 1)) / T::from_usize_lossy(2 * k)).cos())
        .collect();
    let vander: Vec<Vec<T>> = nodes.iter().map(|&s| (0..k).map(|e| s.powi(e as i32)).collect()).collect();
    let values: Vec<T> = nodes.iter().map(|&s| p(mid + half * s)).collect();
    let Some(coeffs) = crate::linalg::solve(&vander, &values) else {
        return T::nan();
    };
    let poly = |s: T| coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * s + c);
    let samples = 16 * k;
    let rule = gauss_legendre::<T>(degree / 2 + 1);
    let step = T::lit(2.0) / T::from_usize_lossy(samples);
    let lo = -T::one();
    let mut cuts = vec![lo];
    let mut prev = poly(lo);
    for s in 1..=samples {
        let x = if s == samples { T::one() } else { lo + step * T::from_usize_lossy(s) };
        let v = poly(x);
        if v == T::zero() {
            cuts.push(x);
        } else if (prev < T::zero() && v > T::zero()) || (prev > T::zero() && v < T::zero()) {
            let (mut l, mut h) = (x - step, x);
            let neg_lo = prev < T::zero();
            for _ in 0..60 {
                let m = (l + h) / T::lit(2.0);
                if (poly(m) < T::zero()) == neg_lo {
                    l = m;
                } else {
                    h = m;
                }
            }
            cuts.push((l + h) / T::lit(2.0));
        }
        prev = v;
    }
    cuts.push(T::one());
    cuts.windows(2)
        .map(|w| rule.integrate(w[0], w[1], poly).abs())
        .sum::<T>()
        * half
}
