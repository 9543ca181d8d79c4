use crate::scalar::{binomial, Real};

/// All Bernstein basis polynomials `b_i^(n)(x)`, `i = 0..=n`.
pub fn bernstein_basis<T: Real>(n: usize, x: T) -> Vec<T> {
    let mut b = vec![T::zero(); n + 1];
    b[0] = T::one();
    let y = T::one() - x;
    for d in 1..=n {
        let mut saved = T::zero();
        for i in 0..d {
            let tmp = b[i];
            b[i] = saved + y * tmp;
            saved = x * tmp;
        }
        b[d] = saved;
    }
    b
}

/// `D^k b_i^(n)(x)` for all `i`, through the difference form
/// `n!/(n-k)! sum_j (-1)^j C(k,j) b_{i-k+j}^(n-k)`.
pub fn bernstein_basis_derivative<T: Real>(n: usize, k: usize, x: T) -> Vec<T> {
    if k > n {
        return vec![T::zero(); n + 1];
    }
    let lower = bernstein_basis(n - k, x);
    let falling = (n - k + 1..=n).fold(T::one(), |acc, v| acc * T::from_usize_lossy(v));
    (0..=n)
        .map(|i| {
            let mut s = T::zero();
            for j in 0..=k {
                let idx = i as isize - k as isize + j as isize;
                if idx < 0 || idx as usize > n - k {
                    continue;
                }
                let term = binomial::<T>(k, j) * lower[idx as usize];
                s = if j % 2 == 0 { s + term } else { s - term };
            }
            s * falling
        })
        .collect()
}

/// Stancu basis `C(n,k) (x)_a^k (1-x)_a^(n-k) / (1)_a^n` with rising products
/// `(y)_a^k = y (y + a) ... (y + (k-1) a)`.
pub fn stancu_basis<T: Real>(n: usize, alpha: T, x: T) -> Vec<T> {
    let rising = |y: T, k: usize| (0..k).fold(T::one(), |acc, j| acc * (y + alpha * T::from_usize_lossy(j)));
    let denom = rising(T::one(), n);
    (0..=n)
        .map(|k| binomial::<T>(n, k) * rising(x, k) * rising(T::one() - x, n - k) / denom)
        .collect()
}

/// q-integer `[i] = (1 - q^i) / (1 - q)`, equal to `i` at `q = 1`.
pub fn q_integer<T: Real>(i: usize, q: T) -> T {
    (0..i).fold(T::zero(), |acc, s| acc + q.powi(s as i32))
}

fn q_binomial<T: Real>(n: usize, k: usize, q: T) -> T {
    let mut acc = T::one();
    for j in 0..k {
        acc = acc * q_integer(n - j, q) / q_integer(j + 1, q);
    }
    acc
}

/// q-Bernstein basis `[n k]_q x^k prod_{s=0}^{n-k-1} (1 - q^s x)`.
pub fn qbernstein_basis<T: Real>(n: usize, q: T, x: T) -> Vec<T> {
    (0..=n)
        .map(|k| {
            let tail = (0..n - k).fold(T::one(), |acc, s| acc * (T::one() - q.powi(s as i32) * x));
            q_binomial(n, k, q) * x.powi(k as i32) * tail
        })
        .collect()
}

/// Horner evaluation of monomial coefficients `c[0] + c[1] x + ...`.
pub fn eval_monomial<T: Real>(coeffs: &[T], x: T) -> T {
    coeffs.iter().rev().fold(T::zero(), |acc, &c| acc * x + c)
}
