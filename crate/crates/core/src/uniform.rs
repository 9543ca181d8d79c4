//! Near-best symmetric quasi-interpolants on integer knots built from the
//! centered cardinal B-spline `M` of order `2m`.
//!
//! The coefficient functional is `Λf(i) = a_0 f(i) + sum_j a_j (f(i+j) + f(i-j))`
//! (discrete) or the same with `<f, M(· - i ∓ j)>` (integral). Exactness on
//! `P_r` only constrains even moments: with `b_0 = a_0`, `b_j = 2 a_j`,
//! `sum_j j^(2l) b_j = g_l` where `g_l = (2l)! [w^l] 1/Mhat` for the discrete
//! kind and `1/Mhat^2` for the integral kind, `Mhat(D) = (sinh(D/2)/(D/2))^(2m)`
//! in `w = D^2`.

use std::fmt;
use std::str::FromStr;

use crate::error::{QiError, Result};
use crate::l1::{solve_min_l1, L1Problem};
use crate::lebesgue::{maximize, GridOptions, LebesgueEstimate};
use crate::quadrature::{abs_integral_poly, gauss_legendre};
use crate::scalar::{factorial, Real};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UniformKind {
    Discrete,
    Integral,
}

impl fmt::Display for UniformKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UniformKind::Discrete => "discrete",
            UniformKind::Integral => "integral",
        })
    }
}

impl FromStr for UniformKind {
    type Err = QiError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "discrete" | "d" => Ok(UniformKind::Discrete),
            "integral" | "i" => Ok(UniformKind::Integral),
            other => Err(QiError::Parse(format!("unknown kind '{other}', expected discrete or integral"))),
        }
    }
}

/// Centered cardinal B-spline of the given order, supported on `[-order/2, order/2]`.
pub fn cardinal_bspline<T: Real>(order: usize, x: T) -> T {
    if order == 0 {
        return T::zero();
    }
    let half = T::from_usize_lossy(order) / T::lit(2.0);
    let y = x + half;
    if !(y > T::zero() && y < T::from_usize_lossy(order)) {
        return T::zero();
    }
    let s = y.floor().to_usize().unwrap_or(0).min(order - 1);
    // b[j] holds the degree-d B-spline starting at s - d + j on integer knots.
    let mut b = vec![T::zero(); order];
    b[0] = T::one();
    for d in 1..order {
        let df = T::from_usize_lossy(d);
        let mut next = vec![T::zero(); order];
        for j in 0..=d {
            let start = T::from_usize_lossy(s + j) - df; // knot index s - d + j
            let left = if j >= 1 { (y - start) * b[j - 1] } else { T::zero() };
            let right = if j < d { (start + df + T::one() - y) * b[j] } else { T::zero() };
            next[j] = (left + right) / df;
        }
        b = next;
    }
    // after the loop b[j] starts at s - (order-1) + j; the one starting at 0 has j = order-1-s
    b[order - 1 - s]
}

fn series_mul<T: Real>(a: &[T], b: &[T], len: usize) -> Vec<T> {
    let mut out = vec![T::zero(); len];
    for (i, &ai) in a.iter().enumerate().take(len) {
        for (j, &bj) in b.iter().enumerate().take(len - i) {
            out[i + j] += ai * bj;
        }
    }
    out
}

fn series_inverse<T: Real>(a: &[T], len: usize) -> Vec<T> {
    let mut inv = vec![T::zero(); len];
    inv[0] = T::one() / a[0];
    for k in 1..len {
        let s: T = (1..=k.min(a.len() - 1)).map(|j| a[j] * inv[k - j]).sum();
        inv[k] = -s / a[0];
    }
    inv
}

/// Right-hand sides `g_0..g_L` of the even-moment constraints.
pub fn moment_targets<T: Real>(kind: UniformKind, m: usize, count: usize) -> Vec<T> {
    let len = count.max(1);
    let sinhc: Vec<T> = (0..len)
        .map(|k| T::one() / (T::lit(4.0).powi(k as i32) * factorial::<T>(2 * k + 1)))
        .collect();
    let power = match kind {
        UniformKind::Discrete => 2 * m,
        UniformKind::Integral => 4 * m,
    };
    let mut sym = vec![T::zero(); len];
    sym[0] = T::one();
    for _ in 0..power {
        sym = series_mul(&sym, &sinhc, len);
    }
    series_inverse(&sym, len)
        .into_iter()
        .enumerate()
        .map(|(l, c)| c * factorial::<T>(2 * l))
        .take(count)
        .collect()
}

/// Symmetric coefficient vector `(a_0, ..., a_n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricCoefficients<T> {
    pub kind: UniformKind,
    /// Half-order: the spline has order `2m`.
    pub m: usize,
    pub a: Vec<T>,
    pub exactness: usize,
    pub alternative_optima: bool,
}

impl<T: Real> SymmetricCoefficients<T> {
    pub fn new(kind: UniformKind, m: usize, a: Vec<T>, exactness: usize) -> Result<Self> {
        if m < 1 || a.is_empty() {
            return Err(QiError::Parameter("need m >= 1 and at least one coefficient".into()));
        }
        if a.iter().any(|v| !v.is_finite()) {
            return Err(QiError::Input("coefficients must be finite".into()));
        }
        Ok(SymmetricCoefficients {
            kind,
            m,
            a,
            exactness,
            alternative_optima: false,
        })
    }

    pub fn n(&self) -> usize {
        self.a.len() - 1
    }

    pub fn order(&self) -> usize {
        2 * self.m
    }

    pub fn nu(&self) -> T {
        self.a[0].abs() + T::lit(2.0) * self.a[1..].iter().map(|v| v.abs()).sum::<T>()
    }

    /// `a_{|k|}`, zero outside the stencil.
    pub fn weight(&self, k: i64) -> T {
        self.a.get(k.unsigned_abs() as usize).copied().unwrap_or(T::zero())
    }
}

fn check_params(m: usize, n: usize, r: usize) -> Result<()> {
    if m < 1 || n < 1 {
        return Err(QiError::Parameter(format!("need m >= 1 and n >= 1, got m = {m}, n = {n}")));
    }
    if r > 2 * m - 1 {
        return Err(QiError::Parameter(format!("exactness r = {r} exceeds spline degree {}", 2 * m - 1)));
    }
    if r / 2 > n {
        return Err(QiError::Infeasible(format!(
            "{} even-moment constraints cannot be met with radius n = {n}",
            r / 2 + 1
        )));
    }
    Ok(())
}

/// Minimizes `nu(a)` subject to exactness on `P_r`.
pub fn nearbest_uniform<T: Real>(kind: UniformKind, m: usize, n: usize, r: usize) -> Result<SymmetricCoefficients<T>> {
    check_params(m, n, r)?;
    let rows = r / 2 + 1;
    let g = moment_targets::<T>(kind, m, rows);
    let matrix: Vec<Vec<T>> = (0..rows)
        .map(|l| {
            (0..=n)
                .map(|j| {
                    if l == 0 {
                        T::one()
                    } else {
                        T::from_usize_lossy(j).powi(2 * l as i32)
                    }
                })
                .collect()
        })
        .collect();
    let sol = solve_min_l1(&L1Problem::new(matrix, g)?)?;
    let a = sol
        .lambda
        .iter()
        .enumerate()
        .map(|(j, &b)| if j == 0 { b } else { b / T::lit(2.0) })
        .collect();
    let mut out = SymmetricCoefficients::new(kind, m, a, r)?;
    out.alternative_optima = sol.alternative_optima;
    Ok(out)
}

/// Closed-form cubic optimum (`m = 2`, `r = 3`): `a_0 = 1 + c/n^2`, `a_n = -c/(2n^2)`
/// with `c = 1/3` (discrete) or `2/3` (integral).
pub fn cubic_nearbest<T: Real>(kind: UniformKind, n: usize) -> Result<SymmetricCoefficients<T>> {
    check_params(2, n, 3)?;
    let c = match kind {
        UniformKind::Discrete => T::one() / T::lit(3.0),
        UniformKind::Integral => T::lit(2.0) / T::lit(3.0),
    };
    let n2 = T::from_usize_lossy(n * n);
    let mut a = vec![T::zero(); n + 1];
    a[0] = T::one() + c / n2;
    a[n] = -c / (T::lit(2.0) * n2);
    SymmetricCoefficients::new(kind, 2, a, 3)
}

fn data_functional<T: Real, F: Fn(T) -> T>(kind: UniformKind, order: usize, f: &F, h: T, i: i64) -> Result<T> {
    let center = T::from_i64(i).unwrap();
    match kind {
        UniformKind::Discrete => {
            let v = f(h * center);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(QiError::Evaluation { at: (h * center).as_f64() })
            }
        }
        UniformKind::Integral => {
            let rule = gauss_legendre::<T>(order / 2 + 4);
            let half = T::from_usize_lossy(order) / T::lit(2.0);
            let mut acc = T::zero();
            for s in 0..order {
                let a = center - half + T::from_usize_lossy(s);
                acc += rule.integrate(a, a + T::one(), |t| f(h * t) * cardinal_bspline(order, t - center));
            }
            if acc.is_finite() {
                Ok(acc)
            } else {
                Err(QiError::Evaluation { at: (h * center).as_f64() })
            }
        }
    }
}

fn active_range<T: Real>(order: usize, y: T) -> (i64, i64) {
    let half = T::from_usize_lossy(order) / T::lit(2.0);
    let lo = (y - half).floor().to_i64().unwrap() + 1;
    let hi = (y + half).ceil().to_i64().unwrap() - 1;
    (lo, hi)
}

/// `Q_h f(x) = sum_i Λ f(h ·)(i) M(x/h - i)`.
pub fn apply_uniform<T: Real, F: Fn(T) -> T>(coeffs: &SymmetricCoefficients<T>, f: F, h: T, x: T) -> Result<T> {
    if !(h > T::zero()) {
        return Err(QiError::Parameter("spacing h must be positive".into()));
    }
    let order = coeffs.order();
    let y = x / h;
    let (lo, hi) = active_range(order, y);
    let n = coeffs.n() as i64;
    let data: Vec<T> = (lo - n..=hi + n)
        .map(|i| data_functional(coeffs.kind, order, &f, h, i))
        .collect::<Result<_>>()?;
    apply_uniform_samples(coeffs, &data, lo - n, y)
}

/// Same as [`apply_uniform`] at `h = 1` with precomputed data `samples[k]` for
/// the functional at integer `first + k` (`f(i)` or `<f, M(· - i)>`).
pub fn apply_uniform_samples<T: Real>(coeffs: &SymmetricCoefficients<T>, samples: &[T], first: i64, x: T) -> Result<T> {
    let order = coeffs.order();
    let (lo, hi) = active_range(order, x);
    let n = coeffs.n() as i64;
    let last = first + samples.len() as i64 - 1;
    if lo - n < first || hi + n > last {
        return Err(QiError::Input(format!(
            "evaluation at {x} needs data on [{}, {}], have [{first}, {last}]",
            lo - n,
            hi + n
        )));
    }
    let mut acc = T::zero();
    for i in lo..=hi {
        let lam: T = (-n..=n).map(|k| coeffs.weight(k) * samples[(i + k - first) as usize]).sum();
        acc += lam * cardinal_bspline(order, x - T::from_i64(i).unwrap());
    }
    Ok(acc)
}

/// Lebesgue function of the coefficient vector read as a point-value scheme,
/// `sum_l |sum_k a_k M(x - l + k)|`.
pub fn uniform_lebesgue_function<T: Real>(coeffs: &SymmetricCoefficients<T>, x: T) -> T {
    let order = coeffs.order();
    let (lo, hi) = active_range(order, x);
    let n = coeffs.n() as i64;
    (lo - n..=hi + n)
        .map(|l| {
            (-n..=n)
                .map(|k| coeffs.weight(k) * cardinal_bspline(order, x - T::from_i64(l - k).unwrap()))
                .sum::<T>()
                .abs()
        })
        .sum()
}

/// `int |K(x, t)| dt` for the integral scheme, `K(x,t) = sum_i M(x-i) sum_k a_k M(t-i-k)`.
pub fn integral_kernel_abs<T: Real>(coeffs: &SymmetricCoefficients<T>, x: T) -> T {
    let order = coeffs.order();
    let (lo, hi) = active_range(order, x);
    let n = coeffs.n() as i64;
    let outer: Vec<(i64, T)> = (lo..=hi)
        .map(|i| (i, cardinal_bspline(order, x - T::from_i64(i).unwrap())))
        .collect();
    let kernel = |t: T| -> T {
        outer
            .iter()
            .map(|&(i, mi)| {
                mi * (-n..=n)
                    .map(|k| coeffs.weight(k) * cardinal_bspline(order, t - T::from_i64(i + k).unwrap()))
                    .sum::<T>()
            })
            .sum()
    };
    let half = (order / 2) as i64;
    let t_lo = lo - n - half;
    let t_hi = hi + n + half;
    (t_lo..t_hi)
        .map(|s| {
            let a = T::from_i64(s).unwrap();
            abs_integral_poly(kernel, a, a + T::one(), order - 1)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformNorm<T> {
    /// Maximum over one period of the point-value Lebesgue function.
    pub lebesgue: LebesgueEstimate<T>,
    pub nu: T,
    /// Integral kind only: `sup_x int |K(x, t)| dt`.
    pub kernel_norm: Option<LebesgueEstimate<T>>,
}

pub fn uniform_norm<T: Real>(coeffs: &SymmetricCoefficients<T>, opts: GridOptions) -> Result<UniformNorm<T>> {
    let period = [T::zero(), T::one()];
    let lebesgue = maximize(|x| Ok(uniform_lebesgue_function(coeffs, x)), &period, opts)?;
    let kernel_norm = match coeffs.kind {
        UniformKind::Discrete => None,
        UniformKind::Integral => {
            let coarse = GridOptions {
                points: opts.points.min(256),
                ..opts
            };
            Some(maximize(|x| Ok(integral_kernel_abs(coeffs, x)), &period, coarse)?)
        }
    };
    Ok(UniformNorm {
        lebesgue,
        nu: coeffs.nu(),
        kernel_norm,
    })
}
