use crate::error::{QiError, Result};
use crate::lebesgue::{maximize, GridOptions, LebesgueEstimate};
use crate::linalg::solve;
use crate::quadrature::abs_integral_poly;
use crate::scalar::{binomial, Real};
use crate::spline::{complete_symmetric, elementary_symmetric, inner_product, KnotVector};

use super::{FunctionalKind, LocalFunctional};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GsOrder {
    /// `G_1`: exact on `P_1`, positive.
    One,
    /// `G_2`: exact on `P_2`.
    Two,
}

/// Means `mu~_j` for `j = 0..N`: `j = 0` and `j = N-1` are the endpoint values,
/// otherwise `<f, M~_{j-1}>` with the unit-integral weight spline of degree
/// `m - 2` on the interior knots of `B_j`.
///
/// `G_2` at the first and last interior index borrows the endpoint value as its
/// outer neighbor, with moments `t_0^r` (resp. `t_n^r`).
#[derive(Debug, Clone)]
pub struct GoodmanSharma<T> {
    kv: KnotVector<T>,
    reduced: KnotVector<T>,
    order: GsOrder,
    functionals: Vec<LocalFunctional<T>>,
}

fn check_clamped<T: Real>(kv: &KnotVector<T>) -> Result<()> {
    let m = kv.degree();
    let t = kv.knots();
    let len = t.len();
    if m < 2 {
        return Err(QiError::Undefined("weight splines of degree m - 2 need m >= 2".into()));
    }
    if t[..=m].iter().any(|&v| v != t[0]) || t[len - 1 - m..].iter().any(|&v| v != t[len - 1]) {
        return Err(QiError::InvalidKnots("Goodman-Sharma operators need clamped knots".into()));
    }
    Ok(())
}

fn reduced_knots<T: Real>(kv: &KnotVector<T>) -> Result<KnotVector<T>> {
    let t = kv.knots();
    KnotVector::new(t[2..t.len() - 2].to_vec(), kv.degree() - 2).map_err(|e| match e {
        QiError::InvalidKnots(msg) => {
            QiError::InvalidKnots(format!("interior knot multiplicity must be at most m - 1 ({msg})"))
        }
        other => other,
    })
}

/// First two moments of `mu~_j` about `c`.
fn centered_moments<T: Real>(kv: &KnotVector<T>, j: usize, c: T) -> (T, T) {
    let t = kv.knots();
    let nb = kv.num_basis();
    if j == 0 || j + 1 == nb {
        let e = if j == 0 { t[0] } else { t[t.len() - 1] } - c;
        return (e, e * e);
    }
    // weight spline knots are the interior knots of B_j: m of them, degree m - 2
    let knots: Vec<T> = kv.interior_knots(j).iter().map(|&v| v - c).collect();
    let m = kv.degree();
    let h = complete_symmetric(&knots, 2);
    (h[1] / binomial::<T>(m, 1), h[2] / binomial::<T>(m + 1, 2))
}

/// Solves the 3x3 moment system for `(a_i, b_i, c_i)`, `1 <= i <= N - 2`.
pub fn gs2_weights<T: Real>(kv: &KnotVector<T>, i: usize) -> Result<(T, T, T)> {
    check_clamped(kv)?;
    let nb = kv.num_basis();
    if i == 0 || i + 1 >= nb {
        return Err(QiError::DegenerateStencil {
            index: i,
            reason: "only interior indices carry a moment system".into(),
        });
    }
    let m = kv.degree();
    let inner = kv.interior_knots(i);
    let e1 = elementary_symmetric(inner, 1)[1] / T::from_usize_lossy(m);
    let c = e1;
    let shifted: Vec<T> = inner.iter().map(|&v| v - c).collect();
    let theta2 = elementary_symmetric(&shifted, 2)[2] / binomial::<T>(m, 2);
    let mom: Vec<(T, T)> = (i - 1..=i + 1).map(|j| centered_moments(kv, j, c)).collect();
    let scale = mom.iter().map(|p| p.0.abs()).fold(T::zero(), T::max);
    if scale == T::zero() {
        return Err(QiError::DegenerateStencil {
            index: i,
            reason: "neighbor means coincide".into(),
        });
    }
    let a = vec![
        vec![T::one(); 3],
        mom.iter().map(|p| p.0 / scale).collect(),
        mom.iter().map(|p| p.1 / (scale * scale)).collect(),
    ];
    let rhs = [T::one(), T::zero(), theta2 / (scale * scale)];
    let sol = solve(&a, &rhs).ok_or_else(|| QiError::DegenerateStencil {
        index: i,
        reason: "singular moment system".into(),
    })?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(QiError::DegenerateStencil {
            index: i,
            reason: "singular moment system".into(),
        });
    }
    Ok((sol[0], sol[1], sol[2]))
}

impl<T: Real> GoodmanSharma<T> {
    pub fn new(kv: KnotVector<T>, order: GsOrder) -> Result<Self> {
        check_clamped(&kv)?;
        let reduced = reduced_knots(&kv)?;
        let nb = kv.num_basis();
        let mut functionals = Vec::with_capacity(nb);
        for i in 0..nb {
            let (nodes, weights) = if i == 0 || i + 1 == nb || order == GsOrder::One {
                (vec![i], vec![T::one()])
            } else {
                let (a, b, c) = gs2_weights(&kv, i)?;
                (vec![i - 1, i, i + 1], vec![a, b, c])
            };
            functionals.push(LocalFunctional {
                kind: FunctionalKind::Integral,
                nodes,
                weights,
                alternative_optima: false,
            });
        }
        Ok(GoodmanSharma {
            kv,
            reduced,
            order,
            functionals,
        })
    }

    pub fn order(&self) -> GsOrder {
        self.order
    }

    pub fn knots(&self) -> &KnotVector<T> {
        &self.kv
    }

    pub fn functionals(&self) -> &[LocalFunctional<T>] {
        &self.functionals
    }

    /// The data `mu~_j(f)` for all `j`.
    pub fn means<F: Fn(T) -> T>(&self, f: F) -> Result<Vec<T>> {
        let nb = self.kv.num_basis();
        let (a, b) = self.kv.domain();
        let check = |x: T| {
            let v = f(x);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(QiError::Evaluation { at: x.as_f64() })
            }
        };
        (0..nb)
            .map(|j| {
                if j == 0 {
                    check(a)
                } else if j + 1 == nb {
                    check(b)
                } else {
                    inner_product(&f, &self.reduced, j - 1)
                }
            })
            .collect()
    }

    pub fn coefficients<F: Fn(T) -> T>(&self, f: F) -> Result<Vec<T>> {
        let data = self.means(f)?;
        Ok(self.functionals.iter().map(|fun| fun.apply(&data)).collect())
    }

    pub fn apply<F: Fn(T) -> T>(&self, f: F, x: T) -> Result<T> {
        let coeffs = self.coefficients(f)?;
        Ok(self.kv.basis_values(x)?.iter().map(|(j, b)| b * coeffs[j]).sum())
    }

    /// `sum_i B_i(x) (|a_i| + |b_i| + |c_i|)`; each mean has norm one.
    pub fn upper_function(&self, x: T) -> Result<T> {
        Ok(self
            .kv
            .basis_values(x)?
            .iter()
            .map(|(j, b)| b * self.functionals[j].norm1())
            .sum())
    }

    /// Maximized [`GoodmanSharma::upper_function`]: an upper estimate of the norm.
    pub fn norm_upper(&self, opts: GridOptions) -> Result<LebesgueEstimate<T>> {
        maximize(|x| self.upper_function(x), &self.kv.breakpoints(), opts)
    }

    /// `|mass at t_0| + |mass at t_n| + int |K(x, t)| dt`, the exact value of
    /// the operator at `x` acting on sign-matched unit-bounded data.
    pub fn kernel_function(&self, x: T) -> Result<T> {
        let nb = self.kv.num_basis();
        let mut weight = vec![T::zero(); nb];
        for (j, bj) in self.kv.basis_values(x)?.iter() {
            let fj = &self.functionals[j];
            for (&k, &c) in fj.nodes.iter().zip(&fj.weights) {
                weight[k] += bj * c;
            }
        }
        let mut total = weight[0].abs() + weight[nb - 1].abs();
        let active: Vec<usize> = (1..nb - 1).filter(|&j| weight[j] != T::zero()).collect();
        if active.is_empty() {
            return Ok(total);
        }
        let rk = self.reduced.knots();
        let md = self.reduced.degree();
        let lo = active[0] - 1;
        let hi = *active.last().unwrap() - 1 + md + 1;
        let kernel = |t: T| -> T {
            let Ok(bv) = self.reduced.basis_values(t) else {
                return T::zero();
            };
            bv.iter()
                .filter(|&(r, _)| r + 1 >= 1 && r + 1 < nb - 1)
                .map(|(r, b)| {
                    let width = rk[r + md + 1] - rk[r];
                    weight[r + 1] * b * T::from_usize_lossy(md + 1) / width
                })
                .sum()
        };
        for s in lo..hi {
            let (a, b) = (rk[s], rk[s + 1]);
            if b > a {
                total += abs_integral_poly(kernel, a, b, md);
            }
        }
        Ok(total)
    }

    /// Maximized [`GoodmanSharma::kernel_function`].
    pub fn norm_kernel(&self, opts: GridOptions) -> Result<LebesgueEstimate<T>> {
        maximize(|x| self.kernel_function(x), &self.kv.breakpoints(), opts)
    }
}
