use crate::error::{QiError, Result};
use crate::lebesgue::CardinalOperator;
use crate::scalar::Real;
use crate::spline::{greville, KnotVector};

use super::{greville_points, merged_cardinal, sample_at, FunctionalKind, LocalFunctional};

/// `A_i = theta_i^2 - theta_i^(2)`, exactly zero when the interior knots of `B_i` coincide.
fn spread<T: Real>(kv: &KnotVector<T>, i: usize) -> Result<T> {
    let inner = kv.interior_knots(i);
    if inner.iter().all(|&t| t == inner[0]) {
        return Ok(T::zero());
    }
    Ok(greville(kv, i)?.spread().max(T::zero()))
}

/// Weights `(a_i, b_i, c_i)` of `mu_i(f) = f(theta_i) - A_i [theta_{i-1}, theta_i, theta_{i+1}] f`.
pub fn q2star_weights<T: Real>(kv: &KnotVector<T>, i: usize) -> Result<(T, T, T)> {
    kv.check_index(i)?;
    if i == 0 || i + 1 >= kv.num_basis() {
        return Err(QiError::DegenerateStencil {
            index: i,
            reason: "missing Greville neighbor".into(),
        });
    }
    let t = [greville(kv, i - 1)?.theta, greville(kv, i)?.theta, greville(kv, i + 1)?.theta];
    let (d0, d1) = (t[1] - t[0], t[2] - t[1]);
    if !(d0 > T::zero() && d1 > T::zero()) {
        return Err(QiError::DegenerateStencil {
            index: i,
            reason: "coincident Greville abscissae".into(),
        });
    }
    let a2 = spread(kv, i)?;
    Ok((-a2 / (d0 * (d0 + d1)), T::one() + a2 / (d0 * d1), -a2 / (d1 * (d0 + d1))))
}

/// Three indices with distinct abscissae, containing `i`, nearest first.
fn fallback_stencil<T: Real>(thetas: &[T], i: usize) -> Option<[usize; 3]> {
    let mut picked = vec![i];
    let (mut l, mut r) = (i as isize - 1, i + 1);
    while picked.len() < 3 && (l >= 0 || r < thetas.len()) {
        for cand in [(l >= 0).then_some(l as usize), (r < thetas.len()).then_some(r)].into_iter().flatten() {
            if picked.len() < 3 && picked.iter().all(|&p| thetas[p] != thetas[cand]) {
                picked.push(cand);
            }
        }
        l -= 1;
        r += 1;
    }
    if picked.len() < 3 {
        return None;
    }
    picked.sort_unstable();
    Some([picked[0], picked[1], picked[2]])
}

/// The discrete `P_2`-exact operator `Q_2^* f = sum_i mu_i(f) B_i`.
///
/// Indices without two distinct neighbors use the nearest three distinct
/// abscissae instead (a one-sided divided difference); those indices are listed
/// in [`Q2Star::fallbacks`]. Clamped ends need no stencil since `A_i = 0` there.
#[derive(Debug, Clone)]
pub struct Q2Star<T> {
    kv: KnotVector<T>,
    thetas: Vec<T>,
    functionals: Vec<LocalFunctional<T>>,
    fallbacks: Vec<usize>,
}

impl<T: Real> Q2Star<T> {
    pub fn new(kv: KnotVector<T>) -> Result<Self> {
        if kv.degree() < 2 {
            return Err(QiError::Parameter("Q2* needs degree m >= 2".into()));
        }
        let thetas = greville_points(&kv)?;
        let nb = kv.num_basis();
        let mut functionals = Vec::with_capacity(nb);
        let mut fallbacks = Vec::new();
        for i in 0..nb {
            let a2 = spread(&kv, i)?;
            if a2 == T::zero() {
                functionals.push(LocalFunctional {
                    kind: FunctionalKind::Discrete,
                    nodes: vec![i],
                    weights: vec![T::one()],
                    alternative_optima: false,
                });
                continue;
            }
            let (nodes, weights) = match q2star_weights(&kv, i) {
                Ok((a, b, c)) => (vec![i - 1, i, i + 1], vec![a, b, c]),
                Err(QiError::DegenerateStencil { .. }) => {
                    let st = fallback_stencil(&thetas, i).ok_or_else(|| QiError::DegenerateStencil {
                        index: i,
                        reason: "fewer than three distinct Greville abscissae".into(),
                    })?;
                    fallbacks.push(i);
                    let x: Vec<T> = st.iter().map(|&k| thetas[k]).collect();
                    let mut w: Vec<T> = (0..3)
                        .map(|p| {
                            let den: T = (0..3).filter(|&q| q != p).map(|q| x[p] - x[q]).fold(T::one(), |u, v| u * v);
                            -a2 / den
                        })
                        .collect();
                    let own = st.iter().position(|&k| k == i).expect("stencil contains i");
                    w[own] += T::one();
                    (st.to_vec(), w)
                }
                Err(e) => return Err(e),
            };
            functionals.push(LocalFunctional {
                kind: FunctionalKind::Discrete,
                nodes,
                weights,
                alternative_optima: false,
            });
        }
        Ok(Q2Star {
            kv,
            thetas,
            functionals,
            fallbacks,
        })
    }

    pub fn knots(&self) -> &KnotVector<T> {
        &self.kv
    }

    pub fn greville_points(&self) -> &[T] {
        &self.thetas
    }

    pub fn functionals(&self) -> &[LocalFunctional<T>] {
        &self.functionals
    }

    pub fn fallbacks(&self) -> &[usize] {
        &self.fallbacks
    }

    /// `max_i (|a_i| + |b_i| + |c_i|)`, an upper bound of the norm.
    pub fn nu(&self) -> T {
        self.functionals.iter().map(|f| f.norm1()).fold(T::zero(), T::max)
    }

    /// B-spline coefficients `mu_i(f)`.
    pub fn coefficients<F: Fn(T) -> T>(&self, f: F) -> Result<Vec<T>> {
        let data = sample_at(&f, &self.thetas)?;
        Ok(self.functionals.iter().map(|fun| fun.apply(&data)).collect())
    }

    pub fn apply<F: Fn(T) -> T>(&self, f: F, x: T) -> Result<T> {
        let bv = self.kv.basis_values(x)?;
        let data = sample_at(&f, &self.thetas)?;
        Ok(bv.iter().map(|(j, b)| b * self.functionals[j].apply(&data)).sum())
    }
}

impl<T: Real> CardinalOperator<T> for Q2Star<T> {
    fn domain(&self) -> (T, T) {
        self.kv.domain()
    }

    fn breakpoints(&self) -> Vec<T> {
        self.kv.breakpoints()
    }

    fn cardinal_weights(&self, x: T) -> Result<Vec<T>> {
        merged_cardinal(&self.kv, &self.thetas, &self.functionals, x)
    }
}
