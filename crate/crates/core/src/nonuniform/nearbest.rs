use crate::error::{QiError, Result};
use crate::l1::{solve_min_l1, L1Problem};
use crate::lebesgue::CardinalOperator;
use crate::scalar::{binomial, Real};
use crate::spline::{elementary_symmetric, KnotVector};

use super::{greville_points, merged_cardinal, sample_at, FunctionalKind, LocalFunctional};

fn check_pq(m: usize, p: usize, q: usize) -> Result<()> {
    if p < 1 {
        return Err(QiError::Parameter("radius p must be at least 1".into()));
    }
    if q > m.min(2 * p) {
        return Err(QiError::Parameter(format!("exactness q = {q} exceeds min(m, 2p) = {}", m.min(2 * p))));
    }
    Ok(())
}

/// Minimum-ℓ1 weights on nodes `start..start+len` reproducing the exact
/// coefficients `theta_i^(r)` of `e_r`, `r <= q`. Computed about `theta_i`.
fn solve_window<T: Real>(kv: &KnotVector<T>, thetas: &[T], i: usize, start: usize, len: usize, q: usize) -> Result<LocalFunctional<T>> {
    let m = kv.degree();
    let c = thetas[i];
    let nodes: Vec<usize> = (start..start + len).collect();
    let scale = nodes.iter().map(|&k| (thetas[k] - c).abs()).fold(T::zero(), T::max);
    let scale = if scale > T::zero() { scale } else { T::one() };
    let u: Vec<T> = nodes.iter().map(|&k| (thetas[k] - c) / scale).collect();
    let shifted: Vec<T> = kv.interior_knots(i).iter().map(|&t| (t - c) / scale).collect();
    let e = elementary_symmetric(&shifted, q);
    let rhs: Vec<T> = (0..=q).map(|r| e[r] / binomial::<T>(m, r)).collect();
    let matrix: Vec<Vec<T>> = (0..=q).map(|r| u.iter().map(|&v| v.powi(r as i32)).collect()).collect();
    let sol = solve_min_l1(&L1Problem::new(matrix, rhs)?)?;
    Ok(LocalFunctional {
        kind: FunctionalKind::Discrete,
        nodes,
        weights: sol.lambda,
        alternative_optima: sol.alternative_optima,
    })
}

/// Near-best functional for `B_i` on the centered window `i-p..=i+p`.
pub fn nearbest_nonuniform<T: Real>(kv: &KnotVector<T>, i: usize, p: usize, q: usize) -> Result<LocalFunctional<T>> {
    kv.check_index(i)?;
    check_pq(kv.degree(), p, q)?;
    if i < p || i + p >= kv.num_basis() {
        return Err(QiError::DegenerateStencil {
            index: i,
            reason: format!("window of radius {p} leaves the index range 0..{}", kv.num_basis()),
        });
    }
    let thetas = greville_points(kv)?;
    solve_window(kv, &thetas, i, i - p, 2 * p + 1, q)
}

/// Operator built from near-best functionals for every index; windows of
/// `2p + 1` nodes are shifted inward near the ends.
#[derive(Debug, Clone)]
pub struct NearBestDqi<T> {
    kv: KnotVector<T>,
    thetas: Vec<T>,
    functionals: Vec<LocalFunctional<T>>,
    p: usize,
    q: usize,
}

impl<T: Real> NearBestDqi<T> {
    pub fn new(kv: KnotVector<T>, p: usize, q: usize) -> Result<Self> {
        check_pq(kv.degree(), p, q)?;
        let nb = kv.num_basis();
        let len = 2 * p + 1;
        if nb < len {
            return Err(QiError::Parameter(format!("{nb} basis functions cannot host windows of {len} nodes")));
        }
        let thetas = greville_points(&kv)?;
        let functionals = (0..nb)
            .map(|i| {
                let start = i.saturating_sub(p).min(nb - len);
                solve_window(&kv, &thetas, i, start, len, q)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(NearBestDqi {
            kv,
            thetas,
            functionals,
            p,
            q,
        })
    }

    pub fn radius(&self) -> usize {
        self.p
    }

    pub fn exactness(&self) -> usize {
        self.q
    }

    pub fn functionals(&self) -> &[LocalFunctional<T>] {
        &self.functionals
    }

    /// `nu_1^* = max_i ||lambda_i||_1`.
    pub fn nu1(&self) -> T {
        self.functionals.iter().map(|f| f.norm1()).fold(T::zero(), T::max)
    }

    pub fn apply<F: Fn(T) -> T>(&self, f: F, x: T) -> Result<T> {
        let bv = self.kv.basis_values(x)?;
        let data = sample_at(&f, &self.thetas)?;
        Ok(bv.iter().map(|(j, b)| b * self.functionals[j].apply(&data)).sum())
    }
}

impl<T: Real> CardinalOperator<T> for NearBestDqi<T> {
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
