//! Quasi-interpolants on arbitrary knot sequences whose norms stay bounded
//! independently of the partition.

mod goodman_sharma;
mod nearbest;
mod q2star;

pub use goodman_sharma::{gs2_weights, GoodmanSharma, GsOrder};
pub use nearbest::{nearbest_nonuniform, NearBestDqi};
pub use q2star::{q2star_weights, Q2Star};

use crate::error::{QiError, Result};
use crate::scalar::Real;
use crate::spline::{greville_abscissa, KnotVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionalKind {
    Discrete,
    Integral,
}

/// `mu(f) = sum_k weights[k] * data[nodes[k]]`, where the data are point values at
/// Greville abscissae (discrete) or weight-spline means (integral).
#[derive(Debug, Clone, PartialEq)]
pub struct LocalFunctional<T> {
    pub kind: FunctionalKind,
    pub nodes: Vec<usize>,
    pub weights: Vec<T>,
    pub alternative_optima: bool,
}

impl<T: Real> LocalFunctional<T> {
    pub fn norm1(&self) -> T {
        self.weights.iter().map(|w| w.abs()).sum()
    }

    pub fn apply(&self, data: &[T]) -> T {
        self.nodes.iter().zip(&self.weights).map(|(&k, &w)| w * data[k]).sum()
    }
}

pub(crate) fn greville_points<T: Real>(kv: &KnotVector<T>) -> Result<Vec<T>> {
    (0..kv.num_basis()).map(|j| greville_abscissa(kv, j)).collect()
}

pub(crate) fn sample_at<T: Real, F: Fn(T) -> T>(f: &F, points: &[T]) -> Result<Vec<T>> {
    points
        .iter()
        .map(|&t| {
            let v = f(t);
            if v.is_finite() {
                Ok(v)
            } else {
                Err(QiError::Evaluation { at: t.as_f64() })
            }
        })
        .collect()
}

/// Cardinal weights `sum_j B_j(x) mu_j` over Greville nodes, merged where abscissae coincide.
pub(crate) fn merged_cardinal<T: Real>(
    kv: &KnotVector<T>,
    thetas: &[T],
    functionals: &[LocalFunctional<T>],
    x: T,
) -> Result<Vec<T>> {
    let mut w = vec![T::zero(); thetas.len()];
    for (j, bj) in kv.basis_values(x)?.iter() {
        let fj = &functionals[j];
        for (&k, &c) in fj.nodes.iter().zip(&fj.weights) {
            w[k] += bj * c;
        }
    }
    let mut out: Vec<T> = Vec::with_capacity(w.len());
    for (k, v) in w.into_iter().enumerate() {
        if k > 0 && thetas[k] == thetas[k - 1] {
            *out.last_mut().unwrap() += v;
        } else {
            out.push(v);
        }
    }
    Ok(out)
}
