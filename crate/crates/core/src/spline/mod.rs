//! B-splines on arbitrary non-decreasing knot sequences.
//!
//! Basis function `B_i` of degree `m` is supported on `[t_i, t_{i+m+1}]`.

mod basis;
mod dual;
mod greville;
mod knots;
mod moments;

pub use basis::{eval_basis, BasisValues, SplineFunction};
pub use dual::{deboor_fix, monomial_derivatives};
pub use greville::{greville, greville_abscissa, symmetric_mean, GrevillePair};
pub use knots::KnotVector;
pub use moments::{default_nodes_per_span, inner_product, inner_product_with, moment};

/// Elementary symmetric functions `e_0..=e_k` of `vals`.
pub(crate) fn elementary_symmetric<T: crate::Real>(vals: &[T], k: usize) -> Vec<T> {
    let mut e = vec![T::zero(); k + 1];
    e[0] = T::one();
    for &v in vals {
        for r in (1..=k).rev() {
            let prev = e[r - 1];
            e[r] += v * prev;
        }
    }
    e
}

/// Complete homogeneous symmetric functions `h_0..=h_k` of `vals`.
pub(crate) fn complete_symmetric<T: crate::Real>(vals: &[T], k: usize) -> Vec<T> {
    let mut h = vec![T::zero(); k + 1];
    h[0] = T::one();
    for &v in vals {
        for r in 1..=k {
            let prev = h[r - 1];
            h[r] += v * prev;
        }
    }
    h
}
