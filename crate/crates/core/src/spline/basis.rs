use crate::error::{QiError, Result};
use crate::scalar::Real;

use super::KnotVector;

/// Values of the `m + 1` basis functions that can be nonzero on one knot span.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisValues<T> {
    /// Index of the basis function carried by `values[0]`.
    pub first: usize,
    pub values: Vec<T>,
}

impl<T: Real> BasisValues<T> {
    pub fn iter(&self) -> impl Iterator<Item = (usize, T)> + '_ {
        self.values.iter().enumerate().map(move |(r, &v)| (self.first + r, v))
    }
}

impl<T: Real> KnotVector<T> {
    /// Cox–de Boor triangle on the span containing `x`.
    pub fn basis_values(&self, x: T) -> Result<BasisValues<T>> {
        let k = self.span(x)?;
        let m = self.degree();
        let t = self.knots();
        let mut n = vec![T::zero(); m + 1];
        let mut left = vec![T::zero(); m + 1];
        let mut right = vec![T::zero(); m + 1];
        n[0] = T::one();
        for j in 1..=m {
            left[j] = x - t[k + 1 - j];
            right[j] = t[k + j] - x;
            let mut saved = T::zero();
            for r in 0..j {
                let temp = n[r] / (right[r + 1] + left[j - r]);
                n[r] = saved + right[r + 1] * temp;
                saved = left[j - r] * temp;
            }
            n[j] = saved;
        }
        Ok(BasisValues { first: k - m, values: n })
    }

    /// Value of the single basis function `B_i` at `x` (zero off its support).
    pub fn basis_function(&self, i: usize, x: T) -> Result<T> {
        self.check_index(i)?;
        let bv = self.basis_values(x)?;
        Ok(if i >= bv.first && i < bv.first + bv.values.len() {
            bv.values[i - bv.first]
        } else {
            T::zero()
        })
    }
}

/// Basis functions nonzero at `x`, as `(index, value)` pairs.
pub fn eval_basis<T: Real>(kv: &KnotVector<T>, x: T) -> Result<Vec<(usize, T)>> {
    let bv = kv.basis_values(x)?;
    Ok(bv.iter().filter(|&(_, v)| v != T::zero()).collect())
}

/// `sum_i c_i B_i` on a knot vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SplineFunction<T> {
    basis: KnotVector<T>,
    coefficients: Vec<T>,
}

impl<T: Real> SplineFunction<T> {
    pub fn new(basis: KnotVector<T>, coefficients: Vec<T>) -> Result<Self> {
        if coefficients.len() != basis.num_basis() {
            return Err(QiError::Input(format!(
                "expected {} coefficients, got {}",
                basis.num_basis(),
                coefficients.len()
            )));
        }
        Ok(SplineFunction { basis, coefficients })
    }

    pub fn basis(&self) -> &KnotVector<T> {
        &self.basis
    }

    pub fn coefficients(&self) -> &[T] {
        &self.coefficients
    }

    pub fn eval(&self, x: T) -> Result<T> {
        let bv = self.basis.basis_values(x)?;
        Ok(bv.iter().map(|(i, v)| self.coefficients[i] * v).sum())
    }
}
