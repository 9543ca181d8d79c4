use crate::error::{QiError, Result};
use crate::linalg::solve;
use crate::scalar::Real;

/// Extrapolation tableau. `table[j][k]` combines entries `j-k..=j`
/// and eliminates the first `k` terms of the expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct RichardsonTableau<T> {
    pub params: Vec<T>,
    pub table: Vec<Vec<T>>,
}

impl<T: Real> RichardsonTableau<T> {
    pub fn diagonal(&self) -> Vec<T> {
        self.table.iter().enumerate().map(|(j, row)| row[j]).collect()
    }

    pub fn best(&self) -> T {
        let last = self.table.len() - 1;
        self.table[last][last]
    }
}

/// Exponents `1, 2, 3, ...` for expansions in integer powers of `1/n`.
pub fn integer_exponents<T: Real>(count: usize) -> Vec<T> {
    (1..=count).map(T::from_usize_lossy).collect()
}

/// Builds the tableau for `values = [(n_j, Q_{n_j} f(x))]` under
/// `Q_n f = f + sum_k c_k n^{-p_k}` with `p = exponents`.
pub fn richardson<T: Real>(values: &[(T, T)], exponents: &[T]) -> Result<RichardsonTableau<T>> {
    if values.len() < 2 {
        return Err(QiError::Input("extrapolation needs at least two entries".into()));
    }
    if exponents.len() + 1 < values.len() {
        return Err(QiError::Input(format!(
            "{} entries need {} exponents, got {}",
            values.len(),
            values.len() - 1,
            exponents.len()
        )));
    }
    for (j, &(n, v)) in values.iter().enumerate() {
        if !(n.is_finite() && n > T::zero() && v.is_finite()) {
            return Err(QiError::Input(format!("entry {j} is not a positive parameter with a finite value")));
        }
        if values[..j].iter().any(|&(m, _)| m == n) {
            return Err(QiError::Input(format!("duplicate parameter n = {n}")));
        }
    }
    let nmin = values.iter().map(|p| p.0).fold(T::infinity(), T::min);
    let mut table = Vec::with_capacity(values.len());
    for j in 0..values.len() {
        let mut row = Vec::with_capacity(j + 1);
        row.push(values[j].1);
        for k in 1..=j {
            let pts = &values[j - k..=j];
            let a: Vec<Vec<T>> = pts
                .iter()
                .map(|&(n, _)| {
                    let h = nmin / n;
                    std::iter::once(T::one()).chain(exponents[..k].iter().map(|&p| h.powf(p))).collect()
                })
                .collect();
            let b: Vec<T> = pts.iter().map(|p| p.1).collect();
            let sol = solve(&a, &b).ok_or_else(|| QiError::Input("extrapolation system is singular".into()))?;
            row.push(sol[0]);
        }
        table.push(row);
    }
    Ok(RichardsonTableau {
        params: values.iter().map(|p| p.0).collect(),
        table,
    })
}
