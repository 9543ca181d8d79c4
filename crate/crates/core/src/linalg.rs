//! Small dense linear algebra on row-major `Vec<Vec<T>>` matrices.

use crate::scalar::Real;

/// Solves `a x = b` by Gaussian elimination with partial pivoting.
/// Returns `None` when a pivot falls below `T::tol()` relative to the row scale.
pub fn solve<T: Real>(a: &[Vec<T>], b: &[T]) -> Option<Vec<T>> {
    let n = a.len();
    if b.len() != n || a.iter().any(|row| row.len() != n) {
        return None;
    }
    let mut m: Vec<Vec<T>> = a
        .iter()
        .zip(b)
        .map(|(row, &bi)| {
            let mut r = row.clone();
            r.push(bi);
            r
        })
        .collect();
    let scale = a
        .iter()
        .flat_map(|r| r.iter())
        .fold(T::zero(), |acc, v| acc.max(v.abs()));
    if scale == T::zero() {
        return None;
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        if m[piv][col].abs() <= T::epsilon() * T::lit(64.0) * scale {
            return None;
        }
        m.swap(col, piv);
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            if f == T::zero() {
                continue;
            }
            for k in col..=n {
                let v = m[col][k];
                m[row][k] -= f * v;
            }
        }
    }
    let mut x = vec![T::zero(); n];
    for row in (0..n).rev() {
        let mut s = m[row][n];
        for k in row + 1..n {
            s -= m[row][k] * x[k];
        }
        x[row] = s / m[row][row];
    }
    Some(x)
}

/// Numerical rank by row echelon reduction with a relative pivot threshold.
pub fn rank<T: Real>(a: &[Vec<T>]) -> usize {
    let rows = a.len();
    if rows == 0 {
        return 0;
    }
    let cols = a[0].len();
    let mut m: Vec<Vec<T>> = a
        .iter()
        .map(|r| {
            let s = r.iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
            if s > T::zero() {
                r.iter().map(|&v| v / s).collect()
            } else {
                r.clone()
            }
        })
        .collect();
    let mut rank = 0;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let piv = (rank..rows)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        if m[piv][col].abs() <= T::tol() {
            continue;
        }
        m.swap(rank, piv);
        for row in rank + 1..rows {
            let f = m[row][col] / m[rank][col];
            for k in col..cols {
                let v = m[rank][k];
                m[row][k] -= f * v;
            }
        }
        rank += 1;
    }
    rank
}

/// Determinant via LU with partial pivoting.
pub fn determinant<T: Real>(a: &[Vec<T>]) -> T {
    let n = a.len();
    let mut m = a.to_vec();
    let mut det = T::one();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        if m[piv][col] == T::zero() {
            return T::zero();
        }
        if piv != col {
            m.swap(col, piv);
            det = -det;
        }
        det *= m[col][col];
        for row in col + 1..n {
            let f = m[row][col] / m[col][col];
            for k in col..n {
                let v = m[col][k];
                m[row][k] -= f * v;
            }
        }
    }
    det
}

/// Inverse by column-wise solves; `None` if singular.
pub fn inverse<T: Real>(a: &[Vec<T>]) -> Option<Vec<Vec<T>>> {
    let n = a.len();
    let mut cols = Vec::with_capacity(n);
    for j in 0..n {
        let mut e = vec![T::zero(); n];
        e[j] = T::one();
        cols.push(solve(a, &e)?);
    }
    Some((0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
}

/// Condition number in the max-row-sum norm; infinite when singular.
pub fn condition_inf<T: Real>(a: &[Vec<T>]) -> T {
    let norm = |m: &[Vec<T>]| {
        m.iter()
            .map(|r| r.iter().map(|v| v.abs()).sum::<T>())
            .fold(T::zero(), T::max)
    };
    match inverse(a) {
        Some(inv) => norm(a) * norm(&inv),
        None => T::infinity(),
    }
}
