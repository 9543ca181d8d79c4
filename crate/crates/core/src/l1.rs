//! Minimum-ℓ1 solutions of underdetermined linear systems.
//!
//! `min ||λ||_1  s.t.  V λ = b` is solved as the linear program
//! `min 1ᵀ(u + v)  s.t.  V u - V v = b,  u, v >= 0` with a dense two-phase
//! simplex method under Bland's rule. Rows are normalized to unit max-norm
//! before pivoting, so a rescaled problem follows the same pivot sequence.

use crate::error::{QiError, Result};
use crate::linalg::rank;
use crate::scalar::Real;

/// Dense equality-constrained minimum-ℓ1 problem.
#[derive(Debug, Clone, PartialEq)]
pub struct L1Problem<T> {
    matrix: Vec<Vec<T>>,
    rhs: Vec<T>,
}

impl<T: Real> L1Problem<T> {
    pub fn new(matrix: Vec<Vec<T>>, rhs: Vec<T>) -> Result<Self> {
        let rows = matrix.len();
        if rows == 0 {
            return Err(QiError::Input("constraint matrix has no rows".into()));
        }
        let cols = matrix[0].len();
        if matrix.iter().any(|r| r.len() != cols) {
            return Err(QiError::Input("ragged constraint matrix".into()));
        }
        if rhs.len() != rows {
            return Err(QiError::Input(format!(
                "rhs has {} entries for {rows} rows",
                rhs.len()
            )));
        }
        if rows > cols {
            return Err(QiError::Input(format!(
                "{rows} constraints exceed {cols} unknowns"
            )));
        }
        if matrix.iter().flatten().chain(&rhs).any(|v| !v.is_finite()) {
            return Err(QiError::Input("non-finite problem data".into()));
        }
        let r = rank(&matrix);
        if r < rows {
            return Err(QiError::RankDeficient { rank: r, rows });
        }
        Ok(L1Problem { matrix, rhs })
    }

    pub fn rows(&self) -> usize {
        self.matrix.len()
    }

    pub fn cols(&self) -> usize {
        self.matrix[0].len()
    }

    pub fn matrix(&self) -> &[Vec<T>] {
        &self.matrix
    }

    pub fn rhs(&self) -> &[T] {
        &self.rhs
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct L1Solution<T> {
    pub lambda: Vec<T>,
    pub norm1: T,
    /// A zero-reduced-cost direction leaves the optimum along a nontrivial edge.
    pub alternative_optima: bool,
    /// Dual certificate `y`: `|Vᵀy| <= 1` componentwise and `bᵀy = norm1`.
    pub dual: Vec<T>,
}

impl<T: Real> L1Solution<T> {
    /// `|primal - bᵀy|` for the stored certificate.
    pub fn duality_gap(&self, problem: &L1Problem<T>) -> T {
        let dual_obj: T = problem.rhs.iter().zip(&self.dual).map(|(&b, &y)| b * y).sum();
        (self.norm1 - dual_obj).abs()
    }

    /// Largest violation of `|V_jᵀ y| <= 1` (zero when feasible).
    pub fn dual_infeasibility(&self, problem: &L1Problem<T>) -> T {
        (0..problem.cols())
            .map(|j| {
                let s: T = (0..problem.rows()).map(|i| problem.matrix[i][j] * self.dual[i]).sum();
                (s.abs() - T::one()).max(T::zero())
            })
            .fold(T::zero(), T::max)
    }
}

struct Tableau<T> {
    /// rows × (ncols + 1); last column is the rhs.
    t: Vec<Vec<T>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl<T: Real> Tableau<T> {
    fn rhs(&self, i: usize) -> T {
        self.t[i][self.ncols]
    }

    fn pivot(&mut self, row: usize, col: usize) {
        let p = self.t[row][col];
        for v in self.t[row].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.t[row].clone();
        for (i, r) in self.t.iter_mut().enumerate() {
            if i == row {
                continue;
            }
            let f = r[col];
            if f != T::zero() {
                for (v, &pv) in r.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                r[col] = T::zero();
            }
        }
        self.basis[row] = col;
    }

    fn reduced_costs(&self, cost: &[T], active: usize) -> Vec<T> {
        (0..active)
            .map(|j| {
                let z: T = self
                    .basis
                    .iter()
                    .enumerate()
                    .map(|(i, &b)| cost[b] * self.t[i][j])
                    .sum();
                cost[j] - z
            })
            .collect()
    }

    /// Bland's ratio test: minimum ratio, ties broken by smallest basic index.
    fn leaving_row(&self, col: usize, tol: T) -> Option<usize> {
        let mut best: Option<(usize, T)> = None;
        for i in 0..self.t.len() {
            let a = self.t[i][col];
            if a <= tol {
                continue;
            }
            let ratio = self.rhs(i).max(T::zero()) / a;
            best = match best {
                None => Some((i, ratio)),
                Some((bi, br)) => {
                    let tie = (ratio - br).abs() <= tol * (T::one() + br.abs());
                    if (tie && self.basis[i] < self.basis[bi]) || (!tie && ratio < br) {
                        Some((i, ratio))
                    } else {
                        Some((bi, br))
                    }
                }
            };
        }
        best.map(|b| b.0)
    }

    /// Runs Bland-rule simplex over columns `0..active`; returns false on unboundedness.
    fn optimize(&mut self, cost: &[T], active: usize, tol: T) -> bool {
        let limit = 50_000;
        for _ in 0..limit {
            let d = self.reduced_costs(cost, active);
            let entering = (0..active).find(|&j| d[j] < -tol && !self.basis.contains(&j));
            let Some(col) = entering else {
                return true;
            };
            match self.leaving_row(col, tol) {
                Some(row) => self.pivot(row, col),
                None => return false,
            }
        }
        true
    }
}

/// Minimum-ℓ1 solution of `V λ = b`.
pub fn solve_min_l1<T: Real>(problem: &L1Problem<T>) -> Result<L1Solution<T>> {
    let m = problem.rows();
    let n = problem.cols();
    let tol = T::tol();

    // row normalization and sign flip so that rhs >= 0
    let mut scale = vec![T::one(); m];
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m);
    for i in 0..m {
        let s = problem.matrix[i].iter().fold(T::zero(), |acc, v| acc.max(v.abs()));
        let mut s = T::one() / s;
        if problem.rhs[i] < T::zero() {
            s = -s;
        }
        scale[i] = s;
        let mut row = Vec::with_capacity(2 * n + m + 1);
        row.extend(problem.matrix[i].iter().map(|&v| v * s));
        row.extend(problem.matrix[i].iter().map(|&v| -v * s));
        row.extend((0..m).map(|k| if k == i { T::one() } else { T::zero() }));
        row.push(problem.rhs[i] * s);
        rows.push(row);
    }
    let ncols = 2 * n + m;
    let mut tab = Tableau {
        t: rows,
        basis: (2 * n..ncols).collect(),
        ncols,
    };

    // phase 1
    let phase1: Vec<T> = (0..ncols).map(|j| if j >= 2 * n { T::one() } else { T::zero() }).collect();
    tab.optimize(&phase1, ncols, tol);
    let infeas: T = (0..m).filter(|&i| tab.basis[i] >= 2 * n).map(|i| tab.rhs(i)).sum();
    if infeas > tol * T::lit(10.0) {
        return Err(QiError::Infeasible(format!("phase one residual {infeas}")));
    }
    // drive artificial variables out of the basis
    for i in 0..m {
        if tab.basis[i] >= 2 * n {
            let col = (0..2 * n)
                .filter(|j| !tab.basis.contains(j))
                .find(|&j| tab.t[i][j].abs() > tol);
            match col {
                Some(j) => tab.pivot(i, j),
                None => return Err(QiError::RankDeficient { rank: m - 1, rows: m }),
            }
        }
    }

    // phase 2 over the split variables only
    let mut cost = vec![T::one(); 2 * n];
    cost.extend(std::iter::repeat_n(T::zero(), m));
    if !tab.optimize(&cost, 2 * n, tol) {
        return Err(QiError::Infeasible("unbounded objective".into()));
    }

    let mut z = vec![T::zero(); 2 * n];
    for (i, &b) in tab.basis.iter().enumerate() {
        if b < 2 * n {
            z[b] = tab.rhs(i).max(T::zero());
        }
    }
    let lambda: Vec<T> = (0..n).map(|j| z[j] - z[n + j]).collect();
    let norm1 = lambda.iter().map(|v| v.abs()).sum();

    // y = c_Bᵀ B⁻¹; B⁻¹ sits in the artificial columns
    let dual: Vec<T> = (0..m)
        .map(|k| {
            let yk: T = tab
                .basis
                .iter()
                .enumerate()
                .map(|(i, &b)| cost[b] * tab.t[i][2 * n + k])
                .sum();
            yk * scale[k]
        })
        .collect();

    let d = tab.reduced_costs(&cost, 2 * n);
    let alternative_optima = (0..2 * n)
        .filter(|j| !tab.basis.contains(j) && d[*j].abs() <= tol)
        .any(|j| match tab.leaving_row(j, tol) {
            None => true,
            Some(row) => tab.rhs(row) / tab.t[row][j] > tol,
        });

    Ok(L1Solution {
        lambda,
        norm1,
        alternative_optima,
        dual,
    })
}
