//! Bernstein operator on the simplex `{x : x_i >= 0, sum x_i = 1}` in
//! barycentric coordinates.

use crate::error::{QiError, Result};
use crate::linalg::{condition_inf, solve};
use crate::scalar::{factorial, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct BarycentricPoint<T> {
    coords: Vec<T>,
}

impl<T: Real> BarycentricPoint<T> {
    pub fn new(coords: Vec<T>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(QiError::Parameter("simplex points need d >= 2 coordinates".into()));
        }
        for &c in &coords {
            if !c.is_finite() || c < -T::epsilon() {
                return Err(QiError::Domain {
                    x: c.as_f64(),
                    lo: 0.0,
                    hi: 1.0,
                });
            }
        }
        let sum: T = coords.iter().copied().sum();
        if (sum - T::one()).abs() > T::lit(1e3) * T::epsilon() * T::from_usize_lossy(coords.len()) {
            return Err(QiError::Input(format!("barycentric coordinates sum to {sum}, not 1")));
        }
        Ok(BarycentricPoint {
            coords: coords.into_iter().map(|c| c.max(T::zero())).collect(),
        })
    }

    pub fn centroid(d: usize) -> Result<Self> {
        Self::new(vec![T::one() / T::from_usize_lossy(d); d])
    }

    pub fn coords(&self) -> &[T] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_interior(&self) -> bool {
        self.coords.iter().all(|&c| c > T::zero())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiIndex {
    entries: Vec<usize>,
    total: usize,
}

impl MultiIndex {
    pub fn new(entries: Vec<usize>) -> Self {
        let total = entries.iter().sum();
        MultiIndex { entries, total }
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn monomial<T: Real>(&self, x: &[T]) -> T {
        self.entries
            .iter()
            .zip(x)
            .map(|(&e, &xi)| xi.powi(e as i32))
            .fold(T::one(), |a, b| a * b)
    }
}

/// All `i` with `|i| = n` in `d` entries, colexicographic order.
pub fn multi_indices(d: usize, n: usize) -> Vec<MultiIndex> {
    fn rec(pos: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if pos == 0 {
            cur[0] = left;
            out.push(cur.clone());
            return;
        }
        for k in 0..=left {
            cur[pos] = k;
            rec(pos - 1, left - k, cur, out);
        }
    }
    if d == 0 {
        return Vec::new();
    }
    let mut out = Vec::new();
    rec(d - 1, n, &mut vec![0; d], &mut out);
    out.into_iter().map(MultiIndex::new).collect()
}

/// `B_n` on the `(d-1)`-simplex with its enumerated index set.
#[derive(Debug, Clone)]
pub struct SimplexBernstein<T> {
    d: usize,
    n: usize,
    indices: Vec<MultiIndex>,
    multinomial: Vec<T>,
}

impl<T: Real> SimplexBernstein<T> {
    pub fn new(d: usize, n: usize) -> Result<Self> {
        if d < 2 {
            return Err(QiError::Parameter("simplex operator needs d >= 2".into()));
        }
        if n < 1 {
            return Err(QiError::Parameter("degree n must be at least 1".into()));
        }
        let indices = multi_indices(d, n);
        let nf = factorial::<T>(n);
        let multinomial = indices
            .iter()
            .map(|mi| nf / mi.entries().iter().fold(T::one(), |a, &e| a * factorial::<T>(e)))
            .collect();
        Ok(SimplexBernstein {
            d,
            n,
            indices,
            multinomial,
        })
    }

    pub fn indices(&self) -> &[MultiIndex] {
        &self.indices
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    fn check(&self, x: &BarycentricPoint<T>) -> Result<()> {
        if x.dim() != self.d {
            return Err(QiError::Input(format!("point has {} coordinates, operator has d = {}", x.dim(), self.d)));
        }
        Ok(())
    }

    /// Basis values `b_i^(n)(x)` in index order.
    pub fn basis(&self, x: &BarycentricPoint<T>) -> Result<Vec<T>> {
        self.check(x)?;
        Ok(self
            .indices
            .iter()
            .zip(&self.multinomial)
            .map(|(mi, &c)| c * mi.monomial(x.coords()))
            .collect())
    }

    /// Domain point `i / n`.
    pub fn node(&self, k: usize) -> Vec<T> {
        let nf = T::from_usize_lossy(self.n);
        self.indices[k].entries().iter().map(|&e| T::from_usize_lossy(e) / nf).collect()
    }

    pub fn apply<F: Fn(&[T]) -> T>(&self, f: F, x: &BarycentricPoint<T>) -> Result<T> {
        let b = self.basis(x)?;
        let mut acc = T::zero();
        for (k, bk) in b.into_iter().enumerate() {
            let node = self.node(k);
            let v = f(&node);
            if !v.is_finite() {
                return Err(QiError::Evaluation { at: node[0].as_f64() });
            }
            acc += v * bk;
        }
        Ok(acc)
    }

    /// Matrix of `B_n` on homogeneous degree-`n` monomials (a basis of `P_n`
    /// restricted to the simplex), columns are images.
    pub fn action_matrix(&self) -> Result<Vec<Vec<T>>> {
        let size = self.indices.len();
        let nodes: Vec<Vec<T>> = (0..size).map(|k| self.node(k)).collect();
        let vander: Vec<Vec<T>> = nodes
            .iter()
            .map(|y| self.indices.iter().map(|mi| mi.monomial(y)).collect())
            .collect();
        let mut action = vec![vec![T::zero(); size]; size];
        for (q, mq) in self.indices.iter().enumerate() {
            let image: Vec<T> = nodes
                .iter()
                .map(|y| {
                    let p = BarycentricPoint { coords: y.clone() };
                    self.apply(|z| mq.monomial(z), &p)
                })
                .collect::<Result<_>>()?;
            let col = solve(&vander, &image)
                .ok_or_else(|| QiError::Undefined("domain points not unisolvent".into()))?;
            for (p, v) in col.into_iter().enumerate() {
                action[p][q] = v;
            }
        }
        Ok(action)
    }

    pub fn action_condition(&self) -> Result<T> {
        Ok(condition_inf(&self.action_matrix()?))
    }
}

/// Free function form of [`SimplexBernstein::apply`].
pub fn bernstein_simplex<T: Real, F: Fn(&[T]) -> T>(f: F, n: usize, x: &BarycentricPoint<T>) -> Result<T> {
    SimplexBernstein::new(x.dim(), n)?.apply(f, x)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VoronovskajaDefect<T> {
    pub defect: T,
    pub target: T,
}

impl<T: Real> VoronovskajaDefect<T> {
    pub fn gap(&self) -> T {
        (self.defect - self.target).abs()
    }
}

/// `n (B_n f - f)(x)` and `1/2 sum_{i<j} x_i x_j (d_i - d_j)^2 f(x)`, the latter by
/// central differences along `e_i - e_j` with step `1e-4 min(x_i, x_j)`.
pub fn voronovskaja_defect<T: Real, F: Fn(&[T]) -> T>(
    f: F,
    n: usize,
    x: &BarycentricPoint<T>,
) -> Result<VoronovskajaDefect<T>> {
    let c = x.coords();
    if !x.is_interior() {
        return Err(QiError::Domain {
            x: c.iter().copied().fold(T::infinity(), T::min).as_f64(),
            lo: 0.0,
            hi: 1.0,
        });
    }
    let fx = f(c);
    let bn = bernstein_simplex(&f, n, x)?;
    let defect = T::from_usize_lossy(n) * (bn - fx);
    let mut target = T::zero();
    let d = c.len();
    for i in 0..d {
        for j in i + 1..d {
            let h = T::lit(1e-4) * c[i].min(c[j]);
            let mut plus = c.to_vec();
            plus[i] += h;
            plus[j] -= h;
            let mut minus = c.to_vec();
            minus[i] -= h;
            minus[j] += h;
            let second = (f(&plus) - T::lit(2.0) * fx + f(&minus)) / (h * h);
            target += c[i] * c[j] * second;
        }
    }
    Ok(VoronovskajaDefect {
        defect,
        target: target / T::lit(2.0),
    })
}
