use std::fmt;
use std::str::FromStr;

use crate::error::{QiError, Result};
use crate::scalar::Real;

/// Non-decreasing knot sequence together with a spline degree.
///
/// The active domain is `[t_m, t_{N-m}]` where `N + 1` is the number of knots.
#[derive(Debug, Clone, PartialEq)]
pub struct KnotVector<T> {
    knots: Vec<T>,
    degree: usize,
}

impl<T: Real> KnotVector<T> {
    pub fn new(knots: Vec<T>, degree: usize) -> Result<Self> {
        if knots.len() < degree + 2 {
            return Err(QiError::InvalidKnots(format!(
                "degree {degree} needs at least {} knots, got {}",
                degree + 2,
                knots.len()
            )));
        }
        if knots.iter().any(|t| !t.is_finite()) {
            return Err(QiError::InvalidKnots("non-finite knot".into()));
        }
        if knots.windows(2).any(|w| w[1] < w[0]) {
            return Err(QiError::InvalidKnots("knots must be non-decreasing".into()));
        }
        let mut run = 1;
        for w in knots.windows(2) {
            run = if w[1] == w[0] { run + 1 } else { 1 };
            if run > degree + 1 {
                return Err(QiError::InvalidKnots(format!(
                    "knot {} has multiplicity above {}",
                    w[0],
                    degree + 1
                )));
            }
        }
        let kv = KnotVector { knots, degree };
        let (lo, hi) = kv.domain();
        if !(lo < hi) {
            return Err(QiError::InvalidKnots("empty active domain".into()));
        }
        Ok(kv)
    }

    /// Clamped knots (end multiplicity `m + 1`) over the given strictly increasing breakpoints.
    pub fn clamped(degree: usize, breakpoints: &[T]) -> Result<Self> {
        if breakpoints.len() < 2 {
            return Err(QiError::InvalidKnots("need at least two breakpoints".into()));
        }
        if breakpoints.windows(2).any(|w| w[1] <= w[0]) {
            return Err(QiError::InvalidKnots("breakpoints must be strictly increasing".into()));
        }
        let first = breakpoints[0];
        let last = *breakpoints.last().unwrap();
        let mut knots = vec![first; degree];
        knots.extend_from_slice(breakpoints);
        knots.extend(std::iter::repeat_n(last, degree));
        Self::new(knots, degree)
    }

    /// Clamped knots on `[a, b]` with `intervals` equal spans.
    pub fn clamped_uniform(degree: usize, intervals: usize, a: T, b: T) -> Result<Self> {
        if intervals == 0 {
            return Err(QiError::InvalidKnots("need at least one interval".into()));
        }
        let h = (b - a) / T::from_usize_lossy(intervals);
        let bps: Vec<T> = (0..=intervals)
            .map(|k| if k == intervals { b } else { a + h * T::from_usize_lossy(k) })
            .collect();
        Self::clamped(degree, &bps)
    }

    /// Integer knots `first, first+1, ..., first+count-1`.
    pub fn uniform_integer(degree: usize, first: i64, count: usize) -> Result<Self> {
        let knots = (0..count)
            .map(|k| T::from_i64(first + k as i64).expect("integer knot"))
            .collect();
        Self::new(knots, degree)
    }

    pub fn knots(&self) -> &[T] {
        &self.knots
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn num_basis(&self) -> usize {
        self.knots.len() - self.degree - 1
    }

    pub fn domain(&self) -> (T, T) {
        let m = self.degree;
        (self.knots[m], self.knots[self.knots.len() - 1 - m])
    }

    /// Support `[t_i, t_{i+m+1}]` of `B_i`.
    pub fn support(&self, i: usize) -> (T, T) {
        (self.knots[i], self.knots[i + self.degree + 1])
    }

    /// The `m` knots strictly inside the support of `B_i` (by index).
    pub fn interior_knots(&self, i: usize) -> &[T] {
        &self.knots[i + 1..i + self.degree + 1]
    }

    pub(crate) fn check_index(&self, i: usize) -> Result<()> {
        if i >= self.num_basis() {
            return Err(QiError::Parameter(format!(
                "basis index {i} out of range 0..{}",
                self.num_basis()
            )));
        }
        Ok(())
    }

    /// Index `k` of the span `[t_k, t_{k+1})` containing `x`, with `m <= k <= N-m-1`.
    /// The right domain end maps to the last non-empty span.
    pub fn span(&self, x: T) -> Result<usize> {
        let (lo, hi) = self.domain();
        if !(x >= lo && x <= hi) {
            return Err(QiError::Domain {
                x: x.as_f64(),
                lo: lo.as_f64(),
                hi: hi.as_f64(),
            });
        }
        let m = self.degree;
        let last = self.knots.len() - 2 - m;
        if x >= hi {
            let mut k = last;
            while self.knots[k] >= self.knots[k + 1] {
                k -= 1;
            }
            return Ok(k);
        }
        // largest k in [m, last] with t_k <= x
        let slice = &self.knots[m..=last];
        let pos = slice.partition_point(|&t| t <= x);
        Ok(m + pos - 1)
    }

    /// Distinct knot values inside the domain, including both ends.
    pub fn breakpoints(&self) -> Vec<T> {
        let (lo, hi) = self.domain();
        let mut out: Vec<T> = Vec::new();
        for &t in &self.knots {
            if t >= lo && t <= hi && out.last().is_none_or(|&l| t > l) {
                out.push(t);
            }
        }
        out
    }
}

/// Text form `"m: k t_0 t_1 ... t_{k-1}"`: degree, knot count, then the knots.
impl<T: Real> fmt::Display for KnotVector<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.degree, self.knots.len())?;
        for t in &self.knots {
            write!(f, " {t}")?;
        }
        Ok(())
    }
}

impl<T: Real + FromStr> FromStr for KnotVector<T> {
    type Err = QiError;

    fn from_str(s: &str) -> Result<Self> {
        let line = s.trim();
        let (head, rest) = line
            .split_once(':')
            .ok_or_else(|| QiError::Parse("expected 'm: k t_0 ... t_{k-1}'".into()))?;
        let degree: usize = head
            .trim()
            .parse()
            .map_err(|_| QiError::Parse(format!("bad degree '{}'", head.trim())))?;
        let mut tokens = rest.split_whitespace();
        let count: usize = tokens
            .next()
            .ok_or_else(|| QiError::Parse("missing knot count".into()))?
            .parse()
            .map_err(|_| QiError::Parse("bad knot count".into()))?;
        let knots = tokens
            .map(|tok| {
                tok.parse::<T>()
                    .map_err(|_| QiError::Parse(format!("bad knot '{tok}'")))
            })
            .collect::<Result<Vec<T>>>()?;
        if knots.len() != count {
            return Err(QiError::Parse(format!(
                "declared {count} knots, found {}",
                knots.len()
            )));
        }
        KnotVector::new(knots, degree)
    }
}
