//! Portable splitmix64 generator and random knot partitions.
//!
//! `next_u64`: `s += 0x9E3779B97F4A7C15; z = s;`
//! `z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9; z = (z ^ (z >> 27)) * 0x94D049BB133111EB;`
//! return `z ^ (z >> 31)` (wrapping arithmetic). `next_f64` keeps the top 53 bits.

use crate::error::{QiError, Result};
use crate::scalar::Real;
use crate::spline::KnotVector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform in `0..n`; `n` must be positive.
    pub fn below(&mut self, n: usize) -> usize {
        ((self.next_f64() * n as f64) as usize).min(n - 1)
    }
}

/// Breakpoints `a = x_0 < ... < x_k = b` whose gaps are log-uniform with
/// largest/smallest ratio exactly `max_ratio` when `k >= 2`.
pub fn random_breakpoints<T: Real>(rng: &mut SplitMix64, intervals: usize, a: T, b: T, max_ratio: f64) -> Result<Vec<T>> {
    if intervals == 0 || !(b > a) || !(max_ratio >= 1.0) {
        return Err(QiError::Parameter("need intervals >= 1, a < b and max_ratio >= 1".into()));
    }
    let mut u: Vec<f64> = (0..intervals).map(|_| rng.next_f64()).collect();
    if intervals >= 2 {
        let lo = rng.below(intervals);
        let hi = (lo + 1 + rng.below(intervals - 1)) % intervals;
        u[lo] = 0.0;
        u[hi] = 1.0;
    }
    let gaps: Vec<f64> = u.iter().map(|&v| max_ratio.powf(v)).collect();
    let total: f64 = gaps.iter().sum();
    let mut out = Vec::with_capacity(intervals + 1);
    let mut acc = 0.0;
    out.push(a);
    for g in &gaps[..intervals - 1] {
        acc += g / total;
        out.push(a + (b - a) * T::lit(acc));
    }
    out.push(b);
    Ok(out)
}

/// Clamped knot vector of the given degree on `[0, 1]` over a random partition.
pub fn random_clamped<T: Real>(rng: &mut SplitMix64, degree: usize, intervals: usize, max_ratio: f64) -> Result<KnotVector<T>> {
    let bp = random_breakpoints(rng, intervals, T::zero(), T::one(), max_ratio)?;
    KnotVector::clamped(degree, &bp)
}
