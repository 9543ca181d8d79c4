//! Lebesgue functions of sampling operators `Qf(x) = sum_i c_i(x) f(x_i)`.
//!
//! The norm `max_x sum_i |c_i(x)|` is estimated on a grid that is split across
//! the operator's breakpoints, followed by golden-section refinement around the
//! largest samples. The result is a lower bound of the true maximum.

use crate::error::{QiError, Result};
use crate::scalar::Real;

pub trait CardinalOperator<T: Real> {
    fn domain(&self) -> (T, T);

    /// Points where the Lebesgue function may have kinks; must include the domain ends.
    fn breakpoints(&self) -> Vec<T> {
        let (a, b) = self.domain();
        vec![a, b]
    }

    /// Coefficients `c_i(x)` merged per sample node.
    fn cardinal_weights(&self, x: T) -> Result<Vec<T>>;

    fn lebesgue_function(&self, x: T) -> Result<T> {
        Ok(self.cardinal_weights(x)?.into_iter().map(|c| c.abs()).sum())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridOptions {
    pub points: usize,
    /// Number of top samples refined by golden-section search.
    pub refine: usize,
    pub iterations: usize,
    pub min_per_piece: usize,
}

impl Default for GridOptions {
    fn default() -> Self {
        GridOptions {
            points: 4096,
            refine: 8,
            iterations: 60,
            min_per_piece: 8,
        }
    }
}

impl GridOptions {
    pub fn with_points(points: usize) -> Self {
        GridOptions {
            points,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LebesgueEstimate<T> {
    pub value: T,
    pub argmax: T,
    pub samples: usize,
    pub refined: usize,
}

/// Grid-maximized Lebesgue function.
pub fn lebesgue_norm<T: Real, O: CardinalOperator<T> + ?Sized>(
    op: &O,
    opts: GridOptions,
) -> Result<LebesgueEstimate<T>> {
    maximize(|x| op.lebesgue_function(x), &op.breakpoints(), opts)
}

/// Maximizes a piecewise-smooth function sampled on `breakpoints` pieces.
pub fn maximize<T: Real, F: Fn(T) -> Result<T>>(
    f: F,
    breakpoints: &[T],
    opts: GridOptions,
) -> Result<LebesgueEstimate<T>> {
    if breakpoints.len() < 2 {
        return Err(QiError::Input("need at least two breakpoints".into()));
    }
    let lo = breakpoints[0];
    let hi = *breakpoints.last().unwrap();
    let total = hi - lo;
    let mut samples: Vec<(T, T, T, T)> = Vec::new(); // (x, value, piece_lo, piece_hi)
    for w in breakpoints.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let share = ((b - a) / total * T::from_usize_lossy(opts.points)).to_usize().unwrap_or(0);
        let k = share.max(opts.min_per_piece).max(2);
        for s in 0..=k {
            let x = if s == k { b } else { a + (b - a) * T::from_usize_lossy(s) / T::from_usize_lossy(k) };
            samples.push((x, f(x)?, a, b));
        }
    }
    let count = samples.len();
    let mut best_idx = 0;
    for (i, s) in samples.iter().enumerate() {
        if s.1 > samples[best_idx].1 {
            best_idx = i;
        }
    }
    let mut best = (samples[best_idx].0, samples[best_idx].1);

    // local maxima ranked by value
    let mut candidates: Vec<usize> = (0..count)
        .filter(|&i| {
            let v = samples[i].1;
            (i == 0 || samples[i - 1].1 <= v) && (i + 1 == count || samples[i + 1].1 <= v)
        })
        .collect();
    candidates.sort_by(|&a, &b| samples[b].1.partial_cmp(&samples[a].1).unwrap());
    candidates.truncate(opts.refine);
    let refined = candidates.len();
    let phi = T::lit(0.618_033_988_749_894_8);
    for &i in &candidates {
        let (x, _, pa, pb) = samples[i];
        let left = if i > 0 && samples[i - 1].2 == pa { samples[i - 1].0 } else { x };
        let right = if i + 1 < count && samples[i + 1].2 == pa { samples[i + 1].0 } else { x };
        let (mut a, mut b) = (left.max(pa), right.min(pb));
        if b <= a {
            continue;
        }
        let mut c = b - phi * (b - a);
        let mut d = a + phi * (b - a);
        let mut fc = f(c)?;
        let mut fd = f(d)?;
        for _ in 0..opts.iterations {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - phi * (b - a);
                fc = f(c)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + phi * (b - a);
                fd = f(d)?;
            }
        }
        for (xx, vv) in [(c, fc), (d, fd)] {
            if vv > best.1 {
                best = (xx, vv);
            }
        }
    }
    Ok(LebesgueEstimate {
        value: best.1,
        argmax: best.0,
        samples: count,
        refined,
    })
}
