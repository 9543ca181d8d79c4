//! Convergence studies over a parameter ladder.

use qi_core::polyops::richardson;
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::expr::Expr;
use crate::ops::{grid, simplex_lattice, OperatorSpec};

#[derive(Debug, Clone, PartialEq)]
pub struct StudyRow {
    /// Operator spec with the ladder value substituted.
    pub operator: String,
    pub param: usize,
    /// Max error over the evaluation grid.
    pub error: f64,
    /// `log(e_prev/e)/log(p/p_prev)`; `None` on the first row or when fewer than three rows exist.
    pub order: Option<f64>,
    /// Both errors of the pair were below the tolerance.
    pub exact: bool,
    /// `Qf` at the probe point.
    pub value: f64,
    /// Richardson diagonal entry using rows `0..=k`.
    pub extrapolated: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyReport {
    /// Operator spec as given, before ladder substitution.
    pub operator: String,
    pub expr: String,
    pub grid: usize,
    pub seed: u64,
    /// Probe point for the value and extrapolation columns.
    pub at: f64,
    pub exact_value: f64,
    pub rows: Vec<StudyRow>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StudyOptions {
    pub grid: usize,
    pub seed: u64,
    pub at: Option<f64>,
    pub richardson: bool,
    /// Expansion exponents in `1/n`; defaults to `1, 2, 3, ...`.
    pub exponents: Option<Vec<f64>>,
    pub tolerance: f64,
}

impl Default for StudyOptions {
    fn default() -> Self {
        StudyOptions {
            grid: 1000,
            seed: 0,
            at: None,
            richardson: false,
            exponents: None,
            tolerance: 1e-12,
        }
    }
}

/// Parses `16,32,64` or the doubling shorthand `16..256`.
pub fn parse_ladder(text: &str) -> Result<Vec<usize>> {
    let bad = || CliError::Usage(format!("bad ladder '{text}'"));
    let ladder: Vec<usize> = if let Some((a, b)) = text.split_once("..") {
        let (mut p, end): (usize, usize) = (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?);
        if p == 0 {
            return Err(bad());
        }
        let mut out = vec![];
        while p <= end {
            out.push(p);
            p *= 2;
        }
        out
    } else {
        text.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?
    };
    if ladder.is_empty() || ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage(format!("ladder '{text}' must be non-empty and strictly increasing")));
    }
    Ok(ladder)
}

pub fn run_study(spec: &OperatorSpec, expr: &Expr, ladder: &[usize], opts: &StudyOptions) -> Result<StudyReport> {
    if ladder.is_empty() || ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(CliError::Usage("ladder must be non-empty and strictly increasing".into()));
    }
    let simplex = spec.build(None, opts.seed).ok().and_then(|op| op.simplex_dim());
    // Each entry is independent; collect keeps ladder order.
    let evals: Vec<(f64, f64, f64)> = ladder
        .par_iter()
        .map(|&p| {
            let op = spec.with_param(p).build(None, opts.seed)?;
            if let Some(d) = simplex.or(op.simplex_dim()) {
                let pts = simplex_lattice(d, opts.grid.max(1));
                let q = op.apply_simplex(expr, &pts)?;
                let err = pts
                    .iter()
                    .zip(&q)
                    .map(|(c, v)| (v - expr.eval(f64::NAN, c)).abs())
                    .fold(0.0, f64::max);
                let at = vec![1.0 / d as f64; d];
                let val = op.apply_simplex(expr, std::slice::from_ref(&at))?[0];
                return Ok((err, val, expr.eval(f64::NAN, &at)));
            }
            let (a, b) = op.domain()?;
            let xs = grid(a, b, opts.grid);
            let q = op.apply_grid(expr, &xs)?;
            let err = xs.iter().zip(&q).map(|(&x, v)| (v - expr.eval_x(x)).abs()).fold(0.0, f64::max);
            let at = opts.at.unwrap_or(0.5 * (a + b));
            if !(a..=b).contains(&at) {
                return Err(CliError::Usage(format!("probe point {at} lies outside [{a}, {b}]")));
            }
            let val = op.apply_grid(expr, &[at])?[0];
            Ok((err, val, expr.eval_x(at)))
        })
        .collect::<Result<_>>()?;

    let with_order = ladder.len() >= 3;
    let mut rows: Vec<StudyRow> = Vec::with_capacity(ladder.len());
    for (k, (&p, &(error, value, _))) in ladder.iter().zip(&evals).enumerate() {
        let mut order = None;
        let mut exact = error < opts.tolerance;
        if k > 0 && with_order {
            let (p0, e0) = (ladder[k - 1] as f64, evals[k - 1].0);
            exact = exact && e0 < opts.tolerance;
            if !exact {
                order = Some((e0 / error).ln() / (p as f64 / p0).ln());
            }
        }
        rows.push(StudyRow {
            operator: spec.with_param(p).to_string(),
            param: p,
            error,
            order,
            exact,
            value,
            extrapolated: None,
        });
    }
    if opts.richardson && ladder.len() >= 2 {
        let values: Vec<(f64, f64)> = ladder.iter().zip(&evals).map(|(&p, e)| (p as f64, e.1)).collect();
        let exps = opts
            .exponents
            .clone()
            .unwrap_or_else(|| (1..ladder.len()).map(|k| k as f64).collect());
        let tab = richardson(&values, &exps)?;
        for (row, d) in rows.iter_mut().zip(tab.diagonal()) {
            row.extrapolated = Some(d);
        }
    }
    Ok(StudyReport {
        operator: spec.to_string(),
        expr: expr.to_string(),
        grid: opts.grid,
        seed: opts.seed,
        at: opts.at.unwrap_or(f64::NAN),
        exact_value: evals[0].2,
        rows,
    })
}
