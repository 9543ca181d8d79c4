//! Command-line definitions and command handlers.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qi_core::boxspline::{nearbest_norms, Mesh};
use qi_core::lebesgue::GridOptions;
use qi_core::polyops::richardson;
use qi_core::spline::KnotVector;
use qi_core::uniform::{nearbest_uniform, uniform_norm, UniformKind};

use crate::config::Config;
use crate::error::{CliError, Result};
use crate::expr::{self, Expr};
use crate::ops::{grid, simplex_lattice, OperatorSpec};
use crate::output::{num, plot_blocks, study_table, Table};
use crate::study::{parse_ladder, run_study, StudyOptions};

#[derive(Debug, Parser)]
#[command(name = "qi", version, about = "Quasi-interpolation operators: evaluation, norms and convergence studies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// Evaluation or sampling grid size.
    #[arg(long, value_name = "N")]
    pub grid: Option<usize>,
    /// Seed for random partitions (splitmix64).
    #[arg(long, value_name = "S")]
    pub seed: Option<u64>,
    /// Also write gnuplot data blocks to this file.
    #[arg(long, value_name = "FILE")]
    pub plot: Option<PathBuf>,
    /// `key = value` settings; flags take precedence.
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate Qf on a grid: columns x, qf, f, error.
    Apply {
        /// Operator, e.g. `bernstein:n=20`, `q2star:m=3,k=16`, `dqi:order=4,n=2,k=8`, `simplex:d=3,n=6`.
        #[arg(long)]
        op: String,
        #[arg(long)]
        expr: String,
        /// Knot file (`m: k t_0 ... t_{k-1}`) for spline operators.
        #[arg(long, value_name = "FILE")]
        knots: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Estimate the uniform norm of an operator.
    Norm {
        #[arg(long)]
        op: String,
        #[arg(long, value_name = "FILE")]
        knots: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Near-best box-spline QI on a bivariate mesh: nu and the Lebesgue norm.
    Norm2d {
        /// three_dir or four_dir.
        #[arg(long)]
        mesh: String,
        /// Stencil scale (comma-separated list allowed).
        #[arg(long, default_value = "1,2,3")]
        s: String,
        #[command(flatten)]
        common: Common,
    },
    /// Near-best symmetric coefficients of a uniform spline QI.
    Nearbest {
        /// discrete or integral.
        #[arg(long, default_value = "discrete")]
        kind: String,
        /// Even spline order (4 = cubic).
        #[arg(long, default_value_t = 4)]
        order: usize,
        /// Stencil radius.
        #[arg(long)]
        n: usize,
        /// Polynomial exactness degree; defaults to order - 1.
        #[arg(long)]
        exact: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Errors, observed orders and extrapolated values along a parameter ladder.
    Study {
        #[arg(long)]
        op: String,
        #[arg(long)]
        expr: String,
        /// `16,32,64` or doubling range `16..256`; replaces n (or k) in the operator.
        #[arg(long)]
        ladder: String,
        /// Append the Richardson diagonal of the values at `--at`.
        #[arg(long)]
        richardson: bool,
        /// Probe point for values (default: domain midpoint).
        #[arg(long)]
        at: Option<f64>,
        /// Exponents of the error expansion in 1/n (default 1,2,3,...).
        #[arg(long, value_delimiter = ',')]
        exponents: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Richardson extrapolation of given values.
    Extrapolate {
        /// `n:value` pairs separated by commas.
        #[arg(long, conflicts_with = "data")]
        values: Option<String>,
        /// File with one `n value` pair per line.
        #[arg(long, value_name = "FILE")]
        data: Option<PathBuf>,
        #[arg(long, value_delimiter = ',')]
        exponents: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
}

/// Result of a command: CSV for stdout and optional plot data.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub csv: String,
    pub plot: Option<(PathBuf, String)>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

struct Settings {
    grid: Option<usize>,
    seed: u64,
    tolerance: f64,
    norm: GridOptions,
}

fn settings(common: &Common) -> Result<Settings> {
    let cfg = match &common.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    let mut norm = GridOptions::default();
    if let Some(p) = cfg.norm_grid {
        norm.points = p;
    }
    if let Some(r) = cfg.refine {
        norm.refine = r;
    }
    if let Some(i) = cfg.iterations {
        norm.iterations = i;
    }
    Ok(Settings {
        grid: common.grid.or(cfg.grid),
        seed: common.seed.or(cfg.seed).unwrap_or(0),
        tolerance: cfg.tolerance.unwrap_or(1e-12),
        norm: GridOptions {
            points: common.grid.unwrap_or(norm.points),
            ..norm
        },
    })
}

fn plot_out(common: &Common, curves: &[(String, Vec<(f64, f64)>)]) -> Option<(PathBuf, String)> {
    common.plot.as_ref().map(|p| (p.clone(), plot_blocks(curves)))
}

fn load_knots(path: Option<&PathBuf>) -> Result<Option<KnotVector<f64>>> {
    path.map(|p| Ok(read(p)?.trim().parse::<KnotVector<f64>>()?)).transpose()
}

pub fn run(cli: Cli) -> Result<Output> {
    match cli.command {
        Command::Apply { op, expr, knots, common } => apply(&op, &expr, knots.as_ref(), &common),
        Command::Norm { op, knots, common } => norm(&op, knots.as_ref(), &common),
        Command::Norm2d { mesh, s, common } => norm2d(&mesh, &s, &common),
        Command::Nearbest { kind, order, n, exact, common } => nearbest(&kind, order, n, exact, &common),
        Command::Study { op, expr, ladder, richardson, at, exponents, common } => {
            let st = settings(&common)?;
            let spec: OperatorSpec = op.parse()?;
            let e = expr::parse(&expr)?;
            let opts = StudyOptions {
                grid: st.grid.unwrap_or(1000),
                seed: st.seed,
                at,
                richardson,
                exponents,
                tolerance: st.tolerance,
            };
            let rep = run_study(&spec, &e, &parse_ladder(&ladder)?, &opts)?;
            let curves = vec![(
                format!("{} error vs param", rep.operator),
                rep.rows.iter().map(|r| (r.param as f64, r.error)).collect(),
            )];
            Ok(Output {
                csv: study_table(&rep).to_csv(),
                plot: plot_out(&common, &curves),
            })
        }
        Command::Extrapolate { values, data, exponents, common } => {
            let pairs = match (values, data) {
                (Some(v), None) => parse_pairs(&v, ',', ':')?,
                (None, Some(p)) => parse_pairs(&read(&p)?, '\n', ' ')?,
                _ => return Err(CliError::Usage("give exactly one of --values or --data".into())),
            };
            let exps = exponents.unwrap_or_else(|| (1..pairs.len()).map(|k| k as f64).collect());
            let tab = richardson(&pairs, &exps)?;
            let mut t = Table::new(&["n", "value", "extrapolated"]);
            for ((n, v), d) in pairs.iter().zip(tab.diagonal()) {
                t.push(vec![num(*n), num(*v), num(d)]);
            }
            let curves = vec![("extrapolated".to_string(), pairs.iter().map(|p| p.0).zip(tab.diagonal()).collect())];
            Ok(Output {
                csv: t.to_csv(),
                plot: plot_out(&common, &curves),
            })
        }
    }
}

/// Pairs `n<sep>value` split by `outer`; blank lines and `#` comments are skipped.
fn parse_pairs(text: &str, outer: char, inner: char) -> Result<Vec<(f64, f64)>> {
    text.split(outer)
        .map(|s| s.split('#').next().unwrap_or("").trim())
        .filter(|s| !s.is_empty())
        .map(|item| {
            let mut it = item.split(|c: char| c == inner || c.is_whitespace() || c == ',').filter(|t| !t.is_empty());
            let bad = || CliError::Usage(format!("bad pair '{item}', expected n{inner}value"));
            let n = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            let v = it.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if it.next().is_some() {
                return Err(bad());
            }
            Ok((n, v))
        })
        .collect()
}

fn apply(op: &str, expr: &str, knots: Option<&PathBuf>, common: &Common) -> Result<Output> {
    let st = settings(common)?;
    let spec: OperatorSpec = op.parse()?;
    let e: Expr = expr::parse(expr)?;
    let kv = load_knots(knots)?;
    let operator = spec.build(kv.as_ref(), st.seed)?;
    let n = st.grid.unwrap_or(100);
    if let Some(d) = operator.simplex_dim() {
        let pts = simplex_lattice(d, n);
        let q = operator.apply_simplex(&e, &pts)?;
        let mut header: Vec<String> = (1..=d).map(|k| format!("x{k}")).collect();
        header.extend(["qf", "f", "error"].map(String::from));
        let mut t = Table { header, rows: vec![] };
        for (c, v) in pts.iter().zip(q) {
            let f = e.eval(f64::NAN, c);
            let mut row: Vec<String> = c.iter().map(|&v| num(v)).collect();
            row.extend([num(v), num(f), num((v - f).abs())]);
            t.push(row);
        }
        return Ok(Output { csv: t.to_csv(), plot: None });
    }
    let (a, b) = operator.domain()?;
    let xs = grid(a, b, n);
    let q = operator.apply_grid(&e, &xs)?;
    let mut t = Table::new(&["x", "qf", "f", "error"]);
    for (&x, &v) in xs.iter().zip(&q) {
        let f = e.eval_x(x);
        t.push(vec![num(x), num(v), num(f), num((v - f).abs())]);
    }
    let curves = vec![
        ("qf".to_string(), xs.iter().copied().zip(q.iter().copied()).collect()),
        ("f".to_string(), xs.iter().map(|&x| (x, e.eval_x(x))).collect()),
    ];
    Ok(Output {
        csv: t.to_csv(),
        plot: plot_out(common, &curves),
    })
}

fn norm(op: &str, knots: Option<&PathBuf>, common: &Common) -> Result<Output> {
    let st = settings(common)?;
    let spec: OperatorSpec = op.parse()?;
    let kv = load_knots(knots)?;
    let operator = spec.build(kv.as_ref(), st.seed)?;
    let rep = operator.norm(st.norm)?;
    let mut header = vec!["operator", "seed", "norm", "argmax"];
    header.extend(rep.extra.iter().map(|e| e.0));
    let mut t = Table::new(&header);
    let mut row = vec![spec.to_string(), st.seed.to_string(), num(rep.value), num(rep.argmax)];
    row.extend(rep.extra.iter().map(|e| num(e.1)));
    t.push(row);
    let plot = match &common.plot {
        Some(_) => {
            let (a, b) = operator.domain()?;
            let xs = grid(a, b, 1000);
            let ys = operator.lebesgue_curve(&xs)?;
            plot_out(common, &[(format!("{spec} Lebesgue function"), xs.into_iter().zip(ys).collect())])
        }
        None => None,
    };
    Ok(Output { csv: t.to_csv(), plot })
}

fn norm2d(mesh: &str, s: &str, common: &Common) -> Result<Output> {
    let st = settings(common)?;
    let mesh: Mesh = mesh.parse()?;
    let scales: Vec<usize> = s
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::Usage(format!("bad scale '{t}'"))))
        .collect::<Result<_>>()?;
    // the 2d grid is points x points; keep the default modest
    let opts = GridOptions {
        points: common.grid.unwrap_or(96),
        ..st.norm
    };
    let mut t = Table::new(&["mesh", "s", "nu", "lebesgue", "argmax_x", "argmax_y"]);
    for s in scales {
        let (nu, est) = nearbest_norms::<f64>(mesh, s, opts)?;
        t.push(vec![
            mesh.to_string(),
            s.to_string(),
            num(nu),
            num(est.value),
            num(est.argmax.0),
            num(est.argmax.1),
        ]);
    }
    Ok(Output { csv: t.to_csv(), plot: None })
}

fn nearbest(kind: &str, order: usize, n: usize, exact: Option<usize>, common: &Common) -> Result<Output> {
    let st = settings(common)?;
    let kind: UniformKind = kind.parse()?;
    if order < 2 || !order.is_multiple_of(2) {
        return Err(CliError::Usage(format!("order must be even and >= 2, got {order}")));
    }
    let r = exact.unwrap_or(order - 1);
    let c = nearbest_uniform::<f64>(kind, order / 2, n, r)?;
    let est = uniform_norm(&c, st.norm)?;
    let mut header: Vec<String> = ["kind", "order", "n", "exact", "nu", "lebesgue", "kernel_norm", "alternative_optima"]
        .map(String::from)
        .to_vec();
    header.extend((0..=n).map(|j| format!("a_{j}")));
    let mut row = vec![
        kind.to_string(),
        order.to_string(),
        n.to_string(),
        r.to_string(),
        num(est.nu),
        num(est.lebesgue.value),
        est.kernel_norm.map(|k| num(k.value)).unwrap_or_default(),
        c.alternative_optima.to_string(),
    ];
    row.extend(c.a.iter().map(|&v| num(v)));
    let mut t = Table { header, rows: vec![] };
    t.push(row);
    let plot = match &common.plot {
        Some(_) => {
            let xs = grid(0.0, 1.0, 1000);
            let pts = xs.iter().map(|&x| (x, qi_core::uniform::uniform_lebesgue_function(&c, x))).collect();
            plot_out(common, &[("Lebesgue function".to_string(), pts)])
        }
        None => None,
    };
    Ok(Output { csv: t.to_csv(), plot })
}

/// Single-line rendering of an error, for the diagnostic stream.
pub fn one_line(msg: &str) -> String {
    msg.split_whitespace().collect::<Vec<_>>().join(" ")
}
