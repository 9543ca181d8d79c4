//! Operator specs (`name:key=value,...`) and dispatch to the library.

use std::fmt;
use std::str::FromStr;

use qi_core::lebesgue::{lebesgue_norm, CardinalOperator, GridOptions};
use qi_core::nonuniform::{GoodmanSharma, GsOrder, NearBestDqi, Q2Star};
use qi_core::polyops::{right_bqi_apply, PolyKind, PolynomialOperator};
use qi_core::rng::{random_clamped, SplitMix64};
use qi_core::simplex::{BarycentricPoint, SimplexBernstein};
use qi_core::spline::KnotVector;
use qi_core::uniform::{
    apply_uniform, nearbest_uniform, uniform_lebesgue_function, uniform_norm, SymmetricCoefficients, UniformKind,
};
use rayon::prelude::*;

use crate::error::{CliError, Result};
use crate::expr::Expr;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Family {
    Poly(PolyKind<f64>),
    Q2Star,
    G1,
    G2,
    NearBest { p: usize, q: usize },
    /// Uniform spline QI of the given even order on the grid `hZ`, `h = 1/k`.
    Uniform { kind: UniformKind, order: usize, n: usize, r: usize },
    Simplex { d: usize },
}

/// A parsed operator: `param` is the polynomial degree `n`, the number of
/// spline intervals `k`, or `1/h` for uniform QIs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OperatorSpec {
    pub family: Family,
    pub param: usize,
    /// Spline degree for the knot-based families.
    pub degree: usize,
    /// Random partitions with this largest/smallest gap ratio instead of uniform knots.
    pub ratio: Option<f64>,
}

fn split_params(s: &str) -> Result<(String, Vec<(String, String)>)> {
    let (name, rest) = s.split_once(':').unwrap_or((s, ""));
    let mut params = Vec::new();
    for item in rest.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| CliError::Usage(format!("operator parameter '{item}' is not key=value")))?;
        params.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok((name.trim().to_string(), params))
}

struct Params {
    op: String,
    items: Vec<(String, String)>,
}

impl Params {
    fn take<T: FromStr>(&mut self, key: &str, default: Option<T>) -> Result<T> {
        match self.items.iter().position(|(k, _)| k == key) {
            Some(i) => {
                let (_, v) = self.items.remove(i);
                v.parse()
                    .map_err(|_| CliError::Usage(format!("{}: bad value '{v}' for '{key}'", self.op)))
            }
            None => default.ok_or_else(|| CliError::Usage(format!("{}: missing parameter '{key}'", self.op))),
        }
    }

    fn finish(self) -> Result<()> {
        match self.items.first() {
            Some((k, _)) => Err(CliError::Usage(format!("{}: unknown parameter '{k}'", self.op))),
            None => Ok(()),
        }
    }
}

impl FromStr for OperatorSpec {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        let (name, items) = split_params(s)?;
        let mut p = Params { op: name.clone(), items };
        let spec = match name.as_str() {
            "bernstein" | "stancu" | "qbernstein" | "durrmeyer" | "gs" | "lbqi" | "rbqi" => {
                let op: PolynomialOperator<f64> = s.parse()?;
                return Ok(OperatorSpec {
                    family: Family::Poly(op.kind()),
                    param: op.degree(),
                    degree: 0,
                    ratio: None,
                });
            }
            "q2star" | "g1" | "g2" | "nearbest" => {
                let degree = p.take("m", Some(3))?;
                let param = p.take("k", Some(8))?;
                let ratio = p.take::<f64>("ratio", Some(0.0))?;
                let family = match name.as_str() {
                    "q2star" => Family::Q2Star,
                    "g1" => Family::G1,
                    "g2" => Family::G2,
                    _ => {
                        let pp = p.take("p", Some(degree))?;
                        let q = p.take("q", Some(degree.min(2 * pp)))?;
                        Family::NearBest { p: pp, q }
                    }
                };
                OperatorSpec {
                    family,
                    param,
                    degree,
                    ratio: (ratio > 0.0).then_some(ratio),
                }
            }
            "dqi" | "iqi" => {
                let kind = if name == "dqi" { UniformKind::Discrete } else { UniformKind::Integral };
                let order: usize = p.take("order", Some(4))?;
                let n = p.take("n", Some(order / 2))?;
                let r = p.take("r", Some(order.saturating_sub(1)))?;
                let param = p.take("k", Some(8))?;
                OperatorSpec {
                    family: Family::Uniform { kind, order, n, r },
                    param,
                    degree: 0,
                    ratio: None,
                }
            }
            "simplex" => {
                let d = p.take("d", Some(3))?;
                let param = p.take("n", Some(10))?;
                OperatorSpec {
                    family: Family::Simplex { d },
                    param,
                    degree: 0,
                    ratio: None,
                }
            }
            other => return Err(CliError::Usage(format!("unknown operator '{other}'"))),
        };
        p.finish()?;
        Ok(spec)
    }
}

impl fmt::Display for OperatorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ratio = self.ratio.map(|r| format!(",ratio={r}")).unwrap_or_default();
        match self.family {
            Family::Poly(kind) => match PolynomialOperator::new(kind, self.param) {
                Ok(op) => write!(f, "{op}"),
                Err(_) => write!(f, "{}:n={}", kind.name(), self.param),
            },
            Family::Q2Star => write!(f, "q2star:m={},k={}{ratio}", self.degree, self.param),
            Family::G1 => write!(f, "g1:m={},k={}{ratio}", self.degree, self.param),
            Family::G2 => write!(f, "g2:m={},k={}{ratio}", self.degree, self.param),
            Family::NearBest { p, q } => write!(f, "nearbest:m={},k={},p={p},q={q}{ratio}", self.degree, self.param),
            Family::Uniform { kind, order, n, r } => {
                let name = if kind == UniformKind::Discrete { "dqi" } else { "iqi" };
                write!(f, "{name}:order={order},n={n},r={r},k={}", self.param)
            }
            Family::Simplex { d } => write!(f, "simplex:d={d},n={}", self.param),
        }
    }
}

impl OperatorSpec {
    pub fn with_param(&self, param: usize) -> OperatorSpec {
        OperatorSpec { param, ..*self }
    }

    pub fn uses_knots(&self) -> bool {
        matches!(self.family, Family::Q2Star | Family::G1 | Family::G2 | Family::NearBest { .. })
    }

    /// Builds the operator. `knots` overrides the generated partition for the
    /// knot-based families; `seed` drives random partitions.
    pub fn build(&self, knots: Option<&KnotVector<f64>>, seed: u64) -> Result<Operator> {
        if knots.is_some() && !self.uses_knots() {
            return Err(CliError::Dispatch(format!("operator '{self}' does not take a knot file")));
        }
        let kv = || -> Result<KnotVector<f64>> {
            if let Some(kv) = knots {
                return Ok(kv.clone());
            }
            match self.ratio {
                Some(r) => Ok(random_clamped(&mut SplitMix64::new(seed), self.degree, self.param, r)?),
                None => Ok(KnotVector::clamped_uniform(self.degree, self.param, 0.0, 1.0)?),
            }
        };
        Ok(match self.family {
            Family::Poly(kind) => Operator::Poly(PolynomialOperator::new(kind, self.param)?),
            Family::Q2Star => Operator::Q2Star(Q2Star::new(kv()?)?),
            Family::G1 => Operator::Gs(GoodmanSharma::new(kv()?, GsOrder::One)?),
            Family::G2 => Operator::Gs(GoodmanSharma::new(kv()?, GsOrder::Two)?),
            Family::NearBest { p, q } => Operator::NearBest(NearBestDqi::new(kv()?, p, q)?),
            Family::Uniform { kind, order, n, r } => {
                if order < 2 || order % 2 != 0 {
                    return Err(CliError::Usage(format!("uniform QI order must be even and >= 2, got {order}")));
                }
                if self.param == 0 {
                    return Err(CliError::Usage("uniform QI needs k >= 1".into()));
                }
                Operator::Uniform {
                    coeffs: nearbest_uniform(kind, order / 2, n, r)?,
                    h: 1.0 / self.param as f64,
                }
            }
            Family::Simplex { d } => Operator::Simplex(SimplexBernstein::new(d, self.param)?),
        })
    }
}

pub enum Operator {
    Poly(PolynomialOperator<f64>),
    Q2Star(Q2Star<f64>),
    Gs(GoodmanSharma<f64>),
    NearBest(NearBestDqi<f64>),
    Uniform { coeffs: SymmetricCoefficients<f64>, h: f64 },
    Simplex(SimplexBernstein<f64>),
}

/// Grid maximum of a Lebesgue-type function plus named side values.
#[derive(Debug, Clone, PartialEq)]
pub struct NormReport {
    pub value: f64,
    pub argmax: f64,
    pub extra: Vec<(&'static str, f64)>,
}

impl Operator {
    /// Evaluation interval of the univariate operators (one period `[0, 1]` for uniform QIs).
    pub fn domain(&self) -> Result<(f64, f64)> {
        Ok(match self {
            Operator::Poly(_) | Operator::Uniform { .. } => (0.0, 1.0),
            Operator::Q2Star(q) => q.knots().domain(),
            Operator::Gs(g) => g.knots().domain(),
            Operator::NearBest(op) => op.domain(),
            Operator::Simplex(_) => {
                return Err(CliError::Dispatch("the simplex operator has no interval domain".into()))
            }
        })
    }

    pub fn simplex_dim(&self) -> Option<usize> {
        match self {
            Operator::Simplex(b) => Some(b.dim()),
            _ => None,
        }
    }

    fn check_univariate(&self, expr: &Expr) -> Result<()> {
        if let Operator::Simplex(b) = self {
            if expr.uses_x() {
                return Err(CliError::Dispatch("simplex operators take expressions in x1..xd, not x".into()));
            }
            if expr.max_coord() > b.dim() {
                return Err(CliError::Dispatch(format!(
                    "expression uses x{} but the simplex has {} barycentric coordinates",
                    expr.max_coord(),
                    b.dim()
                )));
            }
        } else if expr.max_coord() > 0 {
            return Err(CliError::Dispatch(format!(
                "expression uses x{} but the operator is univariate in x",
                expr.max_coord()
            )));
        }
        Ok(())
    }

    /// `Qf` at every point of `xs`, in order.
    pub fn apply_grid(&self, expr: &Expr, xs: &[f64]) -> Result<Vec<f64>> {
        self.check_univariate(expr)?;
        let f = |t: f64| expr.eval_x(t);
        match self {
            Operator::Q2Star(q) => {
                let c = q.coefficients(f)?;
                spline_values(q.knots(), &c, xs)
            }
            Operator::Gs(g) => {
                let c = g.coefficients(f)?;
                spline_values(g.knots(), &c, xs)
            }
            Operator::Poly(op) => {
                if let PolyKind::RightBqi { r } = op.kind() {
                    let ds: Vec<Expr> = expr.derivatives(r);
                    let derivs = |t: f64| ds.iter().map(|d| d.eval_x(t)).collect::<Vec<f64>>();
                    return xs
                        .par_iter()
                        .map(|&x| Ok(right_bqi_apply(op.degree(), r, derivs, x)?))
                        .collect();
                }
                xs.par_iter().map(|&x| Ok(op.apply(f, x)?)).collect()
            }
            Operator::NearBest(op) => xs.par_iter().map(|&x| Ok(op.apply(f, x)?)).collect(),
            Operator::Uniform { coeffs, h } => xs.par_iter().map(|&x| Ok(apply_uniform(coeffs, f, *h, x)?)).collect(),
            Operator::Simplex(_) => Err(CliError::Dispatch("use apply_simplex for the simplex operator".into())),
        }
    }

    /// `B_n f` at barycentric points.
    pub fn apply_simplex(&self, expr: &Expr, points: &[Vec<f64>]) -> Result<Vec<f64>> {
        self.check_univariate(expr)?;
        let Operator::Simplex(b) = self else {
            return Err(CliError::Dispatch("barycentric points need the simplex operator".into()));
        };
        points
            .par_iter()
            .map(|c| {
                let x = BarycentricPoint::new(c.clone())?;
                Ok(b.apply(|y| expr.eval(f64::NAN, y), &x)?)
            })
            .collect()
    }

    /// Lebesgue function (or kernel norm function for Goodman–Sharma operators) at `xs`.
    pub fn lebesgue_curve(&self, xs: &[f64]) -> Result<Vec<f64>> {
        match self {
            Operator::Poly(op) => xs.par_iter().map(|&x| Ok(op.lebesgue_function(x)?)).collect(),
            Operator::Q2Star(q) => xs.par_iter().map(|&x| Ok(q.lebesgue_function(x)?)).collect(),
            Operator::NearBest(q) => xs.par_iter().map(|&x| Ok(q.lebesgue_function(x)?)).collect(),
            Operator::Gs(g) => xs.par_iter().map(|&x| Ok(g.kernel_function(x)?)).collect(),
            Operator::Uniform { coeffs, .. } => Ok(xs.iter().map(|&x| uniform_lebesgue_function(coeffs, x)).collect()),
            Operator::Simplex(_) => Err(CliError::Dispatch("no Lebesgue function for the simplex operator".into())),
        }
    }

    pub fn norm(&self, opts: GridOptions) -> Result<NormReport> {
        Ok(match self {
            Operator::Poly(op) => {
                let e = lebesgue_norm(op, opts)?;
                NormReport { value: e.value, argmax: e.argmax, extra: vec![] }
            }
            Operator::Q2Star(q) => {
                let e = lebesgue_norm(q, opts)?;
                NormReport { value: e.value, argmax: e.argmax, extra: vec![("nu", q.nu())] }
            }
            Operator::NearBest(q) => {
                let e = lebesgue_norm(q, opts)?;
                NormReport { value: e.value, argmax: e.argmax, extra: vec![("nu", q.nu1())] }
            }
            Operator::Gs(g) => {
                let e = g.norm_kernel(opts)?;
                let u = g.norm_upper(opts)?;
                NormReport { value: e.value, argmax: e.argmax, extra: vec![("coefficient_bound", u.value)] }
            }
            Operator::Uniform { coeffs, .. } => {
                let e = uniform_norm(coeffs, opts)?;
                let mut extra = vec![("nu", e.nu)];
                if let Some(k) = e.kernel_norm {
                    extra.push(("kernel_norm", k.value));
                }
                NormReport { value: e.lebesgue.value, argmax: e.lebesgue.argmax, extra }
            }
            Operator::Simplex(_) => {
                return Err(CliError::Dispatch("norms are not implemented for the simplex operator".into()))
            }
        })
    }
}

fn spline_values(kv: &KnotVector<f64>, coeffs: &[f64], xs: &[f64]) -> Result<Vec<f64>> {
    xs.par_iter()
        .map(|&x| Ok(kv.basis_values(x)?.iter().map(|(j, b)| b * coeffs[j]).sum()))
        .collect()
}

/// Lattice points `k/n` of the simplex in `d` barycentric coordinates.
pub fn simplex_lattice(d: usize, n: usize) -> Vec<Vec<f64>> {
    qi_core::simplex::multi_indices(d, n)
        .iter()
        .map(|mi| {
            let mut c: Vec<f64> = mi.entries().iter().map(|&k| k as f64 / n.max(1) as f64).collect();
            // make the coordinates sum to one exactly
            let rest: f64 = c[1..].iter().sum();
            c[0] = (1.0 - rest).max(0.0);
            c
        })
        .collect()
}

/// `count + 1` equispaced points on `[a, b]`, with `b` hit exactly.
pub fn grid(a: f64, b: f64, count: usize) -> Vec<f64> {
    let count = count.max(1);
    (0..=count)
        .map(|k| if k == count { b } else { a + (b - a) * k as f64 / count as f64 })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spec_roundtrip() {
        for s in [
            "bernstein:n=20",
            "q2star:m=3,k=16",
            "g2:m=4,k=8,ratio=100",
            "nearbest:m=3,k=10,p=2,q=3",
            "dqi:order=4,n=2,r=3,k=8",
            "iqi:order=4,n=1,r=3,k=4",
            "simplex:d=3,n=5",
        ] {
            let spec: OperatorSpec = s.parse().unwrap();
            assert_eq!(spec.to_string().parse::<OperatorSpec>().unwrap(), spec, "{s}");
        }
        assert!("q2star:m=3,z=1".parse::<OperatorSpec>().is_err());
        assert!("spline".parse::<OperatorSpec>().is_err());
    }

    #[test]
    fn dispatch_mismatch() {
        let op = "bernstein:n=5".parse::<OperatorSpec>().unwrap().build(None, 0).unwrap();
        let e = crate::expr::parse("x1").unwrap();
        assert!(matches!(op.apply_grid(&e, &[0.5]), Err(CliError::Dispatch(_))));
        let s = "simplex:d=2,n=4".parse::<OperatorSpec>().unwrap().build(None, 0).unwrap();
        assert!(s.apply_simplex(&crate::expr::parse("x").unwrap(), &[vec![0.5, 0.5]]).is_err());
        assert!(s.apply_simplex(&crate::expr::parse("x3").unwrap(), &[vec![0.5, 0.5]]).is_err());
    }
}
