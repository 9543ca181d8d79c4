//! Univariate polynomial operators on `[0, 1]`.
//!
//! All kinds reproduce linear functions. The discrete kinds sample `f` at
//! `n + 1` nodes; Durrmeyer–Jacobi and Goodman–Sharma use weighted means
//! computed with Gauss rules for Beta densities.
//!
//! Goodman–Sharma satisfies `n (G_n f - f)(x) -> +x(1-x) f''(x)`; for
//! `f = e_2` one has exactly `G_n e_2 - e_2 = 2x(1-x)/(n+1)`.

mod basis;
mod bqi;
mod partial_inverse;
mod richardson;

use std::fmt;
use std::str::FromStr;

pub use basis::{bernstein_basis, bernstein_basis_derivative, eval_monomial, q_integer, qbernstein_basis, stancu_basis};
pub use bqi::{left_bqi_apply, right_bqi_apply};
pub use partial_inverse::{bernstein_action, partial_inverse, partial_inverse_from_action, DifferentialCoefficients};
pub use richardson::{integer_exponents, richardson, RichardsonTableau};

use crate::error::{QiError, Result};
use crate::lebesgue::CardinalOperator;
use crate::quadrature::{gauss_beta, Rule};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PolyKind<T> {
    Bernstein,
    Stancu { alpha: T },
    QBernstein { q: T },
    DurrmeyerJacobi { alpha: T, beta: T },
    GoodmanSharma,
    LeftBqi { r: usize },
    RightBqi { r: usize },
}

impl<T: Real> PolyKind<T> {
    pub fn name(&self) -> &'static str {
        match self {
            PolyKind::Bernstein => "bernstein",
            PolyKind::Stancu { .. } => "stancu",
            PolyKind::QBernstein { .. } => "qbernstein",
            PolyKind::DurrmeyerJacobi { .. } => "durrmeyer",
            PolyKind::GoodmanSharma => "gs",
            PolyKind::LeftBqi { .. } => "lbqi",
            PolyKind::RightBqi { .. } => "rbqi",
        }
    }

    pub fn is_integral(&self) -> bool {
        matches!(self, PolyKind::DurrmeyerJacobi { .. } | PolyKind::GoodmanSharma)
    }
}

/// A polynomial operator of degree `n` with validated parameters and its
/// precomputed quadrature rules or inverse coefficients.
#[derive(Debug, Clone)]
pub struct PolynomialOperator<T> {
    kind: PolyKind<T>,
    n: usize,
    rules: Vec<Rule<T>>,
    inverse: Option<DifferentialCoefficients<T>>,
}

impl<T: Real> PolynomialOperator<T> {
    pub fn new(kind: PolyKind<T>, n: usize) -> Result<Self> {
        if n < 1 {
            return Err(QiError::Parameter("degree n must be at least 1".into()));
        }
        let nf = T::from_usize_lossy(n);
        let mut rules = Vec::new();
        let mut inverse = None;
        match kind {
            PolyKind::Bernstein => {}
            PolyKind::Stancu { alpha } => {
                if !(alpha.is_finite() && alpha >= -T::one() / nf - T::epsilon()) {
                    return Err(QiError::Parameter(format!("stancu alpha {alpha} below -1/n")));
                }
            }
            PolyKind::QBernstein { q } => {
                if !(q > T::zero() && q <= T::one()) {
                    return Err(QiError::Parameter(format!("q-Bernstein needs q in (0, 1], got {q}")));
                }
            }
            PolyKind::DurrmeyerJacobi { alpha, beta } => {
                if !(alpha > -T::one() && beta > -T::one()) {
                    return Err(QiError::Parameter(format!(
                        "Jacobi exponents must exceed -1, got ({alpha}, {beta})"
                    )));
                }
                let nodes = n.div_ceil(2) + 4;
                for i in 0..=n {
                    let a = T::from_usize_lossy(i) + alpha + T::one();
                    let b = T::from_usize_lossy(n - i) + beta + T::one();
                    rules.push(gauss_beta(nodes, a, b)?);
                }
            }
            PolyKind::GoodmanSharma => {
                if n < 2 {
                    return Err(QiError::Parameter("Goodman-Sharma needs n >= 2".into()));
                }
                let nodes = n.div_ceil(2) + 4;
                for i in 1..n {
                    rules.push(gauss_beta(nodes, T::from_usize_lossy(i), T::from_usize_lossy(n - i))?);
                }
            }
            PolyKind::LeftBqi { r } | PolyKind::RightBqi { r } => {
                inverse = Some(partial_inverse(n, r)?);
            }
        }
        Ok(PolynomialOperator { kind, n, rules, inverse })
    }

    pub fn bernstein(n: usize) -> Result<Self> {
        Self::new(PolyKind::Bernstein, n)
    }

    pub fn kind(&self) -> PolyKind<T> {
        self.kind
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Largest `s` with `Q e_k = e_k` for all `k <= s`.
    pub fn exactness_degree(&self) -> usize {
        match self.kind {
            PolyKind::LeftBqi { r } | PolyKind::RightBqi { r } => r.max(1),
            PolyKind::DurrmeyerJacobi { .. } => 0,
            _ => 1,
        }
    }

    pub fn differential_coefficients(&self) -> Option<&DifferentialCoefficients<T>> {
        self.inverse.as_ref()
    }

    /// Sample nodes of the discrete kinds.
    pub fn nodes(&self) -> Vec<T> {
        let nf = T::from_usize_lossy(self.n);
        match self.kind {
            PolyKind::QBernstein { q } => (0..=self.n).map(|i| q_integer(i, q) / q_integer(self.n, q)).collect(),
            _ => (0..=self.n).map(|i| T::from_usize_lossy(i) / nf).collect(),
        }
    }

    fn check_x(x: T) -> Result<()> {
        if x >= T::zero() && x <= T::one() {
            Ok(())
        } else {
            Err(QiError::Domain {
                x: x.as_f64(),
                lo: 0.0,
                hi: 1.0,
            })
        }
    }

    fn sample<F: Fn(T) -> T>(f: &F, t: T) -> Result<T> {
        let v = f(t);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(QiError::Evaluation { at: t.as_f64() })
        }
    }

    /// Image of `f` at `x`. Right BQIs need derivative data; use [`right_bqi_apply`].
    pub fn apply<F: Fn(T) -> T>(&self, f: F, x: T) -> Result<T> {
        Self::check_x(x)?;
        let n = self.n;
        match self.kind {
            PolyKind::Bernstein | PolyKind::Stancu { .. } | PolyKind::QBernstein { .. } => {
                let w = self.cardinal_weights(x)?;
                self.nodes()
                    .into_iter()
                    .zip(w)
                    .map(|(t, c)| Ok(c * Self::sample(&f, t)?))
                    .sum()
            }
            PolyKind::DurrmeyerJacobi { .. } => {
                let b = bernstein_basis(n, x);
                let mut acc = T::zero();
                for (rule, bi) in self.rules.iter().zip(b) {
                    let mean = rule
                        .nodes
                        .iter()
                        .zip(&rule.weights)
                        .map(|(&t, &w)| Ok(w * Self::sample(&f, t)?))
                        .sum::<Result<T>>()?;
                    acc += mean * bi;
                }
                Ok(acc)
            }
            PolyKind::GoodmanSharma => {
                let f0 = Self::sample(&f, T::zero())?;
                let f1 = Self::sample(&f, T::one())?;
                let linear = |t: T| (T::one() - t) * f0 + t * f1;
                let b = bernstein_basis(n, x);
                let mut acc = linear(x);
                for (i, rule) in (1..n).zip(&self.rules) {
                    let mean = rule
                        .nodes
                        .iter()
                        .zip(&rule.weights)
                        .map(|(&t, &w)| Ok(w * (Self::sample(&f, t)? - linear(t))))
                        .sum::<Result<T>>()?;
                    acc += mean * b[i];
                }
                Ok(acc)
            }
            PolyKind::LeftBqi { r } => left_bqi_apply(n, r, f, x),
            PolyKind::RightBqi { .. } => Err(QiError::Input(
                "right BQI needs derivatives of f; use right_bqi_apply".into(),
            )),
        }
    }

    /// Durrmeyer–Jacobi image of a polynomial given by monomial coefficients,
    /// using the closed-form Beta moments `E[t^k] = prod_{j<k} (a+j)/(a+b+j)`.
    pub fn apply_polynomial(&self, coeffs: &[T], x: T) -> Result<T> {
        Self::check_x(x)?;
        let PolyKind::DurrmeyerJacobi { alpha, beta } = self.kind else {
            return self.apply(|t| eval_monomial(coeffs, t), x);
        };
        let n = self.n;
        let b = bernstein_basis(n, x);
        let mut acc = T::zero();
        for (i, bi) in b.into_iter().enumerate() {
            let a = T::from_usize_lossy(i) + alpha + T::one();
            let bb = T::from_usize_lossy(n - i) + beta + T::one();
            let mut moment = T::one();
            let mut mean = T::zero();
            for (k, &c) in coeffs.iter().enumerate() {
                if k > 0 {
                    let j = T::from_usize_lossy(k - 1);
                    moment = moment * (a + j) / (a + bb + j);
                }
                mean += c * moment;
            }
            acc += mean * bi;
        }
        Ok(acc)
    }
}

impl<T: Real> CardinalOperator<T> for PolynomialOperator<T> {
    fn domain(&self) -> (T, T) {
        (T::zero(), T::one())
    }

    fn cardinal_weights(&self, x: T) -> Result<Vec<T>> {
        Self::check_x(x)?;
        let n = self.n;
        match self.kind {
            PolyKind::Bernstein => Ok(bernstein_basis(n, x)),
            PolyKind::Stancu { alpha } => Ok(stancu_basis(n, alpha, x)),
            PolyKind::QBernstein { q } => {
                if q == T::one() {
                    Ok(bernstein_basis(n, x))
                } else {
                    Ok(qbernstein_basis(n, q, x))
                }
            }
            PolyKind::LeftBqi { .. } => {
                let coeffs = self.inverse.as_ref().expect("inverse built for BQI");
                let mut w = vec![T::zero(); n + 1];
                for k in 0..=coeffs.order() {
                    let ak = coeffs.eval(k, x);
                    for (wi, d) in w.iter_mut().zip(bernstein_basis_derivative(n, k, x)) {
                        *wi += ak * d;
                    }
                }
                Ok(w)
            }
            PolyKind::RightBqi { .. } => Err(QiError::Unsupported(
                "right BQI samples derivatives, not point values".into(),
            )),
            PolyKind::DurrmeyerJacobi { .. } | PolyKind::GoodmanSharma => Err(QiError::Unsupported(
                "norm of integral operators needs the dual density".into(),
            )),
        }
    }
}

impl<T: Real> fmt::Display for PolynomialOperator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:n={}", self.kind.name(), self.n)?;
        match self.kind {
            PolyKind::Stancu { alpha } => write!(f, ",alpha={alpha}"),
            PolyKind::QBernstein { q } => write!(f, ",q={q}"),
            PolyKind::DurrmeyerJacobi { alpha, beta } => write!(f, ",alpha={alpha},beta={beta}"),
            PolyKind::LeftBqi { r } | PolyKind::RightBqi { r } => write!(f, ",r={r}"),
            _ => Ok(()),
        }
    }
}

/// Parses `name:key=value,...` with `key` in `n, alpha, beta, q, r`.
pub(crate) fn parse_params(spec: &str) -> Result<(String, Vec<(String, String)>)> {
    let (name, rest) = match spec.split_once(':') {
        Some((a, b)) => (a.trim(), b.trim()),
        None => (spec.trim(), ""),
    };
    let mut params = Vec::new();
    for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| QiError::Parse(format!("expected key=value, got '{item}'")))?;
        params.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok((name.to_string(), params))
}

pub(crate) fn take_param<V: FromStr>(params: &[(String, String)], key: &str) -> Result<Option<V>> {
    match params.iter().find(|(k, _)| k == key) {
        None => Ok(None),
        Some((_, v)) => v
            .parse()
            .map(Some)
            .map_err(|_| QiError::Parse(format!("bad value '{v}' for '{key}'"))),
    }
}

impl<T: Real + FromStr> FromStr for PolynomialOperator<T> {
    type Err = QiError;

    fn from_str(s: &str) -> Result<Self> {
        let (name, params) = parse_params(s)?;
        let allowed: &[&str] = match name.as_str() {
            "bernstein" | "gs" => &["n"],
            "stancu" => &["n", "alpha"],
            "qbernstein" => &["n", "q"],
            "durrmeyer" => &["n", "alpha", "beta"],
            "lbqi" | "rbqi" => &["n", "r"],
            other => return Err(QiError::Parse(format!("unknown polynomial operator '{other}'"))),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(QiError::Parse(format!("unknown parameter '{k}' for {name}")));
        }
        let n: usize = take_param(&params, "n")?.ok_or_else(|| QiError::Parse("missing n".into()))?;
        let real = |key: &str, default: T| -> Result<T> { Ok(take_param::<T>(&params, key)?.unwrap_or(default)) };
        let kind = match name.as_str() {
            "bernstein" => PolyKind::Bernstein,
            "gs" => PolyKind::GoodmanSharma,
            "stancu" => PolyKind::Stancu { alpha: real("alpha", T::zero())? },
            "qbernstein" => PolyKind::QBernstein { q: real("q", T::one())? },
            "durrmeyer" => PolyKind::DurrmeyerJacobi {
                alpha: real("alpha", T::zero())?,
                beta: real("beta", T::zero())?,
            },
            "lbqi" => PolyKind::LeftBqi { r: take_param(&params, "r")?.unwrap_or(0) },
            _ => PolyKind::RightBqi { r: take_param(&params, "r")?.unwrap_or(0) },
        };
        PolynomialOperator::new(kind, n)
    }
}
