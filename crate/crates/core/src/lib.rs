//! Polynomial and spline quasi-interpolants.
//!
//! Everything numeric is generic over [`Real`] (`f32` or `f64`); the aliases
//! below fix `f64`.

pub mod boxspline;
pub mod error;
pub mod l1;
pub mod lebesgue;
pub mod linalg;
pub mod nonuniform;
pub mod polyops;
pub mod quadrature;
pub mod rng;
pub mod scalar;
pub mod simplex;
pub mod spline;
pub mod uniform;

pub use error::{QiError, Result};
pub use scalar::Real;

pub type KnotVectorF64 = spline::KnotVector<f64>;
pub type SplineFunctionF64 = spline::SplineFunction<f64>;
pub type PolynomialOperatorF64 = polyops::PolynomialOperator<f64>;
pub type SimplexBernsteinF64 = simplex::SimplexBernstein<f64>;
pub type SymmetricCoefficientsF64 = uniform::SymmetricCoefficients<f64>;
pub type Q2StarF64 = nonuniform::Q2Star<f64>;
pub type GoodmanSharmaF64 = nonuniform::GoodmanSharma<f64>;
pub type NearBestDqiF64 = nonuniform::NearBestDqi<f64>;
pub type BoxSplineF64 = boxspline::BoxSpline<f64>;
pub type L1ProblemF64 = l1::L1Problem<f64>;
