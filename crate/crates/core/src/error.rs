use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QiError {
    #[error("point {x} outside domain [{lo}, {hi}]")]
    Domain { x: f64, lo: f64, hi: f64 },

    #[error("invalid knot vector: {0}")]
    InvalidKnots(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("order r = {r} exceeds degree n = {n}")]
    Order { r: usize, n: usize },

    #[error("degenerate stencil at index {index}: {reason}")]
    DegenerateStencil { index: usize, reason: String },

    #[error("constraint matrix has rank {rank}, expected {rows}")]
    RankDeficient { rank: usize, rows: usize },

    #[error("infeasible constraints: {0}")]
    Infeasible(String),

    #[error("input error: {0}")]
    Input(String),

    #[error("non-finite value at t = {at}")]
    Evaluation { at: f64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, QiError>;
