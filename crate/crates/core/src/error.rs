use thiserror::Error;

use crate::space::MetricReport;

/// Errors raised by space construction, solvers and closed-form evaluators.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {len} entries")]
    NotSquare { rows: usize, row: usize, len: usize },

    #[error("size error: {0}")]
    Size(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("index {index} out of range for space of {len} points")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("metric axioms violated: {0}")]
    InvalidMetric(MetricReport),

    #[error("invalid cost matrix: {0}")]
    InvalidCost(String),

    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("shape is not normalized: integral {integral}")]
    Normalization { integral: f64 },

    #[error("embedding error: {0}")]
    Embedding(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("plan and potential were computed on different inputs")]
    Pairing,

    #[error("duality gap {gap:e} exceeds tolerance {tol:e}")]
    Gap { gap: f64, tol: f64 },

    #[error("support too large: {got} points, limit {limit}")]
    SupportTooLarge { got: usize, limit: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
