use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("invalid root specification: {0}")]
    InvalidRootSpec(String),

    #[error("root finder did not converge after {iterations} iterations (best residuals {residuals:?})")]
    SolverFailure {
        iterations: usize,
        residuals: Vec<f64>,
    },

    /// Clustering would have to merge a real root with a complex pair, or
    /// left an unpaired non-real root.
    #[error("ambiguous root clustering: {0}")]
    AmbiguousCluster(String),

    #[error("invalid basis: {0}")]
    InvalidBasis(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("tangent vector is null at x = {x}")]
    NullVelocity { x: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
