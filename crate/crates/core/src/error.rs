use thiserror::Error;

/// Errors produced by the set geometry, sampling, mechanism and audit layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("set must contain at least one point")]
    EmptySet,

    #[error("invalid bounds on axis {axis}: lo = {lo} > hi = {hi}")]
    InvalidBounds { axis: usize, lo: f64, hi: f64 },

    #[error("non-finite coordinate {value} (all coordinates must be finite reals)")]
    NonFinite { value: f64 },

    #[error("epsilon must be a positive finite real, got {0}")]
    InvalidEpsilon(f64),

    #[error("Laplace scale must be a positive finite real, got {0}")]
    InvalidScale(f64),

    #[error("confidence level must lie in (0, 1), got {0}")]
    InvalidConfidence(f64),

    #[error("trial count must be at least 1")]
    ZeroTrials,

    #[error("exact capacity supports at most {limit} points (got {points}); use the Monte-Carlo estimator")]
    TooManyPoints { points: usize, limit: usize },

    #[error("exact capacity is not available for {0}; use the Monte-Carlo estimator")]
    ExactUnsupported(&'static str),

    #[error("probe grid is empty")]
    EmptyProbeGrid,

    #[error("linear program failed: {0}")]
    Lp(#[from] crate::geometry::lp::LpError),

    #[error("malformed document: {0}")]
    Document(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon.is_finite() && epsilon > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(epsilon))
    }
}
