use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("value array has length {actual}, grid needs {expected}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("time derivative of order {needed} required, only {available} available")]
    MissingTimeDerivative { needed: usize, available: usize },

    #[error("convergence study: {0}")]
    Convergence(String),

    #[error("time step {dt} exceeds CFL limit {limit} (cfl_safety {safety} x dt_max {dt_max})")]
    CflViolation {
        dt: f64,
        limit: f64,
        safety: f64,
        dt_max: f64,
    },

    #[error("non-finite field value after step {step}")]
    NonFinite { step: usize },

    #[error("Poisson source has non-zero mean {mean:e}; subtract the mean to make it solvable on the torus")]
    NonZeroMeanSource { mean: f64 },

    #[error("curl system right side is not divergence-free: |div R| = {div_norm:e}, |curl B_T - R| = {mismatch:e}")]
    IncompatibleCurlSource { div_norm: f64, mismatch: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid config key `{key}`: {reason}")]
    Config { key: String, reason: String },

    #[error("snapshot format: {0}")]
    Snapshot(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
