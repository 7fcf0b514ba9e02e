use thiserror::Error;

/// Errors raised by the spectral machinery, the dynamics and the diagnostics.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("operation not supported on this domain: {0}")]
    UnsupportedDomain(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("solution diverged at t = {time}: {reason}")]
    Divergence { time: f64, reason: String },

    #[error("solver did not converge after {iterations} iterations (last residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("assumption violated: {0}")]
    Assumption(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
