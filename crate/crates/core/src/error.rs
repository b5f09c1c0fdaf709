use thiserror::Error;

/// Errors raised by the library. Optimizer non-convergence and decohering
/// infeasibility are reported in results, never through this type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("invalid state: {check} violated (residual {residual:e})")]
    InvalidState { check: &'static str, residual: f64 },

    #[error("invalid channel: {check} violated (residual {residual:e})")]
    InvalidChannel { check: &'static str, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("malformed input: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for errors caused by an input that parsed but fails a
    /// mathematical invariant (non-PSD matrix, Kraus completeness, ...).
    pub fn is_invariant_violation(&self) -> bool {
        matches!(self, Error::InvalidState { .. } | Error::InvalidChannel { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
