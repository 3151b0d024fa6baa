use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("degenerate state: {0}")]
    DegenerateState(String),

    #[error("accuracy: {what} (lost norm fraction {lost:.3e} exceeds {limit:.1e})")]
    Accuracy { what: String, lost: f64, limit: f64 },

    #[error("resolution: {0}")]
    Resolution(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("value out of range: {what} = {value:.6e}")]
    OutOfRange { what: String, value: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
