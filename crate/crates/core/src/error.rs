use thiserror::Error;

/// Errors raised by the numerical kernels.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An input lies outside the domain of the model.
    #[error("domain error: {0}")]
    Domain(String),

    /// The observation covariance could not be factorized.
    #[error("singular covariance matrix (condition number {condition:.3e})")]
    SingularCovariance { condition: f64 },

    /// The requested configuration is not covered by the model.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A parameter label that the Fisher machinery does not know.
    #[error("unknown parameter label `{0}`")]
    UnknownParameter(String),

    /// Numerical breakdown (non-finite result, indefinite matrix, ...).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

/// Fails with a domain error unless `value` is finite and strictly positive.
pub(crate) fn require_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be finite and > 0, got {value}"))
    }
}

/// Fails with a domain error unless `value` is finite and non-negative.
pub(crate) fn require_non_negative(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value >= 0.0 {
        Ok(())
    } else {
        domain(format!("{name} must be finite and >= 0, got {value}"))
    }
}
