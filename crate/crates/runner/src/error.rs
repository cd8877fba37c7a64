use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum RunnerError {
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },

    /// TOML syntax or schema problem; the message carries line and column.
    #[error("config parse error in {path}: {message}")]
    Parse { path: String, message: String },

    #[error("invalid config: {0}")]
    Config(String),

    #[error("model error: {0}")]
    Model(#[from] isl_isac::Error),

    #[error("output error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("serialization error: {0}")]
    Serialize(String),
}

pub type Result<T> = std::result::Result<T, RunnerError>;

pub(crate) fn config_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(RunnerError::Config(msg.into()))
}
