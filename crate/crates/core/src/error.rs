use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the pipeline.
///
/// Each variant maps onto one of the CLI exit codes via [`Error::exit_code`].
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {rejected} of {total} records rejected (max error rate {max_rate}); first error: {first}")]
    ErrorBudget {
        path: PathBuf,
        rejected: usize,
        total: usize,
        max_rate: f64,
        first: String,
    },

    #[error("data error: {0}")]
    Data(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("statistics error: {0}")]
    Stats(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 validation, 2 data, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) => 1,
            Error::Io { .. }
            | Error::ErrorBudget { .. }
            | Error::Data(_)
            | Error::Undefined(_)
            | Error::Stats(_)
            | Error::Csv(_)
            | Error::Json(_) => 2,
            Error::Internal(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
