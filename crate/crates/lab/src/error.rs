use std::path::PathBuf;

use cbs_core::CbsError;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, LabError>;

#[derive(Debug, Error)]
pub enum LabError {
    /// A configuration value is missing, malformed or out of range.
    #[error("config error in `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("cannot read config {path}: {message}")]
    ConfigFile { path: PathBuf, message: String },

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{context}: {source}")]
    Numeric {
        context: String,
        #[source]
        source: CbsError,
    },

    #[error("verification failed: {failed} of {total} checks")]
    Verification { failed: usize, total: usize },
}

impl LabError {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        LabError::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        LabError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn numeric(context: impl Into<String>, source: CbsError) -> Self {
        LabError::Numeric {
            context: context.into(),
            source,
        }
    }

    /// 0 success, 1 verification failure, 2 config or I/O error,
    /// 3 numeric non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Verification { .. } => 1,
            LabError::Config { .. } | LabError::ConfigFile { .. } | LabError::Io { .. } => 2,
            LabError::Numeric { source, .. } => match source {
                CbsError::QuadratureNotConverged { .. }
                | CbsError::GridTooNarrow { .. }
                | CbsError::OracleMismatch { .. } => 3,
                _ => 2,
            },
        }
    }
}
