//! Error type shared by every module of the crate.

use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum FairError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error in {path} (line {line}): {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("power iteration did not converge within {iterations} iterations (relative tolerance {tolerance:e})")]
    NonConvergence { iterations: usize, tolerance: f64 },
}

pub type Result<T> = std::result::Result<T, FairError>;

impl FairError {
    /// Process exit code for the CLI: 2 usage, 3 data, 4 numeric.
    pub fn exit_code(&self) -> i32 {
        match self {
            FairError::InvalidArgument(_) => 2,
            FairError::Io { .. }
            | FairError::Parse { .. }
            | FairError::InvalidData(_)
            | FairError::DimensionMismatch { .. } => 3,
            FairError::NonConvergence { .. } => 4,
        }
    }
}
