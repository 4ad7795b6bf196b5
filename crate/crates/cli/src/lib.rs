//! File formats, report rendering and the verification suite behind the
//! `kappa` binary.

pub mod cli;
pub mod format;
pub mod io;
pub mod verify;

use kappa_core::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("{path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Core(#[from] Error),
    #[error("{path}: {source}")]
    Write { path: String, source: std::io::Error },
}

impl CliError {
    /// 2 for bad input, 3 when kappa does not stabilize, 4 for the crossing cap.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(Error::Unstabilized { .. } | Error::UnstableTop { .. }) => 3,
            CliError::Core(Error::ResourceCap { .. }) => 4,
            CliError::Write { .. } => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
