use std::path::PathBuf;

use thiserror::Error;

pub type CliResult<T> = Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Input {
        path: PathBuf,
        source: cutree::Error,
    },

    #[error(transparent)]
    Core(#[from] cutree::Error),

    /// The checked artifact is wrong; the report was already printed.
    #[error("{0}")]
    Validation(String),
}

impl CliError {
    pub fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Validation(_) | CliError::Core(_) => 1,
            CliError::Usage(_) | CliError::Io { .. } | CliError::Input { .. } => 2,
        }
    }
}
