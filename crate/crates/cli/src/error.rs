use std::path::Path;

use beamqubit_core::Error as CoreError;

/// Process exit statuses.
pub mod exit {
    pub const SUCCESS: u8 = 0;
    pub const CONFIG: u8 = 2;
    pub const DIVERGENCE: u8 = 3;
    pub const IO: u8 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),

    #[error("divergence: {0}")]
    Divergence(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => exit::CONFIG,
            CliError::Divergence(_) => exit::DIVERGENCE,
            CliError::Io(_) => exit::IO,
        }
    }

    pub fn io(path: &Path, err: impl std::fmt::Display) -> Self {
        CliError::Io(format!("{}: {err}", path.display()))
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Divergence { .. } | CoreError::NonFinite(_) => CliError::Divergence(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
