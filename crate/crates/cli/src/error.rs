use std::io;

use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 1;
pub const EXIT_FAILURE: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad configuration; `location` names the file line or flag.
    #[error("config error at {location}: {message}")]
    Config { location: String, message: String },
    #[error(transparent)]
    Core(#[from] fiberlink_core::Error),
    #[error("i/o error: {0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn config(location: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Config { location: location.into(), message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } => EXIT_CONFIG,
            CliError::Core(fiberlink_core::Error::RangeExceeded { .. }) => EXIT_CONFIG,
            CliError::Core(_) | CliError::Io(_) => EXIT_FAILURE,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
