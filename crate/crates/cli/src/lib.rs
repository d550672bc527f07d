//! Batch driver for `stochdiff`: reads a TOML run configuration, dispatches
//! to the library and writes CSV reports.

pub mod commands;
pub mod config;
pub mod output;

pub use config::RunConfig;

/// Exit status for configuration errors.
pub const EXIT_CONFIG: i32 = 2;
/// Exit status for failures while running a valid configuration.
pub const EXIT_RUNTIME: i32 = 3;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

/// Errors that reject the inputs rather than report a numerical failure.
impl From<stochdiff::Error> for CliError {
    fn from(e: stochdiff::Error) -> Self {
        use stochdiff::Error::*;
        match e {
            InvalidParameter(_) | NotIid | Positivity { .. } | Precondition(_) | Unsupported(_) => {
                CliError::Config(e.to_string())
            }
            _ => CliError::Runtime(e.to_string()),
        }
    }
}
