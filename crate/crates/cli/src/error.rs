use std::path::PathBuf;

use thiserror::Error;

/// Failures of a CLI invocation, each mapped to an exit status.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error in `{field}`: {reason}")]
    Config { field: String, reason: String },
    #[error("I/O failure at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Runtime(#[from] boussinesq_core::Error),
}

impl CliError {
    pub fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config { .. } => EXIT_CONFIG,
            CliError::Io { .. } | CliError::Runtime(_) => EXIT_RUNTIME,
        }
    }
}

pub const EXIT_OK: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_CONFIG: u8 = 2;
pub const EXIT_RUNTIME: u8 = 3;

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Reclassifies parameter errors raised while validating a config.
pub(crate) fn as_config_error(e: boussinesq_core::Error) -> CliError {
    match e {
        boussinesq_core::Error::InvalidParameter { name, reason } => CliError::config(name, reason),
        boussinesq_core::Error::InvalidGrid(n) => {
            CliError::config("n", format!("{n} is not a power of two no smaller than 16"))
        }
        boussinesq_core::Error::UnknownCatalog(name) => CliError::config("gamma", format!("unknown catalog entry `{name}`")),
        boussinesq_core::Error::UnknownCheck(name) => CliError::config("checks", format!("unknown check `{name}`")),
        other => CliError::Runtime(other),
    }
}
