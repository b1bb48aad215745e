use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] srd_core::Error),

    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_IO: i32 = 4;

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use srd_core::Error as E;
        match self {
            CliError::Config(_) => EXIT_CONFIG,
            CliError::Output { .. } => EXIT_IO,
            CliError::Core(e) => match e {
                E::Parse { .. } | E::DuplicateLabel { .. } | E::Grid(_) => EXIT_CONFIG,
                E::Io { .. } => EXIT_IO,
                E::Domain(_)
                | E::Saturated { .. }
                | E::Unavailable(_)
                | E::IntegrationFailure { .. } => EXIT_DOMAIN,
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

pub fn config(msg: impl Into<String>) -> CliError {
    CliError::Config(msg.into())
}
