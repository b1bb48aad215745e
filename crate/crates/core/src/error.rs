use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the physical domain of a formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation past the saturation time `k0/|Q|`, where coherent
    /// re-emission is no longer possible.
    #[error("saturated: t = {t:e} s exceeds t_max = {t_max:e} s")]
    Saturated { t: f64, t_max: f64 },

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: line {line}: duplicate isotope label `{label}`")]
    DuplicateLabel {
        path: PathBuf,
        line: u64,
        label: String,
    },

    #[error("{0} is not available for this record")]
    Unavailable(&'static str),

    #[error("integration failed at t = {t:e}: step size {step:e} underflowed")]
    IntegrationFailure { t: f64, step: f64 },

    #[error("invalid grid: {0}")]
    Grid(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
