use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the solver, the decomposition toolkit and the harness.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid size {0}: expected a power of two no smaller than 16")]
    InvalidGrid(usize),
    #[error("fields live on different grids ({0} vs {1})")]
    GridMismatch(usize, usize),
    #[error("expected {expected} samples, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("vorticity has nonzero mean {0:e}; no stream function exists on the torus")]
    NonzeroMean(f64),
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
    #[error("growth function `{name}` is not evaluable at alpha = {alpha}")]
    NonEvaluableGamma { name: String, alpha: f64 },
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
    #[error("CFL limit exceeded at dt = {dt:e}; retry with dt <= {suggested:e}")]
    Cfl { dt: f64, suggested: f64 },
    #[error("non-finite {field} detected at t = {t}")]
    NonFinite { field: &'static str, t: f64 },
    #[error("time {time} lies outside the trajectory span [{start}, {end}]")]
    OutsideSpan { time: f64, start: f64, end: f64 },
    #[error("unknown check `{0}`")]
    UnknownCheck(String),
    #[error("trajectory mismatch: {0}")]
    TrajectoryMismatch(String),
    #[error("perturbation size {0:e} is below the spectral floor")]
    PerturbationTooSmall(f64),
    #[error("I/O failure at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
