use std::path::PathBuf;

use thiserror::Error;

use crate::quantization::ContourLevelSet;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("moving average needs {needed} observation sets, got {available}")]
    InsufficientHistory { needed: usize, available: usize },

    #[error("observation sets do not share a deployment: {0}")]
    DeploymentMismatch(String),

    #[error("spline fit needs at least 2 distinct points, got {distinct}")]
    DegenerateInput { distinct: usize },

    #[error("spline system is singular: {points} centers, residual {residual:e} after ridge {ridge:e}")]
    Conditioning { points: usize, residual: f64, ridge: f64 },

    #[error("point/value length mismatch: {points} points, {values} values")]
    LengthMismatch { points: usize, values: usize },

    #[error("invalid range: L_min = {min} must be below L_max = {max}")]
    InvalidRange { min: f64, max: f64 },

    #[error("cannot estimate a pdf from a constant grid (value {0})")]
    DegeneratePdf(f64),

    #[error("invalid level set: {0}")]
    InvalidLevels(String),

    #[error("Lloyd-Max did not converge in {iterations} iterations (last move {last_move:e})")]
    NoConvergence {
        iterations: usize,
        last_move: f64,
        last: ContourLevelSet,
    },

    #[error("grids differ: {0}")]
    GridMismatch(String),

    #[error("probe count {requested} exceeds sensor count {available}")]
    ProbeCount { requested: usize, available: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    #[error("field model line {line}: {message}")]
    FieldSchema { line: usize, message: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
