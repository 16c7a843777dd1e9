use std::path::PathBuf;

use crate::raster::SeedPoint;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid raster dimensions {width}x{height}")]
    InvalidDimensions { width: usize, height: usize },

    #[error("raster data has {actual} elements, expected {expected}")]
    DataLength { expected: usize, actual: usize },

    #[error("seed ({}, {}) lies outside the {width}x{height} image", seed.row, seed.col)]
    SeedOutOfBounds {
        seed: SeedPoint,
        width: usize,
        height: usize,
    },

    #[error("seed ({}, {}) lands on a barrier pixel", seed.row, seed.col)]
    SeedOnBarrier { seed: SeedPoint },

    #[error("90/270 degree rotations need a square raster, got {width}x{height}")]
    NonSquareRotation { width: usize, height: usize },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("{0} is undefined for this confusion matrix")]
    UndefinedMetric(&'static str),

    #[error("{value} is below scale for {scale}")]
    BelowScale { value: f64, scale: &'static str },

    #[error("{value} is outside the domain of {scale}")]
    OutOfScaleDomain { value: f64, scale: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("cannot decode {path}: {reason}")]
    Decode { path: PathBuf, reason: String },

    #[error("schema violation in `{field}`: {reason}")]
    SchemaViolation { field: String, reason: String },

    #[error("stale reference: {path} does not exist")]
    StaleReference { path: PathBuf },

    #[error("serialization failed: {0}")]
    Serialization(#[from] serde_json::Error),

    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn mismatch(context: impl Into<String>) -> Self {
        Error::DimensionMismatch {
            context: context.into(),
        }
    }
}
