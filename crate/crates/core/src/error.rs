use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error in {path}: {message}")]
    Csv { path: PathBuf, message: String },

    #[error("non-numeric value {value:?} at row {row}, column {column}")]
    NonNumeric {
        row: usize,
        column: usize,
        value: String,
    },

    #[error("missing value at row {row}, column {column}")]
    MissingValue { row: usize, column: usize },

    #[error("label column {0} not found")]
    LabelColumnAbsent(String),

    #[error("label column has fewer than 2 distinct values")]
    SingleLabel,

    #[error("invalid dataset: {0}")]
    InvalidDataset(String),

    #[error("dataset must contain both classes")]
    SingleClass,

    #[error("class with {class_size} samples cannot be split into {folds} folds")]
    ClassTooSmall { class_size: usize, folds: usize },

    #[error("need at least {required} samples, got {actual}")]
    TooFewSamples { required: usize, actual: usize },

    #[error("invalid neighbourhood size k = {0}")]
    InvalidK(usize),

    #[error("positive count {pos} out of range for k = {k}")]
    CountOutOfRange { pos: usize, k: usize },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("solver did not converge after {iterations} iterations (violation {violation:.3e})")]
    NotConverged { iterations: usize, violation: f64 },

    #[error("too few nonzero differences: {0}")]
    TooFewDifferences(usize),

    #[error("unknown method {0:?}")]
    UnknownMethod(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("model format: {0}")]
    ModelFormat(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
