use std::path::PathBuf;

use crate::item::ItemId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} attributes, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("k = {k} is outside 1..={dims}")]
    KOutOfRange { k: usize, dims: usize },

    #[error("pivot {pivot} is outside 0..={max} (k = {k})")]
    PivotOutOfRange { pivot: usize, k: usize, max: usize },

    #[error("window capacity must be at least 1")]
    ZeroCapacity,

    #[error("occurrence probability {0} is outside (0, 1]")]
    InvalidProbability(f64),

    #[error("attribute {value} in dimension {dim} is outside the declared bounds [{min}, {max}]")]
    OutOfBounds { dim: usize, value: f64, min: f64, max: f64 },

    #[error("invalid bounds for dimension {dim}: min {min} must be finite and below max {max}")]
    InvalidBounds { dim: usize, min: f64, max: f64 },

    #[error("item id {got} does not follow the last id {last}")]
    NonMonotoneId { last: ItemId, got: ItemId },

    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),

    #[error("{path}: line {line}: {reason}")]
    BadRow { path: PathBuf, line: u64, reason: String },

    #[error("{path}: no probability column named `{column}`")]
    MissingProbabilityColumn { path: PathBuf, column: String },

    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    /// Engine state no longer agrees with itself. Always a bug.
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// True for failures that come from reading or validating stream input.
    pub fn is_ingestion(&self) -> bool {
        matches!(
            self,
            Error::BadRow { .. }
                | Error::MissingProbabilityColumn { .. }
                | Error::Csv { .. }
                | Error::Io(_)
                | Error::OutOfBounds { .. }
                | Error::InvalidProbability(_)
                | Error::DimensionMismatch { .. }
                | Error::NonMonotoneId { .. }
        )
    }
}
