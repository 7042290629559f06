use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the library can report.
///
/// Display strings start with the variant name so callers (and the CLI) can
/// surface a stable, greppable error kind.
#[derive(Debug, Error)]
pub enum Error {
    #[error("ParseError: row {row}, column {col}: cannot parse {value:?} as a number")]
    Parse { row: usize, col: usize, value: String },

    #[error("NonFiniteValue: row {row}, column {col} is not finite")]
    NonFiniteValue { row: usize, col: usize },

    #[error("RaggedRows: row {row} has {found} fields, expected {expected}")]
    RaggedRows {
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("EmptyDataset: {0}")]
    EmptyDataset(String),

    #[error("MissingLabels: dataset {0:?} has no ground-truth labels")]
    MissingLabels(String),

    #[error("IoError: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CsvError: {0}")]
    Csv(#[from] csv::Error),

    #[error("InvalidSpread: spread must be finite and > 0, got {0}")]
    InvalidSpread(f64),

    #[error("TooFewPoints: need at least {required} points, got {actual}")]
    TooFewPoints { required: usize, actual: usize },

    #[error("InvalidParams: {0}")]
    InvalidParams(String),

    #[error("DimensionMismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("NonFiniteInput: vectors must contain only finite values")]
    NonFiniteInput,

    #[error("KOutOfRange: k = {k} must satisfy 1 <= k <= n - 1 (n = {n})")]
    KOutOfRange { k: usize, n: usize },

    #[error("TooFewObjects: need at least {required} objects, got {actual}")]
    TooFewObjects { required: usize, actual: usize },

    #[error("SplitOutOfRange: split {p} outside [{min}, {max}]")]
    SplitOutOfRange { p: usize, min: usize, max: usize },

    #[error("SubsetTooSmall: subset of {size} objects cannot supply an m = {m} neighbor")]
    SubsetTooSmall { size: usize, m: usize },

    #[error("SubsetDegenerate: eps is 0 (subset members coincide)")]
    SubsetDegenerate,

    #[error("DegenerateDenseSubset: dense subset has {size} objects, need at least m + 1 = {needed}")]
    DegenerateDenseSubset { size: usize, needed: usize },

    #[error("NoLabeledSeed: no labeled object to grow clusters from")]
    NoLabeledSeed,

    #[error("UnassignedObjects: {0} objects still carry no cluster")]
    UnassignedObjects(usize),

    #[error("LengthMismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("NotTwoDimensional: dataset has {0} features")]
    NotTwoDimensional(usize),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
