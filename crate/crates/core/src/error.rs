use std::path::PathBuf;

use thiserror::Error;

use crate::optim::OptimizerKind;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("batch size must be at least 1")]
    ZeroBatch,

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate step size: ‖z‖ = 0 and eps0 = 0")]
    DegenerateStepSize,

    #[error("optimizer kind {kind:?} cannot be used for {operation}")]
    KindMismatch {
        kind: OptimizerKind,
        operation: &'static str,
    },

    #[error("non-finite iterate produced at iteration {t}")]
    NonFinite { t: usize },

    #[error("empty dataset")]
    EmptyDataset,

    #[error("{}: row {row}: expected {expected} fields, found {found}", path.display())]
    RaggedRow {
        path: PathBuf,
        row: usize,
        expected: usize,
        found: usize,
    },

    #[error("{}: row {row}, column {column}: cannot parse {value:?} as a number", path.display())]
    NonNumeric {
        path: PathBuf,
        row: usize,
        column: usize,
        value: String,
    },

    #[error("{}: label column {column} out of range for rows of width {width}", path.display())]
    LabelColumnOutOfRange {
        path: PathBuf,
        column: usize,
        width: usize,
    },

    #[error("{}: unsupported IDX type (magic {magic:#010x})", path.display())]
    UnsupportedIdxType { path: PathBuf, magic: u32 },

    #[error("{}: truncated IDX file: expected {expected} bytes, found {found}", path.display())]
    TruncatedIdx {
        path: PathBuf,
        expected: usize,
        found: usize,
    },

    #[error("image/label count mismatch: {images} images, {labels} labels")]
    CountMismatch { images: usize, labels: usize },

    #[error("invalid label {label} at row {row}: {reason}")]
    InvalidLabel {
        row: usize,
        label: f64,
        reason: &'static str,
    },

    #[error("incompatible shapes: {0}")]
    Shape(String),

    #[error("objective constant `{0}` is unknown")]
    UnknownConstant(&'static str),

    #[error("insufficient seeds for expectation estimate: need at least {required}, got {got}")]
    InsufficientSeeds { required: usize, got: usize },

    #[error("trajectory {index} has length {found}, expected {expected}")]
    MismatchedTrajectories {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("empty trajectory")]
    EmptyTrajectory,

    #[error("empty gradient history")]
    EmptyHistory,

    #[error("theorem premises unmet: {0}")]
    PremisesUnmet(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },

    #[error("sweep requires at least 2 seeds, got {0}")]
    SweepTooFewSeeds(usize),

    #[error("unknown series {0:?}")]
    UnknownSeries(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: {source}", path.display())]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
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
