//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite return in cell (day {day}, index {label})")]
    NonFiniteReturn { day: String, label: String },

    #[error("invalid panel: {0}")]
    InvalidPanel(String),

    #[error("no common dates across the input series")]
    EmptyDateIntersection,

    #[error("series too short: need at least {required} observations, got {actual}")]
    SeriesTooShort { required: usize, actual: usize },

    #[error("singular regression design ({context})")]
    SingularRegression { context: String },

    #[error("explosive coupling matrix: spectral radius {spectral_radius} >= 1")]
    ExplosiveCoupling { spectral_radius: f64 },

    #[error("residual variance is zero for index {label}")]
    ZeroResidualVariance { label: String },

    #[error("row {row} of the decomposition matrix sums to zero")]
    ZeroRowSum { row: usize },

    #[error("dimension mismatch in {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: String,
        expected: usize,
        actual: usize,
    },

    #[error("eigendecomposition failed: {0}")]
    EigenFailure(String),

    #[error("insufficient history: need {required} days, have {available}")]
    InsufficientHistory { required: usize, available: usize },

    #[error("training diverged at epoch {epoch}: loss is not finite")]
    NonFiniteLoss { epoch: usize, log: Vec<f64> },

    #[error("wrong model kind: expected {expected}, got {actual}")]
    WrongModelKind { expected: String, actual: String },

    #[error("error series length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("forecast sets disagree on labels or truth: {0}")]
    ReportMismatch(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("stage {stage} failed: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Tag an error with the pipeline stage it occurred in.
    pub fn in_stage(self, stage: &'static str) -> Error {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
