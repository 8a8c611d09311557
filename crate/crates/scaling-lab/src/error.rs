//! Crate-wide error type.

use thiserror::Error;

use crate::laws::ModelKind;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot parse model size {label:?}: {reason}")]
    SizeParse { label: String, reason: String },

    #[error("invalid score data: {0}")]
    Data(String),

    #[error("ingest failed: {0}")]
    Ingest(String),

    #[error("ingest failed, bad rows:\n{}", .0.join("\n"))]
    IngestRows(Vec<String>),

    #[error("missing required column {0:?}")]
    MissingColumn(String),

    #[error("input file has a header but no data rows")]
    EmptyInput,

    #[error("power law pole: x = 0 with negative exponent")]
    PowerLawPole,

    #[error("log transform kept {kept} of {total} points (minimum 3); offset {offset}")]
    LinearizationFailed {
        kept: usize,
        total: usize,
        offset: f64,
    },

    #[error("{kind:?} fit failed: {reason}")]
    FitFailed { kind: ModelKind, reason: String },

    #[error("degenerate series: all sizes are equal")]
    DegenerateSeries,

    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("singular design: all predictor values equal")]
    SingularDesign,

    #[error("ordinary least squares needs at least 2 points, got {0}")]
    TooFewForOls(usize),

    #[error("Shapiro-Wilk supports 3 <= n <= 5000, got {0}")]
    UnsupportedSampleSize(usize),

    #[error("degenerate sample: zero variance")]
    DegenerateSample,

    #[error("need at least {need} points for {k} folds, got {have}")]
    TooFewPoints { need: usize, have: usize, k: usize },

    #[error("cross-validation failed on fold {fold}: {source}")]
    Stage1Failed {
        fold: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("models are indistinguishable on this data (zero variance of log-likelihood differences)")]
    IndistinguishableModels,

    #[error("log-likelihood vectors differ in length: {0} vs {1}")]
    LoglikLengthMismatch(usize, usize),

    #[error("confidence band needs more than 3 points, got {0}")]
    BandUndefined(usize),

    #[error("invalid synthetic spec: {0}")]
    InvalidSynthSpec(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
