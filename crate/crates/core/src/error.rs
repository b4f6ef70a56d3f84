use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("series constant term must be positive, got {0}")]
    NonPositiveConstantTerm(f64),

    #[error("coefficient index {index} exceeds series order {order}")]
    IndexBeyondOrder { index: usize, order: usize },

    #[error("mean {m} lies outside the mean domain ({lo}, {hi})")]
    MeanOutOfDomain { m: f64, lo: f64, hi: f64 },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("generating measure is not representable at n = {n}")]
    MeasureOverflow { n: usize },

    #[error("distribution tail not below tolerance before n = {cap}")]
    TailNotReached { cap: usize },

    #[error("measure is unbounded: {0}")]
    UnboundedMeasure(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("data set is empty")]
    EmptyData,

    #[error("data needs at least {needed} distinct values, found {found}")]
    TooFewValues { needed: usize, found: usize },

    #[error("duplicate value {value} on line {line}")]
    DuplicateValue { value: u64, line: usize },

    #[error("negative count on line {line}")]
    NegativeCount { line: usize },

    #[error("parse error on line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("sample variance {variance} does not exceed the mean {mean}")]
    Underdispersed { mean: f64, variance: f64 },

    #[error("likelihood has no interior maximum in the search bracket")]
    NoInteriorMaximum,

    #[error("optimizer did not converge after {0} iterations")]
    NonConvergence(usize),

    #[error("pooling left {cells} cells, need at least {needed}")]
    DegeneratePooling { cells: usize, needed: usize },

    #[error("model assigns zero probability to observed value {0}")]
    ModelZeroOnSupport(u64),
}

pub type Result<T> = std::result::Result<T, Error>;
