use thiserror::Error;

/// Errors raised by the optimisation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    Dimension { expected: usize, actual: usize },

    #[error("unsupported objective count {0}: only bi-objective problems are supported")]
    UnsupportedObjectiveCount(usize),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("variable {index} = {value} lies outside [{lower}, {upper}]")]
    Domain {
        index: usize,
        value: f64,
        lower: f64,
        upper: f64,
    },

    #[error("metric error: {0}")]
    Metric(String),

    #[error("aggregation error: {0}")]
    Aggregation(String),

    #[error("undefined ratio: baseline interval {0} is zero")]
    UndefinedRatio(usize),

    #[error("degenerate sample: all paired differences are zero")]
    DegenerateSample,

    #[error("unknown problem `{0}`")]
    UnknownProblem(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, actual: usize) -> Result<()> {
    if expected == actual {
        Ok(())
    } else {
        Err(Error::Dimension { expected, actual })
    }
}
