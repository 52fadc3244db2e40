use thiserror::Error;

/// Errors raised by the library. Every variant describes a violated
/// precondition; nothing here is recoverable by retrying.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("length {len} is not divisible by block length {k}")]
    NotDivisible { len: usize, k: usize },

    #[error("invalid bit character {0:?}")]
    InvalidBit(char),

    #[error("probability {0} outside [0, 1]")]
    InvalidProbability(f64),

    #[error("cannot draw from an empty range")]
    EmptyRange,

    #[error("invalid trap parameters: {0}")]
    InvalidParams(String),

    #[error("unitation {u} out of range for block length {k}")]
    UnitationOutOfRange { u: usize, k: usize },

    #[error("invalid FOS: {0}")]
    InvalidFos(String),

    #[error("population too small: need at least {needed}, have {have}")]
    PopulationTooSmall { needed: usize, have: usize },

    #[error("budget {budget} is smaller than the initialization cost {needed}")]
    BudgetTooSmall { budget: u64, needed: u64 },

    #[error("invalid experiment: {0}")]
    InvalidExperiment(String),

    #[error("numeric overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
