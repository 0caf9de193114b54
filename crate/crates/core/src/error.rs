use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max |A - A†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("non-finite entry in operator")]
    NonFinite,

    #[error("theta = {0} is outside [0, π]")]
    ThetaOutOfRange(f64),

    #[error("truncation {truncation} too small for n = {n}; need at least n + 2")]
    TruncationTooSmall { n: usize, truncation: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("no outcomes to estimate from")]
    EmptySample,

    #[error("outcome {0} does not belong to the measurement")]
    UnknownOutcome(String),

    #[error("an observed outcome has zero probability everywhere on the search interval")]
    ImpossibleOutcome,

    #[error("likelihood is flat on the search interval; the parameter is not identifiable")]
    FlatLikelihood,

    #[error("zero Fisher information at omega = {omega} (F = {fisher:e}); the measurement carries no information")]
    ZeroInformation { omega: f64, fisher: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
