use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("division by zero in {0}")]
    ZeroDenominator(&'static str),
    #[error("empty input to {0}")]
    EmptyInput(&'static str),
    #[error("zero entry in input to {0}")]
    ZeroEntry(&'static str),
    #[error("septuple is not a perfect cuboid")]
    NotPerfect,
    #[error("point does not denormalize to integers: {0}")]
    NonIntegral(String),
    #[error("characteristic polynomial vanishes identically at ({a_sq}, {b_sq})")]
    IdenticallyZero { a_sq: String, b_sq: String },
    #[error("triple {0:?} is not a face cuboid")]
    NotFaceCuboid([u64; 3]),
    #[error("squared inputs disagree with the parameter point: {0}")]
    InconsistentSquares(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("checkpoint mismatch: {0}")]
    CheckpointMismatch(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
