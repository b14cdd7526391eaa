use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("characteristic {0} is not a prime greater than 3")]
    InvalidCharacteristic(u32),

    #[error("attempted to invert zero")]
    ZeroInverse,

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("variable index {index} out of range 1..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("operands belong to different signatures")]
    SignatureMismatch,

    #[error("operation requires {0}")]
    WrongContext(&'static str),

    #[error("element is not homogeneous in the requested grading")]
    NonHomogeneous,

    #[error("ambient dimensions differ: {left} vs {right}")]
    AmbientMismatch { left: usize, right: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("internal consistency failure: {0}")]
    Consistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
