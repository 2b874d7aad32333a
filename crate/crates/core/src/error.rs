use thiserror::Error;

use crate::expr::ParseError;

/// Errors raised by the algebra, series and variety layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(String, String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("series with constant term {0} is not invertible")]
    NotInvertible(String),
    #[error("square classes {0} are not multiplicatively independent")]
    NotIndependent(String),
    #[error("degenerate Gram matrix")]
    Degenerate,
    #[error("{0} is not an effective form")]
    NotEffective(String),
    #[error("zero has no square class")]
    ZeroClass,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

pub type Result<T> = std::result::Result<T, Error>;
