use thiserror::Error;

use crate::algebra::Signature;

/// Errors raised by the algebra, the brackets and the checkers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("signature mismatch: {0} vs {1}")]
    SignatureMismatch(Signature, Signature),

    #[error("{kind} index {index} out of range 1..={max}")]
    IndexOutOfRange {
        kind: &'static str,
        index: usize,
        max: usize,
    },

    #[error("element is not invertible: {0}")]
    NotInvertible(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("wrong number of arguments: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("incompatible signature: {0}")]
    IncompatibleSignature(String),

    #[error("invalid degree: {0}")]
    Degree(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error at column {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("unknown variable `{name}` at column {position}")]
    UnknownVariable { name: String, position: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
