use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("cannot parse Cartan type {0:?}: expected a family letter A-D followed by the rank")]
    ParseCartanType(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expected an even number of arguments, got {0}")]
    OddLength(usize),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("representation error: {0}")]
    Representation(String),

    #[error("weight {0:?} is not dominant")]
    NotDominant(Vec<i64>),

    #[error("generator construction failed: {0}")]
    Generators(String),

    #[error("stratum {stratum} unreachable by sampler")]
    UnreachableStratum { stratum: usize },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
