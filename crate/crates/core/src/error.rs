//! Shared error type for all toolkit operations.

use thiserror::Error;

/// Errors produced by toolkit operations.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity {0} outside supported range {1}..={2}")]
    ArityOutOfRange(usize, usize, usize),
    #[error("unknown function family `{0}`")]
    UnknownFamily(String),
    #[error("invalid parameters for family `{family}`: {reason}")]
    InvalidParams { family: String, reason: String },
    #[error("truth table has {got} bits, expected {expected}")]
    TableSizeMismatch { got: usize, expected: usize },
    #[error("variable index {0} out of range 1..={1}")]
    VarOutOfRange(usize, usize),
    #[error("blocks overlap at variable {0}")]
    OverlappingBlocks(usize),
    #[error("block touches position {0}, which is 1 in the base input")]
    BlockOnOnePosition(usize),
    #[error("matrix is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },
    #[error("dimension cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: usize,
        cap: usize,
    },
    #[error("function is not monotone")]
    NonMonotone,
    #[error("function is not symmetric")]
    NonSymmetric,
    #[error("invalid cover: {0}")]
    InvalidCover(String),
    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),
    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
    #[error("parse error: unexpected token `{token}` in `{input}`")]
    Parse { token: String, input: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unsupported epsilon for this formula: {0}")]
    UnsupportedEps(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
