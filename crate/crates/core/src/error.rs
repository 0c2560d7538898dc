use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid group spec: {0}")]
    InvalidSpec(String),

    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// An element, subset or operand does not belong to the group it was used with.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("group of order {order} exceeds enumeration cap {cap}")]
    TooLarge { order: String, cap: u64 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("arity mismatch: expected {expected}, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// The hypothesis of a bound formula does not hold for the given parameters.
    #[error("formula not applicable: {0}")]
    Inapplicable(String),

    #[error("search budget must be positive")]
    EmptySearch,
}
