use thiserror::Error;

/// Errors produced by ring construction and the computations built on top of it.
#[derive(Debug, Error)]
pub enum Error {
    /// The ring-spec string violated the grammar.
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    /// A structurally valid spec carried an invalid parameter (n < 2, composite
    /// characteristic, reducible polynomial, ...).
    #[error("invalid ring parameter: {0}")]
    InvalidParameter(String),

    /// A computation would exceed the configured size guard.
    #[error("size guard exceeded: needs {needed}, guard is {guard}")]
    GuardExceeded { needed: u64, guard: u64 },

    /// The Jacobson-radical quotient is not constructible for this spec shape.
    #[error("unsupported quotient shape: {0}")]
    UnsupportedQuotient(String),

    /// A connection set for an S-graph was not closed under negation.
    #[error("connection set is not symmetric: element {elem} lacks its negation")]
    AsymmetricSet { elem: u64 },

    /// The operation is only defined for non-extremal rings.
    #[error("operation requires a non-extremal ring")]
    ExtremalRing,

    /// An internal cross-check failed; this is a bug, not a user error.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, Error>;
