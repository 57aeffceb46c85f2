use thiserror::Error;

/// Errors shared across the toolkit.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("parity violation: {0}")]
    Parity(String),

    #[error("point violates row {row_index} ({description})")]
    Membership { row_index: usize, description: String },

    #[error("ambient dimension {dim} exceeds double-description cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("brute-force enumeration capped at n <= {cap}, got n = {n}")]
    BruteForceCap { n: usize, cap: usize },

    #[error("polyhedron is not pointed; no vertex representation exists")]
    NotPointed,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("malformed input: {0}")]
    Malformed(String),
}

pub type Result<T> = std::result::Result<T, Error>;
