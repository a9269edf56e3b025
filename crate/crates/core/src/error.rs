//! Error type shared by the whole crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Vectors or classes of incompatible length.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A linear system without a unique solution.
    #[error("singular system: {0}")]
    Singular(String),

    /// An internal safety budget was exceeded (iteration counts, sizes).
    #[error("internal limit exceeded: {0}")]
    Limit(String),

    /// Malformed textual input.
    #[error("parse error: {0}")]
    Parse(String),

    /// Structurally inconsistent serialized data.
    #[error("inconsistent input: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
