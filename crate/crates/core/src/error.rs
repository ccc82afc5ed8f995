use alloc::string::String;

/// Errors raised by the core routines.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Shapes of expressions, vectors or matrices do not agree.
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// A Gram matrix needs more dimensions than were requested.
    #[error("rank {rank} exceeds the available dimension {dim}")]
    Rank { rank: usize, dim: usize },
    /// An exhaustive routine was asked for more work than its cap allows.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Round-off beyond tolerated slack.
    #[error("numerical error: {0}")]
    Numerical(String),
}

pub type Result<T> = core::result::Result<T, Error>;
