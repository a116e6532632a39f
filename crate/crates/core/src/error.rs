//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised by grid, operator-field and transform operations.
#[derive(Debug, Error)]
pub enum CoreError {
    /// A group point is outside its model's chart (e.g. affine scale `a <= 0`).
    #[error("invalid group point: {0}")]
    Domain(String),

    /// Two grid functions (or a function and a model) refer to different grids.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// An operation was called outside its contract (wrong model class,
    /// negative weight, dimension mismatch, ...).
    #[error("contract violation: {0}")]
    Contract(String),

    /// A stated precondition does not hold on the given grid.
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// Inverting a Duflo-Moore diagonal would underflow; the densely
    /// defined inverse has no faithful finite representation here.
    #[error("inverse not representable: diagonal entry {entry:e} at index {index}")]
    InverseNotRepresentable { index: usize, entry: f64 },

    /// A hypothesis of the invoked inversion/admissibility statement is
    /// violated on this input (trace-class surrogate, domain condition).
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    /// Input/output or serialization failure.
    #[error("io: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
