//! Error taxonomy shared by all solvers.

use thiserror::Error;

/// Errors reported by assembly, solvers and iterative routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments: mismatched lengths, out-of-contract field values.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A parameter lies outside the range in which an operation is defined.
    #[error("out of range: {0}")]
    OutOfRange(String),

    /// A runtime check failed that analysis says should be unreachable.
    #[error("numerical guard: {0}")]
    NumericalGuard(String),

    /// Pivot collapse during banded LU factorization.
    #[error("singular system: {0}")]
    SingularSystem(String),

    /// An iteration hit its cap without meeting its stopping criterion.
    #[error("no convergence: {0}")]
    NoConvergence(String),

    /// An inverse-power iterate developed an interior sign change,
    /// signalling a non-sign-preserving operator.
    #[error("positivity failure: {0}")]
    PositivityFailure(String),

    /// Input is degenerate for the requested analysis (e.g. u identically zero).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// No bracket for the pull-in threshold could be established.
    #[error("bracket failure: {0}")]
    BracketFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
