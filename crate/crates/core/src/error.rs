//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Operand shapes are incompatible with the requested operation.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// A matrix handed to the Hermitian eigensolver is not Hermitian.
    #[error("matrix is not Hermitian: relative asymmetry {asymmetry:.3e} exceeds {tol:.1e}")]
    NotHermitian { asymmetry: f64, tol: f64 },

    /// An iterative kernel (Jacobi sweep, SVD, bisection loop) did not reach
    /// its tolerance within the iteration cap.
    #[error("failed to converge: {0}")]
    ConvergenceFailure(String),

    /// The matrix exponential cannot be computed without overflowing.
    #[error("matrix exponential overflow: {0}")]
    Overflow(String),

    /// A density matrix violates its Hermiticity/trace/positivity tolerances.
    #[error("invalid state: {0}")]
    InvalidState(String),

    /// Model parameters are out of their allowed ranges.
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    /// The Liouvillian nullspace gap is too small to certify uniqueness.
    #[error("steady state not unique: nullspace gap {gap:.3e} below {tol:.1e}")]
    NonUniqueSteadyState { gap: f64, tol: f64 },

    /// The extracted steady state has a negative eigenvalue beyond tolerance.
    #[error("steady state not positive: min eigenvalue {min_eigenvalue:.3e} below -{tol:.1e}")]
    NotPositive { min_eigenvalue: f64, tol: f64 },

    /// The raw nullspace vector has (near-)zero trace and cannot be normalized.
    #[error("steady-state candidate has near-zero trace |tr| = {0:.3e}")]
    ZeroTrace(f64),

    /// A truncated eigenstate mixture was requested with no usable weight.
    #[error("empty eigenstate selection: total selected fidelity {0:.3e}")]
    EmptySelection(f64),

    /// An eigenstate index outside 0..len was requested.
    #[error("eigenstate index {index} out of range 0..{len}")]
    IndexOutOfRange { index: usize, len: usize },

    /// Time propagation hit the time cap before reaching the steady state.
    #[error(
        "trajectory not converged by t_cap = {t_cap} (last trace distance {last_distance:.3e})"
    )]
    NotConverged { t_cap: f64, last_distance: f64 },

    /// A bisection bracket does not enclose the requested crossing.
    #[error("invalid bracket: {0}")]
    BracketInvalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
