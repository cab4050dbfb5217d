//! Shared error types for the solver layers.

use thiserror::Error;

/// Malformed problem data: structurally unusable input, as opposed to a
/// violated model assumption (which lands in a `ValidationReport`).
#[derive(Debug, Error)]
pub enum ProblemError {
    #[error("empty {0} data")]
    Empty(&'static str),
    #[error("{0} grids must have equal length: u0 has {1}, w0 has {2}")]
    GridMismatch(&'static str, usize, usize),
    #[error("{what} requires at least {min} entries, got {got}")]
    TooFew {
        what: &'static str,
        min: usize,
        got: usize,
    },
    #[error("non-monotone {what} at index {index}")]
    NonMonotone { what: &'static str, index: usize },
    #[error("non-finite value in {what} at index {index}")]
    NonFinite { what: &'static str, index: usize },
    #[error("{what} must be strictly positive, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("sorption smoothing halfwidth {halfwidth} exceeds half the minimum breakpoint gap {max}")]
    SmoothingTooWide { halfwidth: f64, max: f64 },
    #[error("oven schedule flagged constant but samples vary (index {index})")]
    NotConstant { index: usize },
    #[error("{0}")]
    Invalid(String),
}

/// A rejected time step. The caller may retry with a smaller `dt`, except for
/// the moisture-floor case which terminates the run.
#[derive(Debug, Error)]
pub enum StepError {
    #[error("radiative boundary Newton did not converge in {iters} iterations (residual {residual:.3e})")]
    NewtonDiverged { iters: usize, residual: f64 },
    #[error("front fixed-point iteration did not converge in {iters} iterations (last increment {increment:.3e})")]
    PicardExceeded { iters: usize, increment: f64 },
    #[error("front moisture {value:.6e} below floor delta1 = {floor:.6e}")]
    MoistureFloor { value: f64, floor: f64 },
    #[error("front moved {delta:.3e} in one step from e = {e:.6}; step too large")]
    FrontJump { e: f64, delta: f64 },
    #[error("singular tridiagonal system in {0} step")]
    Singular(&'static str),
    #[error(transparent)]
    Domain(#[from] crate::landau::LandauError),
}

/// Failure to start or finish a simulation run.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("setup validation failed: {0}")]
    Validation(String),
    #[error(transparent)]
    Malformed(#[from] ProblemError),
    #[error("configuration error: {0}")]
    Config(String),
}
