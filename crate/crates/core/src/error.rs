//! Error types for the numerical core.

use thiserror::Error;

/// Errors raised by channel generation and the strategy solvers.
#[derive(Debug, Error)]
pub enum Error {
    /// Two nodes share a position, which makes a link gain singular.
    #[error("nodes {a} and {b} are co-located; all link distances must be positive")]
    CoLocatedNodes { a: &'static str, b: &'static str },

    /// A vector or matrix argument does not match the expected shape.
    #[error("dimension mismatch in {what}: expected {expected}, got {got}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },

    /// The projection basis is numerically rank deficient.
    #[error("rank-deficient projection basis: X^H X is numerically singular")]
    RankDeficient,

    /// A closed-form power formula was called outside its bracket.
    #[error("power bracket violated: {0}")]
    BracketViolated(&'static str),

    /// A transmit power argument was negative.
    #[error("negative transmit power: {0}")]
    NegativePower(f64),

    /// The feasibility bisection did not reach its residual tolerance.
    #[error("bisection failed after {iterations} iterations (residual {residual:e})")]
    BisectionFailed { iterations: usize, residual: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
