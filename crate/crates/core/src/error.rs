//! Crate-wide error type for precondition and usage failures.

use thiserror::Error;

/// Errors raised when an operation's preconditions are violated or an input
/// is outside the supported envelope.
#[derive(Debug, Error)]
pub enum Error {
    /// Two operands live in exterior algebras of different ambient dimension.
    #[error("ambient dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),

    /// A matrix operation received incompatible shapes.
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    /// An operation requiring a square even-sized matrix got something else.
    #[error("expected even-sized square matrix, got {rows}x{cols}")]
    NotEvenSquare { rows: usize, cols: usize },

    /// A matrix failed a required symmetry check (skew, skew-Hermitian).
    #[error("symmetry violation: {0}")]
    SymmetryViolation(String),

    /// Form entries of the wrong parity for an operation that needs
    /// commuting (even-degree) entries.
    #[error("entry degree violation: {0}")]
    DegreeViolation(String),

    /// A characteristic-class monomial failed to parse or is unknown.
    #[error("bad class monomial '{0}': {1}")]
    BadMonomial(String, String),

    /// A class monomial's total degree does not match the base dimension.
    #[error("degree mismatch: monomial '{monomial}' has degree {degree}, base dimension is {dim}")]
    DegreeMismatch {
        monomial: String,
        degree: usize,
        dim: usize,
    },

    /// A validation threshold was exceeded (residual imaginary parts, and
    /// similar internal consistency checks).
    #[error("validation failed: {0}")]
    ValidationFailed(String),

    /// Requested model or section is not in the registry.
    #[error("unknown {kind} '{name}'")]
    UnknownName { kind: &'static str, name: String },

    /// The operation is outside the supported envelope (rank, slot grading).
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// A numeric routine failed to converge or hit a degenerate pivot.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Bad user-facing configuration (CLI flag or config-file value).
    #[error("bad config: {0}")]
    BadConfig(String),
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
