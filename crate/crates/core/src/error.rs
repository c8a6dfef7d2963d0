use thiserror::Error;

/// Errors produced by the library.
///
/// Variants are grouped roughly by the layer that raises them: integer
/// arithmetic, group construction, discrete words, and the extension step.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("integer overflow in {0}")]
    Overflow(&'static str),

    #[error("matrix with determinant {det} is not invertible over the integers")]
    NonInvertible { det: i64 },

    #[error("invalid theta: {0}")]
    InvalidTheta(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("basis mismatch: expected {expected}, got {got}")]
    BasisMismatch {
        expected: &'static str,
        got: &'static str,
    },

    #[error("generators do not generate D: {0}")]
    NotGenerating(String),

    #[error("not an automorphism of D: {0}")]
    NotAutomorphism(String),

    #[error("automorphism of D does not extend to S2: {0}")]
    NoExtension(String),

    #[error("F is singular at q = {q} (q is a multiple of the order {order})")]
    SingularF { q: i64, order: u32 },

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
