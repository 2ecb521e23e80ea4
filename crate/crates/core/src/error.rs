use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("matrix is not Hermitian (max |m - m†| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("shape mismatch: expected {expected}, found {found}")]
    ShapeMismatch { expected: String, found: String },

    #[error("invalid shape: {0}")]
    InvalidShape(String),

    #[error("invariant `{invariant}` violated (deviation {deviation:e})")]
    InvariantViolation { invariant: &'static str, deviation: f64 },

    #[error("support mismatch (deviation {deviation:e})")]
    SupportMismatch { deviation: f64 },

    #[error("ensemble member leaves the support of the state (deviation {deviation:e})")]
    SupportViolation { deviation: f64 },

    #[error("not trace preserving (deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },

    #[error("measurement basis is not a POVM: {0}")]
    BasisNotPovm(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn shape_mismatch(expected: impl std::fmt::Display, found: impl std::fmt::Display) -> Self {
        Error::ShapeMismatch {
            expected: expected.to_string(),
            found: found.to_string(),
        }
    }

    /// Whether the error reports a violated mathematical invariant rather
    /// than malformed input or a solver failure.
    pub fn is_invariant_violation(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian { .. }
                | Error::NotPositive { .. }
                | Error::InvariantViolation { .. }
                | Error::SupportMismatch { .. }
                | Error::SupportViolation { .. }
                | Error::NotTracePreserving { .. }
                | Error::BasisNotPovm(_)
        )
    }
}
