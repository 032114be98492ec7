use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix has non-finite entries")]
    NonFinite,
    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian: asymmetry {asymmetry:e} exceeds {tolerance:e}")]
    NotHermitian { asymmetry: f64, tolerance: f64 },
    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e} below {tolerance:e}")]
    NotPsd { min_eigenvalue: f64, tolerance: f64 },
    #[error("dimension mismatch: {left:?} vs {right:?}")]
    DimensionMismatch {
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("invalid exponent {0}")]
    BadExponent(f64),
    #[error("invalid matrix shape: {0}")]
    BadShape(String),
    #[error("scalar maps violate f(t)g(t) = t on the spectrum: {0}")]
    FgProductViolation(String),
    #[error("unknown lemma id `{0}`")]
    UnknownLemma(String),
    #[error("unknown bound id `{0}`")]
    UnknownBound(String),
    #[error("bounds `{0}` and `{1}` do not bound the same quantity")]
    IncomparableBounds(String, String),
    #[error("invalid ensemble spec: {0}")]
    BadSpec(String),
    #[error("invalid sweep config: {0}")]
    BadSweep(String),
    #[error("internal consistency check failed: {0}")]
    InternalConsistency(String),
}
