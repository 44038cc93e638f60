use thiserror::Error;

/// Errors produced by the dense types, reflector construction, and the solver.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vector must contain at least one element")]
    EmptyVector,

    #[error("matrix shape {rows}x{cols} does not match data length {len}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        len: usize,
    },

    #[error("non-finite value {value} at flat index {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    #[error("row index {index} out of range for matrix with {rows} rows")]
    RowOutOfRange { index: usize, rows: usize },

    #[error("matrix must be at least 2x2 to take the (1,1) minor")]
    MinorTooSmall,

    #[error("row norm {norm:e} is at or below tolerance {tol:e}; no reflector exists")]
    ZeroNorm { norm: f64, tol: f64 },

    #[error(
        "singular or ill-conditioned system at reduction step {step}: \
         leading row norm {row_norm:e} is at or below tolerance {tol:e}"
    )]
    SingularOrIllConditioned {
        step: usize,
        row_norm: f64,
        tol: f64,
    },

    #[error("terminal system is numerically singular: |det| = {det:e} <= {threshold:e}")]
    Degenerate2x2 { det: f64, threshold: f64 },

    #[error("operation-count formulas are defined for n >= 3, got n = {n}")]
    CountDomain { n: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
