//! Dense direct linear-system solver built on Householder row reflections.
//!
//! Each forward step right-multiplies the system matrix by a reflector chosen
//! so the leading row becomes k·e₁, reads off one unknown, and continues on
//! the (1,1) minor until a 2x2 system remains; a reflector-chain back
//! substitution then recovers the full solution. No pivoting or row
//! exchanges are involved; a row-norm gate rejects singular or
//! ill-conditioned inputs instead.
//!
//! The crate also ships a Gaussian-elimination reference solver for
//! cross-checking, a deterministic corpus generator, operation-count
//! instrumentation with closed-form predictions, and Matrix Market file IO.
//! A separate binary crate exposes all of it on the command line.
//!
//! ```
//! use hhsolve_core::{solve, DenseMatrix, DenseVector, SolverConfig};
//!
//! let a = DenseMatrix::from_rows(&[
//!     vec![4.0, 1.0, 0.0],
//!     vec![1.0, 3.0, 1.0],
//!     vec![0.0, 1.0, 2.0],
//! ])
//! .unwrap();
//! let b = DenseVector::new(vec![1.0, 2.0, 3.0]).unwrap();
//! let report = solve(&a, &b, &SolverConfig::default()).unwrap();
//! assert!(report.relative_residual < 1e-12);
//! assert_eq!(report.counter.forward_sv, 2);
//! ```
//!
//! With the default `parallel` feature the dense kernels split row sweeps
//! across threads for large matrices. Each row is still reduced sequentially,
//! so enabling or disabling the feature never changes a single bit of output.

pub mod corpus;
pub mod count;
pub mod dense;
pub mod error;
pub mod io;
pub mod oracle;
pub mod reflector;
pub mod solve;

pub use corpus::{gen_system, SplitMix64, SystemKind};
pub use count::{predicted_forward_sv, predicted_total_sv, OpCounter};
pub use dense::{axpy, DenseMatrix, DenseVector};
pub use error::{Error, Result};
pub use io::{
    format_matrix, format_vector, parse_matrix, parse_vector, read_matrix, read_vector,
    write_matrix, write_vector, IoError, SolverReportDocument, REPORT_SCHEMA_VERSION,
};
pub use oracle::{gauss_solve, residual, OracleResult};
pub use reflector::{Reflector, SignStrategy};
pub use solve::{
    back_substitute, forward_reduce, solve, solve_2x2, ReductionStack, ReductionStep, SolverConfig,
    SolverReport, RESIDUAL_WARN_THRESHOLD,
};
