//! Reference solver and residual metric.
//!
//! The reference is Gaussian elimination with partial pivoting, a different
//! algorithm family from the reflection pipeline on purpose: when the two
//! agree on a corpus, the agreement is evidence rather than tautology.

use crate::dense::{norm2_slice, DenseMatrix, DenseVector};
use crate::error::{Error, Result};

/// Outcome of the reference solve.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Absent when elimination found the matrix singular.
    pub x: Option<DenseVector>,
    pub singular: bool,
    /// Ratio of largest to smallest absolute pivot: a cheap conditioning
    /// proxy, good enough for filtering test corpora. Infinite when singular.
    pub cond_estimate: f64,
}

/// Row elimination with partial (max-magnitude) pivoting and back
/// substitution. A pivot with magnitude at or below `tol` marks the matrix
/// singular.
pub fn gauss_solve(a: &DenseMatrix, b: &DenseVector, tol: f64) -> Result<OracleResult> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            context: format!("matrix is {}x{}, it must be square", a.rows(), a.cols()),
        });
    }
    if b.len() != a.rows() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                a.rows()
            ),
        });
    }
    let n = a.rows();
    let mut m = a.as_slice().to_vec();
    let mut rhs = b.as_slice().to_vec();
    let mut max_pivot = 0.0f64;
    let mut min_pivot = f64::INFINITY;

    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&p, &q| {
                m[p * n + col]
                    .abs()
                    .partial_cmp(&m[q * n + col].abs())
                    .expect("pivot magnitudes are finite")
            })
            .expect("column range is non-empty");
        let pivot = m[pivot_row * n + col];
        if pivot.abs() <= tol {
            return Ok(OracleResult {
                x: None,
                singular: true,
                cond_estimate: f64::INFINITY,
            });
        }
        if pivot_row != col {
            for j in col..n {
                m.swap(col * n + j, pivot_row * n + j);
            }
            rhs.swap(col, pivot_row);
        }
        max_pivot = max_pivot.max(pivot.abs());
        min_pivot = min_pivot.min(pivot.abs());
        for row in col + 1..n {
            let factor = m[row * n + col] / pivot;
            if factor != 0.0 {
                m[row * n + col] = 0.0;
                for j in col + 1..n {
                    m[row * n + j] -= factor * m[col * n + j];
                }
                rhs[row] -= factor * rhs[col];
            }
        }
    }

    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = rhs[row];
        for j in row + 1..n {
            s -= m[row * n + j] * x[j];
        }
        x[row] = s / m[row * n + row];
    }
    Ok(OracleResult {
        x: Some(DenseVector::from_raw(x)),
        singular: false,
        cond_estimate: max_pivot / min_pivot,
    })
}

/// Relative residual norm2(a·x − b) / norm2(b). When b is zero the
/// denominator is norm2(a·x) instead, and 0/0 is defined as 0.
pub fn residual(a: &DenseMatrix, x: &DenseVector, b: &DenseVector) -> Result<f64> {
    let ax = a.matvec(x)?;
    if b.len() != ax.len() {
        return Err(Error::DimensionMismatch {
            context: format!(
                "residual of length-{} product against length-{} right-hand side",
                ax.len(),
                b.len()
            ),
        });
    }
    let diff: Vec<f64> = ax.iter().zip(b.iter()).map(|(axi, bi)| axi - bi).collect();
    let num = norm2_slice(&diff);
    let nb = b.norm2();
    let denom = if nb > 0.0 { nb } else { ax.norm2() };
    if denom == 0.0 {
        return Ok(0.0);
    }
    Ok(num / denom)
}
