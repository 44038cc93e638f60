//! Householder reflectors built from a single row and applied as rank-one
//! updates.
//!
//! A reflector H = I − 2vvᵀ with unit v is symmetric, orthogonal, and its own
//! inverse. Built from a row a, it maps a onto k·e₁ with |k| = ‖a‖; the sign
//! of k is a strategy choice that decides whether the construction can cancel.

use crate::count::OpCounter;
use crate::dense::{dot_slices, norm2_slice, DenseMatrix, DenseVector};
use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
use crate::dense::PAR_ROW_THRESHOLD;
#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Choice of the reflection target's sign, k = ±‖a‖.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SignStrategy {
    /// k = +‖a‖ regardless of the row's leading sign. When the row is nearly
    /// a positive multiple of e₁ the difference a − k·e₁ cancels
    /// catastrophically; construction then falls back to the identity path.
    Positive,
    /// k = −sign(a₁)·‖a‖ with sign(0) = +1, so a − k·e₁ never cancels. This
    /// is the default.
    #[default]
    FlipSign,
}

/// A Householder reflection built from one row vector.
///
/// `v` is absent for the identity case: a row already proportional to k·e₁
/// within tolerance needs no reflection, and H = I achieves the target
/// exactly. The source row is retained so that applying the reflector to a
/// matrix whose leading row it was built from can assign that row its known
/// image (k, 0, …, 0) with structural zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Reflector {
    v: Option<DenseVector>,
    k: f64,
    dim: usize,
    source: Vec<f64>,
}

impl Reflector {
    /// Builds the reflector mapping `a` onto k·e₁.
    ///
    /// The degenerate test uses the analytic denominator √(2|k|(|k| − ±a₁))
    /// rather than the subtracted vector's norm: in the cancellation regime
    /// the two disagree, and the analytic form is the one that detects it.
    pub fn from_row(a: &DenseVector, strategy: SignStrategy, tol: f64) -> Result<Self> {
        let norm = a.norm2();
        if norm <= tol {
            return Err(Error::ZeroNorm { norm, tol });
        }
        let k = match strategy {
            SignStrategy::Positive => norm,
            SignStrategy::FlipSign => {
                if a[0] < 0.0 {
                    norm
                } else {
                    -norm
                }
            }
        };
        // ‖a − k·e₁‖² = 2|k|(|k| − sign(k)·a₁); clamp the difference, which
        // can round just below zero when a is a near-positive multiple of e₁.
        let lead = if k > 0.0 { a[0] } else { -a[0] };
        let den = (2.0 * norm * (norm - lead).max(0.0)).sqrt();
        if den < tol * norm {
            return Ok(Self {
                v: None,
                k: norm,
                dim: a.len(),
                source: a.as_slice().to_vec(),
            });
        }
        let mut u = a.as_slice().to_vec();
        u[0] -= k;
        let un = norm2_slice(&u);
        for x in &mut u {
            *x /= un;
        }
        Ok(Self {
            v: Some(DenseVector::from_raw(u)),
            k,
            dim: a.len(),
            source: a.as_slice().to_vec(),
        })
    }

    /// The reflection target scalar: the source row maps to k·e₁.
    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// True when H = I (source row already proportional to k·e₁).
    pub fn is_identity(&self) -> bool {
        self.v.is_none()
    }

    /// The unit reflection vector; absent in the identity case.
    pub fn v(&self) -> Option<&DenseVector> {
        self.v.as_ref()
    }

    /// Applies H to a row vector: a − 2(a·v)v. The Euclidean norm is
    /// preserved.
    pub fn reflect_row(&self, a: &DenseVector) -> Result<DenseVector> {
        self.check_len(a.len())?;
        let Some(v) = &self.v else {
            return Ok(a.clone());
        };
        let mut out = a.as_slice().to_vec();
        reflect_in_place(&mut out, v.as_slice());
        Ok(DenseVector::from_raw(out))
    }

    /// Applies H to a column vector. H is symmetric, so the arithmetic is the
    /// same as `reflect_row`.
    pub fn reflect_col(&self, z: &DenseVector) -> Result<DenseVector> {
        self.reflect_row(z)
    }

    /// Right-multiplies: D = C·H = C − 2(Cv)vᵀ, a rank-one update done as one
    /// sweep over rows. When row 0 of `c` is the exact row this reflector was
    /// built from, row 0 of D is assigned (k, 0, …, 0) directly; those zeros
    /// are structural facts of the reflection, not floating-point residue.
    ///
    /// The counter charges rows − 1 units either way: the leading row is free
    /// in the accounting, matching the closed-form predictions.
    pub fn apply_right(&self, c: &DenseMatrix, counter: &mut OpCounter) -> Result<DenseMatrix> {
        self.check_cols(c)?;
        let analytic = c.row_slice(0) == self.source.as_slice();
        #[cfg(feature = "parallel")]
        let out = if c.rows() >= PAR_ROW_THRESHOLD {
            self.sweep_par(c, analytic)
        } else {
            self.sweep_seq(c, analytic)
        };
        #[cfg(not(feature = "parallel"))]
        let out = self.sweep_seq(c, analytic);
        counter.add_forward(c.rows() as u64 - 1);
        Ok(out)
    }

    /// `apply_right` pinned to the sequential sweep, without counting. Kept
    /// public for kernel benchmarks.
    pub fn apply_right_seq(&self, c: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_cols(c)?;
        Ok(self.sweep_seq(c, c.row_slice(0) == self.source.as_slice()))
    }

    /// `apply_right` pinned to the row-parallel sweep, without counting. Rows
    /// are reduced independently and each one sequentially, so the result is
    /// bit-identical to the sequential sweep.
    #[cfg(feature = "parallel")]
    pub fn apply_right_par(&self, c: &DenseMatrix) -> Result<DenseMatrix> {
        self.check_cols(c)?;
        Ok(self.sweep_par(c, c.row_slice(0) == self.source.as_slice()))
    }

    fn sweep_seq(&self, c: &DenseMatrix, analytic: bool) -> DenseMatrix {
        let cols = c.cols();
        let mut data = c.as_slice().to_vec();
        if let Some(v) = &self.v {
            let vs = v.as_slice();
            let start = usize::from(analytic);
            for row in data.chunks_exact_mut(cols).skip(start) {
                reflect_in_place(row, vs);
            }
        }
        if analytic {
            data[0] = self.k;
            data[1..cols].fill(0.0);
        }
        DenseMatrix::from_raw(c.rows(), cols, data)
    }

    #[cfg(feature = "parallel")]
    fn sweep_par(&self, c: &DenseMatrix, analytic: bool) -> DenseMatrix {
        let cols = c.cols();
        let mut data = c.as_slice().to_vec();
        if let Some(v) = &self.v {
            let vs = v.as_slice();
            let start = usize::from(analytic);
            data.par_chunks_exact_mut(cols)
                .skip(start)
                .for_each(|row| reflect_in_place(row, vs));
        }
        if analytic {
            data[0] = self.k;
            data[1..cols].fill(0.0);
        }
        DenseMatrix::from_raw(c.rows(), cols, data)
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.dim {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "reflector of dimension {} applied to vector of length {len}",
                    self.dim
                ),
            });
        }
        Ok(())
    }

    fn check_cols(&self, c: &DenseMatrix) -> Result<()> {
        if c.cols() != self.dim {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "reflector of dimension {} right-applied to {}x{} matrix",
                    self.dim,
                    c.rows(),
                    c.cols()
                ),
            });
        }
        Ok(())
    }
}

fn reflect_in_place(row: &mut [f64], v: &[f64]) {
    let c = -2.0 * dot_slices(row, v);
    for (r, vi) in row.iter_mut().zip(v) {
        *r += c * vi;
    }
}
