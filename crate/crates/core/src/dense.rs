//! Dense row-major matrix and vector types plus the low-level kernels the
//! solver is built from.
//!
//! All arithmetic is plain `f64`. Values are validated as finite when they
//! enter through the public constructors; internal transformations assume
//! finite inputs. With the `parallel` feature, the matrix kernels split work
//! across rows only; every output element is still reduced sequentially, so
//! parallel and sequential runs produce bit-identical results.

use crate::error::{Error, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Row count at which the kernels switch to the rayon path. Below this the
/// per-task overhead outweighs the work of a row sweep.
#[cfg(feature = "parallel")]
pub(crate) const PAR_ROW_THRESHOLD: usize = 128;

/// A dense column vector of `f64` values. Never empty.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    data: Vec<f64>,
}

impl DenseVector {
    /// Builds a vector from raw values, rejecting empty input and any
    /// non-finite entry.
    pub fn new(data: Vec<f64>) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyVector);
        }
        check_finite(&data)?;
        Ok(Self { data })
    }

    /// Trusted constructor for values produced internally.
    pub(crate) fn from_raw(data: Vec<f64>) -> Self {
        debug_assert!(!data.is_empty());
        debug_assert!(data
            .iter()
            .all(|x| x.is_finite() || cfg!(not(debug_assertions))));
        Self { data }
    }

    pub fn zeros(len: usize) -> Self {
        assert!(len >= 1, "vector length must be at least 1");
        Self {
            data: vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        false // len >= 1 by construction
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.data.iter()
    }

    /// Euclidean norm, computed as a two-pass scaled accumulation: entries are
    /// divided by the largest magnitude before squaring, so vectors with
    /// entries near the overflow threshold still produce a finite norm.
    pub fn norm2(&self) -> f64 {
        norm2_slice(&self.data)
    }

    pub fn dot(&self, other: &DenseVector) -> Result<f64> {
        if self.len() != other.len() {
            return Err(Error::DimensionMismatch {
                context: format!("dot of lengths {} and {}", self.len(), other.len()),
            });
        }
        Ok(dot_slices(&self.data, &other.data))
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }
}

impl std::ops::Index<usize> for DenseVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.data[i]
    }
}

/// `y + alpha * x`, elementwise.
pub fn axpy(alpha: f64, x: &DenseVector, y: &DenseVector) -> Result<DenseVector> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            context: format!("axpy of lengths {} and {}", x.len(), y.len()),
        });
    }
    let data = x
        .iter()
        .zip(y.iter())
        .map(|(xi, yi)| yi + alpha * xi)
        .collect();
    Ok(DenseVector::from_raw(data))
}

/// A dense row-major matrix of `f64` values. At least 1x1.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    /// Builds a matrix from row-major data, rejecting shape/length mismatch
    /// and any non-finite entry.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(Error::ShapeMismatch {
                rows,
                cols,
                len: data.len(),
            });
        }
        check_finite(&data)?;
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a list of equally long rows.
    ///
    /// ```
    /// use hhsolve_core::DenseMatrix;
    /// let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
    /// assert_eq!(m[(1, 0)], 3.0);
    /// ```
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch {
                rows: r,
                cols: c,
                len: rows.iter().map(|row| row.len()).sum(),
            });
        }
        let data: Vec<f64> = rows.iter().flatten().copied().collect();
        Self::new(r, c, data)
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<f64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self { rows, cols, data }
    }

    pub fn identity(n: usize) -> Self {
        assert!(n >= 1, "matrix dimension must be at least 1");
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        Self {
            rows: n,
            cols: n,
            data,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(
            rows >= 1 && cols >= 1,
            "matrix dimensions must be at least 1x1"
        );
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub(crate) fn row_slice(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Copy of row `i`.
    pub fn row(&self, i: usize) -> Result<DenseVector> {
        if i >= self.rows {
            return Err(Error::RowOutOfRange {
                index: i,
                rows: self.rows,
            });
        }
        Ok(DenseVector::from_raw(self.row_slice(i).to_vec()))
    }

    /// The submatrix obtained by deleting row 1 and column 1 (the (1,1)
    /// minor). Requires at least a 2x2 input.
    pub fn minor_11(&self) -> Result<DenseMatrix> {
        if self.rows < 2 || self.cols < 2 {
            return Err(Error::MinorTooSmall);
        }
        let (r, c) = (self.rows - 1, self.cols - 1);
        let mut data = Vec::with_capacity(r * c);
        for i in 1..self.rows {
            data.extend_from_slice(&self.row_slice(i)[1..]);
        }
        Ok(DenseMatrix::from_raw(r, c, data))
    }

    /// Largest entry magnitude.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, &x| m.max(x.abs()))
    }

    /// Matrix-vector product. Dispatches to the row-parallel path for large
    /// matrices when the `parallel` feature is enabled.
    pub fn matvec(&self, v: &DenseVector) -> Result<DenseVector> {
        #[cfg(feature = "parallel")]
        if self.rows >= PAR_ROW_THRESHOLD {
            return self.matvec_par(v);
        }
        self.matvec_seq(v)
    }

    /// Matrix-vector product on the sequential path.
    pub fn matvec_seq(&self, v: &DenseVector) -> Result<DenseVector> {
        self.check_matvec_dims(v)?;
        let out = self
            .data
            .chunks_exact(self.cols)
            .map(|row| dot_slices(row, v.as_slice()))
            .collect();
        Ok(DenseVector::from_raw(out))
    }

    /// Matrix-vector product on the row-parallel path. Each output element is
    /// one row reduction, so the result is bit-identical to `matvec_seq`.
    #[cfg(feature = "parallel")]
    pub fn matvec_par(&self, v: &DenseVector) -> Result<DenseVector> {
        self.check_matvec_dims(v)?;
        let out = self
            .data
            .par_chunks_exact(self.cols)
            .map(|row| dot_slices(row, v.as_slice()))
            .collect();
        Ok(DenseVector::from_raw(out))
    }

    fn check_matvec_dims(&self, v: &DenseVector) -> Result<()> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                context: format!(
                    "matvec of {}x{} matrix with vector of length {}",
                    self.rows,
                    self.cols,
                    v.len()
                ),
            });
        }
        Ok(())
    }
}

impl std::ops::Index<(usize, usize)> for DenseMatrix {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i}, {j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

fn check_finite(data: &[f64]) -> Result<()> {
    for (index, &value) in data.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NonFinite { index, value });
        }
    }
    Ok(())
}

pub(crate) fn dot_slices(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Two-pass scaled Euclidean norm of a slice.
pub(crate) fn norm2_slice(v: &[f64]) -> f64 {
    let scale = v.iter().fold(0.0f64, |m, &x| m.max(x.abs()));
    if scale == 0.0 {
        return 0.0;
    }
    let sum: f64 = v
        .iter()
        .map(|&x| {
            let t = x / scale;
            t * t
        })
        .sum();
    scale * sum.sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn norm2_pythagorean_triple() {
        let v = DenseVector::new(vec![3.0, 4.0]).unwrap();
        assert_eq!(v.norm2(), 5.0);
    }

    #[test]
    fn norm2_zero_vector() {
        let v = DenseVector::new(vec![0.0, 0.0, 0.0]).unwrap();
        assert_eq!(v.norm2(), 0.0);
    }

    #[test]
    fn norm2_survives_magnitudes_where_naive_accumulation_overflows() {
        let v = DenseVector::new(vec![1e200, 1e200]).unwrap();
        // The unscaled route overflows: (1e200)^2 + (1e200)^2 is not
        // representable.
        let naive = v.dot(&v).unwrap();
        assert!(naive.is_infinite());
        let expected = 1e200 * std::f64::consts::SQRT_2;
        let got = v.norm2();
        assert!(got.is_finite());
        assert!((got - expected).abs() <= 1e-15 * expected);
    }

    #[test]
    fn row_reads_identity_and_literal() {
        let i3 = DenseMatrix::identity(3);
        assert_eq!(i3.row(0).unwrap().as_slice(), &[1.0, 0.0, 0.0]);
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(m.row(1).unwrap().as_slice(), &[3.0, 4.0]);
    }

    #[test]
    fn row_out_of_range() {
        let m = DenseMatrix::identity(2);
        assert_eq!(
            m.row(2).unwrap_err(),
            Error::RowOutOfRange { index: 2, rows: 2 }
        );
    }

    #[test]
    fn minor_11_examples() {
        let m = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        let minor = m.minor_11().unwrap();
        assert_eq!(minor.rows(), 1);
        assert_eq!(minor.as_slice(), &[4.0]);

        assert_eq!(
            DenseMatrix::identity(3).minor_11().unwrap(),
            DenseMatrix::identity(2)
        );

        let one = DenseMatrix::from_rows(&[vec![7.0]]).unwrap();
        assert_eq!(one.minor_11().unwrap_err(), Error::MinorTooSmall);
    }

    #[test]
    fn matvec_identity() {
        let m = DenseMatrix::identity(2);
        let v = DenseVector::new(vec![5.0, 7.0]).unwrap();
        assert_eq!(m.matvec(&v).unwrap().as_slice(), &[5.0, 7.0]);
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let m = DenseMatrix::identity(2);
        let v = DenseVector::new(vec![1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(m.matvec(&v), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn dot_hand_arithmetic() {
        let a = DenseVector::new(vec![1.0, 2.0, 3.0]).unwrap();
        let b = DenseVector::new(vec![4.0, 5.0, 6.0]).unwrap();
        assert_eq!(a.dot(&b).unwrap(), 32.0);
    }

    #[test]
    fn axpy_hand_arithmetic() {
        let x = DenseVector::new(vec![1.0, 1.0]).unwrap();
        let y = DenseVector::new(vec![0.0, 3.0]).unwrap();
        assert_eq!(axpy(2.0, &x, &y).unwrap().as_slice(), &[2.0, 5.0]);
    }

    #[test]
    fn constructors_reject_bad_input() {
        assert_eq!(DenseVector::new(vec![]).unwrap_err(), Error::EmptyVector);
        assert!(matches!(
            DenseVector::new(vec![1.0, f64::NAN]).unwrap_err(),
            Error::NonFinite { index: 1, .. }
        ));
        assert!(matches!(
            DenseMatrix::new(2, 2, vec![1.0; 3]).unwrap_err(),
            Error::ShapeMismatch { .. }
        ));
        assert!(matches!(
            DenseMatrix::new(1, 2, vec![1.0, f64::INFINITY]).unwrap_err(),
            Error::NonFinite { .. }
        ));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn matvec_par_matches_seq_bitwise() {
        // 200 rows crosses PAR_ROW_THRESHOLD, so the par path actually runs.
        let n = 200;
        let data: Vec<f64> = (0..n * n)
            .map(|i| ((i * 2654435761 % 1000) as f64) / 500.0 - 1.0)
            .collect();
        let m = DenseMatrix::new(n, n, data).unwrap();
        let v = DenseVector::new((0..n).map(|i| (i as f64).sin()).collect()).unwrap();
        assert_eq!(
            m.matvec_seq(&v).unwrap().as_slice(),
            m.matvec_par(&v).unwrap().as_slice()
        );
    }
}
