//! Deterministic test-system generation.
//!
//! The generator is written out in full rather than pulled from a crate so a
//! corpus is reproducible from (n, seed, kind) alone, on any platform, in any
//! language that cares to re-derive it.

use crate::dense::{DenseMatrix, DenseVector};

/// splitmix64: finalizer-style 64-bit generator. State advances by the
/// constant below; output mixes the state through two xor-multiply rounds.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform draw from [-1, 1): the top 53 bits give a dyadic rational in
    /// [0, 1), mapped affinely.
    pub fn next_unit(&mut self) -> f64 {
        let u = (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
        2.0 * u - 1.0
    }
}

/// Shape of a generated test system.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SystemKind {
    /// Entries uniform in [-1, 1).
    Uniform,
    /// Uniform, then row 1 overwritten with an exact copy of row 0; singular
    /// by construction (for n ≥ 2).
    DuplicatedRow,
    /// Every row replaced by its norm times e₁ plus 1e-10 noise: the regime
    /// where the always-positive reflection target cancels.
    NearE1Rows,
    /// Uniform with row i scaled by 10^(-i): wide dynamic range across rows.
    Graded,
}

/// Off-axis noise amplitude for [`SystemKind::NearE1Rows`].
pub const NEAR_E1_EPSILON: f64 = 1e-10;

/// Generates a deterministic (matrix, right-hand side) pair. Identical
/// (n, seed, kind) triples produce bit-identical systems.
pub fn gen_system(n: usize, seed: u64, kind: SystemKind) -> (DenseMatrix, DenseVector) {
    assert!(n >= 1, "system dimension must be at least 1");
    let mut rng = SplitMix64::new(seed);
    let mut data: Vec<f64> = (0..n * n).map(|_| rng.next_unit()).collect();
    match kind {
        SystemKind::Uniform => {}
        SystemKind::DuplicatedRow => {
            if n >= 2 {
                let (first, rest) = data.split_at_mut(n);
                rest[..n].copy_from_slice(first);
            }
        }
        SystemKind::NearE1Rows => {
            for i in 0..n {
                let row = &mut data[i * n..(i + 1) * n];
                let norm = crate::dense::norm2_slice(row);
                row[0] = norm + NEAR_E1_EPSILON * rng.next_unit();
                for x in row.iter_mut().skip(1) {
                    *x = NEAR_E1_EPSILON * rng.next_unit();
                }
            }
        }
        SystemKind::Graded => {
            for i in 0..n {
                let scale = 10.0f64.powi(-(i as i32));
                for x in &mut data[i * n..(i + 1) * n] {
                    *x *= scale;
                }
            }
        }
    }
    let rhs: Vec<f64> = (0..n).map(|_| rng.next_unit()).collect();
    (
        DenseMatrix::new(n, n, data).expect("generated entries are finite"),
        DenseVector::new(rhs).expect("generated entries are finite"),
    )
}
