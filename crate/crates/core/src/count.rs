//! The solver's work metric: scalar-vector products.
//!
//! One unit is one scaling of a vector by a scalar (with accumulation). The
//! forward phase charges rows − 1 per reflector application; the leading row
//! is assigned analytically and is free. The backward phase charges one unit
//! per terminal component plus one per reflector in the chain. Under this
//! accounting the measured counts reproduce the closed forms below exactly.
//! The metric is O(n²); wall-clock flop cost is still O(n³).

use crate::error::{Error, Result};

/// Running tally of scalar-vector products in the two solver phases.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpCounter {
    pub forward_sv: u64,
    pub backward_sv: u64,
}

impl OpCounter {
    pub fn total(&self) -> u64 {
        self.forward_sv + self.backward_sv
    }

    pub(crate) fn add_forward(&mut self, units: u64) {
        self.forward_sv += units;
    }

    pub(crate) fn add_backward(&mut self, units: u64) {
        self.backward_sv += units;
    }
}

/// Scalar-vector products the forward reduction of an n-dimensional system
/// consumes: (n² − n − 2)/2. The numerator is even for every n, so the
/// division is exact. Defined for n ≥ 3; smaller systems skip reduction.
pub fn predicted_forward_sv(n: usize) -> Result<u64> {
    if n < 3 {
        return Err(Error::CountDomain { n });
    }
    let n = n as u64;
    Ok((n * n - n - 2) / 2)
}

/// Forward plus backward scalar-vector products: (n² + n − 2)/2, which is the
/// forward count plus n. Defined for n ≥ 3.
pub fn predicted_total_sv(n: usize) -> Result<u64> {
    if n < 3 {
        return Err(Error::CountDomain { n });
    }
    let n = n as u64;
    Ok((n * n + n - 2) / 2)
}
