//! The solver pipeline: forward reduction to a 2x2 system, closed-form
//! terminal solve, and reflector-chain back substitution.
//!
//! Each forward step builds a reflector from the leading row of the current
//! matrix C, forms D = C·H so the leading row becomes k·e₁, solves the first
//! unknown y₁ = b₁/k, folds it into the right-hand side, and continues on the
//! (1,1) minor. Back substitution replays the chain in reverse: prepend the
//! solved component, apply the step's reflector, repeat.

use crate::count::{predicted_forward_sv, predicted_total_sv, OpCounter};
use crate::dense::{DenseMatrix, DenseVector};
use crate::error::{Error, Result};
use crate::oracle::residual;
use crate::reflector::{Reflector, SignStrategy};

/// Relative residual above which a solve report carries a warning.
pub const RESIDUAL_WARN_THRESHOLD: f64 = 1e-6;

/// Solver knobs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Row-norm threshold for the singularity gate. `None` selects
    /// 1e-12 × n × max-abs entry of the matrix, scaling the test with problem
    /// size and magnitude. Non-positive values are clamped to the smallest
    /// positive double.
    pub tol_singular: Option<f64>,
    pub sign_strategy: SignStrategy,
    /// When false, the report's counters read zero.
    pub count_ops: bool,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            tol_singular: None,
            sign_strategy: SignStrategy::default(),
            count_ops: true,
        }
    }
}

impl SolverConfig {
    /// The effective gate threshold for a given matrix.
    pub fn resolve_tol(&self, a: &DenseMatrix) -> f64 {
        self.tol_singular
            .unwrap_or_else(|| 1e-12 * a.rows() as f64 * a.max_abs())
            .max(f64::MIN_POSITIVE)
    }
}

/// One forward-reduction step: the reflector built from the leading row and
/// the unknown it solved.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionStep {
    pub reflector: Reflector,
    pub y_first: f64,
    /// Size of the system this step reduced; decreases by one per step.
    pub dim: usize,
}

/// Complete output of the forward phase, consumed by back substitution.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionStack {
    /// n − 2 steps for n ≥ 3; empty when the system started at 2x2 or 1x1.
    pub steps: Vec<ReductionStep>,
    /// Solution of the final directly solved system; length min(n, 2).
    pub terminal: DenseVector,
    /// Original dimension.
    pub n: usize,
    /// Smallest leading-row norm seen, terminal system included; the margin
    /// against the singularity gate.
    pub min_row_norm: f64,
}

/// Everything a solve produces besides the solution itself.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub x: DenseVector,
    /// norm2(Ax − b) / norm2(b), or over norm2(Ax) when b = 0.
    pub relative_residual: f64,
    pub min_row_norm: f64,
    pub counter: OpCounter,
    /// Closed-form counts; absent for n < 3 where the formulas are undefined.
    pub predicted_forward_sv: Option<u64>,
    pub predicted_total_sv: Option<u64>,
    pub warnings: Vec<String>,
}

/// Runs the forward phase, reducing the system one dimension per step until
/// it is 2x2 (or 1x1), which is solved in closed form into the terminal.
pub fn forward_reduce(
    a: &DenseMatrix,
    b: &DenseVector,
    cfg: &SolverConfig,
) -> Result<(ReductionStack, OpCounter)> {
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
    let tol = cfg.resolve_tol(a);
    let mut counter = OpCounter::default();
    let mut steps = Vec::with_capacity(n.saturating_sub(2));
    let mut min_row_norm = f64::INFINITY;
    let mut c = a.clone();
    let mut rhs = b.as_slice().to_vec();

    while c.rows() > 2 {
        let step = steps.len() + 1;
        let lead = c.row(0).expect("matrix has at least one row");
        let row_norm = lead.norm2();
        min_row_norm = min_row_norm.min(row_norm);
        if row_norm <= tol {
            return Err(Error::SingularOrIllConditioned {
                step,
                row_norm,
                tol,
            });
        }
        let reflector = Reflector::from_row(&lead, cfg.sign_strategy, tol)?;
        let d = reflector.apply_right(&c, &mut counter)?;
        let y_first = rhs[0] / reflector.k();
        let m = c.rows();
        let mut next_rhs = Vec::with_capacity(m - 1);
        for j in 1..m {
            next_rhs.push(rhs[j] - d[(j, 0)] * y_first);
        }
        steps.push(ReductionStep {
            reflector,
            y_first,
            dim: m,
        });
        c = d.minor_11().expect("reduced matrix stays at least 2x2");
        rhs = next_rhs;
    }

    // The gate also covers the terminal system: a reduction that lands on a
    // negligible leading row found a (near-)dependency among the input rows.
    let terminal_norm = c.row(0).expect("terminal has a first row").norm2();
    min_row_norm = min_row_norm.min(terminal_norm);
    if terminal_norm <= tol {
        return Err(Error::SingularOrIllConditioned {
            step: steps.len() + 1,
            row_norm: terminal_norm,
            tol,
        });
    }
    let terminal_b = DenseVector::from_raw(rhs);
    let terminal = solve_2x2(&c, &terminal_b, tol)?;
    Ok((
        ReductionStack {
            steps,
            terminal,
            n,
            min_row_norm,
        },
        counter,
    ))
}

/// Closed-form solve of the terminal system: Cramer's rule for 2x2, plain
/// division for 1x1.
pub fn solve_2x2(m: &DenseMatrix, b: &DenseVector, tol: f64) -> Result<DenseVector> {
    match (m.rows(), m.cols(), b.len()) {
        (1, 1, 1) => {
            let det = m[(0, 0)];
            check_det(det, tol)?;
            Ok(DenseVector::from_raw(vec![b[0] / det]))
        }
        (2, 2, 2) => {
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            check_det(det, tol)?;
            let x0 = (b[0] * m[(1, 1)] - m[(0, 1)] * b[1]) / det;
            let x1 = (m[(0, 0)] * b[1] - b[0] * m[(1, 0)]) / det;
            Ok(DenseVector::from_raw(vec![x0, x1]))
        }
        _ => Err(Error::DimensionMismatch {
            context: format!(
                "terminal solve expects a 2x2 or 1x1 system, got {}x{} with rhs length {}",
                m.rows(),
                m.cols(),
                b.len()
            ),
        }),
    }
}

fn check_det(det: f64, tol: f64) -> Result<()> {
    let threshold = tol * tol;
    if det.abs() <= threshold {
        return Err(Error::Degenerate2x2 {
            det: det.abs(),
            threshold,
        });
    }
    Ok(())
}

/// Unwinds the reduction: starting from the terminal solution, prepend each
/// step's solved component and apply that step's reflector, last step first.
/// The accounting charges one unit per terminal component plus one per
/// reflector, n units in total.
pub fn back_substitute(stack: &ReductionStack, counter: &mut OpCounter) -> DenseVector {
    counter.add_backward(stack.terminal.len() as u64);
    let mut z = stack.terminal.as_slice().to_vec();
    for step in stack.steps.iter().rev() {
        let mut y = Vec::with_capacity(z.len() + 1);
        y.push(step.y_first);
        y.extend_from_slice(&z);
        let y = DenseVector::from_raw(y);
        z = step
            .reflector
            .reflect_col(&y)
            .expect("step dimensions line up by construction")
            .as_slice()
            .to_vec();
        counter.add_backward(1);
    }
    debug_assert_eq!(z.len(), stack.n);
    DenseVector::from_raw(z)
}

/// Full pipeline: forward reduction, terminal solve, back substitution, and
/// a report with the residual, gate margin, and operation counts.
pub fn solve(a: &DenseMatrix, b: &DenseVector, cfg: &SolverConfig) -> Result<SolverReport> {
    let (stack, mut counter) = forward_reduce(a, b, cfg)?;
    let x = back_substitute(&stack, &mut counter);
    let relative_residual = residual(a, &x, b)?;
    let mut warnings = Vec::new();
    if relative_residual > RESIDUAL_WARN_THRESHOLD {
        warnings.push(format!(
            "relative residual {relative_residual:.3e} exceeds {RESIDUAL_WARN_THRESHOLD:.0e}; \
             the system is likely ill-conditioned and the solution inaccurate"
        ));
    }
    Ok(SolverReport {
        x,
        relative_residual,
        min_row_norm: stack.min_row_norm,
        counter: if cfg.count_ops {
            counter
        } else {
            OpCounter::default()
        },
        predicted_forward_sv: predicted_forward_sv(stack.n).ok(),
        predicted_total_sv: predicted_total_sv(stack.n).ok(),
        warnings,
    })
}
