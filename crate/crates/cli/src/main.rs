//! `hhsolve`: solve dense linear systems by Householder dimension reduction.
//!
//! Exit codes form the machine-readable contract:
//!   0  success
//!   1  input trouble: IO, parsing, malformed shapes, bad flags
//!   2  the system is singular or ill-conditioned past the gate
//!   3  `verify` found the two solvers disagreeing
//!   4  `bench` measured counts that differ from the closed forms

use clap::{Parser, Subcommand, ValueEnum};
use hhsolve_core::{
    gauss_solve, gen_system, predicted_forward_sv, predicted_total_sv, read_matrix, read_vector,
    residual, solve, write_matrix, write_vector, DenseMatrix, DenseVector, Error, SignStrategy,
    SolverConfig, SolverReport, SolverReportDocument, SystemKind, REPORT_SCHEMA_VERSION,
};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

/// Solution agreement bound for `verify`; two correct solvers on a
/// well-conditioned system land far inside it.
const VERIFY_AGREEMENT: f64 = 1e-8;

#[derive(Parser)]
#[command(
    name = "hhsolve",
    version,
    about = "Dense linear solver that reduces the system one dimension per Householder reflection"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve A·x = b from Matrix Market and vector files
    Solve(SolveArgs),
    /// Generate a seeded test system onto disk
    Gen(GenArgs),
    /// Solve with both this solver and an elimination reference, compare
    Verify(VerifyArgs),
    /// Measure operation counts against their closed forms, with wall time
    Bench(BenchArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    /// Reflection target k = +‖row‖; cancels when a row is nearly axis-aligned
    Paper,
    /// Target sign opposite the leading entry, avoiding the cancellation
    Stable,
}

impl StrategyArg {
    fn to_core(self) -> SignStrategy {
        match self {
            StrategyArg::Paper => SignStrategy::Positive,
            StrategyArg::Stable => SignStrategy::FlipSign,
        }
    }

    fn label(self) -> &'static str {
        match self {
            StrategyArg::Paper => "paper",
            StrategyArg::Stable => "stable",
        }
    }
}

#[derive(Copy, Clone, Debug, ValueEnum)]
enum KindArg {
    Uniform,
    #[value(name = "duplicated-row", alias = "duplicated_row")]
    DuplicatedRow,
    #[value(name = "near-e1-rows", alias = "near_e1_rows")]
    NearE1Rows,
    Graded,
}

impl KindArg {
    fn to_core(self) -> SystemKind {
        match self {
            KindArg::Uniform => SystemKind::Uniform,
            KindArg::DuplicatedRow => SystemKind::DuplicatedRow,
            KindArg::NearE1Rows => SystemKind::NearE1Rows,
            KindArg::Graded => SystemKind::Graded,
        }
    }
}

#[derive(clap::Args)]
struct SolveArgs {
    /// Matrix Market file (array or coordinate, real general)
    #[arg(long)]
    matrix: PathBuf,
    /// Vector file: count line, then one value per line
    #[arg(long)]
    rhs: PathBuf,
    /// Singularity gate threshold; defaults to 1e-12 x n x max|a_ij|
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Stable)]
    strategy: StrategyArg,
    /// Write a TOML report of the run here
    #[arg(long)]
    report: Option<PathBuf>,
    /// Suppress printing the solution to stdout
    #[arg(long)]
    quiet: bool,
}

#[derive(clap::Args)]
struct GenArgs {
    /// System dimension, at least 1
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = KindArg::Uniform)]
    kind: KindArg,
    #[arg(long)]
    out_matrix: PathBuf,
    #[arg(long)]
    out_rhs: PathBuf,
}

#[derive(clap::Args)]
struct VerifyArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    rhs: PathBuf,
    /// Singularity gate threshold; defaults to 1e-12 x n x max|a_ij|
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(clap::Args)]
struct BenchArgs {
    /// Comma-separated system sizes, each at least 3
    #[arg(long, value_delimiter = ',', required = true)]
    sizes: Vec<usize>,
    /// Timed repetitions per size; counts come from a single run
    #[arg(long, default_value_t = 1)]
    repeat: u32,
    /// Write a TOML report of all rows here
    #[arg(long)]
    report: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successes; everything else is bad input.
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let code = match cli.cmd {
        Command::Solve(args) => run_solve(args),
        Command::Gen(args) => run_gen(args),
        Command::Verify(args) => run_verify(args),
        Command::Bench(args) => run_bench(args),
    };
    ExitCode::from(code)
}

fn input_error(e: impl std::fmt::Display) -> u8 {
    eprintln!("error: {e}");
    1
}

/// File IO with the offending path named in the diagnostic.
fn read_matrix_named(path: &PathBuf) -> Result<DenseMatrix, String> {
    read_matrix(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn read_vector_named(path: &PathBuf) -> Result<DenseVector, String> {
    read_vector(path).map_err(|e| format!("{}: {e}", path.display()))
}

/// Maps solver failures onto the exit-code contract: gate trips are 2,
/// anything else is malformed input.
fn solver_error(e: &Error) -> u8 {
    eprintln!("error: {e}");
    match e {
        Error::SingularOrIllConditioned { .. }
        | Error::Degenerate2x2 { .. }
        | Error::ZeroNorm { .. } => 2,
        _ => 1,
    }
}

fn run_solve(args: SolveArgs) -> u8 {
    let a = match read_matrix_named(&args.matrix) {
        Ok(a) => a,
        Err(e) => return input_error(e),
    };
    let b = match read_vector_named(&args.rhs) {
        Ok(b) => b,
        Err(e) => return input_error(e),
    };
    let cfg = SolverConfig {
        tol_singular: args.tol,
        sign_strategy: args.strategy.to_core(),
        count_ops: true,
    };
    let started = Instant::now();
    let report = match solve(&a, &b, &cfg) {
        Ok(r) => r,
        Err(e) => return solver_error(&e),
    };
    let elapsed = started.elapsed().as_secs_f64();

    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    if !args.quiet {
        for v in report.x.iter() {
            println!("{v:.16e}");
        }
    }
    if let Some(path) = &args.report {
        let doc = report_document(&a, &cfg, args.strategy, &report, elapsed);
        if let Err(e) = doc.write(path) {
            return input_error(e);
        }
    }
    0
}

fn report_document(
    a: &DenseMatrix,
    cfg: &SolverConfig,
    strategy: StrategyArg,
    report: &SolverReport,
    elapsed: f64,
) -> SolverReportDocument {
    SolverReportDocument {
        schema_version: REPORT_SCHEMA_VERSION.to_string(),
        n: a.rows(),
        strategy: strategy.label().to_string(),
        tol_singular: cfg.resolve_tol(a),
        x: report.x.as_slice().to_vec(),
        relative_residual: report.relative_residual,
        min_row_norm: report.min_row_norm,
        forward_sv: report.counter.forward_sv,
        backward_sv: report.counter.backward_sv,
        predicted_forward_sv: report.predicted_forward_sv,
        predicted_total_sv: report.predicted_total_sv,
        warnings: report.warnings.clone(),
        elapsed_seconds: elapsed,
    }
}

fn run_gen(args: GenArgs) -> u8 {
    if args.n == 0 {
        return input_error("system dimension must be at least 1");
    }
    let (a, b) = gen_system(args.n, args.seed, args.kind.to_core());
    if let Err(e) = write_matrix(&args.out_matrix, &a) {
        return input_error(format!("{}: {e}", args.out_matrix.display()));
    }
    if let Err(e) = write_vector(&args.out_rhs, &b) {
        return input_error(format!("{}: {e}", args.out_rhs.display()));
    }
    0
}

fn run_verify(args: VerifyArgs) -> u8 {
    let a = match read_matrix_named(&args.matrix) {
        Ok(a) => a,
        Err(e) => return input_error(e),
    };
    let b = match read_vector_named(&args.rhs) {
        Ok(b) => b,
        Err(e) => return input_error(e),
    };
    let cfg = SolverConfig {
        tol_singular: args.tol,
        sign_strategy: SignStrategy::FlipSign,
        count_ops: true,
    };
    let gate_tol = cfg.resolve_tol(&a);

    let reduction = solve(&a, &b, &cfg);
    let elimination = match gauss_solve(&a, &b, gate_tol) {
        Ok(r) => r,
        Err(e) => return input_error(e),
    };

    match (reduction, elimination.x) {
        (Ok(report), Some(x_ref)) => {
            let ref_residual = residual(&a, &x_ref, &b).expect("shapes already validated");
            println!("reduction residual:    {:.3e}", report.relative_residual);
            println!("elimination residual:  {:.3e}", ref_residual);
            let gap = rel_gap(&report.x, &x_ref);
            println!("relative disagreement: {gap:.3e}");
            if gap <= VERIFY_AGREEMENT {
                println!("agreement within {VERIFY_AGREEMENT:.0e}");
                0
            } else {
                eprintln!("error: solvers disagree beyond {VERIFY_AGREEMENT:.0e}");
                3
            }
        }
        (Err(e), None) => {
            // Both methods reject the system; report it as the input's fault.
            eprintln!("error: both solvers find the system singular or ill-conditioned");
            eprintln!("error: {e}");
            2
        }
        (Ok(report), None) => {
            eprintln!(
                "error: elimination reports the system singular, the reduction solved it \
                 (residual {:.3e})",
                report.relative_residual
            );
            3
        }
        (Err(e), Some(_)) => {
            eprintln!("error: the reduction gave up where elimination succeeded: {e}");
            3
        }
    }
}

fn rel_gap(x: &DenseVector, reference: &DenseVector) -> f64 {
    let denom = reference.norm2().max(f64::MIN_POSITIVE);
    let num: f64 = (0..x.len())
        .map(|i| (x[i] - reference[i]) * (x[i] - reference[i]))
        .sum::<f64>()
        .sqrt();
    num / denom
}

struct BenchRow {
    n: usize,
    seed: u64,
    forward_sv: u64,
    predicted_forward_sv: u64,
    total_sv: u64,
    predicted_total_sv: u64,
    elapsed_seconds: f64,
}

fn run_bench(args: BenchArgs) -> u8 {
    if args.repeat == 0 {
        return input_error("--repeat must be at least 1");
    }
    let mut rows = Vec::with_capacity(args.sizes.len());
    for &n in &args.sizes {
        if n < 3 {
            return input_error(format!(
                "bench sizes must be at least 3 (count formulas are undefined below); got {n}"
            ));
        }
        match bench_one(n, args.repeat) {
            Ok(row) => rows.push(row),
            Err(code) => return code,
        }
    }

    println!(
        "{:>6}  {:>10}  {:>10}  {:>10}  {:>10}  {:>12}",
        "n", "forward", "fwd_pred", "total", "total_pred", "seconds"
    );
    let mut mismatch = false;
    for row in &rows {
        println!(
            "{:>6}  {:>10}  {:>10}  {:>10}  {:>10}  {:>12.6}",
            row.n,
            row.forward_sv,
            row.predicted_forward_sv,
            row.total_sv,
            row.predicted_total_sv,
            row.elapsed_seconds
        );
        mismatch |=
            row.forward_sv != row.predicted_forward_sv || row.total_sv != row.predicted_total_sv;
    }
    println!(
        "note: forward/total are scalar-vector-product counts, the method's quadratic work \
         metric; wall time follows the O(n^3) floating-point cost"
    );

    if let Some(path) = &args.report {
        if let Err(e) = std::fs::write(path, bench_report_toml(&rows, args.repeat)) {
            return input_error(e);
        }
    }
    if mismatch {
        eprintln!("error: measured counts diverge from the closed forms");
        4
    } else {
        0
    }
}

/// Solves one seeded uniform system of size n, walking the seed past any
/// draw the gate rejects so the benchmark is total yet deterministic.
fn bench_one(n: usize, repeat: u32) -> Result<BenchRow, u8> {
    let cfg = SolverConfig::default();
    let mut last_err = None;
    for offset in 0..32u64 {
        let seed = 7 + n as u64 + offset;
        let (a, b) = gen_system(n, seed, SystemKind::Uniform);
        match solve(&a, &b, &cfg) {
            Ok(first) => {
                let started = Instant::now();
                for _ in 0..repeat {
                    let run = solve(&a, &b, &cfg).expect("identical input solved above");
                    std::hint::black_box(run);
                }
                let elapsed_seconds = started.elapsed().as_secs_f64() / repeat as f64;
                let predicted_forward = predicted_forward_sv(n).expect("n >= 3 checked");
                let predicted_total = predicted_total_sv(n).expect("n >= 3 checked");
                return Ok(BenchRow {
                    n,
                    seed,
                    forward_sv: first.counter.forward_sv,
                    predicted_forward_sv: predicted_forward,
                    total_sv: first.counter.total(),
                    predicted_total_sv: predicted_total,
                    elapsed_seconds,
                });
            }
            Err(e) => last_err = Some(e),
        }
    }
    Err(solver_error(
        &last_err.expect("loop ran at least once before exhausting seeds"),
    ))
}

fn bench_report_toml(rows: &[BenchRow], repeat: u32) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "schema_version = \"{REPORT_SCHEMA_VERSION}\"");
    let _ = writeln!(s, "repeat = {repeat}");
    for row in rows {
        let _ = writeln!(s);
        let _ = writeln!(s, "[[sizes]]");
        let _ = writeln!(s, "n = {}", row.n);
        let _ = writeln!(s, "seed = {}", row.seed);
        let _ = writeln!(s, "forward_sv = {}", row.forward_sv);
        let _ = writeln!(s, "predicted_forward_sv = {}", row.predicted_forward_sv);
        let _ = writeln!(s, "total_sv = {}", row.total_sv);
        let _ = writeln!(s, "predicted_total_sv = {}", row.predicted_total_sv);
        let _ = writeln!(s, "elapsed_seconds = {:.16e}", row.elapsed_seconds);
    }
    s
}
