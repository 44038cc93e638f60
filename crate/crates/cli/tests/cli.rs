//! End-to-end tests driving the compiled binary through its exit-code
//! contract: 0 success, 1 input trouble, 2 singular, 3 verify disagreement,
//! 4 bench count mismatch.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn hhsolve(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hhsolve"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary spawns")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is utf-8")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("stderr is utf-8")
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("process exited normally")
}

fn write_identity3(dir: &Path) {
    fs::write(
        dir.join("a.mtx"),
        "%%MatrixMarket matrix array real general\n3 3\n1 0 0 0 1 0 0 0 1\n",
    )
    .unwrap();
    fs::write(dir.join("b.vec"), "3\n1.0\n2.0\n3.0\n").unwrap();
}

#[test]
fn solve_identity_prints_the_rhs() {
    let dir = tempfile::tempdir().unwrap();
    write_identity3(dir.path());
    let out = hhsolve(
        dir.path(),
        &["solve", "--matrix", "a.mtx", "--rhs", "b.vec"],
    );
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let values: Vec<f64> = stdout(&out)
        .lines()
        .map(|l| l.parse().expect("solution lines parse as floats"))
        .collect();
    assert_eq!(values, vec![1.0, 2.0, 3.0]);
}

#[test]
fn quiet_suppresses_the_solution() {
    let dir = tempfile::tempdir().unwrap();
    write_identity3(dir.path());
    let out = hhsolve(
        dir.path(),
        &["solve", "--matrix", "a.mtx", "--rhs", "b.vec", "--quiet"],
    );
    assert_eq!(exit_code(&out), 0);
    assert!(stdout(&out).is_empty());
}

#[test]
fn missing_file_exits_one_and_names_the_path() {
    let dir = tempfile::tempdir().unwrap();
    write_identity3(dir.path());
    let out = hhsolve(
        dir.path(),
        &["solve", "--matrix", "nope.mtx", "--rhs", "b.vec"],
    );
    assert_eq!(exit_code(&out), 1);
    assert!(stderr(&out).contains("nope.mtx"));
}

#[test]
fn malformed_flags_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = hhsolve(dir.path(), &["solve", "--no-such-flag"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn zero_dimension_gen_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = hhsolve(
        dir.path(),
        &[
            "gen",
            "--n",
            "0",
            "--seed",
            "1",
            "--out-matrix",
            "a.mtx",
            "--out-rhs",
            "b.vec",
        ],
    );
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn duplicated_rows_exit_two_naming_the_step() {
    let dir = tempfile::tempdir().unwrap();
    let gen = hhsolve(
        dir.path(),
        &[
            "gen",
            "--n",
            "3",
            "--seed",
            "42",
            "--kind",
            "duplicated-row",
            "--out-matrix",
            "a.mtx",
            "--out-rhs",
            "b.vec",
        ],
    );
    assert_eq!(exit_code(&gen), 0);
    let out = hhsolve(
        dir.path(),
        &["solve", "--matrix", "a.mtx", "--rhs", "b.vec"],
    );
    assert_eq!(exit_code(&out), 2);
    assert!(
        stderr(&out).contains("step 2"),
        "diagnostic must name the step: {}",
        stderr(&out)
    );
}

#[test]
fn gen_solve_verify_pipeline_agrees_on_uniform_systems() {
    let dir = tempfile::tempdir().unwrap();
    let gen = hhsolve(
        dir.path(),
        &[
            "gen",
            "--n",
            "10",
            "--seed",
            "7",
            "--kind",
            "uniform",
            "--out-matrix",
            "a.mtx",
            "--out-rhs",
            "b.vec",
        ],
    );
    assert_eq!(exit_code(&gen), 0);
    let solve = hhsolve(
        dir.path(),
        &["solve", "--matrix", "a.mtx", "--rhs", "b.vec", "--quiet"],
    );
    assert_eq!(exit_code(&solve), 0, "stderr: {}", stderr(&solve));
    let verify = hhsolve(
        dir.path(),
        &["verify", "--matrix", "a.mtx", "--rhs", "b.vec"],
    );
    assert_eq!(exit_code(&verify), 0, "stderr: {}", stderr(&verify));
    let text = stdout(&verify);
    assert!(text.contains("reduction residual"), "got: {text}");
    assert!(text.contains("elimination residual"), "got: {text}");
}

#[test]
fn verify_exits_two_when_both_solvers_reject() {
    let dir = tempfile::tempdir().unwrap();
    let gen = hhsolve(
        dir.path(),
        &[
            "gen",
            "--n",
            "4",
            "--seed",
            "9",
            "--kind",
            "duplicated-row",
            "--out-matrix",
            "a.mtx",
            "--out-rhs",
            "b.vec",
        ],
    );
    assert_eq!(exit_code(&gen), 0);
    let verify = hhsolve(
        dir.path(),
        &["verify", "--matrix", "a.mtx", "--rhs", "b.vec"],
    );
    assert_eq!(exit_code(&verify), 2);
    assert!(stderr(&verify).contains("both solvers"));
}

#[test]
fn bench_at_n4_prints_the_hand_counts() {
    let dir = tempfile::tempdir().unwrap();
    let out = hhsolve(dir.path(), &["bench", "--sizes", "4"]);
    assert_eq!(exit_code(&out), 0, "stderr: {}", stderr(&out));
    let text = stdout(&out);
    let row = text
        .lines()
        .find(|l| l.trim_start().starts_with('4'))
        .expect("a row for n = 4");
    let fields: Vec<&str> = row.split_whitespace().collect();
    assert_eq!(&fields[..5], &["4", "5", "5", "9", "9"], "row: {row}");
    // Both cost scales are labeled so neither gets mistaken for the other.
    assert!(text.contains("scalar-vector"), "got: {text}");
    assert!(text.contains("O(n^3)"), "got: {text}");
}

#[test]
fn bench_rejects_sizes_below_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = hhsolve(dir.path(), &["bench", "--sizes", "2"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn solve_report_is_valid_toml() {
    let dir = tempfile::tempdir().unwrap();
    write_identity3(dir.path());
    let out = hhsolve(
        dir.path(),
        &[
            "solve",
            "--matrix",
            "a.mtx",
            "--rhs",
            "b.vec",
            "--report",
            "report.toml",
            "--quiet",
        ],
    );
    assert_eq!(exit_code(&out), 0);
    let text = fs::read_to_string(dir.path().join("report.toml")).unwrap();
    let parsed: toml::Table = text.parse().expect("report parses as TOML");
    assert_eq!(parsed["schema_version"].as_str(), Some("1"));
    assert_eq!(parsed["n"].as_integer(), Some(3));
    assert_eq!(parsed["strategy"].as_str(), Some("stable"));
    assert_eq!(parsed["x"].as_array().map(|a| a.len()), Some(3));
    assert_eq!(parsed["forward_sv"].as_integer(), Some(2));
    assert_eq!(parsed["predicted_total_sv"].as_integer(), Some(5));
    assert!(parsed["elapsed_seconds"].as_float().unwrap() >= 0.0);
}

#[test]
fn bench_report_lists_one_table_per_size() {
    let dir = tempfile::tempdir().unwrap();
    let out = hhsolve(
        dir.path(),
        &["bench", "--sizes", "4,8", "--report", "bench.toml"],
    );
    assert_eq!(exit_code(&out), 0);
    let text = fs::read_to_string(dir.path().join("bench.toml")).unwrap();
    let parsed: toml::Table = text.parse().expect("bench report parses as TOML");
    let sizes = parsed["sizes"].as_array().unwrap();
    assert_eq!(sizes.len(), 2);
    assert_eq!(sizes[0]["n"].as_integer(), Some(4));
    assert_eq!(sizes[0]["total_sv"].as_integer(), Some(9));
    assert_eq!(sizes[1]["n"].as_integer(), Some(8));
    assert_eq!(sizes[1]["predicted_total_sv"].as_integer(), Some(35));
}

#[test]
fn both_strategy_names_are_accepted_and_agree() {
    let dir = tempfile::tempdir().unwrap();
    let gen = hhsolve(
        dir.path(),
        &[
            "gen",
            "--n",
            "8",
            "--seed",
            "3",
            "--kind",
            "uniform",
            "--out-matrix",
            "a.mtx",
            "--out-rhs",
            "b.vec",
        ],
    );
    assert_eq!(exit_code(&gen), 0);
    let mut answers = Vec::new();
    for strategy in ["paper", "stable"] {
        let out = hhsolve(
            dir.path(),
            &[
                "solve",
                "--matrix",
                "a.mtx",
                "--rhs",
                "b.vec",
                "--strategy",
                strategy,
            ],
        );
        assert_eq!(exit_code(&out), 0, "{strategy} stderr: {}", stderr(&out));
        let x: Vec<f64> = stdout(&out).lines().map(|l| l.parse().unwrap()).collect();
        assert_eq!(x.len(), 8);
        answers.push(x);
    }
    let norm: f64 = answers[1].iter().map(|v| v * v).sum::<f64>().sqrt();
    for (p, f) in answers[0].iter().zip(answers[1].iter()) {
        assert!((p - f).abs() <= 1e-8 * norm);
    }
}

#[test]
fn identical_runs_differ_only_in_elapsed_seconds() {
    let dir = tempfile::tempdir().unwrap();
    let gen = hhsolve(
        dir.path(),
        &[
            "gen",
            "--n",
            "6",
            "--seed",
            "5",
            "--kind",
            "uniform",
            "--out-matrix",
            "a.mtx",
            "--out-rhs",
            "b.vec",
        ],
    );
    assert_eq!(exit_code(&gen), 0);

    let mut reports = Vec::new();
    let mut outputs = Vec::new();
    for name in ["r1.toml", "r2.toml"] {
        let out = hhsolve(
            dir.path(),
            &[
                "solve", "--matrix", "a.mtx", "--rhs", "b.vec", "--report", name,
            ],
        );
        assert_eq!(exit_code(&out), 0);
        outputs.push(stdout(&out));
        let mut parsed: toml::Table = fs::read_to_string(dir.path().join(name))
            .unwrap()
            .parse()
            .unwrap();
        parsed.remove("elapsed_seconds");
        reports.push(parsed);
    }
    assert_eq!(outputs[0], outputs[1]);
    assert_eq!(reports[0], reports[1]);
}
