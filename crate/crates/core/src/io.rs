//! File formats: Matrix Market matrices, plain-text vectors, and the
//! machine-readable solve report.
//!
//! Matrices read from the Matrix Market `array` variant (dense, column-major)
//! or `coordinate` variant (triplets, densified on load); only `real general`
//! files are in scope. Output always uses `array`. Floats are written with 17
//! significant digits, which round-trips every 64-bit value exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::dense::{DenseMatrix, DenseVector};
use crate::error::Error;
use thiserror::Error as ThisError;

/// Errors from reading, parsing, or writing solver files.
#[derive(Debug, ThisError)]
pub enum IoError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported header {found:?}; supported: `%%MatrixMarket matrix array|coordinate real general`")]
    HeaderUnsupported { found: String },
    #[error("line {line}: non-finite value {token:?}")]
    NonFiniteValue { line: usize, token: String },
    #[error(transparent)]
    Invalid(#[from] Error),
}

type IoResult<T> = std::result::Result<T, IoError>;

/// Reads a Matrix Market file (`array` or `coordinate`, `real general`).
pub fn read_matrix(path: impl AsRef<Path>) -> IoResult<DenseMatrix> {
    parse_matrix(&fs::read_to_string(path)?)
}

/// Writes a matrix in the Matrix Market `array` format.
pub fn write_matrix(path: impl AsRef<Path>, m: &DenseMatrix) -> IoResult<()> {
    fs::write(path, format_matrix(m))?;
    Ok(())
}

/// Reads a vector file: optional `%` comments, a count line, then one value
/// per line.
pub fn read_vector(path: impl AsRef<Path>) -> IoResult<DenseVector> {
    parse_vector(&fs::read_to_string(path)?)
}

/// Writes a vector file readable by [`read_vector`].
pub fn write_vector(path: impl AsRef<Path>, v: &DenseVector) -> IoResult<()> {
    fs::write(path, format_vector(v))?;
    Ok(())
}

/// Parses Matrix Market text.
pub fn parse_matrix(text: &str) -> IoResult<DenseMatrix> {
    let mut raw = text.lines();
    let header = raw.next().ok_or_else(|| parse_err(1, "empty file"))?.trim();
    if !header.to_ascii_lowercase().starts_with("%%matrixmarket") {
        return Err(parse_err(1, "missing `%%MatrixMarket` banner"));
    }
    let fields: Vec<String> = header
        .split_whitespace()
        .skip(1)
        .map(|t| t.to_ascii_lowercase())
        .collect();
    if fields.len() != 4 {
        return Err(parse_err(
            1,
            "banner must name object, format, field, and symmetry",
        ));
    }
    let unsupported = || IoError::HeaderUnsupported {
        found: header.to_string(),
    };
    if fields[0] != "matrix" || fields[2] != "real" || fields[3] != "general" {
        return Err(unsupported());
    }
    let lines = content_lines(text, 1);
    match fields[1].as_str() {
        "array" => parse_array_body(&lines),
        "coordinate" => parse_coordinate_body(&lines),
        _ => Err(unsupported()),
    }
}

/// Parses vector text.
pub fn parse_vector(text: &str) -> IoResult<DenseVector> {
    let lines = content_lines(text, 0);
    let Some(&(line, first)) = lines.first() else {
        return Err(parse_err(1, "missing vector length line"));
    };
    let mut tokens = first.split_whitespace();
    let len = parse_count(tokens.next().unwrap_or(""), line, "vector length")?;
    if tokens.next().is_some() {
        return Err(parse_err(line, "length line must hold a single number"));
    }
    if len == 0 {
        return Err(parse_err(line, "vector length must be at least 1"));
    }
    let values = collect_values(&lines[1..], len, line)?;
    Ok(DenseVector::new(values)?)
}

/// Renders a matrix in the Matrix Market `array` format (column-major).
pub fn format_matrix(m: &DenseMatrix) -> String {
    let mut s = String::with_capacity(32 + 26 * m.rows() * m.cols());
    s.push_str("%%MatrixMarket matrix array real general\n");
    let _ = writeln!(s, "{} {}", m.rows(), m.cols());
    for col in 0..m.cols() {
        for row in 0..m.rows() {
            let _ = writeln!(s, "{}", fmt_float(m[(row, col)]));
        }
    }
    s
}

/// Renders a vector: count line, then one value per line.
pub fn format_vector(v: &DenseVector) -> String {
    let mut s = String::with_capacity(8 + 26 * v.len());
    let _ = writeln!(s, "{}", v.len());
    for x in v.iter() {
        let _ = writeln!(s, "{}", fmt_float(*x));
    }
    s
}

fn parse_array_body(lines: &[(usize, &str)]) -> IoResult<DenseMatrix> {
    let Some(&(line, size)) = lines.first() else {
        return Err(parse_err(2, "missing size line"));
    };
    let toks: Vec<&str> = size.split_whitespace().collect();
    if toks.len() != 2 {
        return Err(parse_err(line, "array size line must be `rows cols`"));
    }
    let rows = parse_count(toks[0], line, "row count")?;
    let cols = parse_count(toks[1], line, "column count")?;
    if rows == 0 || cols == 0 {
        return Err(parse_err(line, "matrix must be at least 1x1"));
    }
    let values = collect_values(&lines[1..], rows * cols, line)?;
    // File order is column-major; storage is row-major.
    let mut data = vec![0.0; rows * cols];
    for (t, value) in values.into_iter().enumerate() {
        let (row, col) = (t % rows, t / rows);
        data[row * cols + col] = value;
    }
    Ok(DenseMatrix::new(rows, cols, data)?)
}

fn parse_coordinate_body(lines: &[(usize, &str)]) -> IoResult<DenseMatrix> {
    let Some(&(line, size)) = lines.first() else {
        return Err(parse_err(2, "missing size line"));
    };
    let toks: Vec<&str> = size.split_whitespace().collect();
    if toks.len() != 3 {
        return Err(parse_err(
            line,
            "coordinate size line must be `rows cols nnz`",
        ));
    }
    let rows = parse_count(toks[0], line, "row count")?;
    let cols = parse_count(toks[1], line, "column count")?;
    let nnz = parse_count(toks[2], line, "entry count")?;
    if rows == 0 || cols == 0 {
        return Err(parse_err(line, "matrix must be at least 1x1"));
    }
    let mut data = vec![0.0; rows * cols];
    let mut seen = vec![false; rows * cols];
    let mut entries = 0usize;
    for &(line, text) in &lines[1..] {
        if entries == nnz {
            return Err(parse_err(
                line,
                format!("unexpected data after {nnz} entries"),
            ));
        }
        let toks: Vec<&str> = text.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(parse_err(line, "coordinate entry must be `row col value`"));
        }
        let i = parse_count(toks[0], line, "row index")?;
        let j = parse_count(toks[1], line, "column index")?;
        if i == 0 || i > rows || j == 0 || j > cols {
            return Err(parse_err(
                line,
                format!("entry ({i}, {j}) outside a {rows}x{cols} matrix (indices are 1-based)"),
            ));
        }
        let value = parse_float(toks[2], line)?;
        let flat = (i - 1) * cols + (j - 1);
        if seen[flat] {
            return Err(parse_err(line, format!("duplicate entry for ({i}, {j})")));
        }
        seen[flat] = true;
        data[flat] = value;
        entries += 1;
    }
    if entries < nnz {
        let last = lines.last().map_or(2, |&(l, _)| l);
        return Err(parse_err(
            last,
            format!("expected {nnz} entries, found {entries}"),
        ));
    }
    Ok(DenseMatrix::new(rows, cols, data)?)
}

/// Content lines (1-based numbers), skipping blanks and `%` comments;
/// `skip_first` drops leading raw lines already consumed by the caller.
fn content_lines(text: &str, skip_first: usize) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .skip(skip_first)
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('%'))
        .collect()
}

fn collect_values(lines: &[(usize, &str)], needed: usize, size_line: usize) -> IoResult<Vec<f64>> {
    let mut values = Vec::with_capacity(needed);
    for &(line, text) in lines {
        for token in text.split_whitespace() {
            if values.len() == needed {
                return Err(parse_err(
                    line,
                    format!("unexpected value beyond the {needed} declared"),
                ));
            }
            values.push(parse_float(token, line)?);
        }
    }
    if values.len() < needed {
        let last = lines.last().map_or(size_line, |&(l, _)| l);
        return Err(parse_err(
            last,
            format!("expected {needed} values, found {}", values.len()),
        ));
    }
    Ok(values)
}

fn parse_count(token: &str, line: usize, what: &str) -> IoResult<usize> {
    token
        .parse::<usize>()
        .map_err(|_| parse_err(line, format!("invalid {what} {token:?}")))
}

fn parse_float(token: &str, line: usize) -> IoResult<f64> {
    let value: f64 = token
        .parse()
        .map_err(|_| parse_err(line, format!("invalid number {token:?}")))?;
    if !value.is_finite() {
        return Err(IoError::NonFiniteValue {
            line,
            token: token.to_string(),
        });
    }
    Ok(value)
}

fn parse_err(line: usize, msg: impl Into<String>) -> IoError {
    IoError::Parse {
        line,
        msg: msg.into(),
    }
}

/// 17 significant digits: exact round-trip for every finite 64-bit float.
fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Version stamp written into every report document.
pub const REPORT_SCHEMA_VERSION: &str = "1";

/// The solve report in its serializable form: everything a downstream tool
/// needs to audit one run. Rendered as TOML.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverReportDocument {
    pub schema_version: String,
    pub n: usize,
    pub strategy: String,
    pub tol_singular: f64,
    pub x: Vec<f64>,
    pub relative_residual: f64,
    pub min_row_norm: f64,
    pub forward_sv: u64,
    pub backward_sv: u64,
    /// Absent for n < 3, where the closed forms are undefined.
    pub predicted_forward_sv: Option<u64>,
    pub predicted_total_sv: Option<u64>,
    pub warnings: Vec<String>,
    pub elapsed_seconds: f64,
}

impl SolverReportDocument {
    /// Renders the report as a TOML document.
    pub fn to_toml(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "schema_version = {}", toml_string(&self.schema_version));
        let _ = writeln!(s, "n = {}", self.n);
        let _ = writeln!(s, "strategy = {}", toml_string(&self.strategy));
        let _ = writeln!(s, "tol_singular = {}", toml_float(self.tol_singular));
        let _ = writeln!(
            s,
            "relative_residual = {}",
            toml_float(self.relative_residual)
        );
        let _ = writeln!(s, "min_row_norm = {}", toml_float(self.min_row_norm));
        let _ = writeln!(s, "elapsed_seconds = {}", toml_float(self.elapsed_seconds));
        let _ = writeln!(s, "forward_sv = {}", self.forward_sv);
        let _ = writeln!(s, "backward_sv = {}", self.backward_sv);
        if let Some(p) = self.predicted_forward_sv {
            let _ = writeln!(s, "predicted_forward_sv = {p}");
        }
        if let Some(p) = self.predicted_total_sv {
            let _ = writeln!(s, "predicted_total_sv = {p}");
        }
        s.push_str("x = [");
        for (i, v) in self.x.iter().enumerate() {
            let sep = if i == 0 { "" } else { ", " };
            let _ = write!(s, "{sep}{}", toml_float(*v));
        }
        s.push_str("]\n");
        s.push_str("warnings = [");
        for (i, w) in self.warnings.iter().enumerate() {
            let sep = if i == 0 { "" } else { ", " };
            let _ = write!(s, "{sep}{}", toml_string(w));
        }
        s.push_str("]\n");
        s
    }

    pub fn write(&self, path: impl AsRef<Path>) -> IoResult<()> {
        fs::write(path, self.to_toml())?;
        Ok(())
    }
}

fn toml_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    } else {
        fmt_float(x)
    }
}

fn toml_string(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => {
                let _ = write!(out, "\\u{:04X}", c as u32);
            }
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn array_file_reads_column_major() {
        let text = "%%MatrixMarket matrix array real general\n\
                    % identity\n\
                    2 2\n1\n0\n0\n1\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m, DenseMatrix::identity(2));

        let rect = "%%MatrixMarket matrix array real general\n\
                    2 3\n1\n4\n2\n5\n3\n6\n";
        let m = parse_matrix(rect).unwrap();
        assert_eq!(m.row(0).unwrap().as_slice(), &[1.0, 2.0, 3.0]);
        assert_eq!(m.row(1).unwrap().as_slice(), &[4.0, 5.0, 6.0]);
    }

    #[test]
    fn coordinate_file_densifies() {
        let text = "%%MatrixMarket matrix coordinate real general\n\
                    2 2 2\n1 1 2.0\n2 2 3.0\n";
        let m = parse_matrix(text).unwrap();
        assert_eq!(m.as_slice(), &[2.0, 0.0, 0.0, 3.0]);
    }

    #[test]
    fn unsupported_headers_are_named() {
        for bad in [
            "%%MatrixMarket matrix array complex general\n1 1\n1\n",
            "%%MatrixMarket matrix array real symmetric\n1 1\n1\n",
            "%%MatrixMarket matrix coordinate pattern general\n1 1 1\n1 1\n",
            "%%MatrixMarket vector array real general\n1 1\n1\n",
        ] {
            assert!(
                matches!(parse_matrix(bad), Err(IoError::HeaderUnsupported { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let short = "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n";
        match parse_matrix(short).unwrap_err() {
            IoError::Parse { line, msg } => {
                assert_eq!(line, 5);
                assert!(msg.contains("expected 4 values"));
            }
            other => panic!("unexpected {other:?}"),
        }

        let bad_token = "%%MatrixMarket matrix array real general\n1 2\n1\nx\n";
        match parse_matrix(bad_token).unwrap_err() {
            IoError::Parse { line, .. } => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }

        let extra = "%%MatrixMarket matrix array real general\n1 1\n1\n2\n";
        assert!(matches!(
            parse_matrix(extra),
            Err(IoError::Parse { line: 4, .. })
        ));
    }

    #[test]
    fn coordinate_rejects_duplicates_and_bad_indices() {
        let dup = "%%MatrixMarket matrix coordinate real general\n\
                   2 2 2\n1 1 1.0\n1 1 2.0\n";
        match parse_matrix(dup).unwrap_err() {
            IoError::Parse { line, msg } => {
                assert_eq!(line, 4);
                assert!(msg.contains("duplicate"));
            }
            other => panic!("unexpected {other:?}"),
        }

        let oob = "%%MatrixMarket matrix coordinate real general\n\
                   2 2 1\n3 1 1.0\n";
        assert!(matches!(
            parse_matrix(oob),
            Err(IoError::Parse { line: 3, .. })
        ));

        let zero_based = "%%MatrixMarket matrix coordinate real general\n\
                          2 2 1\n0 1 1.0\n";
        assert!(matches!(
            parse_matrix(zero_based),
            Err(IoError::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn non_finite_values_are_rejected() {
        let nan = "%%MatrixMarket matrix array real general\n1 1\nnan\n";
        assert!(matches!(
            parse_matrix(nan),
            Err(IoError::NonFiniteValue { line: 3, .. })
        ));
        let inf = "3\n1.0\ninf\n2.0\n";
        assert!(matches!(
            parse_vector(inf),
            Err(IoError::NonFiniteValue { line: 3, .. })
        ));
    }

    #[test]
    fn matrix_round_trip_is_exact() {
        let m = DenseMatrix::from_rows(&[
            vec![1.0 / 3.0, -2.0e-15, 5.0e200],
            vec![0.1, 123456.789012345, -1.0e-300],
        ])
        .unwrap();
        let back = parse_matrix(&format_matrix(&m)).unwrap();
        assert_eq!(m.as_slice(), back.as_slice());
    }

    #[test]
    fn vector_round_trip_is_exact() {
        let v = DenseVector::new(vec![0.1, -1.0 / 7.0, 2.0e-308, 9.9e307]).unwrap();
        let back = parse_vector(&format_vector(&v)).unwrap();
        assert_eq!(v.as_slice(), back.as_slice());
    }

    #[test]
    fn vector_file_allows_comments() {
        let text = "% solution vector\n2\n1.5\n% midway note\n-2.5\n";
        let v = parse_vector(text).unwrap();
        assert_eq!(v.as_slice(), &[1.5, -2.5]);

        let missing = "% only a comment\n";
        assert!(matches!(parse_vector(missing), Err(IoError::Parse { .. })));
    }

    #[test]
    fn report_document_parses_as_toml() {
        let doc = SolverReportDocument {
            schema_version: REPORT_SCHEMA_VERSION.to_string(),
            n: 4,
            strategy: "stable".to_string(),
            tol_singular: 1.2e-11,
            x: vec![1.5, -2.25e-3, 0.0, 4.0],
            relative_residual: 3.5e-16,
            min_row_norm: 0.75,
            forward_sv: 5,
            backward_sv: 4,
            predicted_forward_sv: Some(5),
            predicted_total_sv: Some(9),
            warnings: vec!["quoted \"text\" and backslash \\".to_string()],
            elapsed_seconds: 0.0015,
        };
        let parsed: toml::Table = doc.to_toml().parse().unwrap();
        assert_eq!(parsed["schema_version"].as_str(), Some("1"));
        assert_eq!(parsed["n"].as_integer(), Some(4));
        assert_eq!(parsed["strategy"].as_str(), Some("stable"));
        assert_eq!(parsed["x"][0].as_float(), Some(1.5));
        assert_eq!(parsed["x"][1].as_float(), Some(-2.25e-3));
        assert_eq!(parsed["forward_sv"].as_integer(), Some(5));
        assert_eq!(parsed["predicted_total_sv"].as_integer(), Some(9));
        assert_eq!(
            parsed["warnings"][0].as_str(),
            Some("quoted \"text\" and backslash \\")
        );
        assert_eq!(parsed["elapsed_seconds"].as_float(), Some(0.0015));
    }

    #[test]
    fn small_report_omits_undefined_predictions() {
        let doc = SolverReportDocument {
            schema_version: REPORT_SCHEMA_VERSION.to_string(),
            n: 2,
            strategy: "paper".to_string(),
            tol_singular: 1e-12,
            x: vec![1.0, 2.0],
            relative_residual: 0.0,
            min_row_norm: 1.0,
            forward_sv: 0,
            backward_sv: 2,
            predicted_forward_sv: None,
            predicted_total_sv: None,
            warnings: vec![],
            elapsed_seconds: 1e-6,
        };
        let text = doc.to_toml();
        assert!(!text.contains("predicted_forward_sv"));
        assert!(!text.contains("predicted_total_sv"));
        let parsed: toml::Table = text.parse().unwrap();
        assert_eq!(parsed["warnings"].as_array().map(|a| a.len()), Some(0));
    }
}
