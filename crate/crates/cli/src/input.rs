//! Matrix files: JSON `{"matrix": [[...]]}` or CSV, one row per line.
//! Entries are fraction strings, decimals or integers, all read exactly.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use condcompat::{validate_pair, ConditionalPair, Error, Line, RatMatrix, Rational, Which};
use serde::Deserialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum InputError {
    #[error("{path}: cannot read file: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}:{column}: invalid JSON: {message}")]
    Json {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: {location}: invalid entry {literal:?} (expected p/q, a decimal or an integer)")]
    Entry {
        path: String,
        location: String,
        literal: String,
    },
    #[error("{path}: {location} has {found} entries, expected {expected}")]
    Ragged {
        path: String,
        location: String,
        found: usize,
        expected: usize,
    },
    #[error("{path}: matrix is empty")]
    Empty { path: String },
    #[error("A ({a_path}) is {a_rows}x{a_cols} but B ({b_path}) is {b_rows}x{b_cols}")]
    Shape {
        a_path: String,
        b_path: String,
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },
    #[error("{path}: row {row}, column {col}: negative entry {value} [NegativeEntry]")]
    Negative {
        path: String,
        row: usize,
        col: usize,
        value: String,
    },
    #[error("{path}: {line} sums to {sum} ({decimal}), not 1 [NotStochastic]; --renormalize rescales it")]
    NotStochastic {
        path: String,
        line: String,
        sum: String,
        decimal: String,
    },
    #[error("{path}: {line} sums to 0 and cannot be renormalized")]
    ZeroLine { path: String, line: String },
    #[error("{path}: {source}")]
    Invalid { path: String, source: Box<Error> },
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct InputOptions {
    pub csv: bool,
    pub renormalize: bool,
}

/// Factors applied by `--renormalize`: each column of A and each row of B
/// was multiplied by the listed factor (the reciprocal of its sum).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Renormalization {
    pub a_columns: Vec<Rational>,
    pub b_rows: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LoadedPair {
    pub pair: ConditionalPair,
    pub renormalization: Option<Renormalization>,
}

#[derive(Deserialize)]
struct MatrixDocument {
    matrix: Vec<Vec<Literal>>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum Literal {
    Text(String),
    Number(serde_json::Number),
}

impl Literal {
    fn text(&self) -> String {
        match self {
            Literal::Text(s) => s.clone(),
            Literal::Number(n) => n.to_string(),
        }
    }
}

fn parse_entry(path: &str, location: impl FnOnce() -> String, literal: &str) -> Result<Rational, InputError> {
    Rational::from_str(literal.trim()).map_err(|_| InputError::Entry {
        path: path.to_string(),
        location: location(),
        literal: literal.to_string(),
    })
}

fn rectangular(path: &str, rows: Vec<Vec<Rational>>, label: impl Fn(usize) -> String) -> Result<RatMatrix, InputError> {
    let expected = match rows.first() {
        Some(r) if !r.is_empty() => r.len(),
        _ => return Err(InputError::Empty { path: path.to_string() }),
    };
    if let Some((k, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != expected) {
        return Err(InputError::Ragged {
            path: path.to_string(),
            location: label(k),
            found: r.len(),
            expected,
        });
    }
    RatMatrix::from_rows(rows).map_err(|source| InputError::Invalid {
        path: path.to_string(),
        source: Box::new(source),
    })
}

pub fn parse_json_matrix(text: &str, path: &str) -> Result<RatMatrix, InputError> {
    let doc: MatrixDocument = serde_json::from_str(text).map_err(|e| InputError::Json {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    let rows = doc
        .matrix
        .iter()
        .enumerate()
        .map(|(r, row)| {
            row.iter()
                .enumerate()
                .map(|(c, lit)| parse_entry(path, || format!("row {}, column {}", r + 1, c + 1), &lit.text()))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    rectangular(path, rows, |k| format!("row {}", k + 1))
}

/// Comma-separated rows; blank lines and lines starting with `#` are skipped.
pub fn parse_csv_matrix(text: &str, path: &str) -> Result<RatMatrix, InputError> {
    let mut rows = Vec::new();
    let mut line_numbers = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let row = trimmed
            .split(',')
            .enumerate()
            .map(|(f, field)| parse_entry(path, || format!("line {}, field {}", n + 1, f + 1), field))
            .collect::<Result<Vec<_>, _>>()?;
        rows.push(row);
        line_numbers.push(n + 1);
    }
    rectangular(path, rows, |k| format!("line {}", line_numbers[k]))
}

pub fn load_matrix(path: &Path, csv: bool) -> Result<RatMatrix, InputError> {
    let name = path.display().to_string();
    let text = fs::read_to_string(path).map_err(|source| InputError::Io {
        path: name.clone(),
        source,
    })?;
    if csv {
        parse_csv_matrix(&text, &name)
    } else {
        parse_json_matrix(&text, &name)
    }
}

/// Rescales each column of `a` and each row of `b` to sum to one.
pub fn renormalize(
    a: &RatMatrix,
    b: &RatMatrix,
    a_path: &str,
    b_path: &str,
) -> Result<(RatMatrix, RatMatrix, Renormalization), InputError> {
    let mut a = a.clone();
    let mut b = b.clone();
    let mut a_columns = Vec::with_capacity(a.cols());
    for j in 0..a.cols() {
        let sum: Rational = (0..a.rows()).map(|i| &a[(i, j)]).sum();
        let factor = sum.recip().ok_or_else(|| InputError::ZeroLine {
            path: a_path.to_string(),
            line: format!("column {}", j + 1),
        })?;
        for i in 0..a.rows() {
            a[(i, j)] = &a[(i, j)] * &factor;
        }
        a_columns.push(factor);
    }
    let mut b_rows = Vec::with_capacity(b.rows());
    for i in 0..b.rows() {
        let sum: Rational = b.row(i).iter().sum();
        let factor = sum.recip().ok_or_else(|| InputError::ZeroLine {
            path: b_path.to_string(),
            line: format!("row {}", i + 1),
        })?;
        for j in 0..b.cols() {
            b[(i, j)] = &b[(i, j)] * &factor;
        }
        b_rows.push(factor);
    }
    Ok((a, b, Renormalization { a_columns, b_rows }))
}

fn locate(err: Error, a_path: &str, b_path: &str) -> InputError {
    let path_of = |w: Which| match w {
        Which::A => a_path.to_string(),
        Which::B => b_path.to_string(),
    };
    match err {
        Error::ShapeMismatch {
            a_rows,
            a_cols,
            b_rows,
            b_cols,
        } => InputError::Shape {
            a_path: a_path.to_string(),
            b_path: b_path.to_string(),
            a_rows,
            a_cols,
            b_rows,
            b_cols,
        },
        Error::NegativeEntry { which, row, col, value } => InputError::Negative {
            path: path_of(which),
            row: row + 1,
            col: col + 1,
            value: value.to_string(),
        },
        Error::NotStochastic { which, line, sum } => InputError::NotStochastic {
            path: path_of(which),
            line: match line {
                Line::Row(i) => format!("row {}", i + 1),
                Line::Column(j) => format!("column {}", j + 1),
            },
            decimal: sum.to_decimal_string(7),
            sum: sum.to_string(),
        },
        source => InputError::Invalid {
            path: format!("{a_path}, {b_path}"),
            source: Box::new(source),
        },
    }
}

/// Reads, optionally renormalizes, and validates the pair.
pub fn load_pair(a_path: &Path, b_path: &Path, opts: InputOptions) -> Result<LoadedPair, InputError> {
    let a = load_matrix(a_path, opts.csv)?;
    let b = load_matrix(b_path, opts.csv)?;
    let (an, bn) = (a_path.display().to_string(), b_path.display().to_string());
    pair_from_matrices(a, b, &an, &bn, opts.renormalize)
}

pub fn pair_from_matrices(
    a: RatMatrix,
    b: RatMatrix,
    a_path: &str,
    b_path: &str,
    renormalize_input: bool,
) -> Result<LoadedPair, InputError> {
    if a.shape() != b.shape() {
        return Err(locate(
            Error::ShapeMismatch {
                a_rows: a.rows(),
                a_cols: a.cols(),
                b_rows: b.rows(),
                b_cols: b.cols(),
            },
            a_path,
            b_path,
        ));
    }
    let (a, b, renormalization) = if renormalize_input {
        // Negative entries are rejected before rescaling so a negative sum
        // cannot flip signs into a valid-looking matrix.
        validate_signs(&a, &b, a_path, b_path)?;
        let (a, b, r) = renormalize(&a, &b, a_path, b_path)?;
        (a, b, Some(r))
    } else {
        (a, b, None)
    };
    let pair = validate_pair(a, b).map_err(|e| locate(e, a_path, b_path))?;
    Ok(LoadedPair { pair, renormalization })
}

fn validate_signs(a: &RatMatrix, b: &RatMatrix, a_path: &str, b_path: &str) -> Result<(), InputError> {
    for (m, path) in [(a, a_path), (b, b_path)] {
        for r in 0..m.rows() {
            for c in 0..m.cols() {
                if m[(r, c)].is_negative() {
                    return Err(InputError::Negative {
                        path: path.to_string(),
                        row: r + 1,
                        col: c + 1,
                        value: m[(r, c)].to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use condcompat::rat;

    #[test]
    fn json_accepts_all_literal_forms() {
        let m = parse_json_matrix(r#"{"matrix": [["1/4", 0.75], [3, "-0.5"]]}"#, "m.json").unwrap();
        assert_eq!(m.to_rows(), vec![vec![rat(1, 4), rat(3, 4)], vec![rat(3, 1), rat(-1, 2)]]);
    }

    #[test]
    fn json_numbers_are_exact() {
        let m = parse_json_matrix(r#"{"matrix": [[0.1, 0.7]]}"#, "m.json").unwrap();
        assert_eq!(m.row(0), &[rat(1, 10), rat(7, 10)]);
    }

    #[test]
    fn diagnostics_carry_positions() {
        let err = parse_json_matrix(r#"{"matrix": [["1/4", "x"]]}"#, "a.json").unwrap_err();
        assert_eq!(
            err.to_string(),
            r#"a.json: row 1, column 2: invalid entry "x" (expected p/q, a decimal or an integer)"#
        );
        let err = parse_json_matrix("{\"matrix\": [[1,\n 2]", "a.json").unwrap_err();
        assert!(matches!(err, InputError::Json { line: 2, .. }), "{err}");
        let err = parse_json_matrix(r#"{"matrix": [[1, 2], [3]]}"#, "a.json").unwrap_err();
        assert_eq!(err.to_string(), "a.json: row 2 has 1 entries, expected 2");
        let err = parse_csv_matrix("1,2\n\n1/2,zz\n", "a.csv").unwrap_err();
        assert!(err.to_string().starts_with("a.csv: line 3, field 2"), "{err}");
        assert!(matches!(parse_json_matrix(r#"{"matrix": []}"#, "e"), Err(InputError::Empty { .. })));
    }

    #[test]
    fn csv_matches_json() {
        let csv = parse_csv_matrix("# A\n1/4, 2/3\n0.75, 1/3\n", "a.csv").unwrap();
        let json = parse_json_matrix(r#"{"matrix": [["1/4","2/3"],["3/4","1/3"]]}"#, "a.json").unwrap();
        assert_eq!(csv, json);
    }

    #[test]
    fn stochasticity_errors_name_file_and_line() {
        let a = parse_json_matrix(r#"{"matrix": [[0.5, 0.5], [0.4, 0.5]]}"#, "a").unwrap();
        let b = parse_json_matrix(r#"{"matrix": [[0.5, 0.5], [0.5, 0.5]]}"#, "b").unwrap();
        let err = pair_from_matrices(a.clone(), b.clone(), "a.json", "b.json", false).unwrap_err();
        assert_eq!(
            err.to_string(),
            "a.json: column 1 sums to 9/10 (0.9000000), not 1 [NotStochastic]; --renormalize rescales it"
        );
        let loaded = pair_from_matrices(a, b, "a.json", "b.json", true).unwrap();
        let r = loaded.renormalization.unwrap();
        assert_eq!(r.a_columns, vec![rat(10, 9), rat(1, 1)]);
        assert_eq!(r.b_rows, vec![rat(1, 1), rat(1, 1)]);
        assert_eq!(loaded.pair.a()[(0, 0)], rat(5, 9));
    }

    #[test]
    fn renormalize_rejects_zero_and_negative_lines() {
        let a = parse_json_matrix(r#"{"matrix": [[0, 1], [0, 1]]}"#, "a").unwrap();
        let b = parse_json_matrix(r#"{"matrix": [[1, 1], [1, 1]]}"#, "b").unwrap();
        let err = pair_from_matrices(a, b.clone(), "a.json", "b.json", true).unwrap_err();
        assert_eq!(err.to_string(), "a.json: column 1 sums to 0 and cannot be renormalized");
        let a = parse_json_matrix(r#"{"matrix": [[-1, 1], [-1, 1]]}"#, "a").unwrap();
        let err = pair_from_matrices(a, b, "a.json", "b.json", true).unwrap_err();
        assert!(matches!(err, InputError::Negative { row: 1, col: 1, .. }));
    }
}
