use std::fmt::Write as _;
use std::path::Path;
use std::time::Instant;

use condcompat::{build_c, build_d, classify, eta_lp, joint_lp, LpResult, Rational, SystemMatrices};
use thiserror::Error;

use crate::input::{load_pair, InputError, InputOptions};
use crate::report::{decimal, exact, grid, matrix_grids, status_str, ReportDocument, PLACES};

pub const EXIT_COMPATIBLE: i32 = 0;
pub const EXIT_INCOMPATIBLE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error(transparent)]
    Engine(#[from] condcompat::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Space {
    #[default]
    Joint,
    Eta,
}

/// What a command prints and the process exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
}

pub fn exit_code(compatible: bool) -> i32 {
    if compatible {
        EXIT_COMPATIBLE
    } else {
        EXIT_INCOMPATIBLE
    }
}

pub fn check(a: &Path, b: &Path, opts: InputOptions, format: Format) -> Result<Outcome, CliError> {
    let loaded = load_pair(a, b, opts)?;
    let started = Instant::now();
    let report = classify(&loaded.pair)?;
    let micros = u64::try_from(started.elapsed().as_micros()).unwrap_or(u64::MAX);
    let doc = ReportDocument::build(
        &report,
        loaded.pair.x_len(),
        loaded.pair.y_len(),
        loaded.renormalization.as_ref(),
        micros,
    );
    let stdout = match format {
        Format::Text => doc.to_text(),
        Format::Json => doc.to_json(),
    };
    Ok(Outcome {
        code: exit_code(report.verdict.is_compatible()),
        stdout,
    })
}

fn labeled_rows(sys: &SystemMatrices, y_len: usize, rows: Vec<Vec<String>>) -> Vec<Vec<String>> {
    rows.into_iter()
        .enumerate()
        .map(|(k, r)| {
            let (i, j) = (k / y_len, k % y_len);
            debug_assert_eq!(sys.row_index(i, j), k);
            let mut out = vec![format!("({},{})", i + 1, j + 1)];
            out.extend(r);
            out
        })
        .collect()
}

pub fn dmatrix(a: &Path, b: &Path, opts: InputOptions, with_c: bool) -> Result<Outcome, CliError> {
    let loaded = load_pair(a, b, opts)?;
    let pair = &loaded.pair;
    let sys = SystemMatrices::build(pair);
    let y_len = pair.y_len();
    let mut out = String::new();
    let mut dump = |name: &str, m: &condcompat::RatMatrix| {
        let (ex, dec) = matrix_grids(m);
        let _ = writeln!(out, "{name} ({}x{}), rows (i,j) in i-major order", m.rows(), m.cols());
        let _ = writeln!(out, "exact:");
        out.push_str(&grid(&labeled_rows(&sys, y_len, ex), "  "));
        let _ = writeln!(out, "decimal ({PLACES} places):");
        out.push_str(&grid(&labeled_rows(&sys, y_len, dec), "  "));
    };
    dump("D", &build_d(pair));
    if with_c {
        dump("C", &build_c(pair));
    }
    Ok(Outcome {
        code: EXIT_COMPATIBLE,
        stdout: out,
    })
}

pub fn lp(a: &Path, b: &Path, opts: InputOptions, space: Space) -> Result<Outcome, CliError> {
    let loaded = load_pair(a, b, opts)?;
    let pair = &loaded.pair;
    let result: LpResult = match space {
        Space::Joint => joint_lp(pair)?,
        Space::Eta => eta_lp(pair)?,
    };
    let compatible = result.has_positive_optimum();
    let mut out = String::new();
    let _ = writeln!(out, "space: {}", if space == Space::Joint { "joint" } else { "eta" });
    let _ = writeln!(out, "status: {}", status_str(result.status));
    if let Some(opt) = &result.optimum {
        let _ = writeln!(out, "optimum: {opt} ({})", opt.to_decimal_string(PLACES));
    }
    if let Some(sol) = &result.solution {
        match space {
            Space::Joint => {
                let rows: Vec<Vec<Rational>> = sol.chunks(pair.y_len()).map(<[Rational]>::to_vec).collect();
                let _ = writeln!(out, "optimizer p:");
                out.push_str(&grid(&rows.iter().map(|r| exact(r)).collect::<Vec<_>>(), "  "));
            }
            Space::Eta => {
                let _ = writeln!(out, "optimizer: {}", exact(sol).join(", "));
            }
        }
        if compatible {
            let total: Rational = sol.iter().sum();
            let normalized: Vec<Rational> = sol.iter().map(|v| v / &total).collect();
            let _ = writeln!(
                out,
                "normalized: {}  ({})",
                exact(&normalized).join(", "),
                decimal(&normalized).join(", ")
            );
        }
    }
    let _ = writeln!(out, "verdict: {}", if compatible { "compatible" } else { "incompatible" });
    Ok(Outcome {
        code: exit_code(compatible),
        stdout: out,
    })
}
