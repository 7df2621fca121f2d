//! Machine-readable report. Field order is fixed by the struct layout, so
//! the JSON form is deterministic and re-renders byte-for-byte after a parse.

use std::fmt::Write as _;

use condcompat::{CompatReport, LpResult, LpStatus, RatMatrix, Rational};
use serde::{Deserialize, Serialize};

use crate::input::Renormalization;

/// Digits after the point in every decimal rendering.
pub const PLACES: usize = 7;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub verdict: String,
    pub compatible: bool,
    pub x_len: usize,
    pub y_len: usize,
    #[serde(rename = "rank_D")]
    pub rank_d: usize,
    pub eta: Option<Vec<String>>,
    pub eta_decimal: Option<Vec<String>>,
    pub tau: Option<Vec<String>>,
    pub tau_decimal: Option<Vec<String>>,
    pub joint: Option<Vec<Vec<String>>>,
    pub joint_decimal: Option<Vec<Vec<String>>>,
    pub nullspace_basis: Vec<Vec<String>>,
    pub degenerate: bool,
    pub methods: MethodsSection,
    pub renormalization: Option<RenormalizationSection>,
    pub timing: TimingSection,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MethodsSection {
    pub rank: RankSection,
    pub joint_lp: LpSection,
    pub eta_lp: LpSection,
    pub solution_space: SpaceSection,
    /// Null unless the pair is 2x2 without zero entries.
    pub cross_ratio: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankSection {
    pub rank: usize,
    pub nullity: usize,
    pub verdict: String,
    pub compatible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LpSection {
    pub status: String,
    pub optimum: Option<String>,
    pub optimum_decimal: Option<String>,
    pub pivots: usize,
    pub compatible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceSection {
    #[serde(rename = "rank_C")]
    pub rank_c: usize,
    pub dimension: usize,
    pub search_optimum: Option<String>,
    pub compatible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenormalizationSection {
    pub a_column_factors: Vec<String>,
    pub b_row_factors: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimingSection {
    pub classify_micros: u64,
}

pub fn exact(values: &[Rational]) -> Vec<String> {
    values.iter().map(ToString::to_string).collect()
}

pub fn decimal(values: &[Rational]) -> Vec<String> {
    values.iter().map(|v| v.to_decimal_string(PLACES)).collect()
}

pub fn status_str(status: LpStatus) -> &'static str {
    match status {
        LpStatus::Optimal => "optimal",
        LpStatus::Infeasible => "infeasible",
        LpStatus::Unbounded => "unbounded",
    }
}

fn lp_section(lp: &LpResult) -> LpSection {
    LpSection {
        status: status_str(lp.status).to_string(),
        optimum: lp.optimum.as_ref().map(ToString::to_string),
        optimum_decimal: lp.optimum.as_ref().map(|v| v.to_decimal_string(PLACES)),
        pivots: lp.pivots,
        compatible: lp.has_positive_optimum(),
    }
}

impl ReportDocument {
    pub fn build(
        report: &CompatReport,
        x_len: usize,
        y_len: usize,
        renormalization: Option<&Renormalization>,
        classify_micros: u64,
    ) -> Self {
        let m = &report.methods;
        let joint_rows = report.joint.as_ref().map(|p| p.matrix().to_rows());
        Self {
            verdict: report.verdict.as_str().to_string(),
            compatible: report.verdict.is_compatible(),
            x_len,
            y_len,
            rank_d: report.rank_d,
            eta: report.eta.as_ref().map(|e| exact(e.values())),
            eta_decimal: report.eta.as_ref().map(|e| decimal(e.values())),
            tau: report.tau.as_ref().map(|t| exact(t.values())),
            tau_decimal: report.tau.as_ref().map(|t| decimal(t.values())),
            joint: joint_rows.as_ref().map(|rows| rows.iter().map(|r| exact(r)).collect()),
            joint_decimal: joint_rows.as_ref().map(|rows| rows.iter().map(|r| decimal(r)).collect()),
            nullspace_basis: report.nullspace_basis_d.iter().map(|v| exact(v)).collect(),
            degenerate: report.degenerate,
            methods: MethodsSection {
                rank: RankSection {
                    rank: m.rank.rank,
                    nullity: m.rank.nullspace_basis.len(),
                    verdict: m.rank.verdict.as_str().to_string(),
                    compatible: m.rank.verdict.is_compatible(),
                },
                joint_lp: lp_section(&m.joint_lp),
                eta_lp: lp_section(&m.eta_lp),
                solution_space: SpaceSection {
                    rank_c: m.solution_space.space.rank_c,
                    dimension: m.solution_space.space.dimension(),
                    search_optimum: m.solution_space.search.optimum.as_ref().map(ToString::to_string),
                    compatible: m.solution_space.is_compatible(),
                },
                cross_ratio: m.cross_ratio,
            },
            renormalization: renormalization.map(|r| RenormalizationSection {
                a_column_factors: exact(&r.a_columns),
                b_row_factors: exact(&r.b_rows),
            }),
            timing: TimingSection { classify_micros },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "verdict: {}", self.verdict);
        let _ = writeln!(out, "rank(D): {} (I = {}, J = {})", self.rank_d, self.x_len, self.y_len);
        for (name, ex, dec) in [
            ("eta", &self.eta, &self.eta_decimal),
            ("tau", &self.tau, &self.tau_decimal),
        ] {
            if let (Some(ex), Some(dec)) = (ex, dec) {
                let _ = writeln!(out, "{name}: {}  ({})", ex.join(", "), dec.join(", "));
            }
        }
        if let (Some(joint), Some(dec)) = (&self.joint, &self.joint_decimal) {
            let _ = writeln!(out, "joint P:");
            out.push_str(&grid(joint, "  "));
            let _ = writeln!(out, "joint P (decimal):");
            out.push_str(&grid(dec, "  "));
        }
        if !self.nullspace_basis.is_empty() {
            let _ = writeln!(out, "nullspace of D:");
            for v in &self.nullspace_basis {
                let _ = writeln!(out, "  ({})", v.join(", "));
            }
        }
        let m = &self.methods;
        let yes_no = |b: bool| if b { "compatible" } else { "incompatible" };
        let _ = writeln!(out, "methods:");
        let _ = writeln!(out, "  rank criterion   {} (rank {}, nullity {})", yes_no(m.rank.compatible), m.rank.rank, m.rank.nullity);
        for (name, lp) in [("joint LP        ", &m.joint_lp), ("eta LP          ", &m.eta_lp)] {
            let opt = lp.optimum.as_deref().unwrap_or("-");
            let _ = writeln!(out, "  {name} {} (status {}, optimum {opt}, {} pivots)", yes_no(lp.compatible), lp.status, lp.pivots);
        }
        let _ = writeln!(
            out,
            "  solution space   {} (rank(C) {}, dimension {})",
            yes_no(m.solution_space.compatible),
            m.solution_space.rank_c,
            m.solution_space.dimension
        );
        match m.cross_ratio {
            Some(holds) => {
                let _ = writeln!(out, "  cross ratios     {}", if holds { "equal" } else { "differ" });
            }
            None => {
                let _ = writeln!(out, "  cross ratios     not applicable");
            }
        }
        let _ = writeln!(out, "degenerate: {}", if self.degenerate { "yes" } else { "no" });
        if let Some(r) = &self.renormalization {
            let _ = writeln!(out, "renormalized: A columns x ({}), B rows x ({})", r.a_column_factors.join(", "), r.b_row_factors.join(", "));
        }
        let _ = writeln!(out, "classify time: {} us", self.timing.classify_micros);
        out
    }
}

/// Right-aligned columns, one line per row.
pub fn grid(rows: &[Vec<String>], indent: &str) -> String {
    let cols = rows.first().map_or(0, Vec::len);
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for r in rows {
        out.push_str(indent);
        let cells: Vec<String> = r.iter().zip(&widths).map(|(v, w)| format!("{v:>w$}")).collect();
        out.push_str(&cells.join("  "));
        out.push('\n');
    }
    out
}

pub fn matrix_grids(m: &RatMatrix) -> (Vec<Vec<String>>, Vec<Vec<String>>) {
    let rows = m.to_rows();
    (rows.iter().map(|r| exact(r)).collect(), m.to_decimal_rows(PLACES))
}
