use std::fmt;

use thiserror::Error;

use crate::exactlin::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid rational literal {literal:?}")]
pub struct ParseRationalError {
    pub literal: String,
}

impl ParseRationalError {
    pub(crate) fn new(literal: &str) -> Self {
        Self {
            literal: literal.to_string(),
        }
    }
}

/// Which conditional matrix a diagnostic refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Which {
    /// `P(X|Y)`, column-stochastic.
    A,
    /// `P(Y|X)`, row-stochastic.
    B,
}

impl fmt::Display for Which {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Which::A => f.write_str("A"),
            Which::B => f.write_str("B"),
        }
    }
}

/// Row or column, for stochasticity and marginal diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Line {
    Row(usize),
    Column(usize),
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Line::Row(i) => write!(f, "row {i}"),
            Line::Column(j) => write!(f, "column {j}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("matrix must be nonempty and rectangular")]
    EmptyOrRagged,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("shape mismatch: A is {a_rows}x{a_cols}, B is {b_rows}x{b_cols}")]
    ShapeMismatch {
        a_rows: usize,
        a_cols: usize,
        b_rows: usize,
        b_cols: usize,
    },
    #[error("{which} has negative entry {value} at ({row}, {col})")]
    NegativeEntry {
        which: Which,
        row: usize,
        col: usize,
        value: Rational,
    },
    #[error("{which} is not stochastic: {line} sums to {sum}")]
    NotStochastic {
        which: Which,
        line: Line,
        sum: Rational,
    },
    #[error("joint has zero marginal at {0}")]
    ZeroMarginal(Line),
    #[error("joint matrix is invalid: {0}")]
    InvalidJoint(String),
    #[error("marginal vector is invalid: {0}")]
    InvalidMarginal(String),
    #[error("cross-product ratio test needs a 2x2 pair, got {rows}x{cols}")]
    NotTwoByTwo { rows: usize, cols: usize },
    #[error("cross-product ratio test is undefined with a zero entry in {which} at ({row}, {col})")]
    ZeroEntry { which: Which, row: usize, col: usize },
    #[error("malformed linear program: {0}")]
    Malformed(String),
    #[error("recovered joint fails a_ij * p_.j = p_ij at ({row}, {col})")]
    ConsistencyFailure { row: usize, col: usize },
    #[error("decision procedures disagree: {0}")]
    InternalInconsistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
