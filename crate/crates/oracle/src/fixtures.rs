//! Worked examples with their reference D matrices, ranks, marginals and
//! joints. Entries are kept as literals so they can be parsed exactly.

use std::str::FromStr;

use condcompat::{validate_pair, ConditionalPair, RatMatrix, Rational};

type Grid = &'static [&'static [&'static str]];

#[derive(Debug, Clone, Copy)]
pub struct Fixture {
    pub name: &'static str,
    pub a: Grid,
    pub b: Grid,
    /// D as printed, row (i, j) in i-major order.
    pub printed_d: Option<Grid>,
    /// Entries of `printed_d` known in closed form, as (row, col, fraction).
    pub exact_d: &'static [(usize, usize, &'static str)],
    pub rank_d: usize,
    pub compatible: bool,
    pub eta: Option<&'static [&'static str]>,
    pub tau: Option<&'static [&'static str]>,
    pub joint: Option<Grid>,
}

pub fn parse_grid(grid: Grid) -> RatMatrix {
    RatMatrix::from_rows(grid.iter().map(|row| row.iter().map(|s| parse(s)).collect::<Vec<_>>()).collect())
        .expect("fixture grid is rectangular")
}

pub fn parse_vec(values: &[&str]) -> Vec<Rational> {
    values.iter().map(|s| parse(s)).collect()
}

fn parse(s: &str) -> Rational {
    Rational::from_str(s).unwrap_or_else(|_| panic!("bad fixture literal {s}"))
}

impl Fixture {
    pub fn pair(&self) -> ConditionalPair {
        validate_pair(parse_grid(self.a), parse_grid(self.b)).expect("fixture pair is valid")
    }

    pub fn printed_d_matrix(&self) -> Option<RatMatrix> {
        self.printed_d.map(parse_grid)
    }

    pub fn eta_values(&self) -> Option<Vec<Rational>> {
        self.eta.map(parse_vec)
    }

    pub fn tau_values(&self) -> Option<Vec<Rational>> {
        self.tau.map(parse_vec)
    }

    pub fn joint_matrix(&self) -> Option<RatMatrix> {
        self.joint.map(parse_grid)
    }
}

pub const TWO_BY_TWO_COMPATIBLE: Fixture = Fixture {
    name: "2x2 compatible",
    a: &[&["1/4", "2/3"], &["3/4", "1/3"]],
    b: &[&["1/3", "2/3"], &["3/4", "1/4"]],
    printed_d: Some(&[
        &["-0.2500000", "0.1875000"],
        &["-0.2222222", "0.1666667"],
        &["0.2500000", "-0.1875000"],
        &["0.2222222", "-0.1666667"],
    ]),
    exact_d: &[(0, 0, "-1/4"), (0, 1, "3/16"), (1, 0, "-2/9"), (1, 1, "1/6")],
    rank_d: 1,
    compatible: true,
    eta: Some(&["3/7", "4/7"]),
    tau: Some(&["4/7", "3/7"]),
    joint: Some(&[&["1/7", "2/7"], &["3/7", "1/7"]]),
};

pub const TWO_BY_TWO_INCOMPATIBLE: Fixture = Fixture {
    name: "2x2 incompatible",
    a: &[&["1/7", "3/4"], &["6/7", "1/4"]],
    b: &[&["2/5", "3/5"], &["3/8", "5/8"]],
    printed_d: Some(&[
        &["-0.3428571", "0.05357143"],
        &["-0.1500000", "0.46875000"],
        &["0.3428571", "-0.05357143"],
        &["0.1500000", "-0.46875000"],
    ]),
    exact_d: &[(0, 0, "-12/35"), (0, 1, "3/56"), (1, 0, "-3/20"), (1, 1, "15/32")],
    rank_d: 2,
    compatible: false,
    eta: None,
    tau: None,
    joint: None,
};

pub const THREE_BY_THREE_POSITIVE: Fixture = Fixture {
    name: "3x3 compatible, strictly positive",
    a: &[&["1/5", "2/7", "3/8"], &["3/5", "2/7", "1/8"], &["1/5", "3/7", "1/2"]],
    b: &[&["1/6", "1/3", "1/2"], &["1/2", "1/3", "1/6"], &["1/8", "3/8", "1/2"]],
    printed_d: Some(&[
        &["-0.13333333", "0.10000000", "0.0250000"],
        &["-0.23809524", "0.09523810", "0.1071429"],
        &["-0.31250000", "0.06250000", "0.1875000"],
        &["0.10000000", "-0.20000000", "0.0750000"],
        &["0.09523810", "-0.23809524", "0.1071429"],
        &["0.06250000", "-0.14583333", "0.0625000"],
        &["0.03333333", "0.10000000", "-0.1000000"],
        &["0.14285714", "0.14285714", "-0.2142857"],
        &["0.25000000", "0.08333333", "-0.2500000"],
    ]),
    exact_d: &[(0, 0, "-2/15"), (0, 1, "1/10"), (0, 2, "1/40"), (4, 1, "-5/21")],
    rank_d: 2,
    compatible: true,
    eta: Some(&["0.3", "0.3", "0.4"]),
    tau: Some(&["1/4", "7/20", "2/5"]),
    joint: None,
};

pub const THREE_BY_THREE_ZEROS: Fixture = Fixture {
    name: "3x3 compatible, shared zeros",
    a: &[&["1/3", "0", "2/3"], &["0", "1/2", "1/3"], &["2/3", "1/2", "0"]],
    b: &[&["1/3", "0", "2/3"], &["0", "1/2", "1/2"], &["2/3", "1/3", "0"]],
    printed_d: Some(&[
        &["-0.2222222", "0.0000000", "0.2222222"],
        &["0.0000000", "0.0000000", "0.0000000"],
        &["-0.2222222", "0.3333333", "0.0000000"],
        &["0.0000000", "0.0000000", "0.0000000"],
        &["0.0000000", "-0.2500000", "0.1666667"],
        &["0.2222222", "-0.3333333", "0.0000000"],
        &["0.2222222", "0.0000000", "-0.2222222"],
        &["0.0000000", "0.2500000", "-0.1666667"],
        &["0.0000000", "0.0000000", "0.0000000"],
    ]),
    exact_d: &[(0, 0, "-2/9"), (2, 1, "1/3"), (4, 1, "-1/4"), (4, 2, "1/6")],
    rank_d: 2,
    compatible: true,
    eta: Some(&["0.375", "0.250", "0.375"]),
    tau: Some(&["3/8", "1/4", "3/8"]),
    joint: Some(&[
        &["0.125", "0.000", "0.250"],
        &["0.000", "0.125", "0.125"],
        &["0.250", "0.125", "0.000"],
    ]),
};

const GROCERY_A: Grid = &[&["0.2", "0.3", "0.1"], &["0.1", "0.4", "0.4"], &["0.7", "0.3", "0.5"]];
const GROCERY_B: Grid = &[&["0.2", "0.1", "0.7"], &["0.3", "0.4", "0.3"], &["0.1", "0.4", "0.5"]];
const GROCERY_D: Grid = &[
    &["-0.16", "0.06", "0.02"],
    &["-0.07", "0.12", "0.12"],
    &["-0.63", "0.03", "0.05"],
    &["0.02", "-0.27", "0.01"],
    &["0.04", "-0.24", "0.16"],
    &["0.28", "-0.18", "0.20"],
    &["0.14", "0.21", "-0.03"],
    &["0.03", "0.12", "-0.28"],
    &["0.35", "0.15", "-0.25"],
];

pub const THREE_BY_THREE_POSITIVE_INCOMPATIBLE: Fixture = Fixture {
    name: "3x3 incompatible, strictly positive",
    a: GROCERY_A,
    b: GROCERY_B,
    printed_d: Some(GROCERY_D),
    exact_d: &[(0, 0, "-4/25"), (2, 0, "-63/100")],
    rank_d: 3,
    compatible: false,
    eta: None,
    tau: None,
    joint: None,
};

pub const THREE_BY_THREE_ZEROS_INCOMPATIBLE: Fixture = Fixture {
    name: "3x3 incompatible, with zeros",
    a: &[&["0", "1/3", "0"], &["1", "1/3", "1/2"], &["0", "1/3", "1/2"]],
    b: &[&["0", "1", "0"], &["1/4", "1/2", "1/4"], &["0", "1/5", "4/5"]],
    printed_d: Some(&[
        &["0.0000000", "0.0000000", "0.00000000"],
        &["-0.6666667", "0.1666667", "0.06666667"],
        &["0.0000000", "0.0000000", "0.00000000"],
        &["0.0000000", "0.0000000", "0.00000000"],
        &["0.3333333", "-0.3333333", "0.06666667"],
        &["0.0000000", "-0.1250000", "0.40000000"],
        &["0.0000000", "0.0000000", "0.00000000"],
        &["0.3333333", "0.1666667", "-0.13333333"],
        &["0.0000000", "0.1250000", "-0.40000000"],
    ]),
    exact_d: &[(1, 0, "-2/3"), (1, 2, "1/15"), (5, 1, "-1/8"), (5, 2, "2/5")],
    rank_d: 3,
    compatible: false,
    eta: None,
    tau: None,
    joint: None,
};

/// Store supply/demand data; same matrices as the positive incompatible 3x3.
pub const GROCERY: Fixture = Fixture {
    name: "grocery supply and demand",
    ..THREE_BY_THREE_POSITIVE_INCOMPATIBLE
};

pub const ALL: [Fixture; 7] = [
    TWO_BY_TWO_COMPATIBLE,
    TWO_BY_TWO_INCOMPATIBLE,
    THREE_BY_THREE_POSITIVE,
    THREE_BY_THREE_ZEROS,
    THREE_BY_THREE_POSITIVE_INCOMPATIBLE,
    THREE_BY_THREE_ZEROS_INCOMPATIBLE,
    GROCERY,
];

/// `A = B = I`: every marginal is a witness.
pub fn identity_pair(n: usize) -> ConditionalPair {
    let id = RatMatrix::identity(n);
    validate_pair(id.clone(), id).expect("identity pair is valid")
}
