//! Runs every decision procedure on a pair, checks that they agree, and
//! assembles the verdict with the recovered marginals and joint.
//!
//! The procedures are:
//! - the rank criterion on `D`, backed by a nonnegative nullspace witness;
//! - the joint-space program (positive optimum iff compatible);
//! - the η-space program over the reduced form of `D`;
//! - the solution space `(I − M) z` of `C p = 0`, with `M = C⁻C`, searched
//!   for a nonnegative nonzero member;
//! - for strictly positive 2×2 pairs, the cross-product ratio identity.

use crate::error::{Error, Result};
use crate::exactlin::{pivot_columns, rank, GInverse, RatMatrix, RatVector, Rational};
use crate::lpcore::{eta_lp, joint_lp, solve, LpProblem, LpResult};
use crate::specmodel::{
    build_c, build_d, cross_ratio_compatible_2x2, Axis, ConditionalPair, JointMatrix,
    MarginalVector,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    CompatibleUnique,
    CompatibleNonUnique,
    Incompatible,
}

impl Verdict {
    pub fn is_compatible(self) -> bool {
        !matches!(self, Verdict::Incompatible)
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::CompatibleUnique => "compatible-unique",
            Verdict::CompatibleNonUnique => "compatible-nonunique",
            Verdict::Incompatible => "incompatible",
        }
    }
}

/// Outcome of the rank criterion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankMethodResult {
    pub rank: usize,
    pub verdict: Verdict,
    /// Basis of the right nullspace of `D`.
    pub nullspace_basis: Vec<RatVector>,
    /// A nonnegative nullspace vector scaled to sum to one.
    pub witness: Option<MarginalVector>,
}

/// Maximizes `Σ y` over `y = Σ_k c_k v_k` (free `c`), `y ≥ 0`, `Σ y ≤ 1`,
/// where `v_k` are the given vectors. Returns the result with the solution
/// truncated to `y`.
fn cone_lp(vectors: &[RatVector], dim: usize) -> Result<LpResult> {
    let k = vectors.len();
    // Variables: y (dim), c+ (k), c- (k), slack of Σ y ≤ 1.
    let n = dim + 2 * k + 1;
    let mut e = RatMatrix::zeros(dim + 1, n);
    for i in 0..dim {
        e[(i, i)] = Rational::one();
        for (q, v) in vectors.iter().enumerate() {
            if !v[i].is_zero() {
                e[(i, dim + q)] = -&v[i];
                e[(i, dim + k + q)] = v[i].clone();
            }
        }
    }
    for i in 0..dim {
        e[(dim, i)] = Rational::one();
    }
    e[(dim, n - 1)] = Rational::one();
    let mut rhs = vec![Rational::zero(); dim + 1];
    rhs[dim] = Rational::one();
    let mut objective = vec![Rational::zero(); n];
    for c in &mut objective[..dim] {
        *c = Rational::one();
    }
    let mut result = solve(&LpProblem::new(objective, e, rhs, None)?)?;
    if let Some(sol) = &mut result.solution {
        sol.truncate(dim);
    }
    Ok(result)
}

/// Rank of `D` decides incompatibility (`rank = I`); otherwise the nullspace
/// must contain a nonnegative nonzero vector, which becomes the X-marginal.
/// A one-dimensional nullspace is checked for sign-definiteness directly;
/// larger ones go through a small cone program.
pub fn check_rank_method(pair: &ConditionalPair) -> Result<RankMethodResult> {
    let x_len = pair.x_len();
    let d = build_d(pair);
    let basis = crate::exactlin::nullspace(&d);
    let rank = x_len - basis.len();
    let witness = match basis.len() {
        0 => None,
        1 => {
            let v = &basis[0];
            if v.iter().all(|x| !x.is_negative()) {
                Some(MarginalVector::normalized(v, Axis::X)?)
            } else if v.iter().all(|x| !x.is_positive()) {
                let flipped: RatVector = v.iter().map(|x| -x).collect();
                Some(MarginalVector::normalized(&flipped, Axis::X)?)
            } else {
                None
            }
        }
        _ => {
            let lp = cone_lp(&basis, x_len)?;
            match (lp.has_positive_optimum(), lp.solution) {
                (true, Some(y)) => Some(MarginalVector::normalized(&y, Axis::X)?),
                _ => None,
            }
        }
    };
    let verdict = match (&witness, rank + 1 == x_len) {
        (None, _) => Verdict::Incompatible,
        (Some(_), true) => Verdict::CompatibleUnique,
        (Some(_), false) => Verdict::CompatibleNonUnique,
    };
    Ok(RankMethodResult {
        rank,
        verdict,
        nullspace_basis: basis,
        witness,
    })
}

fn check_eta_len(pair: &ConditionalPair, eta: &MarginalVector) -> Result<()> {
    if eta.len() != pair.x_len() {
        return Err(Error::DimensionMismatch(format!(
            "X-marginal has {} entries for {} categories",
            eta.len(),
            pair.x_len()
        )));
    }
    Ok(())
}

/// `τ_j = Σ_s b_sj η_s`.
pub fn recover_tau(pair: &ConditionalPair, eta: &MarginalVector) -> Result<MarginalVector> {
    check_eta_len(pair, eta)?;
    let b = pair.b();
    let tau = (0..pair.y_len())
        .map(|j| {
            eta.values()
                .iter()
                .enumerate()
                .map(|(s, e)| &b[(s, j)] * e)
                .sum()
        })
        .collect();
    MarginalVector::new(tau, Axis::Y)
}

/// `p_ij = b_ij η_i`, rejected unless `a_ij p_·j = p_ij` holds everywhere.
pub fn recover_joint(pair: &ConditionalPair, eta: &MarginalVector) -> Result<JointMatrix> {
    check_eta_len(pair, eta)?;
    let (a, b) = (pair.a(), pair.b());
    let (x_len, y_len) = (pair.x_len(), pair.y_len());
    let mut p = RatMatrix::zeros(x_len, y_len);
    for i in 0..x_len {
        for j in 0..y_len {
            p[(i, j)] = &b[(i, j)] * &eta.values()[i];
        }
    }
    for j in 0..y_len {
        let col: Rational = (0..x_len).map(|i| &p[(i, j)]).sum();
        for i in 0..x_len {
            if &a[(i, j)] * &col != p[(i, j)] {
                return Err(Error::ConsistencyFailure { row: i, col: j });
            }
        }
    }
    JointMatrix::new(p)
}

/// All solutions of `C p = 0`, as the column space of `I − M`, `M = C⁻C`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSpace {
    pub m: RatMatrix,
    pub projector: RatMatrix,
    /// Linearly independent columns of the projector spanning its range.
    pub basis: Vec<RatVector>,
    pub rank_c: usize,
}

impl SolutionSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    /// Some `z` with `(I − M) z = p`, if `p` lies in the space.
    pub fn coordinates_of(&self, p: &[Rational]) -> Option<RatVector> {
        crate::exactlin::solve_system(&self.projector, p)
    }

    /// Searches the space for a nonnegative nonzero vector; a positive
    /// optimum means one exists.
    pub fn nonnegative_search(&self) -> Result<LpResult> {
        cone_lp(&self.basis, self.projector.rows())
    }
}

fn inconsistent(what: &str) -> Error {
    Error::InternalInconsistency(what.to_string())
}

/// Builds `M = C⁻C` and `I − M`, checking idempotence, `C (I − M) = 0` and
/// `dim = IJ − rank(C)` exactly.
pub fn solution_space(pair: &ConditionalPair) -> Result<SolutionSpace> {
    let c = build_c(pair);
    let n = c.cols();
    let m = GInverse::new(&c).times(&c);
    let projector = &RatMatrix::identity(n) - &m;
    if &m * &m != m {
        return Err(inconsistent("M is not idempotent"));
    }
    if &projector * &projector != projector {
        return Err(inconsistent("I - M is not idempotent"));
    }
    if !(&c * &projector).is_zero() {
        return Err(inconsistent("C (I - M) is not zero"));
    }
    let pivots = pivot_columns(&projector);
    let basis: Vec<RatVector> = pivots.iter().map(|&k| projector.column(k)).collect();
    let rank_c = rank(&c);
    if basis.len() != n - rank_c {
        return Err(inconsistent("rank(I - M) differs from IJ - rank(C)"));
    }
    Ok(SolutionSpace {
        m,
        projector,
        basis,
        rank_c,
    })
}

/// The solution-space procedure: Ω plus its nonnegativity search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolutionSpaceCheck {
    pub space: SolutionSpace,
    pub search: LpResult,
}

impl SolutionSpaceCheck {
    pub fn is_compatible(&self) -> bool {
        self.search.has_positive_optimum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodResults {
    pub rank: RankMethodResult,
    pub joint_lp: LpResult,
    pub eta_lp: LpResult,
    pub solution_space: SolutionSpaceCheck,
    /// Only for 2×2 pairs without zero entries.
    pub cross_ratio: Option<bool>,
}

impl MethodResults {
    /// `(method, says compatible)` for every procedure that ran.
    pub fn verdicts(&self) -> Vec<(&'static str, bool)> {
        let mut v = vec![
            ("rank", self.rank.verdict.is_compatible()),
            ("joint_lp", self.joint_lp.has_positive_optimum()),
            ("eta_lp", self.eta_lp.has_positive_optimum()),
            ("solution_space", self.solution_space.is_compatible()),
        ];
        if let Some(c) = self.cross_ratio {
            v.push(("cross_ratio", c));
        }
        v
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompatReport {
    pub verdict: Verdict,
    pub rank_d: usize,
    pub eta: Option<MarginalVector>,
    pub tau: Option<MarginalVector>,
    /// The unique joint, or in the non-unique case the one induced by the
    /// reported witness.
    pub joint: Option<JointMatrix>,
    pub nullspace_basis_d: Vec<RatVector>,
    pub methods: MethodResults,
    /// Some recovered marginal entry is zero.
    pub degenerate: bool,
}

fn has_zero_entry(m: &RatMatrix) -> bool {
    m.entries().iter().any(Rational::is_zero)
}

/// Runs every procedure, fails with `InternalInconsistency` if any two
/// disagree on compatibility, and assembles the report.
pub fn classify(pair: &ConditionalPair) -> Result<CompatReport> {
    let rank_method = check_rank_method(pair)?;
    let joint = joint_lp(pair)?;
    let eta = eta_lp(pair)?;
    let space = solution_space(pair)?;
    let search = space.nonnegative_search()?;
    let cross_ratio = if pair.x_len() == 2
        && pair.y_len() == 2
        && !has_zero_entry(pair.a())
        && !has_zero_entry(pair.b())
    {
        Some(cross_ratio_compatible_2x2(pair)?)
    } else {
        None
    };
    let methods = MethodResults {
        rank: rank_method,
        joint_lp: joint,
        eta_lp: eta,
        solution_space: SolutionSpaceCheck { space, search },
        cross_ratio,
    };

    let verdicts = methods.verdicts();
    let compatible = methods.rank.verdict.is_compatible();
    if let Some((name, _)) = verdicts.iter().find(|(_, v)| *v != compatible) {
        return Err(Error::InternalInconsistency(format!(
            "{name} disagrees with the rank criterion (rank says compatible = {compatible})"
        )));
    }

    let (eta, tau, joint) = match &methods.rank.witness {
        Some(w) => {
            let tau = recover_tau(pair, w)?;
            let joint = recover_joint(pair, w)?;
            (Some(w.clone()), Some(tau), Some(joint))
        }
        None => (None, None, None),
    };
    let degenerate = eta.as_ref().is_some_and(MarginalVector::has_zero)
        || tau.as_ref().is_some_and(MarginalVector::has_zero);
    Ok(CompatReport {
        verdict: methods.rank.verdict,
        rank_d: methods.rank.rank,
        eta,
        tau,
        joint,
        nullspace_basis_d: methods.rank.nullspace_basis.clone(),
        methods,
        degenerate,
    })
}
