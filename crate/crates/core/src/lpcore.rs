//! Exact two-phase simplex with Bland's rule, and the two compatibility
//! programs built on it.
//!
//! Problems have the form: maximize `cᵀx` subject to `E x = e`, `x ≥ 0` and
//! optionally `x ≤ u`. Upper bounds become explicit rows `x_k + s_k = u_k`.

use crate::error::{Error, Result};
use crate::exactlin::{rref, RatMatrix, RatVector, Rational};
use crate::specmodel::{build_c, build_d, ConditionalPair};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpProblem {
    objective: RatVector,
    equalities: RatMatrix,
    rhs: RatVector,
    upper_bounds: Option<RatVector>,
}

impl LpProblem {
    pub fn new(
        objective: RatVector,
        equalities: RatMatrix,
        rhs: RatVector,
        upper_bounds: Option<RatVector>,
    ) -> Result<Self> {
        let n = objective.len();
        if n == 0 {
            return Err(Error::Malformed("no variables".into()));
        }
        if equalities.cols() != n {
            return Err(Error::Malformed(format!(
                "{} objective coefficients but {} constraint columns",
                n,
                equalities.cols()
            )));
        }
        if rhs.len() != equalities.rows() {
            return Err(Error::Malformed(format!(
                "{} constraint rows but {} right-hand sides",
                equalities.rows(),
                rhs.len()
            )));
        }
        if let Some(u) = &upper_bounds {
            if u.len() != n {
                return Err(Error::Malformed(format!("{} upper bounds for {n} variables", u.len())));
            }
        }
        Ok(Self {
            objective,
            equalities,
            rhs,
            upper_bounds,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.objective.len()
    }

    pub fn objective(&self) -> &[Rational] {
        &self.objective
    }

    pub fn equalities(&self) -> &RatMatrix {
        &self.equalities
    }

    pub fn rhs(&self) -> &[Rational] {
        &self.rhs
    }

    pub fn upper_bounds(&self) -> Option<&[Rational]> {
        self.upper_bounds.as_deref()
    }

    /// Same constraints, objective multiplied by `factor`.
    pub fn with_scaled_objective(&self, factor: &Rational) -> Self {
        Self {
            objective: self.objective.iter().map(|c| c * factor).collect(),
            ..self.clone()
        }
    }

    /// True when `x` satisfies every constraint exactly.
    pub fn is_feasible(&self, x: &[Rational]) -> bool {
        if x.len() != self.num_vars() || x.iter().any(Rational::is_negative) {
            return false;
        }
        if let Some(u) = &self.upper_bounds {
            if x.iter().zip(u).any(|(v, b)| v > b) {
                return false;
            }
        }
        match self.equalities.mul_vec(x) {
            Ok(lhs) => lhs == self.rhs,
            Err(_) => false,
        }
    }

    pub fn objective_value(&self, x: &[Rational]) -> Rational {
        self.objective.iter().zip(x).map(|(c, v)| c * v).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LpResult {
    pub status: LpStatus,
    /// Present when `status` is `Optimal`.
    pub optimum: Option<Rational>,
    /// Present when `status` is `Optimal`.
    pub solution: Option<RatVector>,
    /// Simplex pivots over both phases.
    pub pivots: usize,
}

impl LpResult {
    fn without_solution(status: LpStatus, pivots: usize) -> Self {
        Self {
            status,
            optimum: None,
            solution: None,
            pivots,
        }
    }

    /// True for an optimal result with a strictly positive value.
    pub fn has_positive_optimum(&self) -> bool {
        self.optimum.as_ref().is_some_and(Rational::is_positive)
    }
}

enum Outcome {
    Optimal,
    Unbounded,
}

/// Dense simplex tableau. Rows are constraint rows `[coeffs | rhs]`; the
/// objective row holds reduced costs for a maximization.
struct Tableau {
    rows: Vec<RatVector>,
    rhs: RatVector,
    costs: RatVector,
    value: Rational,
    basis: Vec<usize>,
    enterable: Vec<bool>,
    pivots: usize,
}

impl Tableau {
    fn pivot(&mut self, row: usize, col: usize) {
        let inv = self.rows[row][col].recip().expect("pivot element is nonzero");
        for v in self.rows[row].iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        self.rhs[row] *= &inv;
        let support: Vec<usize> = (0..self.rows[row].len())
            .filter(|&j| !self.rows[row][j].is_zero())
            .collect();
        let pivot_row = self.rows[row].clone();
        let pivot_rhs = self.rhs[row].clone();
        for t in 0..self.rows.len() {
            if t == row || self.rows[t][col].is_zero() {
                continue;
            }
            let factor = self.rows[t][col].clone();
            for &j in &support {
                self.rows[t][j] -= &factor * &pivot_row[j];
            }
            if !pivot_rhs.is_zero() {
                self.rhs[t] -= &factor * &pivot_rhs;
            }
        }
        if !self.costs[col].is_zero() {
            let factor = self.costs[col].clone();
            for &j in &support {
                self.costs[j] -= &factor * &pivot_row[j];
            }
            self.value += &factor * &pivot_rhs;
        }
        self.basis[row] = col;
        self.pivots += 1;
    }

    /// Bland's rule: lowest-index improving column enters; ratio ties go to
    /// the row whose basic variable has the lowest index.
    fn run(&mut self) -> Outcome {
        loop {
            let entering = (0..self.costs.len())
                .find(|&j| self.enterable[j] && self.costs[j].is_positive());
            let Some(col) = entering else {
                return Outcome::Optimal;
            };
            let mut best: Option<(usize, Rational)> = None;
            for r in 0..self.rows.len() {
                let a = &self.rows[r][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[r] / a;
                let better = match &best {
                    None => true,
                    Some((br, bv)) => {
                        ratio < *bv || (ratio == *bv && self.basis[r] < self.basis[*br])
                    }
                };
                if better {
                    best = Some((r, ratio));
                }
            }
            match best {
                Some((row, _)) => self.pivot(row, col),
                None => return Outcome::Unbounded,
            }
        }
    }

    fn set_objective(&mut self, c: &[Rational]) {
        let mut costs = c.to_vec();
        let mut value = Rational::zero();
        for (r, &b) in self.basis.iter().enumerate() {
            if c[b].is_zero() {
                continue;
            }
            for (j, a) in self.rows[r].iter().enumerate() {
                if !a.is_zero() {
                    costs[j] -= &c[b] * a;
                }
            }
            value += &c[b] * &self.rhs[r];
        }
        self.costs = costs;
        self.value = value;
    }

    fn remove_row(&mut self, r: usize) {
        self.rows.remove(r);
        self.rhs.remove(r);
        self.basis.remove(r);
    }
}

/// Solves `p` exactly. Optimal results are re-checked against every
/// constraint before being returned.
pub fn solve(p: &LpProblem) -> Result<LpResult> {
    let n = p.num_vars();
    let m_eq = p.equalities.rows();
    let bounds = p.upper_bounds.as_deref();
    if bounds.is_some_and(|u| u.iter().any(Rational::is_negative)) {
        return Ok(LpResult::without_solution(LpStatus::Infeasible, 0));
    }
    let n_slack = if bounds.is_some() { n } else { 0 };
    let first_art = n + n_slack;
    let width = first_art + m_eq;

    let mut rows = Vec::with_capacity(m_eq + n_slack);
    let mut rhs = Vec::with_capacity(m_eq + n_slack);
    let mut basis = Vec::with_capacity(m_eq + n_slack);
    for r in 0..m_eq {
        let flip = p.rhs[r].is_negative();
        let mut row = vec![Rational::zero(); width];
        for (j, v) in p.equalities.row(r).iter().enumerate() {
            row[j] = if flip { -v } else { v.clone() };
        }
        row[first_art + r] = Rational::one();
        rows.push(row);
        rhs.push(p.rhs[r].abs());
        basis.push(first_art + r);
    }
    if let Some(u) = bounds {
        for (k, bound) in u.iter().enumerate() {
            let mut row = vec![Rational::zero(); width];
            row[k] = Rational::one();
            row[n + k] = Rational::one();
            rows.push(row);
            rhs.push(bound.clone());
            basis.push(n + k);
        }
    }

    let mut t = Tableau {
        rows,
        rhs,
        costs: Vec::new(),
        value: Rational::zero(),
        basis,
        enterable: vec![true; width],
        pivots: 0,
    };

    // Phase 1: maximize −Σ artificials.
    let mut phase1 = vec![Rational::zero(); width];
    for c in &mut phase1[first_art..] {
        *c = -Rational::one();
    }
    t.set_objective(&phase1);
    if let Outcome::Unbounded = t.run() {
        unreachable!("phase 1 objective is bounded above by zero");
    }
    if t.value.is_negative() {
        return Ok(LpResult::without_solution(LpStatus::Infeasible, t.pivots));
    }

    // Drive zero-valued artificials out of the basis; rows where that is
    // impossible are redundant.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= first_art {
            match (0..first_art).find(|&j| !t.rows[r][j].is_zero()) {
                Some(col) => t.pivot(r, col),
                None => {
                    t.remove_row(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    for e in &mut t.enterable[first_art..] {
        *e = false;
    }

    // Phase 2.
    let mut phase2 = vec![Rational::zero(); width];
    phase2[..n].clone_from_slice(&p.objective);
    t.set_objective(&phase2);
    if let Outcome::Unbounded = t.run() {
        return Ok(LpResult::without_solution(LpStatus::Unbounded, t.pivots));
    }

    let mut x = vec![Rational::zero(); n];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < n {
            x[b] = t.rhs[r].clone();
        }
    }
    let optimum = p.objective_value(&x);
    if !p.is_feasible(&x) || optimum != t.value {
        return Err(Error::InternalInconsistency(
            "simplex optimizer fails its own constraints".into(),
        ));
    }
    Ok(LpResult {
        status: LpStatus::Optimal,
        optimum: Some(optimum),
        solution: Some(x),
        pivots: t.pivots,
    })
}

/// Maximize `Σ y` subject to `D_r y = 0`, `y ≥ 0`, `Σ y ≤ 1`, where `D_r`
/// is the nonzero part of the reduced form of `D`. The returned solution
/// has length `I`; a positive optimum means the normalized optimizer is an
/// X-marginal consistent with the pair.
pub fn eta_lp(pair: &ConditionalPair) -> Result<LpResult> {
    let (reduced, pivots) = rref(&build_d(pair));
    let x_len = pair.x_len();
    // Variables: y_0..y_{I-1}, then the slack of Σ y ≤ 1.
    let n = x_len + 1;
    let mut e = RatMatrix::zeros(pivots.len() + 1, n);
    for r in 0..pivots.len() {
        for (s, v) in reduced.row(r).iter().enumerate() {
            e[(r, s)] = v.clone();
        }
    }
    let last = pivots.len();
    for s in 0..n {
        e[(last, s)] = Rational::one();
    }
    let mut rhs = vec![Rational::zero(); last + 1];
    rhs[last] = Rational::one();
    let mut objective = vec![Rational::one(); n];
    objective[x_len] = Rational::zero();
    let mut result = solve(&LpProblem::new(objective, e, rhs, None)?)?;
    if let Some(sol) = &mut result.solution {
        sol.truncate(x_len);
    }
    Ok(result)
}

/// The joint-space program: maximize `Σ p_ij` subject to `C p = 0` and
/// `0 ≤ p_ij ≤ 1`. Always feasible (`p = 0`); the optimum is positive
/// exactly when the pair is compatible.
pub fn joint_lp(pair: &ConditionalPair) -> Result<LpResult> {
    solve(&joint_problem(pair))
}

pub fn joint_problem(pair: &ConditionalPair) -> LpProblem {
    let c = build_c(pair);
    let n = c.cols();
    LpProblem::new(
        vec![Rational::one(); n],
        c,
        vec![Rational::zero(); n],
        Some(vec![Rational::one(); n]),
    )
    .expect("joint program dimensions agree")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;
    use crate::specmodel::validate_pair;
    use proptest::prelude::*;

    fn m(rows: &[&[(i64, i64)]]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| rat(n, d)).collect::<Vec<_>>())
                .collect(),
        )
        .unwrap()
    }

    fn ints(v: &[i64]) -> RatVector {
        v.iter().map(|&x| rat(x, 1)).collect()
    }

    #[test]
    fn sum_bounded_by_one() {
        // max x + y, x + y + s = 1.
        let p = LpProblem::new(ints(&[1, 1, 0]), m(&[&[(1, 1), (1, 1), (1, 1)]]), ints(&[1]), None)
            .unwrap();
        let r = solve(&p).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.optimum, Some(rat(1, 1)));
        assert_eq!(r.solution, Some(ints(&[1, 0, 0])));
    }

    #[test]
    fn infeasible_and_unbounded() {
        // x = -1 with x >= 0.
        let p = LpProblem::new(ints(&[1]), m(&[&[(1, 1)]]), ints(&[-1]), None).unwrap();
        assert_eq!(solve(&p).unwrap().status, LpStatus::Infeasible);
        // max x s.t. x - y = 0.
        let p = LpProblem::new(ints(&[1, 0]), m(&[&[(1, 1), (-1, 1)]]), ints(&[0]), None).unwrap();
        assert_eq!(solve(&p).unwrap().status, LpStatus::Unbounded);
        // Same with bounds is fine.
        let p = LpProblem::new(ints(&[1, 0]), m(&[&[(1, 1), (-1, 1)]]), ints(&[0]), Some(ints(&[3, 2])))
            .unwrap();
        let r = solve(&p).unwrap();
        assert_eq!(r.optimum, Some(rat(2, 1)));
        let p = LpProblem::new(ints(&[1]), RatMatrix::zeros(0, 1), vec![], Some(ints(&[-1]))).unwrap();
        assert_eq!(solve(&p).unwrap().status, LpStatus::Infeasible);
    }

    #[test]
    fn redundant_and_negative_rhs_rows() {
        // x + y = 2 twice, -x = -1: x = 1, y = 1.
        let p = LpProblem::new(
            ints(&[0, 1]),
            m(&[&[(1, 1), (1, 1)], &[(1, 1), (1, 1)], &[(-1, 1), (0, 1)]]),
            ints(&[2, 2, -1]),
            None,
        )
        .unwrap();
        let r = solve(&p).unwrap();
        assert_eq!(r.solution, Some(ints(&[1, 1])));
    }

    #[test]
    fn malformed() {
        assert!(LpProblem::new(ints(&[1, 1]), m(&[&[(1, 1)]]), ints(&[1]), None).is_err());
        assert!(LpProblem::new(ints(&[1]), m(&[&[(1, 1)]]), ints(&[1, 2]), None).is_err());
        assert!(LpProblem::new(ints(&[1]), m(&[&[(1, 1)]]), ints(&[1]), Some(ints(&[1, 1]))).is_err());
        assert!(LpProblem::new(vec![], RatMatrix::zeros(0, 0), vec![], None).is_err());
    }

    fn first_2x2() -> ConditionalPair {
        validate_pair(
            m(&[&[(1, 4), (2, 3)], &[(3, 4), (1, 3)]]),
            m(&[&[(1, 3), (2, 3)], &[(3, 4), (1, 4)]]),
        )
        .unwrap()
    }

    fn second_2x2() -> ConditionalPair {
        validate_pair(
            m(&[&[(1, 7), (3, 4)], &[(6, 7), (1, 4)]]),
            m(&[&[(2, 5), (3, 5)], &[(3, 8), (5, 8)]]),
        )
        .unwrap()
    }

    #[test]
    fn joint_program_on_2x2_examples() {
        // C p = 0 pins only the margins of p (to multiples of (3/7, 4/7) and
        // (4/7, 3/7)); the unit box then caps the total at 7/2.
        let pair = first_2x2();
        let r = joint_lp(&pair).unwrap();
        assert_eq!(r.optimum, Some(brute_force_optimum(&joint_problem(&pair))));
        assert_eq!(r.optimum, Some(rat(7, 2)));
        let p = r.solution.unwrap();
        assert_eq!(&p[0] + &p[1], rat(3, 2));
        assert_eq!(&p[2] + &p[3], rat(2, 1));
        let r = joint_lp(&second_2x2()).unwrap();
        assert_eq!(r.status, LpStatus::Optimal);
        assert_eq!(r.optimum, Some(Rational::zero()));
    }

    #[test]
    fn eta_program_on_2x2_examples() {
        let r = eta_lp(&first_2x2()).unwrap();
        assert_eq!(r.optimum, Some(rat(1, 1)));
        assert_eq!(r.solution, Some(vec![rat(3, 7), rat(4, 7)]));
        assert_eq!(eta_lp(&second_2x2()).unwrap().optimum, Some(Rational::zero()));
        let id = validate_pair(RatMatrix::identity(2), RatMatrix::identity(2)).unwrap();
        let r = eta_lp(&id).unwrap();
        assert_eq!(r.optimum, Some(rat(1, 1)));
        assert_eq!(r.solution, Some(vec![rat(1, 1), rat(0, 1)]));
    }

    fn bounded_problem() -> impl Strategy<Value = LpProblem> {
        (1usize..=3, 1usize..=5).prop_flat_map(|(rows, cols)| {
            (
                proptest::collection::vec(-4i64..=4, cols),
                proptest::collection::vec(-3i64..=3, rows * cols),
                proptest::collection::vec(0i64..=2, cols),
            )
                .prop_map(move |(c, e, x0)| {
                    let e = RatMatrix::new(rows, cols, e.into_iter().map(|v| rat(v, 1)).collect()).unwrap();
                    // The rhs comes from a known feasible point.
                    let x0: RatVector = x0.into_iter().map(|v| rat(v, 1)).collect();
                    let rhs = e.mul_vec(&x0).unwrap();
                    LpProblem::new(ints(&c), e, rhs, Some(vec![rat(2, 1); cols])).unwrap()
                })
        })
    }

    /// Enumerates every basic solution of the bounded standard form; the
    /// best feasible one is the optimum.
    fn brute_force_optimum(p: &LpProblem) -> Rational {
        let n = p.num_vars();
        let u = p.upper_bounds().unwrap();
        let mut best: Option<Rational> = None;
        // Each variable at 0, at its bound, or free (determined by E).
        let mut states = vec![0u8; n];
        loop {
            let free: Vec<usize> = (0..n).filter(|&j| states[j] == 2).collect();
            let mut rhs = p.rhs().to_vec();
            for j in 0..n {
                if states[j] == 1 {
                    for (r, v) in rhs.iter_mut().enumerate() {
                        *v -= &p.equalities()[(r, j)] * &u[j];
                    }
                }
            }
            let sub = p.equalities().select_columns(&free);
            let mut aug = RatMatrix::zeros(sub.rows(), free.len() + 1);
            for r in 0..sub.rows() {
                for k in 0..free.len() {
                    aug[(r, k)] = sub[(r, k)].clone();
                }
                aug[(r, free.len())] = rhs[r].clone();
            }
            let (red, piv) = rref(&aug);
            if piv.len() == free.len() && !piv.contains(&free.len()) {
                let mut x = vec![Rational::zero(); n];
                for j in 0..n {
                    if states[j] == 1 {
                        x[j] = u[j].clone();
                    }
                }
                for (k, &j) in free.iter().enumerate() {
                    x[j] = red[(k, free.len())].clone();
                }
                if p.is_feasible(&x) {
                    let v = p.objective_value(&x);
                    if best.as_ref().is_none_or(|b| v > *b) {
                        best = Some(v);
                    }
                }
            }
            let mut k = 0;
            while k < n && states[k] == 2 {
                states[k] = 0;
                k += 1;
            }
            if k == n {
                break;
            }
            states[k] += 1;
        }
        best.expect("problem has a feasible point")
    }

    proptest! {
        #[test]
        fn matches_vertex_enumeration(p in bounded_problem()) {
            let r = solve(&p).unwrap();
            prop_assert_eq!(r.status, LpStatus::Optimal);
            let sol = r.solution.clone().unwrap();
            prop_assert!(p.is_feasible(&sol));
            prop_assert_eq!(r.optimum.unwrap(), brute_force_optimum(&p));
        }

        #[test]
        fn scaling_the_objective_scales_the_optimum(p in bounded_problem(), k in 1i64..=5, d in 1i64..=4) {
            let factor = rat(k, d);
            let base = solve(&p).unwrap();
            let scaled = solve(&p.with_scaled_objective(&factor)).unwrap();
            prop_assert_eq!(scaled.optimum.unwrap(), base.optimum.clone().unwrap() * &factor);
            // The scaled optimizer is optimal for the original objective.
            prop_assert_eq!(p.objective_value(&scaled.solution.unwrap()), base.optimum.unwrap());
        }
    }
}
