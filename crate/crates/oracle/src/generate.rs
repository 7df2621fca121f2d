//! Seeded random instances: joints, independent conditional pairs, zero
//! patterns and perturbations.

use condcompat::{joint_to_conditionals, validate_pair, ConditionalPair, JointMatrix, RatMatrix, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::OracleError;

/// `true` in a zero pattern marks a cell forced to zero.
pub type ZeroPattern = Vec<Vec<bool>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InstanceSpec {
    pub x_len: usize,
    pub y_len: usize,
    pub zero_pattern: Option<ZeroPattern>,
    pub seed: u64,
    /// Cell weights are drawn from `1..=denominator_bound` before
    /// normalization.
    pub denominator_bound: u32,
}

impl InstanceSpec {
    pub fn new(x_len: usize, y_len: usize, seed: u64) -> Self {
        Self {
            x_len,
            y_len,
            zero_pattern: None,
            seed,
            denominator_bound: 12,
        }
    }

    pub fn with_pattern(mut self, pattern: ZeroPattern) -> Self {
        self.zero_pattern = Some(pattern);
        self
    }

    pub fn with_denominator_bound(mut self, bound: u32) -> Self {
        self.denominator_bound = bound;
        self
    }

    pub fn validate(&self) -> Result<(), OracleError> {
        if self.x_len == 0 || self.y_len == 0 {
            return Err(OracleError::InvalidSpec("dimensions must be positive".into()));
        }
        if self.denominator_bound == 0 {
            return Err(OracleError::InvalidSpec("denominator bound must be positive".into()));
        }
        let Some(pattern) = &self.zero_pattern else {
            return Ok(());
        };
        if pattern.len() != self.x_len || pattern.iter().any(|r| r.len() != self.y_len) {
            return Err(OracleError::InvalidSpec(format!(
                "zero pattern must be {}x{}",
                self.x_len, self.y_len
            )));
        }
        if let Some(i) = pattern.iter().position(|r| r.iter().all(|&z| z)) {
            return Err(OracleError::InfeasiblePattern(format!("row {}", i + 1)));
        }
        if let Some(j) = (0..self.y_len).find(|&j| pattern.iter().all(|r| r[j])) {
            return Err(OracleError::InfeasiblePattern(format!("column {}", j + 1)));
        }
        Ok(())
    }

    fn is_masked(&self, i: usize, j: usize) -> bool {
        self.zero_pattern.as_ref().is_some_and(|p| p[i][j])
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    fn weights(&self, rng: &mut ChaCha8Rng) -> Vec<Vec<i64>> {
        (0..self.x_len)
            .map(|i| {
                (0..self.y_len)
                    .map(|j| {
                        if self.is_masked(i, j) {
                            0
                        } else {
                            rng.gen_range(1..=i64::from(self.denominator_bound))
                        }
                    })
                    .collect()
            })
            .collect()
    }
}

/// Random joint distribution respecting the zero pattern. Every unmasked cell
/// is positive.
pub fn random_joint(spec: &InstanceSpec) -> Result<JointMatrix, OracleError> {
    spec.validate()?;
    let w = spec.weights(&mut spec.rng());
    let total: i64 = w.iter().flatten().sum();
    let rows = w
        .iter()
        .map(|r| r.iter().map(|&v| Rational::new(v, total)).collect::<Vec<_>>())
        .collect();
    Ok(JointMatrix::new(RatMatrix::from_rows(rows)?)?)
}

/// Compatible pair derived from [`random_joint`].
pub fn random_compatible_pair(spec: &InstanceSpec) -> Result<ConditionalPair, OracleError> {
    Ok(joint_to_conditionals(&random_joint(spec)?)?)
}

/// A and B drawn independently (A column-normalized, B row-normalized), both
/// with the instance's zero pattern. Usually incompatible.
pub fn random_independent_pair(spec: &InstanceSpec) -> Result<ConditionalPair, OracleError> {
    spec.validate()?;
    let mut rng = spec.rng();
    let wa = spec.weights(&mut rng);
    let wb = spec.weights(&mut rng);
    let col_totals: Vec<i64> = (0..spec.y_len).map(|j| wa.iter().map(|r| r[j]).sum()).collect();
    let a = wa
        .iter()
        .map(|r| r.iter().zip(&col_totals).map(|(&v, &t)| Rational::new(v, t)).collect::<Vec<_>>())
        .collect();
    let b = wb
        .iter()
        .map(|r| {
            let t: i64 = r.iter().sum();
            r.iter().map(|&v| Rational::new(v, t)).collect::<Vec<_>>()
        })
        .collect();
    Ok(validate_pair(RatMatrix::from_rows(a)?, RatMatrix::from_rows(b)?)?)
}

/// Random feasible zero pattern; each cell is masked with probability
/// `zero_prob`, redrawn until every row and column keeps a free cell.
pub fn random_zero_pattern(x_len: usize, y_len: usize, seed: u64, zero_prob: f64) -> ZeroPattern {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let p: ZeroPattern = (0..x_len)
            .map(|_| (0..y_len).map(|_| rng.gen_bool(zero_prob)).collect())
            .collect();
        let spec = InstanceSpec::new(x_len, y_len, 0).with_pattern(p);
        if spec.validate().is_ok() {
            return spec.zero_pattern.unwrap();
        }
    }
}

/// Adds `delta` to `A[i][j]` and subtracts it from the next row of the same
/// column (cyclically), keeping A column-stochastic. B is untouched.
pub fn perturb_to_incompatible(
    pair: &ConditionalPair,
    cell: (usize, usize),
    delta: &Rational,
) -> Result<ConditionalPair, OracleError> {
    let (i, j) = cell;
    let (x_len, y_len) = (pair.x_len(), pair.y_len());
    if i >= x_len || j >= y_len {
        return Err(OracleError::InvalidSpec(format!("cell ({i}, {j}) outside {x_len}x{y_len}")));
    }
    if x_len < 2 {
        return Err(OracleError::InvalidSpec("need at least two rows to compensate".into()));
    }
    let k = (i + 1) % x_len;
    let mut a = pair.a().clone();
    a[(i, j)] = &a[(i, j)] + delta;
    a[(k, j)] = &a[(k, j)] - delta;
    for row in [i, k] {
        if a[(row, j)].is_negative() {
            return Err(OracleError::StochasticityViolated { row, col: j });
        }
    }
    Ok(validate_pair(a, pair.b().clone())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use condcompat::{build_c, cross_ratio_compatible_2x2, rat};

    #[test]
    fn positive_joint_is_deterministic() {
        let spec = InstanceSpec::new(2, 2, 0);
        let p = random_joint(&spec).unwrap();
        assert!(p.matrix().entries().iter().all(Rational::is_positive));
        assert_eq!(p, random_joint(&spec).unwrap());
        assert_ne!(p, random_joint(&InstanceSpec::new(2, 2, 1)).unwrap());
    }

    #[test]
    fn joint_respects_pattern() {
        let pattern = vec![
            vec![false, true, false],
            vec![true, false, false],
            vec![false, false, true],
        ];
        for seed in 0..20 {
            let p = random_joint(&InstanceSpec::new(3, 3, seed).with_pattern(pattern.clone())).unwrap();
            for (i, row) in pattern.iter().enumerate() {
                for (j, &masked) in row.iter().enumerate() {
                    assert_eq!(p.matrix()[(i, j)].is_zero(), masked);
                }
            }
            let pair = joint_to_conditionals(&p).unwrap();
            let c = build_c(&pair);
            assert!(c.mul_vec(&p.to_vec()).unwrap().iter().all(Rational::is_zero));
        }
    }

    #[test]
    fn masked_row_or_column_is_infeasible() {
        let row = vec![vec![true, true], vec![false, false]];
        let col = vec![vec![false, true], vec![false, true]];
        for p in [row, col] {
            let spec = InstanceSpec::new(2, 2, 0).with_pattern(p);
            assert!(matches!(random_joint(&spec), Err(OracleError::InfeasiblePattern(_))));
        }
    }

    #[test]
    fn random_patterns_are_feasible() {
        for seed in 0..50 {
            let p = random_zero_pattern(4, 3, seed, 0.5);
            assert!(InstanceSpec::new(4, 3, 0).with_pattern(p).validate().is_ok());
        }
    }

    #[test]
    fn independent_pairs_are_stochastic() {
        for seed in 0..20 {
            let pair = random_independent_pair(&InstanceSpec::new(3, 4, seed)).unwrap();
            assert_eq!((pair.x_len(), pair.y_len()), (3, 4));
        }
    }

    #[test]
    fn perturbation_breaks_cross_ratio() {
        let pair = fixtures::TWO_BY_TWO_COMPATIBLE.pair();
        let moved = perturb_to_incompatible(&pair, (0, 0), &rat(1, 20)).unwrap();
        assert_eq!(moved.a()[(0, 0)], rat(3, 10));
        assert_eq!(moved.a()[(1, 0)], rat(7, 10));
        assert!(!cross_ratio_compatible_2x2(&moved).unwrap());
        assert_eq!(perturb_to_incompatible(&pair, (0, 0), &Rational::zero()).unwrap(), pair);
        assert_eq!(
            perturb_to_incompatible(&pair, (0, 0), &rat(4, 5)),
            Err(OracleError::StochasticityViolated { row: 1, col: 0 })
        );
    }
}
