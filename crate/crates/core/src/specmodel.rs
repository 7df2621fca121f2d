//! Conditional and joint specifications, their validation, and the linear
//! systems `D η = 0` (over the X-marginal) and `C p = 0` (over the joint).
//!
//! Rows of both systems are ordered i-major: `(0,0), (0,1), …, (0,J-1),
//! (1,0), …, (I-1,J-1)`. Joint vectors use the same order.

use crate::error::{Error, Line, Result, Which};
use crate::exactlin::{RatMatrix, RatVector, Rational};

/// A validated pair `A = P(X|Y)`, `B = P(Y|X)`, both `I×J`: every column of
/// `A` and every row of `B` sums to exactly one, and no entry is negative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionalPair {
    a: RatMatrix,
    b: RatMatrix,
}

impl ConditionalPair {
    pub fn a(&self) -> &RatMatrix {
        &self.a
    }

    pub fn b(&self) -> &RatMatrix {
        &self.b
    }

    /// Number of X categories.
    pub fn x_len(&self) -> usize {
        self.a.rows()
    }

    /// Number of Y categories.
    pub fn y_len(&self) -> usize {
        self.a.cols()
    }

    /// Applies a relabeling of categories: new X category `k` is old
    /// `x_perm[k]`, likewise for Y.
    pub fn relabeled(&self, x_perm: &[usize], y_perm: &[usize]) -> Result<Self> {
        let permute = |m: &RatMatrix| {
            m.select_rows(x_perm).select_columns(y_perm)
        };
        if !is_permutation(x_perm, self.x_len()) || !is_permutation(y_perm, self.y_len()) {
            return Err(Error::DimensionMismatch("relabeling is not a permutation".into()));
        }
        validate_pair(permute(&self.a), permute(&self.b))
    }

    pub fn into_parts(self) -> (RatMatrix, RatMatrix) {
        (self.a, self.b)
    }
}

fn is_permutation(perm: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    perm.len() == n
        && perm.iter().all(|&k| k < n && !std::mem::replace(&mut seen[k], true))
}

/// A joint probability table: nonnegative entries summing to one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JointMatrix {
    p: RatMatrix,
}

impl JointMatrix {
    pub fn new(p: RatMatrix) -> Result<Self> {
        if let Some(v) = p.entries().iter().find(|v| v.is_negative()) {
            return Err(Error::InvalidJoint(format!("negative cell {v}")));
        }
        let total: Rational = p.entries().iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidJoint(format!("cells sum to {total}")));
        }
        Ok(Self { p })
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.p
    }

    pub fn into_matrix(self) -> RatMatrix {
        self.p
    }

    pub fn row_sums(&self) -> RatVector {
        self.p.row_iter().map(|r| r.iter().sum()).collect()
    }

    pub fn column_sums(&self) -> RatVector {
        (0..self.p.cols())
            .map(|c| (0..self.p.rows()).map(|r| &self.p[(r, c)]).sum())
            .collect()
    }

    /// Cells in row-major order, `p_11, p_12, …, p_IJ`.
    pub fn to_vec(&self) -> RatVector {
        self.p.entries().to_vec()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Marginal of X (`η`, length I).
    X,
    /// Marginal of Y (`τ`, length J).
    Y,
}

/// A probability vector over one axis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MarginalVector {
    values: RatVector,
    axis: Axis,
}

impl MarginalVector {
    pub fn new(values: RatVector, axis: Axis) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidMarginal("empty".into()));
        }
        if let Some(v) = values.iter().find(|v| v.is_negative()) {
            return Err(Error::InvalidMarginal(format!("negative entry {v}")));
        }
        let total: Rational = values.iter().sum();
        if !total.is_one() {
            return Err(Error::InvalidMarginal(format!("entries sum to {total}")));
        }
        Ok(Self { values, axis })
    }

    /// Rescales a nonnegative nonzero vector to sum to one.
    pub fn normalized(values: &[Rational], axis: Axis) -> Result<Self> {
        let total: Rational = values.iter().sum();
        let inv = total
            .recip()
            .ok_or_else(|| Error::InvalidMarginal("zero vector".into()))?;
        Self::new(values.iter().map(|v| v * &inv).collect(), axis)
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn axis(&self) -> Axis {
        self.axis
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn has_zero(&self) -> bool {
        self.values.iter().any(Rational::is_zero)
    }
}

/// `D` and `C` built from one pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SystemMatrices {
    pub d: RatMatrix,
    pub c: RatMatrix,
    y_len: usize,
}

impl SystemMatrices {
    pub fn build(pair: &ConditionalPair) -> Self {
        Self {
            d: build_d(pair),
            c: build_c(pair),
            y_len: pair.y_len(),
        }
    }

    /// Row of `D` and `C` holding the equation for cell `(i, j)`.
    pub fn row_index(&self, i: usize, j: usize) -> usize {
        row_index(i, j, self.y_len)
    }
}

/// Zero-based i-major index of cell `(i, j)` in a table with `y_len` columns.
pub fn row_index(i: usize, j: usize, y_len: usize) -> usize {
    i * y_len + j
}

fn check_entries(m: &RatMatrix, which: Which) -> Result<()> {
    for r in 0..m.rows() {
        for c in 0..m.cols() {
            if m[(r, c)].is_negative() {
                return Err(Error::NegativeEntry {
                    which,
                    row: r,
                    col: c,
                    value: m[(r, c)].clone(),
                });
            }
        }
    }
    Ok(())
}

/// Validates `A` (column-stochastic) and `B` (row-stochastic) of equal shape.
pub fn validate_pair(a: RatMatrix, b: RatMatrix) -> Result<ConditionalPair> {
    if a.shape() != b.shape() {
        return Err(Error::ShapeMismatch {
            a_rows: a.rows(),
            a_cols: a.cols(),
            b_rows: b.rows(),
            b_cols: b.cols(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptyOrRagged);
    }
    check_entries(&a, Which::A)?;
    check_entries(&b, Which::B)?;
    for j in 0..a.cols() {
        let sum: Rational = (0..a.rows()).map(|i| &a[(i, j)]).sum();
        if !sum.is_one() {
            return Err(Error::NotStochastic {
                which: Which::A,
                line: Line::Column(j),
                sum,
            });
        }
    }
    for (i, row) in b.row_iter().enumerate() {
        let sum: Rational = row.iter().sum();
        if !sum.is_one() {
            return Err(Error::NotStochastic {
                which: Which::B,
                line: Line::Row(i),
                sum,
            });
        }
    }
    Ok(ConditionalPair { a, b })
}

/// The `IJ×I` matrix of `a_ij Σ_s b_sj η_s − b_ij η_i = 0`.
pub fn build_d(pair: &ConditionalPair) -> RatMatrix {
    let (a, b) = (pair.a(), pair.b());
    let (x_len, y_len) = (pair.x_len(), pair.y_len());
    let mut d = RatMatrix::zeros(x_len * y_len, x_len);
    for i in 0..x_len {
        for j in 0..y_len {
            let r = row_index(i, j, y_len);
            let a_ij = &a[(i, j)];
            for s in 0..x_len {
                d[(r, s)] = if s == i {
                    &b[(i, j)] * (a_ij - Rational::one())
                } else {
                    a_ij * &b[(s, j)]
                };
            }
        }
    }
    d
}

/// The `IJ×IJ` matrix of `a_ij p_·j − b_ij p_i· = 0`.
pub fn build_c(pair: &ConditionalPair) -> RatMatrix {
    let (a, b) = (pair.a(), pair.b());
    let (x_len, y_len) = (pair.x_len(), pair.y_len());
    let n = x_len * y_len;
    let mut c = RatMatrix::zeros(n, n);
    for i in 0..x_len {
        for j in 0..y_len {
            let r = row_index(i, j, y_len);
            for s in 0..x_len {
                c[(r, row_index(s, j, y_len))] += &a[(i, j)];
            }
            for k in 0..y_len {
                c[(r, row_index(i, k, y_len))] -= &b[(i, j)];
            }
        }
    }
    c
}

/// Conditionals of a joint table: `a_ij = p_ij / p_·j`, `b_ij = p_ij / p_i·`.
pub fn joint_to_conditionals(joint: &JointMatrix) -> Result<ConditionalPair> {
    let p = joint.matrix();
    let rows = joint.row_sums();
    let cols = joint.column_sums();
    if let Some(i) = rows.iter().position(Rational::is_zero) {
        return Err(Error::ZeroMarginal(Line::Row(i)));
    }
    if let Some(j) = cols.iter().position(Rational::is_zero) {
        return Err(Error::ZeroMarginal(Line::Column(j)));
    }
    let mut a = RatMatrix::zeros(p.rows(), p.cols());
    let mut b = RatMatrix::zeros(p.rows(), p.cols());
    for i in 0..p.rows() {
        for j in 0..p.cols() {
            a[(i, j)] = &p[(i, j)] / &cols[j];
            b[(i, j)] = &p[(i, j)] / &rows[i];
        }
    }
    validate_pair(a, b)
}

/// Exact check of `a12 a21 b22 b11 = a11 a22 b21 b12` for a strictly
/// positive 2×2 pair.
pub fn cross_ratio_compatible_2x2(pair: &ConditionalPair) -> Result<bool> {
    if pair.x_len() != 2 || pair.y_len() != 2 {
        return Err(Error::NotTwoByTwo {
            rows: pair.x_len(),
            cols: pair.y_len(),
        });
    }
    for (which, m) in [(Which::A, pair.a()), (Which::B, pair.b())] {
        for r in 0..2 {
            for c in 0..2 {
                if m[(r, c)].is_zero() {
                    return Err(Error::ZeroEntry { which, row: r, col: c });
                }
            }
        }
    }
    let (a, b) = (pair.a(), pair.b());
    let lhs = &a[(0, 1)] * &a[(1, 0)] * &b[(1, 1)] * &b[(0, 0)];
    let rhs = &a[(0, 0)] * &a[(1, 1)] * &b[(1, 0)] * &b[(0, 1)];
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;
    use proptest::prelude::*;

    fn m(rows: &[&[(i64, i64)]]) -> RatMatrix {
        RatMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&(n, d)| rat(n, d)).collect::<Vec<_>>())
                .collect(),
        )
        .unwrap()
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

    fn identity_pair() -> ConditionalPair {
        validate_pair(RatMatrix::identity(2), RatMatrix::identity(2)).unwrap()
    }

    #[test]
    fn validation_errors() {
        let err = validate_pair(RatMatrix::identity(2), RatMatrix::identity(3)).unwrap_err();
        assert!(matches!(err, Error::ShapeMismatch { .. }));

        let a = m(&[&[(1, 2), (1, 2)], &[(2, 5), (1, 2)]]);
        let err = validate_pair(a, RatMatrix::identity(2)).unwrap_err();
        assert_eq!(
            err,
            Error::NotStochastic {
                which: Which::A,
                line: Line::Column(0),
                sum: rat(9, 10)
            }
        );

        let a = m(&[&[(3, 2), (1, 1)], &[(-1, 2), (0, 1)]]);
        let err = validate_pair(a, RatMatrix::identity(2)).unwrap_err();
        assert!(matches!(err, Error::NegativeEntry { which: Which::A, row: 1, col: 0, .. }));

        let b = m(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 3)]]);
        let err = validate_pair(RatMatrix::identity(2), b).unwrap_err();
        assert!(matches!(err, Error::NotStochastic { which: Which::B, line: Line::Row(1), .. }));
    }

    #[test]
    fn d_of_first_2x2() {
        let expected = m(&[
            &[(-1, 4), (3, 16)],
            &[(-2, 9), (1, 6)],
            &[(1, 4), (-3, 16)],
            &[(2, 9), (-1, 6)],
        ]);
        assert_eq!(build_d(&first_2x2()), expected);
        assert!(build_d(&identity_pair()).is_zero());
        assert_eq!(build_d(&identity_pair()).shape(), (4, 2));
    }

    #[test]
    fn c_of_first_2x2() {
        let c = build_c(&first_2x2());
        assert_eq!(c.row(0), &[rat(-1, 12), rat(-1, 3), rat(1, 4), rat(0, 1)]);
        let p = [rat(1, 7), rat(2, 7), rat(3, 7), rat(1, 7)];
        assert!(c.mul_vec(&p).unwrap().iter().all(Rational::is_zero));
        let diag = [rat(1, 2), rat(0, 1), rat(0, 1), rat(1, 2)];
        assert!(build_c(&identity_pair()).mul_vec(&diag).unwrap().iter().all(Rational::is_zero));
        let sys = SystemMatrices::build(&first_2x2());
        assert_eq!(sys.row_index(1, 0), 2);
    }

    #[test]
    fn conditionals_of_joints() {
        let p = JointMatrix::new(m(&[&[(1, 7), (2, 7)], &[(3, 7), (1, 7)]])).unwrap();
        assert_eq!(joint_to_conditionals(&p).unwrap(), first_2x2());

        let diag = JointMatrix::new(m(&[&[(1, 2), (0, 1)], &[(0, 1), (1, 2)]])).unwrap();
        assert_eq!(joint_to_conditionals(&diag).unwrap(), identity_pair());

        let p = JointMatrix::new(m(&[
            &[(1, 8), (0, 1), (1, 4)],
            &[(0, 1), (1, 8), (1, 8)],
            &[(1, 4), (1, 8), (0, 1)],
        ]))
        .unwrap();
        let expected = validate_pair(
            m(&[&[(1, 3), (0, 1), (2, 3)], &[(0, 1), (1, 2), (1, 3)], &[(2, 3), (1, 2), (0, 1)]]),
            m(&[&[(1, 3), (0, 1), (2, 3)], &[(0, 1), (1, 2), (1, 2)], &[(2, 3), (1, 3), (0, 1)]]),
        )
        .unwrap();
        assert_eq!(joint_to_conditionals(&p).unwrap(), expected);

        let zero_col = JointMatrix::new(m(&[&[(1, 2), (0, 1)], &[(1, 2), (0, 1)]])).unwrap();
        assert_eq!(
            joint_to_conditionals(&zero_col).unwrap_err(),
            Error::ZeroMarginal(Line::Column(1))
        );
    }

    #[test]
    fn joint_and_marginal_validation() {
        assert!(JointMatrix::new(RatMatrix::identity(2)).is_err());
        assert!(MarginalVector::new(vec![rat(1, 2), rat(1, 3)], Axis::X).is_err());
        assert!(MarginalVector::new(vec![rat(3, 2), rat(-1, 2)], Axis::X).is_err());
        let n = MarginalVector::normalized(&[rat(3, 1), rat(4, 1)], Axis::X).unwrap();
        assert_eq!(n.values(), &[rat(3, 7), rat(4, 7)]);
        assert!(MarginalVector::normalized(&[rat(0, 1)], Axis::X).is_err());
    }

    #[test]
    fn cross_ratio() {
        // Both sides equal 1/24 for the first pair.
        let p = first_2x2();
        let (a, b) = (p.a(), p.b());
        assert_eq!(&a[(0, 1)] * &a[(1, 0)] * &b[(1, 1)] * &b[(0, 0)], rat(1, 24));
        assert!(cross_ratio_compatible_2x2(&p).unwrap());
        assert!(!cross_ratio_compatible_2x2(&second_2x2()).unwrap());
        let half = m(&[&[(1, 2), (1, 2)], &[(1, 2), (1, 2)]]);
        let pair = validate_pair(half.clone(), half).unwrap();
        assert!(cross_ratio_compatible_2x2(&pair).unwrap());
        assert!(matches!(
            cross_ratio_compatible_2x2(&identity_pair()),
            Err(Error::ZeroEntry { which: Which::A, row: 0, col: 1 })
        ));
        let three = validate_pair(RatMatrix::identity(3), RatMatrix::identity(3)).unwrap();
        assert!(matches!(cross_ratio_compatible_2x2(&three), Err(Error::NotTwoByTwo { .. })));
    }

    fn positive_joint() -> impl Strategy<Value = JointMatrix> {
        (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| {
            proptest::collection::vec(1i64..=9, r * c).prop_map(move |w| {
                let total: i64 = w.iter().sum();
                let data = w.iter().map(|&x| rat(x, total)).collect();
                JointMatrix::new(RatMatrix::new(r, c, data).unwrap()).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn systems_annihilate_their_joint(p in positive_joint()) {
            let pair = joint_to_conditionals(&p).unwrap();
            let d = build_d(&pair);
            prop_assert!(d.mul_vec(&p.row_sums()).unwrap().iter().all(Rational::is_zero));
            let c = build_c(&pair);
            prop_assert!(c.mul_vec(&p.to_vec()).unwrap().iter().all(Rational::is_zero));
        }

        #[test]
        fn d_entries_and_column_blocks(p in positive_joint()) {
            let pair = joint_to_conditionals(&p).unwrap();
            let d = build_d(&pair);
            let (x_len, y_len) = (pair.x_len(), pair.y_len());
            for i in 0..x_len {
                for j in 0..y_len {
                    let r = row_index(i, j, y_len);
                    for s in 0..x_len {
                        let want = if s == i {
                            &pair.b()[(i, j)] * (&pair.a()[(i, j)] - Rational::one())
                        } else {
                            &pair.a()[(i, j)] * &pair.b()[(s, j)]
                        };
                        prop_assert_eq!(&d[(r, s)], &want);
                    }
                }
            }
            // Summing the rows (i, j) over i for fixed j gives zero.
            for j in 0..y_len {
                for s in 0..x_len {
                    let total: Rational = (0..x_len).map(|i| &d[(row_index(i, j, y_len), s)]).sum();
                    prop_assert!(total.is_zero());
                }
            }
        }

        #[test]
        fn d_is_permutation_equivariant(p in positive_joint(), seed in any::<u64>()) {
            let pair = joint_to_conditionals(&p).unwrap();
            let x_len = pair.x_len();
            let y_len = pair.y_len();
            let mut x_perm: Vec<usize> = (0..x_len).collect();
            x_perm.rotate_left((seed as usize) % x_len);
            let y_perm: Vec<usize> = (0..y_len).rev().collect();
            let permuted = pair.relabeled(&x_perm, &y_perm).unwrap();
            let d = build_d(&pair);
            let dp = build_d(&permuted);
            for i in 0..x_len {
                for j in 0..y_len {
                    for s in 0..x_len {
                        prop_assert_eq!(
                            &dp[(row_index(i, j, y_len), s)],
                            &d[(row_index(x_perm[i], y_perm[j], y_len), x_perm[s])]
                        );
                    }
                }
            }
        }
    }
}
