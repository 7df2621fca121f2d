//! Brute-force compatibility decision: builds D from scratch over
//! `BigRational`, row-reduces it with its own elimination, and enumerates the
//! vertices of `{eta >= 0, D eta = 0, sum(eta) = 1}` by double description.
//!
//! Nothing here calls into the crate's linear algebra; the pair's entries are
//! only read and converted.

use condcompat::ConditionalPair;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::OracleError;

pub const MAX_DIM: usize = 4;

type Q = BigRational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BruteForceResult {
    pub rank_d: usize,
    /// Vertices of the nullspace-simplex polytope, each summing to 1. Empty
    /// means no nonnegative nonzero solution exists.
    pub vertices: Vec<Vec<BigRational>>,
}

impl BruteForceResult {
    pub fn is_compatible(&self) -> bool {
        !self.vertices.is_empty()
    }

    pub fn witness(&self) -> Option<&[BigRational]> {
        self.vertices.first().map(Vec::as_slice)
    }

    /// Compatible with exactly one marginal.
    pub fn is_unique(&self) -> bool {
        self.vertices.len() == 1
    }
}

pub fn brute_force_compatible(pair: &ConditionalPair) -> Result<BruteForceResult, OracleError> {
    let (x_len, y_len) = (pair.x_len(), pair.y_len());
    if x_len > MAX_DIM || y_len > MAX_DIM {
        return Err(OracleError::ScaleExceeded { x_len, y_len });
    }
    let a = to_big(pair.a().row_iter(), x_len);
    let b = to_big(pair.b().row_iter(), x_len);
    let d = d_matrix(&a, &b);
    let reduced = gauss_jordan(d);
    let rank_d = reduced.len();
    let vertices = enumerate_vertices(&reduced, x_len);
    Ok(BruteForceResult { rank_d, vertices })
}

/// Largest `I * J` accepted by [`brute_force_joint_optimum`].
pub const MAX_JOINT_CELLS: usize = 9;

/// Optimum of `max sum(p)` over `{C p = 0, 0 <= p <= 1}` by visiting every
/// basic solution: each cell is fixed at 0, fixed at 1, or free, and a
/// vertex is a choice whose free columns of C have full column rank with
/// the resulting values inside the box.
pub fn brute_force_joint_optimum(pair: &ConditionalPair) -> Result<BigRational, OracleError> {
    let (x_len, y_len) = (pair.x_len(), pair.y_len());
    let n = x_len * y_len;
    if n > MAX_JOINT_CELLS {
        return Err(OracleError::ScaleExceeded { x_len, y_len });
    }
    let a = to_big(pair.a().row_iter(), x_len);
    let b = to_big(pair.b().row_iter(), x_len);
    let c = c_matrix(&a, &b);
    let max_free = rank(c.clone());
    let mut best: Option<Q> = None;
    // Base-3 code per cell: 0 fixed at 0, 1 fixed at 1, 2 free.
    for code in 0..3usize.pow(n as u32) {
        let states: Vec<usize> = (0..n).map(|k| code / 3usize.pow(k as u32) % 3).collect();
        let free: Vec<usize> = (0..n).filter(|&k| states[k] == 2).collect();
        if free.len() > max_free {
            continue;
        }
        let Some(p) = basic_solution(&c, &states, &free) else {
            continue;
        };
        if p.iter().all(|v| !v.is_negative() && *v <= Q::one()) {
            let value: Q = p.iter().sum();
            if best.as_ref().is_none_or(|b| value > *b) {
                best = Some(value);
            }
        }
    }
    Ok(best.expect("p = 0 is always a vertex"))
}

/// Row (i, j): `a_ij` on every `p_sj`, minus `b_ij` on every `p_ik`.
fn c_matrix(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let (x_len, y_len) = (a.len(), a[0].len());
    let mut c = Vec::with_capacity(x_len * y_len);
    for i in 0..x_len {
        for j in 0..y_len {
            let mut row = vec![Q::zero(); x_len * y_len];
            for s in 0..x_len {
                row[s * y_len + j] += &a[i][j];
            }
            for k in 0..y_len {
                row[i * y_len + k] -= &b[i][j];
            }
            c.push(row);
        }
    }
    c
}

/// Solves `C_F p_F = -C_O 1` when it has exactly one solution.
fn basic_solution(c: &[Vec<Q>], states: &[usize], free: &[usize]) -> Option<Vec<Q>> {
    let augmented: Vec<Vec<Q>> = c
        .iter()
        .map(|row| {
            let mut r: Vec<Q> = free.iter().map(|&k| row[k].clone()).collect();
            let fixed: Q = (0..row.len()).filter(|&k| states[k] == 1).map(|k| row[k].clone()).sum();
            r.push(-fixed);
            r
        })
        .collect();
    let f = free.len();
    let reduced = gauss_jordan(augmented);
    // Inconsistent (pivot in the last column) or underdetermined.
    if reduced.len() != f || reduced.iter().any(|r| r[..f].iter().all(Zero::is_zero)) {
        return None;
    }
    let mut p: Vec<Q> = states.iter().map(|&s| if s == 1 { Q::one() } else { Q::zero() }).collect();
    for (row, &k) in reduced.iter().zip(free) {
        p[k] = row[f].clone();
    }
    Some(p)
}

fn to_big<'a>(rows: impl Iterator<Item = &'a [condcompat::Rational]>, n: usize) -> Vec<Vec<Q>> {
    let out: Vec<Vec<Q>> = rows.map(|r| r.iter().map(Q::from).collect()).collect();
    debug_assert_eq!(out.len(), n);
    out
}

/// Row (i, j): `b_ij (a_ij - 1)` at column i, `a_ij b_sj` at column s != i.
fn d_matrix(a: &[Vec<Q>], b: &[Vec<Q>]) -> Vec<Vec<Q>> {
    let (x_len, y_len) = (a.len(), a[0].len());
    let mut d = Vec::with_capacity(x_len * y_len);
    for i in 0..x_len {
        for j in 0..y_len {
            let row = (0..x_len)
                .map(|s| {
                    if s == i {
                        &b[i][j] * (&a[i][j] - Q::one())
                    } else {
                        &a[i][j] * &b[s][j]
                    }
                })
                .collect();
            d.push(row);
        }
    }
    d
}

/// Reduced row echelon form, zero rows dropped.
fn gauss_jordan(mut m: Vec<Vec<Q>>) -> Vec<Vec<Q>> {
    let cols = m.first().map_or(0, Vec::len);
    let mut lead = 0;
    for c in 0..cols {
        let Some(p) = (lead..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(lead, p);
        let inv = m[lead][c].recip();
        for v in &mut m[lead] {
            *v = &*v * &inv;
        }
        let pivot = m[lead].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != lead && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, p) in row.iter_mut().zip(&pivot) {
                    *x -= &f * p;
                }
            }
        }
        lead += 1;
    }
    m.truncate(lead);
    m
}

fn rank(rows: Vec<Vec<Q>>) -> usize {
    gauss_jordan(rows).len()
}

fn dot(u: &[Q], v: &[Q]) -> Q {
    u.iter().zip(v).map(|(x, y)| x * y).sum()
}

/// Double description: start from the unit rays of the orthant and cut with
/// one hyperplane `h . x = 0` at a time, combining adjacent rays of
/// opposite sign.
fn enumerate_vertices(hyperplanes: &[Vec<Q>], n: usize) -> Vec<Vec<Q>> {
    let mut rays: Vec<Vec<Q>> = (0..n)
        .map(|k| (0..n).map(|s| if s == k { Q::one() } else { Q::zero() }).collect())
        .collect();
    for (done, h) in hyperplanes.iter().enumerate() {
        let values: Vec<Q> = rays.iter().map(|r| dot(h, r)).collect();
        let mut next: Vec<Vec<Q>> = rays
            .iter()
            .zip(&values)
            .filter(|(_, v)| v.is_zero())
            .map(|(r, _)| r.clone())
            .collect();
        for (p, vp) in rays.iter().zip(&values).filter(|(_, v)| v.is_positive()) {
            for (q, vq) in rays.iter().zip(&values).filter(|(_, v)| v.is_negative()) {
                if adjacent(p, q, &hyperplanes[..done], n) {
                    let combo: Vec<Q> = p.iter().zip(q).map(|(x, y)| x * (-vq) + y * vp).collect();
                    next.push(combo);
                }
            }
        }
        rays = next;
    }
    let mut vertices: Vec<Vec<Q>> = rays
        .into_iter()
        .map(|r| {
            let s: Q = r.iter().sum();
            r.into_iter().map(|x| x / &s).collect()
        })
        .collect();
    vertices.sort();
    vertices.dedup();
    vertices
}

/// Two extreme rays of `{x >= 0, H x = 0}` are adjacent when the constraints
/// tight at both have rank `n - 2`.
fn adjacent(p: &[Q], q: &[Q], equalities: &[Vec<Q>], n: usize) -> bool {
    let mut tight: Vec<Vec<Q>> = equalities.to_vec();
    for k in 0..n {
        if p[k].is_zero() && q[k].is_zero() {
            tight.push((0..n).map(|s| if s == k { Q::one() } else { Q::zero() }).collect());
        }
    }
    tight.len() + 2 >= n && rank(tight) + 2 == n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{self, identity_pair};
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> Q {
        Q::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn worked_2x2_has_single_witness() {
        let r = brute_force_compatible(&fixtures::TWO_BY_TWO_COMPATIBLE.pair()).unwrap();
        assert_eq!(r.rank_d, 1);
        assert_eq!(r.vertices, vec![vec![q(3, 7), q(4, 7)]]);
        assert!(r.is_unique());
    }

    #[test]
    fn fixture_verdicts() {
        for f in fixtures::ALL {
            let r = brute_force_compatible(&f.pair()).unwrap();
            assert_eq!(r.rank_d, f.rank_d, "{}", f.name);
            assert_eq!(r.is_compatible(), f.compatible, "{}", f.name);
            if let Some(eta) = f.eta_values() {
                let eta: Vec<Q> = eta.iter().map(Q::from).collect();
                assert_eq!(r.vertices, vec![eta], "{}", f.name);
            }
        }
    }

    #[test]
    fn identity_has_unit_vertices() {
        let r = brute_force_compatible(&identity_pair(2)).unwrap();
        assert_eq!(r.rank_d, 0);
        assert_eq!(r.vertices, vec![vec![q(0, 1), q(1, 1)], vec![q(1, 1), q(0, 1)]]);
        assert_eq!(brute_force_compatible(&identity_pair(4)).unwrap().vertices.len(), 4);
    }

    #[test]
    fn joint_optimum_by_enumeration() {
        let opt = brute_force_joint_optimum(&fixtures::TWO_BY_TWO_COMPATIBLE.pair()).unwrap();
        assert_eq!(opt, q(7, 2));
        let opt = brute_force_joint_optimum(&fixtures::TWO_BY_TWO_INCOMPATIBLE.pair()).unwrap();
        assert_eq!(opt, q(0, 1));
        // A = B = I only ties p_12 to p_21, so every cell reaches 1.
        assert_eq!(brute_force_joint_optimum(&identity_pair(2)).unwrap(), q(4, 1));
        assert!(matches!(
            brute_force_joint_optimum(&fixtures::THREE_BY_THREE_POSITIVE.pair()),
            Ok(v) if v.is_positive()
        ));
        assert!(brute_force_joint_optimum(&fixtures::GROCERY.pair()).unwrap().is_zero());
    }

    #[test]
    fn rejects_large_pairs() {
        assert_eq!(
            brute_force_compatible(&identity_pair(5)),
            Err(OracleError::ScaleExceeded { x_len: 5, y_len: 5 })
        );
    }

    #[test]
    fn cut_of_square_cone() {
        // x1 - x2 = 0 and x3 - x4 = 0 in the orthant of R^4.
        let h = vec![vec![q(1, 1), q(-1, 1), q(0, 1), q(0, 1)], vec![q(0, 1), q(0, 1), q(1, 1), q(-1, 1)]];
        let v = enumerate_vertices(&h, 4);
        let half = q(1, 2);
        let z = q(0, 1);
        assert_eq!(v, vec![vec![z.clone(), z.clone(), half.clone(), half.clone()], vec![half.clone(), half, z.clone(), z]]);
    }
}
