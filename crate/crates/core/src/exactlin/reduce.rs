//! Gauss-Jordan reduction and the quantities derived from it.

use super::{RatMatrix, RatVector, Rational};

/// Index of the row in `from..` whose entry in `col` is the cheapest nonzero
/// pivot, by bit length of `|numer| + denom`.
fn choose_pivot(m: &RatMatrix, col: usize, from: usize) -> Option<usize> {
    (from..m.rows())
        .filter(|&r| !m[(r, col)].is_zero())
        .min_by_key(|&r| m[(r, col)].height_bits())
}

fn swap_rows(m: &mut RatMatrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    let cols = m.cols();
    for c in 0..cols {
        let tmp = m[(a, c)].clone();
        m[(a, c)] = std::mem::replace(&mut m[(b, c)], tmp);
    }
}

/// `target -= factor * source`, skipping structural zeros.
fn axpy_row(m: &mut RatMatrix, target: usize, source: usize, factor: &Rational, start: usize) {
    let src: Vec<Rational> = m.row(source)[start..].to_vec();
    let row = m.row_mut(target);
    for (dst, s) in row[start..].iter_mut().zip(&src) {
        if !s.is_zero() {
            *dst -= factor * s;
        }
    }
}

/// Eliminates below (and, when `full`, above) each pivot. Returns the pivot
/// columns. With `full` the result is the reduced row echelon form.
fn eliminate(m: &mut RatMatrix, full: bool) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols() {
        if r == m.rows() {
            break;
        }
        let Some(p) = choose_pivot(m, c, r) else {
            continue;
        };
        swap_rows(m, r, p);
        if full {
            let inv = m[(r, c)].recip().expect("pivot is nonzero");
            for v in m.row_mut(r)[c..].iter_mut() {
                if !v.is_zero() {
                    *v *= &inv;
                }
            }
        }
        let pivot = m[(r, c)].clone();
        let targets: Vec<usize> = if full {
            (0..m.rows()).filter(|&t| t != r).collect()
        } else {
            (r + 1..m.rows()).collect()
        };
        for t in targets {
            if m[(t, c)].is_zero() {
                continue;
            }
            let factor = if full {
                m[(t, c)].clone()
            } else {
                &m[(t, c)] / &pivot
            };
            axpy_row(m, t, r, &factor, c);
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Reduced row echelon form of `m` together with its pivot columns.
pub fn rref(m: &RatMatrix) -> (RatMatrix, Vec<usize>) {
    let mut work = m.clone();
    let pivots = eliminate(&mut work, true);
    (work, pivots)
}

/// Pivot columns of `m`, identical to those of [`rref`] but found by forward
/// elimination only.
pub fn pivot_columns(m: &RatMatrix) -> Vec<usize> {
    let mut work = m.clone();
    eliminate(&mut work, false)
}

/// Number of pivots in the echelon form of `m`.
pub fn rank(m: &RatMatrix) -> usize {
    pivot_columns(m).len()
}

/// Right nullspace basis built from the free columns of the reduced form:
/// each basis vector sets one free variable to 1 and the others to 0.
pub fn nullspace(m: &RatMatrix) -> Vec<RatVector> {
    let (reduced, pivots) = rref(m);
    nullspace_from_rref(&reduced, &pivots)
}

fn nullspace_from_rref(reduced: &RatMatrix, pivots: &[usize]) -> Vec<RatVector> {
    let n = reduced.cols();
    let mut is_pivot = vec![false; n];
    for &p in pivots {
        is_pivot[p] = true;
    }
    (0..n)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = vec![Rational::zero(); n];
            v[f] = Rational::one();
            for (k, &p) in pivots.iter().enumerate() {
                v[p] = -&reduced[(k, f)];
            }
            v
        })
        .collect()
}

/// A particular solution of `m x = b`, or `None` when the system is
/// inconsistent. Free variables are set to zero.
pub fn solve_system(m: &RatMatrix, b: &[Rational]) -> Option<RatVector> {
    assert_eq!(b.len(), m.rows(), "right-hand side length");
    let n = m.cols();
    let mut aug = RatMatrix::zeros(m.rows(), n + 1);
    for r in 0..m.rows() {
        for c in 0..n {
            aug[(r, c)] = m[(r, c)].clone();
        }
        aug[(r, n)] = b[r].clone();
    }
    let pivots = eliminate(&mut aug, true);
    if pivots.last() == Some(&n) {
        return None;
    }
    let mut x = vec![Rational::zero(); n];
    for (k, &p) in pivots.iter().enumerate() {
        x[p] = aug[(k, n)].clone();
    }
    Some(x)
}

/// Inverse of a square matrix, or `None` when singular.
pub fn inverse(m: &RatMatrix) -> Option<RatMatrix> {
    if !m.is_square() {
        return None;
    }
    let n = m.rows();
    let mut aug = RatMatrix::zeros(n, 2 * n);
    for r in 0..n {
        for c in 0..n {
            aug[(r, c)] = m[(r, c)].clone();
        }
        aug[(r, n + r)] = Rational::one();
    }
    let pivots = eliminate(&mut aug, true);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    let right: Vec<usize> = (n..2 * n).collect();
    Some(aug.select_columns(&right))
}

/// A {1}-inverse `G` of `m` (so `m G m = m`).
///
/// With the rank factorization `m = F H`, where `H` holds the nonzero rows
/// of the reduced form and `F` the pivot columns of `m`, this is
/// `G = Hᵀ (H Hᵀ)⁻¹ (Fᵀ F)⁻¹ Fᵀ`. A zero matrix maps to the zero matrix
/// of transposed shape.
#[derive(Debug, Clone)]
pub struct GInverse {
    rows: usize,
    cols: usize,
    /// `H`, empty for a zero input.
    h: RatMatrix,
    hht: RatMatrix,
    ftf: RatMatrix,
    ft: RatMatrix,
}

/// `X` with `a X = b` for nonsingular square `a`.
fn solve_square(a: &RatMatrix, b: &RatMatrix) -> RatMatrix {
    let n = a.rows();
    let k = b.cols();
    let mut aug = RatMatrix::zeros(n, n + k);
    for r in 0..n {
        for c in 0..n {
            aug[(r, c)] = a[(r, c)].clone();
        }
        for c in 0..k {
            aug[(r, n + c)] = b[(r, c)].clone();
        }
    }
    let pivots = eliminate(&mut aug, true);
    assert!(pivots.len() == n && pivots[n - 1] == n - 1, "singular system");
    aug.select_columns(&(n..n + k).collect::<Vec<_>>())
}

impl GInverse {
    pub fn new(m: &RatMatrix) -> Self {
        let (reduced, pivots) = rref(m);
        let r = pivots.len();
        let h = reduced.select_rows(&(0..r).collect::<Vec<_>>());
        let f = m.select_columns(&pivots);
        let ft = f.transpose();
        Self {
            rows: m.cols(),
            cols: m.rows(),
            hht: &h * &h.transpose(),
            ftf: &ft * &f,
            h,
            ft,
        }
    }

    /// `G` itself.
    pub fn matrix(&self) -> RatMatrix {
        self.times(&RatMatrix::identity(self.cols))
    }

    /// `G x`, evaluated right to left with exact solves in place of the two
    /// inverses.
    pub fn times(&self, x: &RatMatrix) -> RatMatrix {
        assert_eq!(x.rows(), self.cols, "G x dimension mismatch");
        if self.h.rows() == 0 {
            return RatMatrix::zeros(self.rows, x.cols());
        }
        let y = solve_square(&self.ftf, &(&self.ft * x));
        let z = solve_square(&self.hht, &y);
        &self.h.transpose() * &z
    }
}

/// The matrix of [`GInverse`].
pub fn g_inverse(m: &RatMatrix) -> RatMatrix {
    GInverse::new(m).matrix()
}
