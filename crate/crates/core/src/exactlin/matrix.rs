use std::fmt;
use std::ops::{Index, IndexMut, Mul, Sub};

use super::Rational;
use crate::error::{Error, Result};

/// Column vector of exact rationals.
pub type RatVector = Vec<Rational>;

/// Dense row-major matrix of exact rationals. Dimensions are fixed at
/// construction.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RatMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nonempty rows of equal length.
    pub fn from_rows<R>(rows: Vec<R>) -> Result<Self>
    where
        R: IntoIterator<Item = Rational>,
    {
        let n_rows = rows.len();
        let mut data = Vec::new();
        let mut n_cols = None;
        for row in rows {
            let before = data.len();
            data.extend(row);
            let len = data.len() - before;
            match n_cols {
                None if len == 0 => return Err(Error::EmptyOrRagged),
                None => n_cols = Some(len),
                Some(c) if c != len => return Err(Error::EmptyOrRagged),
                Some(_) => {}
            }
        }
        let cols = n_cols.ok_or(Error::EmptyOrRagged)?;
        Self::new(n_rows, cols, data)
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(columns: &[RatVector]) -> Result<Self> {
        let cols = columns.len();
        let rows = columns.first().map_or(0, Vec::len);
        if cols == 0 || rows == 0 || columns.iter().any(|c| c.len() != rows) {
            return Err(Error::EmptyOrRagged);
        }
        let mut m = Self::zeros(rows, cols);
        for (j, column) in columns.iter().enumerate() {
            for (i, v) in column.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        Ok(m)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub(crate) fn row_mut(&mut self, r: usize) -> &mut [Rational] {
        &mut self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> RatVector {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> {
        self.data.chunks(self.cols.max(1)).take(self.rows)
    }

    pub fn entries(&self) -> &[Rational] {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<RatVector> {
        self.row_iter().map(<[Rational]>::to_vec).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn select_columns(&self, columns: &[usize]) -> Self {
        let mut m = Self::zeros(self.rows, columns.len());
        for r in 0..self.rows {
            for (k, &c) in columns.iter().enumerate() {
                m[(r, k)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Self {
            rows: rows.len(),
            cols: self.cols,
            data,
        }
    }

    pub fn checked_mul(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        if let Some(out) = self.mul_scaled_integers(rhs) {
            return Ok(out);
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for (k, a) in self.row(r).iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (c, b) in rhs.row(k).iter().enumerate() {
                    if !b.is_zero() {
                        out[(r, c)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product over integers: each row of `self` and each column of `rhs` is
    /// scaled by the lcm of its denominators, dot products accumulate in
    /// checked `i128`. `None` on any overflow.
    fn mul_scaled_integers(&self, rhs: &RatMatrix) -> Option<RatMatrix> {
        fn scale(values: &mut dyn Iterator<Item = &Rational>) -> Option<(i128, Vec<i128>)> {
            let parts: Vec<(i64, i64)> = values.map(Rational::as_small).collect::<Option<_>>()?;
            let mut lcm: i128 = 1;
            for &(_, d) in &parts {
                let d = d as i128;
                let g = num_integer::gcd(lcm, d);
                lcm = (lcm / g).checked_mul(d)?;
                if lcm > i64::MAX as i128 {
                    return None;
                }
            }
            let scaled = parts
                .iter()
                .map(|&(n, d)| (n as i128).checked_mul(lcm / d as i128))
                .collect::<Option<Vec<_>>>()?;
            Some((lcm, scaled))
        }
        let mut left = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            left.push(scale(&mut self.row(r).iter())?);
        }
        let mut right = Vec::with_capacity(rhs.cols);
        for c in 0..rhs.cols {
            right.push(scale(&mut (0..rhs.rows).map(|k| &rhs[(k, c)]))?);
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for (r, (dl, nl)) in left.iter().enumerate() {
            for (c, (dr, nr)) in right.iter().enumerate() {
                let mut acc: i128 = 0;
                for (x, y) in nl.iter().zip(nr) {
                    if *x != 0 && *y != 0 {
                        acc = acc.checked_add(x.checked_mul(*y)?)?;
                    }
                }
                if acc != 0 {
                    out[(r, c)] = Rational::from_i128_parts(acc, dl.checked_mul(*dr)?);
                }
            }
        }
        Some(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<RatVector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        Ok(self
            .row_iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect())
    }

    pub fn checked_sub(&self, rhs: &RatMatrix) -> Result<RatMatrix> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch(format!(
                "cannot subtract {}x{} from {}x{}",
                rhs.rows, rhs.cols, self.rows, self.cols
            )));
        }
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Decimal rendering of every entry, rounded half-to-even.
    pub fn to_decimal_rows(&self, places: usize) -> Vec<Vec<String>> {
        self.row_iter()
            .map(|row| row.iter().map(|v| v.to_decimal_string(places)).collect())
            .collect()
    }
}

impl Index<(usize, usize)> for RatMatrix {
    type Output = Rational;

    fn index(&self, (r, c): (usize, usize)) -> &Rational {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Rational {
        assert!(r < self.rows && c < self.cols, "index ({r}, {c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &RatMatrix {
    type Output = RatMatrix;

    /// Panics on a dimension mismatch; use [`RatMatrix::checked_mul`] otherwise.
    fn mul(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_mul(rhs).unwrap()
    }
}

impl Sub for &RatMatrix {
    type Output = RatMatrix;

    fn sub(self, rhs: &RatMatrix) -> RatMatrix {
        self.checked_sub(rhs).unwrap()
    }
}

impl fmt::Debug for RatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RatMatrix {}x{} [", self.rows, self.cols)?;
        for row in self.row_iter() {
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(f, "  [{}]", cells.join(", "))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactlin::rat;

    #[test]
    fn rejects_ragged_and_empty() {
        assert_eq!(
            RatMatrix::from_rows(vec![vec![rat(1, 1)], vec![]]),
            Err(Error::EmptyOrRagged)
        );
        assert_eq!(
            RatMatrix::from_rows(Vec::<Vec<Rational>>::new()),
            Err(Error::EmptyOrRagged)
        );
        assert!(RatMatrix::new(2, 2, vec![Rational::zero(); 3]).is_err());
    }

    #[test]
    fn product_and_transpose() {
        let a = RatMatrix::from_rows(vec![vec![rat(1, 2), rat(1, 3)], vec![rat(0, 1), rat(2, 1)]]).unwrap();
        let b = a.transpose();
        let p = &a * &b;
        assert_eq!(p[(0, 0)], rat(13, 36));
        assert_eq!(p[(0, 1)], rat(2, 3));
        assert_eq!(p[(1, 1)], rat(4, 1));
        assert_eq!(p, p.transpose());
        assert!(a.checked_mul(&RatMatrix::zeros(3, 1)).is_err());
        assert_eq!(a.mul_vec(&[rat(1, 1), rat(1, 1)]).unwrap(), vec![rat(5, 6), rat(2, 1)]);
    }
}
