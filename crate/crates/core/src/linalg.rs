//! Dense matrices over the scalar ring with exact elimination.
//!
//! Products skip zero entries, since the operators involved are sparse.

use std::sync::Arc;

use crate::cyclotomic::{CycRing, CycScalar};
use crate::error::{Error, Result};

/// Row-major matrix of exact scalars; acts on column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    ring: Arc<CycRing>,
    rows: usize,
    cols: usize,
    data: Vec<CycScalar>,
}

/// Row-reduced echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vec<CycScalar>>,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(ring: &Arc<CycRing>, rows: usize, cols: usize) -> Self {
        Matrix { ring: ring.clone(), rows, cols, data: vec![CycScalar::zero(ring); rows * cols] }
    }

    pub fn identity(ring: &Arc<CycRing>, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m.set(i, i, CycScalar::one(ring));
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(ring: &Arc<CycRing>, rows: usize, columns: &[Vec<CycScalar>]) -> Result<Self> {
        let mut m = Self::zeros(ring, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch { expected: rows, found: col.len() });
            }
            for (i, x) in col.iter().enumerate() {
                m.set(i, j, x.clone());
            }
        }
        Ok(m)
    }

    pub fn ring(&self) -> &Arc<CycRing> {
        &self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &CycScalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: CycScalar) {
        self.data[i * self.cols + j] = x;
    }

    /// Adds `x` to entry `(i, j)`.
    pub fn add_at(&mut self, i: usize, j: usize, x: &CycScalar) {
        self.data[i * self.cols + j] += x;
    }

    pub fn row(&self, i: usize) -> &[CycScalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<CycScalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<CycScalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(CycScalar::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    fn check_same_shape(&self, other: &Self) -> Result<()> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.checked_add(b)).collect::<Result<_>>()?;
        Ok(Matrix { data, ..self.clone_shape() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_same_shape(other)?;
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.checked_sub(b)).collect::<Result<_>>()?;
        Ok(Matrix { data, ..self.clone_shape() })
    }

    fn clone_shape(&self) -> Self {
        Matrix { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data: Vec::new() }
    }

    pub fn scale(&self, c: &CycScalar) -> Self {
        let data = self.data.iter().map(|x| if x.is_zero() { x.clone() } else { x * c }).collect();
        Matrix { data, ..self.clone_shape() }
    }

    pub fn neg(&self) -> Self {
        let data = self.data.iter().map(|x| -x).collect();
        Matrix { data, ..self.clone_shape() }
    }

    /// `self - c I`.
    pub fn sub_scalar(&self, c: &CycScalar) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let mut out = self.clone();
        for i in 0..self.rows {
            out.data[i * self.cols + i] -= c;
        }
        Ok(out)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let other_nz: Vec<Vec<usize>> = (0..other.rows)
            .map(|k| (0..other.cols).filter(|&j| !other.get(k, j).is_zero()).collect())
            .collect();
        let mut out = Self::zeros(&self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for &j in &other_nz[k] {
                    let prod = a.checked_mul(other.get(k, j))?;
                    out.data[i * other.cols + j] += &prod;
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[CycScalar]) -> Result<Vec<CycScalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let mut out = vec![CycScalar::zero(&self.ring); self.rows];
        for (j, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (i, o) in out.iter_mut().enumerate() {
                let a = self.get(i, j);
                if !a.is_zero() {
                    *o += &a.checked_mul(x)?;
                }
            }
        }
        Ok(out)
    }

    /// First entry where the two matrices differ, in row-major order.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((self.rows.min(other.rows), self.cols.min(other.cols)));
        }
        self.data
            .iter()
            .zip(&other.data)
            .position(|(a, b)| a != b)
            .map(|k| (k / self.cols, k % self.cols))
    }

    /// Exact row reduction; pivots must be invertible ring elements.
    pub fn echelon(&self) -> Result<Echelon> {
        let mut rows: Vec<Vec<CycScalar>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == self.rows {
                break;
            }
            let Some((pr, inv)) = choose_pivot(&rows, r, c)? else {
                continue;
            };
            rows.swap(r, pr);
            let pivot_row: Vec<CycScalar> =
                rows[r].iter().map(|x| if x.is_zero() { x.clone() } else { x * &inv }).collect();
            let nz: Vec<usize> = (c..self.cols).filter(|&j| !pivot_row[j].is_zero()).collect();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero() {
                    continue;
                }
                let factor = row[c].clone();
                for &j in &nz {
                    let delta = &factor * &pivot_row[j];
                    row[j] -= &delta;
                }
            }
            rows[r] = pivot_row;
            pivots.push(c);
            r += 1;
        }
        Ok(Echelon { rows, pivots })
    }

    pub fn rank(&self) -> Result<usize> {
        Ok(self.echelon()?.pivots.len())
    }

    /// Basis of the null space, one vector per free column.
    pub fn kernel(&self) -> Result<Vec<Vec<CycScalar>>> {
        let ech = self.echelon()?;
        let mut basis = Vec::new();
        let mut is_pivot = vec![false; self.cols];
        for &c in &ech.pivots {
            is_pivot[c] = true;
        }
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![CycScalar::zero(&self.ring); self.cols];
            v[free] = CycScalar::one(&self.ring);
            for (r, &c) in ech.pivots.iter().enumerate() {
                v[c] = -&ech.rows[r][free];
            }
            basis.push(v);
        }
        Ok(basis)
    }

    /// Gauss-Jordan inverse.
    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch { expected: self.rows, found: self.cols });
        }
        let n = self.rows;
        let aug = self.hstack(&Self::identity(&self.ring, n))?;
        let ech = aug.echelon()?;
        if ech.pivots.len() < n || ech.pivots[n - 1] != n - 1 {
            return Err(Error::Singular);
        }
        let mut out = Self::zeros(&self.ring, n, n);
        for (i, row) in ech.rows.iter().enumerate() {
            for j in 0..n {
                out.set(i, j, row[n + j].clone());
            }
        }
        Ok(out)
    }

    /// Solves `self * C = rhs` for `C`; requires full column rank and consistency.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if rhs.rows != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: rhs.rows });
        }
        let k = self.cols;
        let ech = self.hstack(rhs)?.echelon()?;
        let lhs_rank = ech.pivots.iter().filter(|&&c| c < k).count();
        if let Some(&c) = ech.pivots.iter().find(|&&c| c >= k) {
            return Err(Error::NotInSpan(format!("right-hand column {} is outside the column span", c - k)));
        }
        if lhs_rank < k {
            return Err(Error::Verification(format!("solution is not unique: rank {lhs_rank} < {k} columns")));
        }
        let mut out = Self::zeros(&self.ring, k, rhs.cols);
        for (r, &c) in ech.pivots.iter().enumerate() {
            for j in 0..rhs.cols {
                out.set(c, j, ech.rows[r][k + j].clone());
            }
        }
        Ok(out)
    }

    pub fn hstack(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        let mut out = Self::zeros(&self.ring, self.rows, self.cols + other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..other.cols {
                out.set(i, self.cols + j, other.get(i, j).clone());
            }
        }
        Ok(out)
    }

    /// Submatrix on the given row and column indices.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.ring, rows.len(), cols.len());
        for (a, &i) in rows.iter().enumerate() {
            for (b, &j) in cols.iter().enumerate() {
                out.set(a, b, self.get(i, j).clone());
            }
        }
        out
    }
}

/// Picks the invertible entry of smallest size in column `c` at or below row `r`.
fn choose_pivot(rows: &[Vec<CycScalar>], r: usize, c: usize) -> Result<Option<(usize, CycScalar)>> {
    let mut candidates: Vec<(u64, usize)> = rows
        .iter()
        .enumerate()
        .skip(r)
        .filter(|(_, row)| !row[c].is_zero())
        .map(|(i, row)| (row[c].complexity(), i))
        .collect();
    candidates.sort();
    let mut last_err = None;
    for (_, i) in candidates {
        match rows[i][c].inverse() {
            Ok(inv) => return Ok(Some((i, inv))),
            Err(e) => last_err = Some(e),
        }
    }
    match last_err {
        // a nonzero column without a unit: elimination over the formal ring is stuck
        Some(e) => Err(e),
        None => Ok(None),
    }
}

macro_rules! matrix_binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl std::ops::$tr<&Matrix> for &Matrix {
            type Output = Matrix;
            fn $method(self, rhs: &Matrix) -> Matrix {
                self.$checked(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
    };
}

matrix_binop!(Add, add, try_add);
matrix_binop!(Sub, sub, try_sub);
matrix_binop!(Mul, mul, try_mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn ring() -> Arc<CycRing> {
        CycRing::new(3).unwrap()
    }

    fn m(ring: &Arc<CycRing>, rows: &[&[i64]]) -> Matrix {
        let cols = rows[0].len();
        let mut out = Matrix::zeros(ring, rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for (j, &x) in r.iter().enumerate() {
                out.set(i, j, CycScalar::from_int(ring, x));
            }
        }
        out
    }

    #[test]
    fn inverse_roundtrip() {
        let r = ring();
        let mut a = m(&r, &[&[2, 1, 0], &[0, 1, 4], &[1, 0, 1]]);
        a.set(0, 2, CycScalar::q_power(&r, 1));
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, Matrix::identity(&r, 3));
        assert_eq!(Matrix::identity(&r, 4).inverse().unwrap(), Matrix::identity(&r, 4));
    }

    #[test]
    fn singular_detected() {
        let r = ring();
        let a = m(&r, &[&[1, 2], &[2, 4]]);
        assert_eq!(a.inverse(), Err(Error::Singular));
        assert_eq!(a.rank().unwrap(), 1);
        let ker = a.kernel().unwrap();
        assert_eq!(ker.len(), 1);
        assert!(a.mul_vec(&ker[0]).unwrap().iter().all(CycScalar::is_zero));
    }

    #[test]
    fn solve_checks_span() {
        let r = ring();
        let b = m(&r, &[&[1, 0], &[0, 1], &[1, 1]]);
        let rhs = m(&r, &[&[2], &[3], &[5]]);
        assert_eq!(b.solve(&rhs).unwrap(), m(&r, &[&[2], &[3]]));
        let bad = m(&r, &[&[2], &[3], &[4]]);
        assert!(matches!(b.solve(&bad), Err(Error::NotInSpan(_))));
        let dup = m(&r, &[&[1, 2], &[1, 2], &[0, 0]]);
        assert!(matches!(dup.solve(&m(&r, &[&[1], &[1], &[0]])), Err(Error::Verification(_))));
    }

    #[test]
    fn first_difference_locates_entry() {
        let r = ring();
        let a = m(&r, &[&[1, 2], &[3, 4]]);
        let mut b = a.clone();
        assert_eq!(a.first_difference(&b), None);
        b.set(1, 0, CycScalar::zero(&r));
        assert_eq!(a.first_difference(&b), Some((1, 0)));
    }
}
