//! Dense matrices and vectors over the exact rationals, with the Gaussian
//! elimination kernel (rank, null space, solve, inverse) used by every module.
//!
//! Pivoting is deterministic: in each column the first row with a nonzero
//! entry is chosen, and the pivot row is normalized to a leading 1 so repeated
//! runs produce identical echelon forms and null-space bases.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Coordinates of an algebra element relative to the current natural basis.
pub type Vector = Vec<Rational>;

pub fn vec_zero(n: usize) -> Vector {
    vec![Rational::zero(); n]
}

pub fn vec_is_zero(v: &[Rational]) -> bool {
    v.iter().all(Rational::is_zero)
}

pub fn vec_add(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn vec_sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn vec_scale(c: &Rational, v: &[Rational]) -> Vector {
    v.iter().map(|x| c * x).collect()
}

/// Index set `{ i : v_i != 0 }`, ascending.
pub fn support(v: &[Rational]) -> Vec<usize> {
    v.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, _)| i)
        .collect()
}

#[derive(Clone, PartialEq, Eq)]
pub struct MatrixQ {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl MatrixQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        MatrixQ {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rational) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        MatrixQ { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vector>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::ShapeMismatch("ragged row lengths".into()));
        }
        Ok(MatrixQ {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Integer literal constructor, mostly for tests and fixtures.
    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Self::from_fn(rows.len(), rows.first().map_or(0, |r| r.len()), |i, j| {
            crate::rational::q(rows[i][j])
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn at(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vec(&self, i: usize) -> Vector {
        self.row(i).to_vec()
    }

    pub fn col_vec(&self, j: usize) -> Vector {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> MatrixQ {
        Self::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Rational::is_zero)
    }

    pub fn neg(&self) -> MatrixQ {
        Self::from_fn(self.rows, self.cols, |i, j| -self.at(i, j))
    }

    pub fn add(&self, other: &MatrixQ) -> Result<MatrixQ> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.at(i, j) + other.at(i, j)
        }))
    }

    pub fn scale(&self, c: &Rational) -> MatrixQ {
        Self::from_fn(self.rows, self.cols, |i, j| c * self.at(i, j))
    }

    pub fn mul(&self, other: &MatrixQ) -> Result<MatrixQ> {
        if self.cols != other.rows {
            return Err(Error::ShapeMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = Rational::zero();
            for k in 0..self.cols {
                let a = self.at(i, k);
                if !a.is_zero() {
                    acc += a * other.at(k, j);
                }
            }
            acc
        }))
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = Rational::zero();
                for k in 0..self.cols {
                    let a = self.at(i, k);
                    if !a.is_zero() {
                        acc += a * &v[k];
                    }
                }
                acc
            })
            .collect())
    }

    /// Entrywise product.
    pub fn hadamard(&self, other: &MatrixQ) -> Result<MatrixQ> {
        self.check_same_shape(other)?;
        Ok(Self::from_fn(self.rows, self.cols, |i, j| {
            self.at(i, j) * other.at(i, j)
        }))
    }

    fn check_same_shape(&self, other: &MatrixQ) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(())
    }

    /// Reduced row echelon form together with the pivot column list.
    pub fn rref(&self) -> (MatrixQ, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.at(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = {
                let pivot = m.at(r, c).clone();
                Rational::one() / pivot
            };
            for j in c..m.cols {
                let v = m.at(r, j) * &inv;
                m.set(r, j, v);
            }
            for i in 0..m.rows {
                if i != r && !m.at(i, c).is_zero() {
                    let f = m.at(i, c).clone();
                    for j in c..m.cols {
                        let v = m.at(i, j) - &f * m.at(r, j);
                        m.set(i, j, v);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of `{ x : M x = 0 }`. One vector per free column, in ascending
    /// free-column order, with a 1 in the free coordinate.
    pub fn null_space(&self) -> Vec<Vector> {
        let (r, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (row, &c) in pivots.iter().enumerate() {
                v[c] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for f in 0..self.cols {
            if pivot_set[f].is_some() {
                continue;
            }
            let mut x = vec_zero(self.cols);
            x[f] = Rational::one();
            for (row, &c) in pivots.iter().enumerate() {
                x[c] = -r.at(row, f);
            }
            basis.push(x);
        }
        basis
    }

    /// One solution of `M x = b`, or `None` when the system is inconsistent.
    /// Free variables are set to zero.
    pub fn solve(&self, b: &[Rational]) -> Result<Option<Vector>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                got: b.len(),
            });
        }
        let aug = Self::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                b[i].clone()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec_zero(self.cols);
        for (row, &c) in pivots.iter().enumerate() {
            x[c] = r.at(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    pub fn inverse(&self) -> Option<MatrixQ> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self.at(i, j).clone()
            } else if j - n == i {
                Rational::one()
            } else {
                Rational::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r.at(i, n + j).clone()))
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Simultaneous row/column relabelling: `out[perm[i]][perm[j]] = self[i][j]`.
    pub fn permute_sym(&self, perm: &[usize]) -> MatrixQ {
        let mut out = Self::zeros(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(perm[i], perm[j], self.at(i, j).clone());
            }
        }
        out
    }

    pub fn flatten(&self) -> Vector {
        self.data.clone()
    }

    pub fn from_flat(rows: usize, cols: usize, data: Vector) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(format!(
                "flat data of length {} cannot fill {}x{}",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(MatrixQ { rows, cols, data })
    }
}

impl fmt::Debug for MatrixQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "MatrixQ {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// True iff the two vector lists span the same subspace. All vectors must
/// share one length.
pub fn span_equal(s1: &[Vector], s2: &[Vector]) -> Result<bool> {
    let len = s1
        .iter()
        .chain(s2.iter())
        .map(Vec::len)
        .next()
        .unwrap_or(0);
    if s1.iter().chain(s2.iter()).any(|v| v.len() != len) {
        return Err(Error::ShapeMismatch(
            "span_equal requires vectors of equal length".into(),
        ));
    }
    let rank_of = |vs: &[Vector]| -> usize {
        if vs.is_empty() {
            0
        } else {
            MatrixQ::from_rows(vs.to_vec()).expect("checked shapes").rank()
        }
    };
    let r1 = rank_of(s1);
    let r2 = rank_of(s2);
    if r1 != r2 {
        return Ok(false);
    }
    let mut all = s1.to_vec();
    all.extend_from_slice(s2);
    Ok(rank_of(&all) == r1)
}

/// Span equality for lists of equally-shaped matrices, by flattening.
pub fn matrix_span_equal(s1: &[MatrixQ], s2: &[MatrixQ]) -> Result<bool> {
    let f1: Vec<Vector> = s1.iter().map(MatrixQ::flatten).collect();
    let f2: Vec<Vector> = s2.iter().map(MatrixQ::flatten).collect();
    span_equal(&f1, &f2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    #[test]
    fn rank_identity() {
        for n in 1..6 {
            assert_eq!(MatrixQ::identity(n).rank(), n);
        }
    }

    #[test]
    fn null_space_of_row() {
        // (1 1) has null space spanned by (1, -1) up to scale.
        let m = MatrixQ::from_i64(&[&[1, 1]]);
        let ns = m.null_space();
        assert_eq!(ns.len(), 1);
        let expected = vec![vec![q(1), q(-1)]];
        assert!(span_equal(&ns, &expected).unwrap());
        assert!(vec_is_zero(&m.mul_vec(&ns[0]).unwrap()));
    }

    #[test]
    fn span_equal_basic() {
        let s1 = vec![vec![q(1), q(0)], vec![q(0), q(1)]];
        let s2 = vec![vec![q(1), q(1)], vec![q(1), q(-1)]];
        assert!(span_equal(&s1, &s2).unwrap());
        let s3 = vec![vec![q(1), q(1)]];
        assert!(!span_equal(&s1, &s3).unwrap());
        assert!(span_equal(&[], &[vec_zero(3)]).unwrap());
    }

    #[test]
    fn solve_and_inverse() {
        let m = MatrixQ::from_i64(&[&[2, 1], &[1, 1]]);
        let x = m.solve(&[q(3), q(2)]).unwrap().unwrap();
        assert_eq!(x, vec![q(1), q(1)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), MatrixQ::identity(2));

        let singular = MatrixQ::from_i64(&[&[1, 1], &[1, 1]]);
        assert!(singular.inverse().is_none());
        assert_eq!(singular.solve(&[q(0), q(1)]).unwrap(), None);
    }

    #[test]
    fn rank_nullity() {
        let m = MatrixQ::from_i64(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert_eq!(m.rank() + m.null_space().len(), m.cols());
        for v in m.null_space() {
            assert!(vec_is_zero(&m.mul_vec(&v).unwrap()));
        }
    }

    #[test]
    fn rational_entries_stay_exact() {
        let m = MatrixQ::from_fn(2, 2, |i, j| qr(1, (1 + i + 2 * j) as i64));
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), MatrixQ::identity(2));
    }
}
