//! Small dense row-major matrices over exact or floating scalars.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::qsqrt2::QSqrt2;
use crate::error::{Error, Result};

/// Scalars the matrix kernel can work over.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + PartialEq
        + fmt::Debug
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
{
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<T>>", into = "Vec<Vec<T>>")]
#[serde(bound(
    serialize = "T: Serialize + Clone",
    deserialize = "T: Deserialize<'de>"
))]
pub struct DenseMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type Matrix = DenseMatrix<f64>;
pub type ExactMatrix = DenseMatrix<QSqrt2>;

impl<T> TryFrom<Vec<Vec<T>>> for DenseMatrix<T> {
    type Error = Error;
    fn try_from(rows: Vec<Vec<T>>) -> Result<Self> {
        DenseMatrix::from_rows(rows)
    }
}

impl<T: Clone> From<DenseMatrix<T>> for Vec<Vec<T>> {
    fn from(m: DenseMatrix<T>) -> Self {
        m.to_rows()
    }
}

impl<T> DenseMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 {
            return Err(Error::Shape("matrix must have at least one entry".into()));
        }
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(DenseMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        DenseMatrix { rows, cols, data }
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

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> DenseMatrix<U> {
        DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    fn require_square(&self) -> Result<()> {
        if self.is_square() {
            Ok(())
        } else {
            Err(Error::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }
}

impl<T: Clone> DenseMatrix<T> {
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        self.data.chunks(self.cols).map(|r| r.to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        DenseMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn row(&self, i: usize) -> Vec<T> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn submatrix(&self, idx: &[usize]) -> Self {
        DenseMatrix::from_fn(idx.len(), idx.len(), |i, j| self[(idx[i], idx[j])].clone())
    }
}

impl<T: Scalar> DenseMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        DenseMatrix::from_fn(rows, cols, |_, _| T::zero())
    }

    pub fn identity(n: usize) -> Self {
        DenseMatrix::from_fn(n, n, |i, j| if i == j { T::one() } else { T::zero() })
    }

    pub fn diag(d: &[T]) -> Self {
        let n = d.len();
        DenseMatrix::from_fn(n, n, |i, j| if i == j { d[i].clone() } else { T::zero() })
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| s.clone() * x.clone())
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: format!("{} rows", self.cols),
                got: format!("{} rows", rhs.rows),
            });
        }
        Ok(DenseMatrix::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(T::zero(), |acc, k| {
                acc + self[(i, k)].clone() * rhs[(k, j)].clone()
            })
        }))
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(T, T) -> T) -> Result<Self> {
        if (self.rows, self.cols) != (rhs.rows, rhs.cols) {
            return Err(Error::DimensionMismatch {
                expected: format!("{}x{}", self.rows, self.cols),
                got: format!("{}x{}", rhs.rows, rhs.cols),
            });
        }
        Ok(DenseMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a.clone(), b.clone()))
                .collect(),
        })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    /// `AB − BA`.
    pub fn commutator(&self, rhs: &Self) -> Result<Self> {
        self.try_mul(rhs)?.try_sub(&rhs.try_mul(self)?)
    }

    pub fn mul_vec(&self, v: &[T]) -> Result<Vec<T>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols.to_string(),
                got: v.len().to_string(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                (0..self.cols).fold(T::zero(), |acc, k| {
                    acc + self[(i, k)].clone() * v[k].clone()
                })
            })
            .collect())
    }

    pub fn trace(&self) -> T {
        (0..self.rows.min(self.cols)).fold(T::zero(), |acc, i| acc + self[(i, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square() && (0..self.rows).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }
}

impl ExactMatrix {
    /// Exact determinant by fraction-free elimination over ℚ(√2).
    pub fn det(&self) -> Result<QSqrt2> {
        self.require_square()?;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = QSqrt2::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&i| !m[(i, k)].is_zero()) else {
                return Ok(QSqrt2::zero());
            };
            if p != k {
                m.swap_rows(p, k);
                det = -det;
            }
            let pivot = m[(k, k)].clone();
            det = &det * &pivot;
            let inv = pivot.checked_inv()?;
            for i in k + 1..n {
                if m[(i, k)].is_zero() {
                    continue;
                }
                let factor = &m[(i, k)] * &inv;
                for j in k..n {
                    let v = &m[(k, j)] * &factor;
                    m[(i, j)] -= &v;
                }
            }
        }
        Ok(det)
    }

    /// Exact Gauss–Jordan inverse; pivots on any nonzero entry, no tolerance.
    pub fn inverse(&self) -> Result<Self> {
        self.require_square()?;
        let n = self.rows;
        let mut m = self.clone();
        let mut inv = ExactMatrix::identity(n);
        for k in 0..n {
            let p = (k..n)
                .find(|&i| !m[(i, k)].is_zero())
                .ok_or(Error::Singular)?;
            m.swap_rows(p, k);
            inv.swap_rows(p, k);
            let pinv = m[(k, k)].checked_inv()?;
            for j in 0..n {
                m[(k, j)] = &m[(k, j)] * &pinv;
                inv[(k, j)] = &inv[(k, j)] * &pinv;
            }
            for i in 0..n {
                if i == k || m[(i, k)].is_zero() {
                    continue;
                }
                let f = m[(i, k)].clone();
                for j in 0..n {
                    let a = &m[(k, j)] * &f;
                    m[(i, j)] -= &a;
                    let b = &inv[(k, j)] * &f;
                    inv[(i, j)] -= &b;
                }
            }
        }
        Ok(inv)
    }

    pub fn to_f64(&self) -> Matrix {
        self.map(QSqrt2::to_f64)
    }

    /// Largest absolute entry, exactly.
    pub fn max_abs(&self) -> QSqrt2 {
        self.data
            .iter()
            .map(QSqrt2::abs)
            .max()
            .unwrap_or_else(QSqrt2::zero)
    }
}

impl Matrix {
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    /// Max-norm distance; `INFINITY` on shape mismatch.
    pub fn dist(&self, rhs: &Matrix) -> f64 {
        self.try_sub(rhs).map_or(f64::INFINITY, |d| d.max_abs())
    }

    /// Determinant via partial-pivot LU.
    pub fn det(&self) -> Result<f64> {
        self.require_square()?;
        let n = self.rows;
        let mut m = self.clone();
        let mut det = 1.0;
        for k in 0..n {
            let p = (k..n)
                .max_by(|&a, &b| m[(a, k)].abs().total_cmp(&m[(b, k)].abs()))
                .unwrap();
            if m[(p, k)] == 0.0 {
                return Ok(0.0);
            }
            if p != k {
                m.swap_rows(p, k);
                det = -det;
            }
            det *= m[(k, k)];
            for i in k + 1..n {
                let f = m[(i, k)] / m[(k, k)];
                for j in k..n {
                    m[(i, j)] -= f * m[(k, j)];
                }
            }
        }
        Ok(det)
    }

    /// Gauss–Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix> {
        self.require_square()?;
        let n = self.rows;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut m = self.clone();
        let mut inv = Matrix::identity(n);
        for k in 0..n {
            let p = (k..n)
                .max_by(|&a, &b| m[(a, k)].abs().total_cmp(&m[(b, k)].abs()))
                .unwrap();
            if m[(p, k)].abs() <= 1e-14 * scale {
                return Err(Error::Singular);
            }
            m.swap_rows(p, k);
            inv.swap_rows(p, k);
            let d = m[(k, k)];
            for j in 0..n {
                m[(k, j)] /= d;
                inv[(k, j)] /= d;
            }
            for i in 0..n {
                if i == k {
                    continue;
                }
                let f = m[(i, k)];
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    m[(i, j)] -= f * m[(k, j)];
                    inv[(i, j)] -= f * inv[(k, j)];
                }
            }
        }
        Ok(inv)
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

impl<T> DenseMatrix<T> {
    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }
}

impl<T> Index<(usize, usize)> for DenseMatrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for DenseMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

/// Panicking product for matrices whose shapes are known to agree.
impl<T: Scalar> Mul for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;
    fn mul(self, rhs: &DenseMatrix<T>) -> DenseMatrix<T> {
        self.try_mul(rhs).expect("matrix shapes disagree")
    }
}

impl<T: Scalar> Add for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;
    fn add(self, rhs: &DenseMatrix<T>) -> DenseMatrix<T> {
        self.try_add(rhs).expect("matrix shapes disagree")
    }
}

impl<T: Scalar> Sub for &DenseMatrix<T> {
    type Output = DenseMatrix<T>;
    fn sub(self, rhs: &DenseMatrix<T>) -> DenseMatrix<T> {
        self.try_sub(rhs).expect("matrix shapes disagree")
    }
}

/// Parses the literal form `"a,b;c,d"`: rows separated by `;`, entries by `,`.
pub fn parse_matrix_literal(s: &str) -> Result<Matrix> {
    let rows = s
        .split(';')
        .map(|row| {
            row.split(',')
                .map(|e| {
                    e.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad matrix entry `{}`", e.trim())))
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let m =
        Matrix::from_rows(rows).map_err(|e| Error::Parse(format!("matrix literal `{s}`: {e}")))?;
    if m.data.iter().any(|x| !x.is_finite()) {
        return Err(Error::Parse(format!("non-finite entry in `{s}`")));
    }
    Ok(m)
}
