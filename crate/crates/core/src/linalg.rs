//! Exact-rational vectors and dense row-major matrices.
//!
//! All arithmetic is performed over [`Rational`], so every result is exact
//! and canonical (reduced, positive denominator).

use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision rational scalar, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Builds `numer / denom` in canonical form.
///
/// Panics if `denom` is zero.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(BigInt::from(numer), BigInt::from(denom))
}

/// Builds the integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {left} vs {right}")]
    DimensionMismatch {
        op: &'static str,
        left: usize,
        right: usize,
    },
    #[error("index {index} out of range for dimension {dim}")]
    OutOfRange { index: usize, dim: usize },
    #[error("matrix data has {len} entries, expected {rows}x{cols}")]
    BadShape {
        rows: usize,
        cols: usize,
        len: usize,
    },
}

fn check_dims(op: &'static str, left: usize, right: usize) -> Result<(), LinalgError> {
    if left == right {
        Ok(())
    } else {
        Err(LinalgError::DimensionMismatch { op, left, right })
    }
}

/// Dense column vector of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Vector(Vec<Rational>);

impl Vector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Vector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Vector(vec![Rational::zero(); dim])
    }

    pub fn from_ints(entries: &[i64]) -> Self {
        Vector(entries.iter().map(|&n| int(n)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> Result<&Rational, LinalgError> {
        self.0.get(i).ok_or(LinalgError::OutOfRange {
            index: i,
            dim: self.dim(),
        })
    }

    pub fn entries(&self) -> &[Rational] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Rational> {
        self.0
    }

    /// Concatenation `self @ other`.
    pub fn append(&self, other: &Vector) -> Vector {
        let mut entries = Vec::with_capacity(self.dim() + other.dim());
        entries.extend_from_slice(&self.0);
        entries.extend_from_slice(&other.0);
        Vector(entries)
    }

    /// Pointwise `self <= other`.
    pub fn le_pointwise(&self, other: &Vector) -> Result<bool, LinalgError> {
        check_dims("le_pointwise", self.dim(), other.dim())?;
        Ok(self.iter().zip(other.iter()).all(|(a, b)| a <= b))
    }

    pub fn is_nonnegative(&self) -> bool {
        self.iter().all(|v| !v.is_negative())
    }

    /// Entry range `[start, start + len)` as a new vector.
    pub fn slice(&self, start: usize, len: usize) -> Result<Vector, LinalgError> {
        let end = start + len;
        if end > self.dim() {
            return Err(LinalgError::OutOfRange {
                index: end.saturating_sub(1),
                dim: self.dim(),
            });
        }
        Ok(Vector(self.0[start..end].to_vec()))
    }
}

impl Index<usize> for Vector {
    type Output = Rational;

    fn index(&self, i: usize) -> &Rational {
        &self.0[i]
    }
}

impl From<Vec<Rational>> for Vector {
    fn from(entries: Vec<Rational>) -> Self {
        Vector(entries)
    }
}

impl FromIterator<Rational> for Vector {
    fn from_iter<I: IntoIterator<Item = Rational>>(iter: I) -> Self {
        Vector(iter.into_iter().collect())
    }
}

impl fmt::Display for Vector {
    /// Space-separated canonical rationals.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Dense row-major matrix of rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl Matrix {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self, LinalgError> {
        if data.len() != rows * cols {
            return Err(LinalgError::BadShape {
                rows,
                cols,
                len: data.len(),
            });
        }
        Ok(Matrix { rows, cols, data })
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows(cols: usize, rows: Vec<Vec<Rational>>) -> Result<Self, LinalgError> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * cols);
        for row in rows {
            check_dims("from_rows", row.len(), cols)?;
            data.extend(row);
        }
        Ok(Matrix {
            rows: n,
            cols,
            data,
        })
    }

    /// Convenience constructor for integer literals. Panics on ragged input.
    pub fn from_int_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let rows = rows
            .iter()
            .map(|r| r.iter().map(|&n| int(n)).collect())
            .collect();
        Matrix::from_rows(cols, rows).expect("ragged integer matrix")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Rational::one();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Result<&Rational, LinalgError> {
        if i >= self.rows {
            return Err(LinalgError::OutOfRange {
                index: i,
                dim: self.rows,
            });
        }
        if j >= self.cols {
            return Err(LinalgError::OutOfRange {
                index: j,
                dim: self.cols,
            });
        }
        Ok(&self.data[i * self.cols + j])
    }

    pub fn row(&self, i: usize) -> Result<&[Rational], LinalgError> {
        if i >= self.rows {
            return Err(LinalgError::OutOfRange {
                index: i,
                dim: self.rows,
            });
        }
        Ok(&self.data[i * self.cols..(i + 1) * self.cols])
    }

    pub fn row_iter(&self) -> impl Iterator<Item = &[Rational]> + '_ {
        (0..self.rows).map(move |i| &self.data[i * self.cols..(i + 1) * self.cols])
    }

    pub fn column(&self, j: usize) -> Result<Vector, LinalgError> {
        if j >= self.cols {
            return Err(LinalgError::OutOfRange {
                index: j,
                dim: self.cols,
            });
        }
        Ok((0..self.rows)
            .map(|i| self.data[i * self.cols + j].clone())
            .collect())
    }

    pub fn transpose(&self) -> Matrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.data[i * self.cols + j].clone());
            }
        }
        Matrix {
            rows: self.cols,
            cols: self.rows,
            data,
        }
    }

    /// Adds `k` to every entry.
    pub fn shifted(&self, k: &Rational) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| v + k).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| -v).collect(),
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Rational;

    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "matrix index out of range");
        &self.data[i * self.cols + j]
    }
}

fn dot_slices(u: &[Rational], v: &[Rational]) -> Rational {
    u.iter()
        .zip(v)
        .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
}

/// Exact dot product `Σ u[i]·v[i]`.
pub fn dot(u: &Vector, v: &Vector) -> Result<Rational, LinalgError> {
    check_dims("dot", u.dim(), v.dim())?;
    Ok(dot_slices(&u.0, &v.0))
}

/// Matrix-vector product `A·x`.
pub fn mat_vec(a: &Matrix, x: &Vector) -> Result<Vector, LinalgError> {
    check_dims("mat_vec", a.cols, x.dim())?;
    Ok(a.row_iter().map(|row| dot_slices(row, &x.0)).collect())
}

/// Vector-matrix product `y·A`, equal to `Aᵀ·y`.
pub fn vec_mat(y: &Vector, a: &Matrix) -> Result<Vector, LinalgError> {
    check_dims("vec_mat", y.dim(), a.rows)?;
    let mut out = vec![Rational::zero(); a.cols];
    for (row, yi) in a.row_iter().zip(y.iter()) {
        if yi.is_zero() {
            continue;
        }
        for (acc, aij) in out.iter_mut().zip(row) {
            *acc += yi * aij;
        }
    }
    Ok(Vector(out))
}

pub fn transpose(a: &Matrix) -> Matrix {
    a.transpose()
}

/// Block-diagonal matrix with `a` top-left and `b` bottom-right; both
/// off-diagonal blocks are zero, so the two blocks act on disjoint variables.
pub fn two_block_non_interfere(a: &Matrix, b: &Matrix) -> Matrix {
    let rows = a.rows + b.rows;
    let cols = a.cols + b.cols;
    let mut out = Matrix::zeros(rows, cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            out.data[i * cols + j] = a.data[i * a.cols + j].clone();
        }
    }
    for i in 0..b.rows {
        for j in 0..b.cols {
            out.data[(a.rows + i) * cols + a.cols + j] = b.data[i * b.cols + j].clone();
        }
    }
    out
}

pub fn vec_append(u: &Vector, v: &Vector) -> Vector {
    u.append(v)
}
