//! Dense matrices over a [`Field`].

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::Field;

/// A dense row-major matrix. The field descriptor travels with the value.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<F: Field> {
    field: F,
    rows: usize,
    cols: usize,
    data: Vec<F::Elem>,
}

impl<F: Field> Matrix<F> {
    pub fn new(field: &F, rows: usize, cols: usize, data: Vec<F::Elem>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::ShapeMismatch(alloc::format!(
                "{} entries for a {}x{} matrix",
                data.len(),
                rows,
                cols
            )));
        }
        Ok(Matrix {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Build from small integers, row-major.
    pub fn from_i64(field: &F, rows: usize, cols: usize, data: &[i64]) -> Self {
        assert_eq!(data.len(), rows * cols, "entry count does not match shape");
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: data.iter().map(|&v| field.from_i64(v)).collect(),
        }
    }

    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        Self::scalar(field, n, field.one())
    }

    pub fn scalar(field: &F, n: usize, value: F::Elem) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = value.clone();
        }
        m
    }

    /// `(-1)^degree` times the identity.
    pub fn signed_identity(field: &F, n: usize, degree: i64) -> Self {
        Self::scalar(field, n, field.sign(degree.rem_euclid(2) == 1))
    }

    /// Column vector.
    pub fn column(field: &F, entries: Vec<F::Elem>) -> Self {
        let rows = entries.len();
        Matrix {
            field: field.clone(),
            rows,
            cols: 1,
            data: entries,
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, v) in c.iter().enumerate() {
                m.data[i * m.cols + j] = v.clone();
            }
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
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

    pub fn entries(&self) -> &[F::Elem] {
        &self.data
    }

    pub fn get(&self, r: usize, c: usize) -> &F::Elem {
        assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: F::Elem) {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.cols + c] = value;
    }

    pub fn row(&self, r: usize) -> &[F::Elem] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn col(&self, c: usize) -> Vec<F::Elem> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| self.field.is_zero(v))
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_identity(&self) -> bool {
        self.is_scalar(&self.field.one())
    }

    pub fn is_signed_identity(&self, degree: i64) -> bool {
        self.is_scalar(&self.field.sign(degree.rem_euclid(2) == 1))
    }

    fn is_scalar(&self, value: &F::Elem) -> bool {
        if !self.is_square() {
            return false;
        }
        (0..self.rows).all(|i| {
            (0..self.cols).all(|j| {
                let v = self.get(i, j);
                if i == j {
                    v == value
                } else {
                    self.field.is_zero(v)
                }
            })
        })
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &F::Elem) -> Self {
        self.map(|v| self.field.mul(s, v))
    }

    pub fn scale_sign(&self, degree: i64) -> Self {
        if degree.rem_euclid(2) == 0 {
            self.clone()
        } else {
            -self
        }
    }

    fn map(&self, f: impl Fn(&F::Elem) -> F::Elem) -> Self {
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::ShapeMismatch(alloc::format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows,
                self.cols,
                rhs.rows,
                rhs.cols
            )));
        }
        let f = &self.field;
        let mut out = Self::zeros(f, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if f.is_zero(a) {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if f.is_zero(b) {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = f.add(&out.data[idx], &f.mul(a, b));
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| self.field.add(a, b))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.zip(rhs, |a, b| self.field.sub(a, b))
    }

    fn zip(&self, rhs: &Self, f: impl Fn(&F::Elem, &F::Elem) -> F::Elem) -> Result<Self> {
        if self.shape() != rhs.shape() {
            return Err(Error::ShapeMismatch(alloc::format!(
                "{}x{} vs {}x{}",
                self.rows,
                self.cols,
                rhs.rows,
                rhs.cols
            )));
        }
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| f(a, b))
                .collect(),
        })
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn submatrix(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Self {
        assert!(r0 <= r1 && r1 <= self.rows && c0 <= c1 && c1 <= self.cols);
        let mut out = Self::zeros(&self.field, r1 - r0, c1 - c0);
        for i in r0..r1 {
            for j in c0..c1 {
                out.data[(i - r0) * out.cols + (j - c0)] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut out = Self::zeros(&self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.data[i * cols.len() + jj] = self.get(i, j).clone();
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        let mut out = Self::zeros(&self.field, rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                out.data[ii * self.cols + j] = self.get(i, j).clone();
            }
        }
        out
    }

    /// Copy `block` into `self` with its top-left corner at `(r, c)`.
    pub fn set_block(&mut self, r: usize, c: usize, block: &Self) {
        assert!(r + block.rows <= self.rows && c + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.data[(r + i) * self.cols + c + j] = block.get(i, j).clone();
            }
        }
    }

    /// Horizontal concatenation; all parts need `rows` rows.
    pub fn hstack(field: &F, rows: usize, parts: &[&Self]) -> Self {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut c = 0;
        for p in parts {
            assert_eq!(p.rows, rows);
            out.set_block(0, c, p);
            c += p.cols;
        }
        out
    }

    /// Vertical concatenation; all parts need `cols` columns.
    pub fn vstack(field: &F, cols: usize, parts: &[&Self]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut out = Self::zeros(field, rows, cols);
        let mut r = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            out.set_block(r, 0, p);
            r += p.rows;
        }
        out
    }

    pub fn block_diag(field: &F, parts: &[&Self]) -> Self {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Self::zeros(field, rows, cols);
        let (mut r, mut c) = (0, 0);
        for p in parts {
            out.set_block(r, c, p);
            r += p.rows;
            c += p.cols;
        }
        out
    }

    /// Entries as one column vector (row-major order).
    pub fn vectorize(&self) -> Vec<F::Elem> {
        self.data.clone()
    }

    pub fn from_vectorized(field: &F, rows: usize, cols: usize, entries: &[F::Elem]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        Matrix {
            field: field.clone(),
            rows,
            cols,
            data: entries.to_vec(),
        }
    }
}

impl<F: Field> Mul for &Matrix<F> {
    type Output = Matrix<F>;

    fn mul(self, rhs: Self) -> Matrix<F> {
        self.checked_mul(rhs).expect("matrix product shape mismatch")
    }
}

impl<F: Field> Add for &Matrix<F> {
    type Output = Matrix<F>;

    fn add(self, rhs: Self) -> Matrix<F> {
        self.checked_add(rhs).expect("matrix sum shape mismatch")
    }
}

impl<F: Field> Sub for &Matrix<F> {
    type Output = Matrix<F>;

    fn sub(self, rhs: Self) -> Matrix<F> {
        self.checked_sub(rhs).expect("matrix difference shape mismatch")
    }
}

impl<F: Field> Neg for &Matrix<F> {
    type Output = Matrix<F>;

    fn neg(self) -> Matrix<F> {
        self.map(|v| self.field.neg(v))
    }
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{}x{}", self.rows, self.cols)?;
        fmt::Display::fmt(self, f)
    }
}

impl<F: Field> fmt::Display for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "[")?;
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            write!(f, "]")?;
        }
        write!(f, "]")
    }
}
