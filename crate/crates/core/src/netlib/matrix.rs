use std::ops::{Deref, Index, IndexMut};

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "MatrixRecord", try_from = "MatrixRecord")]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct ComplexMatrix<T: Real> {
    rows: usize,
    cols: usize,
    data: Vec<C<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    /// Builds a matrix from row-major entries, rejecting NaN and infinities.
    pub fn new(rows: usize, cols: usize, data: Vec<C<T>>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::EntryCount { rows, cols, len: data.len() });
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite { row: pos / cols, col: pos % cols });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        assert!(rows > 0 && cols > 0, "matrix dimensions must be positive");
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Builds a matrix from nested rows.
    pub fn from_rows(rows: &[Vec<C<T>>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|row| row.len() != c) {
            return Err(Error::DimensionMismatch { expected: c, found: bad.len() });
        }
        Self::new(r, c, rows.concat())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_fn(rows, cols, |_, _| C::new(T::zero(), T::zero()))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { C::new(T::one(), T::zero()) } else { C::new(T::zero(), T::zero()) })
    }

    pub fn diagonal(d: &[C<T>]) -> Self {
        Self::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { C::new(T::zero(), T::zero()) })
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C<T>] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn ensure_square(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    /// Matrix product `self · rhs`.
    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: rhs.rows });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn map(&self, f: impl Fn(C<T>) -> C<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| f(z)).collect() }
    }

    /// Largest entrywise modulus of `self − other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<T> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.rows * self.cols, found: other.rows * other.cols });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (*a - *b).norm())
            .fold(T::zero(), T::max))
    }

    /// Max-norm of `U†U − I`.
    pub fn unitarity_residual(&self) -> Result<T> {
        let n = self.ensure_square()?;
        let mut worst = T::zero();
        for i in 0..n {
            for j in i..n {
                let mut acc = C::new(T::zero(), T::zero());
                for k in 0..n {
                    acc += self[(k, i)].conj() * self[(k, j)];
                }
                if i == j {
                    acc -= C::new(T::one(), T::zero());
                }
                worst = worst.max(acc.norm());
            }
        }
        Ok(worst)
    }

    /// Largest imaginary part in modulus.
    pub fn max_imag(&self) -> T {
        self.data.iter().map(|z| z.im.abs()).fold(T::zero(), T::max)
    }

    /// Converts to another precision.
    pub fn cast<S: Real>(&self) -> ComplexMatrix<S> {
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .map(|z| C::new(S::from(z.re).unwrap(), S::from(z.im).unwrap()))
                .collect(),
        }
    }
}

impl<T: Real> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = C<T>;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

/// On-disk layout: `{"rows", "cols", "re", "im"}` with row-major parts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

impl<T: Real> From<ComplexMatrix<T>> for MatrixRecord {
    fn from(m: ComplexMatrix<T>) -> Self {
        MatrixRecord {
            rows: m.rows,
            cols: m.cols,
            re: m.data.iter().map(|z| z.re.to_f64().unwrap()).collect(),
            im: m.data.iter().map(|z| z.im.to_f64().unwrap()).collect(),
        }
    }
}

impl<T: Real> TryFrom<MatrixRecord> for ComplexMatrix<T> {
    type Error = Error;
    fn try_from(r: MatrixRecord) -> Result<Self> {
        if r.re.len() != r.im.len() {
            return Err(Error::DimensionMismatch { expected: r.re.len(), found: r.im.len() });
        }
        let data = r
            .re
            .iter()
            .zip(&r.im)
            .map(|(&a, &b)| Complex::new(T::from_f64(a).unwrap_or(T::nan()), T::from_f64(b).unwrap_or(T::nan())))
            .collect();
        ComplexMatrix::new(r.rows, r.cols, data)
    }
}

/// Square matrix whose unitarity has been checked at construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(into = "MatrixRecord", try_from = "MatrixRecord")]
#[serde(bound(serialize = "T: Real", deserialize = "T: Real"))]
pub struct UnitaryMatrix<T: Real>(ComplexMatrix<T>);

impl<T: Real> UnitaryMatrix<T> {
    /// Accepts `m` when `max|U†U − I| ≤ T::unitarity_tol()`.
    pub fn new(m: ComplexMatrix<T>) -> Result<Self> {
        Self::with_tolerance(m, T::unitarity_tol())
    }

    pub fn with_tolerance(m: ComplexMatrix<T>, tol: T) -> Result<Self> {
        let residual = m.unitarity_residual()?;
        if residual > tol {
            return Err(Error::NotUnitary {
                residual: residual.to_f64().unwrap_or(f64::NAN),
                tolerance: tol.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(Self(m))
    }

    pub fn identity(n: usize) -> Self {
        Self(ComplexMatrix::identity(n))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.0
    }

    /// Product of two unitaries, re-validated.
    pub fn compose(&self, rhs: &Self) -> Result<Self> {
        Self::new(self.0.matmul(&rhs.0)?)
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn transpose(&self) -> Self {
        Self(self.0.transpose())
    }

    /// True when every imaginary part is zero up to `tol`.
    pub fn is_real(&self, tol: T) -> bool {
        self.0.max_imag() <= tol
    }
}

impl<T: Real> Deref for UnitaryMatrix<T> {
    type Target = ComplexMatrix<T>;
    fn deref(&self) -> &ComplexMatrix<T> {
        &self.0
    }
}

impl<T: Real> From<UnitaryMatrix<T>> for MatrixRecord {
    fn from(u: UnitaryMatrix<T>) -> Self {
        u.0.into()
    }
}

impl<T: Real> TryFrom<MatrixRecord> for UnitaryMatrix<T> {
    type Error = Error;
    fn try_from(r: MatrixRecord) -> Result<Self> {
        UnitaryMatrix::new(ComplexMatrix::try_from(r)?)
    }
}
