//! Dense square complex matrices in row-major storage.
//!
//! The operators of this crate (Hamiltonians, states, Kraus operators,
//! unitaries) are all square and small (dimension ≤ 256), so a plain
//! `Vec`-backed type with straightforward O(d³) multiplication is both fast
//! enough and fully deterministic.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{c_re, c_zero, Real, C};

/// Square complex matrix, row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix<T> {
    dim: usize,
    data: Vec<C<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    /// Zero matrix of the given dimension.
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![c_zero(); dim * dim],
        }
    }

    /// Identity matrix.
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    /// Builds a matrix entry by entry.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C<T>) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    /// Wraps a row-major buffer; fails if the length is not `dim * dim` or an
    /// entry is not finite.
    pub fn from_vec(dim: usize, data: Vec<C<T>>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::BadShape {
                len: data.len(),
                dim,
            });
        }
        let m = Self { dim, data };
        m.check_finite()?;
        Ok(m)
    }

    /// Diagonal matrix from complex entries.
    pub fn diag(entries: &[C<T>]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &z) in entries.iter().enumerate() {
            m[(i, i)] = z;
        }
        m
    }

    /// Diagonal matrix from real entries.
    pub fn diag_real(entries: &[T]) -> Self {
        let mut m = Self::zeros(entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = c_re(x);
        }
        m
    }

    /// Outer product v v† of a ket given by its amplitudes.
    pub fn outer(v: &[C<T>]) -> Self {
        let dim = v.len();
        Self::from_fn(dim, |i, j| v[i] * v[j].conj())
    }

    /// Dimension of the (square) matrix.
    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Row-major entry slice.
    pub fn entries(&self) -> &[C<T>] {
        &self.data
    }

    /// Errors on the first NaN or infinite entry.
    pub fn check_finite(&self) -> Result<()> {
        for i in 0..self.dim {
            for j in 0..self.dim {
                let z = self[(i, j)];
                if !(z.re.is_finite() && z.im.is_finite()) {
                    return Err(Error::NonFiniteEntry { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    /// Transpose without conjugation.
    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    /// Hermitian part (A + A†)/2.
    pub fn hermitized(&self) -> Self {
        let half = c_re(T::of(0.5));
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * half)
    }

    /// Largest entry magnitude max|A_ij| (Chebyshev norm).
    pub fn max_abs(&self) -> T {
        let mut m = T::zero();
        for z in &self.data {
            m = m.max(z.norm());
        }
        m
    }

    /// Largest deviation from Hermiticity, max |A_ij − conj(A_ji)|.
    pub fn herm_residual(&self) -> T {
        let mut r = T::zero();
        for i in 0..self.dim {
            for j in i..self.dim {
                r = r.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        r
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> T {
        let mut s = T::zero();
        for z in &self.data {
            s += z.norm_sqr();
        }
        s.sqrt()
    }

    /// Matrix trace.
    pub fn trace(&self) -> C<T> {
        let mut t = c_zero();
        for i in 0..self.dim {
            t += self[(i, i)];
        }
        t
    }

    /// Entry-wise scaling by a complex factor.
    pub fn scale(&self, factor: C<T>) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&z| z * factor).collect(),
        }
    }

    /// Entry-wise scaling by a real factor.
    pub fn scale_re(&self, factor: T) -> Self {
        self.scale(c_re(factor))
    }

    /// Matrix product. Panics on dimension mismatch; use [`checked_mul`] for
    /// fallible multiplication of externally supplied operands.
    ///
    /// [`checked_mul`]: ComplexMatrix::checked_mul
    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a.re.is_zero() && a.im.is_zero() {
                    continue;
                }
                for j in 0..d {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        out
    }

    /// Fallible matrix product for operands of possibly different size.
    pub fn checked_mul(&self, other: &Self) -> Result<Self> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: other.dim,
            });
        }
        Ok(self.matmul(other))
    }

    /// Applies the matrix to a ket.
    pub fn mul_vec(&self, v: &[C<T>]) -> Vec<C<T>> {
        assert_eq!(self.dim, v.len(), "mul_vec dimension mismatch");
        let mut out = vec![c_zero(); self.dim];
        for i in 0..self.dim {
            let mut s = c_zero();
            for j in 0..self.dim {
                s += self[(i, j)] * v[j];
            }
            out[i] = s;
        }
        out
    }

    /// Kronecker product, `self` as the leading (slow) factor.
    pub fn kron(&self, other: &Self) -> Self {
        let da = self.dim;
        let db = other.dim;
        ComplexMatrix::from_fn(da * db, |i, j| {
            let (ia, ib) = (i / db, i % db);
            let (ja, jb) = (j / db, j % db);
            self[(ia, ja)] * other[(ib, jb)]
        })
    }

    /// Real part of tr(AB), a common inner-product shape.
    pub fn trace_product_re(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "trace_product dimension mismatch");
        let d = self.dim;
        let mut s = T::zero();
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                let b = other[(k, i)];
                s = s + a.re * b.re - a.im * b.im;
            }
        }
        s
    }

    /// Largest entry of |A − B|.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        assert_eq!(self.dim, other.dim, "max_abs_diff dimension mismatch");
        let mut m = T::zero();
        for (a, b) in self.data.iter().zip(other.data.iter()) {
            m = m.max((*a - *b).norm());
        }
        m
    }

    /// Deviation from unitarity, max-entry norm of A†A − I.
    pub fn unitarity_residual(&self) -> T {
        let g = self.adjoint().matmul(self);
        g.max_abs_diff(&Self::identity(self.dim))
    }
}

/// Commutator [A, B] = AB − BA.
pub fn commutator<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    Ok(&a.matmul(b) - &b.matmul(a))
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = C<T>;
    fn index(&self, (i, j): (usize, usize)) -> &C<T> {
        &self.data[i * self.dim + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C<T> {
        &mut self.data[i * self.dim + j]
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "add dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert_eq!(self.dim, rhs.dim, "sub dimension mismatch");
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(rhs.data.iter())
                .map(|(&a, &b)| a - b)
                .collect(),
        }
    }
}

impl<T: Real> Neg for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn neg(self) -> ComplexMatrix<T> {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|&a| -a).collect(),
        }
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;
    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.matmul(rhs)
    }
}
