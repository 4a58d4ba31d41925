//! Dense complex linear algebra.
//!
//! [`ComplexMatrix`] is a heap-backed row-major matrix used for operators of
//! arbitrary (small) size, such as the 16×16 Liouvillian. [`Mat4`] is a
//! stack-allocated 4×4 matrix for the qubit ⊗ resonator hot path.

mod eigen;
mod expm;
mod mat4;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;
use num_traits::Zero;

use crate::error::{Error, Result};

pub use eigen::{hermitian_eigenvalues, hermitian_eigenvalues4, symmetric_eigenvalues};
pub use expm::matrix_exponential;
pub use mat4::Mat4;

/// Dense complex matrix with row-major storage.
///
/// Constructors reject non-finite entries; arithmetic on finite inputs of the
/// sizes used here cannot overflow.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl core::fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  ")?;
            for c in 0..self.cols {
                let z = self[(r, c)];
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![C64::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if !data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite("matrix entries"));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(rows, cols, data.iter().map(|&x| C64::new(x, 0.0)).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
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

    /// Row-major entries.
    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)])
    }

    pub fn conj(&self) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn scale(&self, k: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * k).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    /// Induced 1-norm (maximum absolute column sum).
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|c| (0..self.rows).map(|r| self[(r, c)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.mul_unchecked(rhs))
    }

    fn mul_unchecked(&self, rhs: &Self) -> Self {
        let mut out = Self::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[r * self.cols + k];
                if a.is_zero() {
                    continue;
                }
                let row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let dst = &mut out.data[r * rhs.cols..(r + 1) * rhs.cols];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    /// Matrix-vector product `self · v`.
    pub fn mul_vec(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "vector of length {} for {}x{} matrix",
                v.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![C64::zero(); self.rows];
        self.mul_vec_into(v, &mut out);
        Ok(out)
    }

    pub(crate) fn mul_vec_into(&self, v: &[C64], out: &mut [C64]) {
        for (r, o) in out.iter_mut().enumerate() {
            let row = &self.data[r * self.cols..(r + 1) * self.cols];
            *o = row.iter().zip(v).map(|(a, b)| a * b).sum();
        }
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(C64, C64) -> C64) -> Self {
        assert!(
            self.rows == rhs.rows && self.cols == rhs.cols,
            "shape mismatch: {}x{} vs {}x{}",
            self.rows,
            self.cols,
            rhs.rows,
            rhs.cols
        );
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        &mut self.data[r * self.cols + c]
    }
}

/// Panics on inner-dimension mismatch; use [`ComplexMatrix::matmul`] for a
/// fallible product.
impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimension mismatch");
        self.mul_unchecked(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.zip_with(rhs, |a, b| a - b)
    }
}

/// Kronecker product `a ⊗ b`.
///
/// Entry `((i, k), (j, l))` with row index `i·b.rows + k` equals
/// `a[i][j] · b[k][l]`, so the first factor is the slow index. With the qubit
/// as `a` and the resonator as `b` this reproduces the `|g,m⟩, |g,n⟩, |e,m⟩,
/// |e,n⟩` ordering used throughout the crate.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let rows = a.rows * b.rows;
    let cols = a.cols * b.cols;
    ComplexMatrix::from_fn(rows, cols, |r, c| {
        a[(r / b.rows, c / b.cols)] * b[(r % b.rows, c % b.cols)]
    })
}

/// Column-stacking vectorization: `vec(A)[c·rows + r] = A[r][c]`.
pub fn vectorize(m: &ComplexMatrix) -> Vec<C64> {
    let mut v = Vec::with_capacity(m.rows * m.cols);
    for c in 0..m.cols {
        for r in 0..m.rows {
            v.push(m[(r, c)]);
        }
    }
    v
}

/// Inverse of [`vectorize`].
pub fn unvectorize(v: &[C64], rows: usize, cols: usize) -> Result<ComplexMatrix> {
    if v.len() != rows * cols {
        return Err(Error::Dimension(format!(
            "vector of length {} cannot fill {rows}x{cols}",
            v.len()
        )));
    }
    Ok(ComplexMatrix::from_fn(rows, cols, |r, c| v[c * rows + r]))
}

/// Solves `a · x = b` by Gaussian elimination with partial pivoting.
pub(crate) fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows;
    if !a.is_square() || b.rows != n {
        return Err(Error::Dimension(format!(
            "solve with {}x{} system and {}x{} right-hand side",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let m = b.cols;
    let mut lu = a.data.clone();
    let mut x = b.data.clone();
    for k in 0..n {
        let pivot = (k..n)
            .max_by(|&i, &j| lu[i * n + k].norm().total_cmp(&lu[j * n + k].norm()))
            .unwrap_or(k);
        if lu[pivot * n + k].norm() == 0.0 {
            return Err(Error::Domain("singular matrix in linear solve".into()));
        }
        if pivot != k {
            for c in 0..n {
                lu.swap(k * n + c, pivot * n + c);
            }
            for c in 0..m {
                x.swap(k * m + c, pivot * m + c);
            }
        }
        let inv = C64::new(1.0, 0.0) / lu[k * n + k];
        for i in k + 1..n {
            let f = lu[i * n + k] * inv;
            if f.is_zero() {
                continue;
            }
            for c in k..n {
                let v = lu[k * n + c];
                lu[i * n + c] -= f * v;
            }
            for c in 0..m {
                let v = x[k * m + c];
                x[i * m + c] -= f * v;
            }
        }
    }
    for k in (0..n).rev() {
        let inv = C64::new(1.0, 0.0) / lu[k * n + k];
        for c in 0..m {
            let mut acc = x[k * m + c];
            for j in k + 1..n {
                acc -= lu[k * n + j] * x[j * m + c];
            }
            x[k * m + c] = acc * inv;
        }
    }
    ComplexMatrix::from_vec(n, m, x)
}
