use core::ops::{Add, AddAssign, Index, IndexMut, Mul, Sub};

use num_complex::Complex64 as C64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

const ZERO: C64 = C64::new(0.0, 0.0);

/// Stack-allocated 4×4 complex matrix.
#[derive(Clone, Copy, PartialEq, Debug)]
pub struct Mat4(pub [[C64; 4]; 4]);

impl Default for Mat4 {
    fn default() -> Self {
        Self::zeros()
    }
}

impl Mat4 {
    pub const fn zeros() -> Self {
        Mat4([[ZERO; 4]; 4])
    }

    pub fn identity() -> Self {
        Self::from_real_diagonal([1.0; 4])
    }

    pub fn from_real_diagonal(d: [f64; 4]) -> Self {
        let mut m = Self::zeros();
        for (i, &x) in d.iter().enumerate() {
            m.0[i][i] = C64::new(x, 0.0);
        }
        m
    }

    pub fn from_fn(mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros();
        for r in 0..4 {
            for c in 0..4 {
                m.0[r][c] = f(r, c);
            }
        }
        m
    }

    /// `|i⟩⟨j|`.
    pub fn unit(i: usize, j: usize) -> Self {
        let mut m = Self::zeros();
        m.0[i][j] = C64::new(1.0, 0.0);
        m
    }

    /// Outer product `|ψ⟩⟨ψ|`.
    pub fn outer(psi: [C64; 4]) -> Self {
        Self::from_fn(|r, c| psi[r] * psi[c].conj())
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(|r, c| self.0[c][r].conj())
    }

    pub fn trace(&self) -> C64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2] + self.0[3][3]
    }

    pub fn scale(&self, k: C64) -> Self {
        Self::from_fn(|r, c| self.0[r][c] * k)
    }

    pub fn scale_real(&self, k: f64) -> Self {
        Self::from_fn(|r, c| self.0[r][c] * k)
    }

    /// `self·rho - rho·self`.
    pub fn commutator(&self, rho: &Self) -> Self {
        *self * *rho - *rho * *self
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().flatten().fold(0.0, |m, z| m.max(z.norm()))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .fold(0.0, |m, (a, b)| m.max((a - b).norm()))
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Hermitian part `(A + A†)/2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(|r, c| (self.0[r][c] + self.0[c][r].conj()) * 0.5)
    }

    /// `max |A - A†|`.
    pub fn hermiticity_error(&self) -> f64 {
        self.max_abs_diff(&self.adjoint())
    }

    /// Column-stacked vectorization.
    pub fn vectorize(&self) -> [C64; 16] {
        let mut v = [ZERO; 16];
        for c in 0..4 {
            for r in 0..4 {
                v[4 * c + r] = self.0[r][c];
            }
        }
        v
    }

    pub fn from_vectorized(v: &[C64]) -> Self {
        assert_eq!(v.len(), 16, "vectorized 4x4 needs 16 entries");
        Self::from_fn(|r, c| v[4 * c + r])
    }

    pub fn to_matrix(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(4, 4, |r, c| self.0[r][c])
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::Dimension(alloc::format!(
                "expected 4x4, found {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        Ok(Self::from_fn(|r, c| m[(r, c)]))
    }
}

impl Index<(usize, usize)> for Mat4 {
    type Output = C64;

    fn index(&self, (r, c): (usize, usize)) -> &C64 {
        &self.0[r][c]
    }
}

impl IndexMut<(usize, usize)> for Mat4 {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut C64 {
        &mut self.0[r][c]
    }
}

impl Mul for Mat4 {
    type Output = Mat4;

    #[inline]
    fn mul(self, rhs: Mat4) -> Mat4 {
        let mut out = Mat4::zeros();
        for r in 0..4 {
            for k in 0..4 {
                let a = self.0[r][k];
                if a == ZERO {
                    continue;
                }
                for c in 0..4 {
                    out.0[r][c] += a * rhs.0[k][c];
                }
            }
        }
        out
    }
}

impl Add for Mat4 {
    type Output = Mat4;

    #[inline]
    fn add(self, rhs: Mat4) -> Mat4 {
        Mat4::from_fn(|r, c| self.0[r][c] + rhs.0[r][c])
    }
}

impl AddAssign for Mat4 {
    #[inline]
    fn add_assign(&mut self, rhs: Mat4) {
        for r in 0..4 {
            for c in 0..4 {
                self.0[r][c] += rhs.0[r][c];
            }
        }
    }
}

impl Sub for Mat4 {
    type Output = Mat4;

    #[inline]
    fn sub(self, rhs: Mat4) -> Mat4 {
        Mat4::from_fn(|r, c| self.0[r][c] - rhs.0[r][c])
    }
}
