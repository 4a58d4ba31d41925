//! Joint qubit ⊗ resonator density matrices.

use alloc::format;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues4, tensor_product, ComplexMatrix, Mat4};

/// Indices of the product basis. The qubit index is the slow one.
pub mod basis {
    /// `|g,m⟩`: qubit ground, resonator ground-like level.
    pub const GM: usize = 0;
    /// `|g,n⟩`: qubit ground, resonator excited-like level.
    pub const GN: usize = 1;
    /// `|e,m⟩`
    pub const EM: usize = 2;
    /// `|e,n⟩`
    pub const EN: usize = 3;

    pub const LABELS: [&str; 4] = ["gm", "gn", "em", "en"];
}

/// Thresholds applied by [`validate_density_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityTolerance {
    pub trace: f64,
    pub hermiticity: f64,
    /// Smallest eigenvalue accepted is `-eigenvalue`.
    pub eigenvalue: f64,
}

impl DensityTolerance {
    /// Trace 1e-8, Hermiticity 1e-10, eigenvalues ≥ -1e-8.
    pub const STRICT: Self = Self {
        trace: 1e-8,
        hermiticity: 1e-10,
        eigenvalue: 1e-8,
    };

    pub const fn uniform(tol: f64) -> Self {
        Self {
            trace: tol,
            hermiticity: tol,
            eigenvalue: tol,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DensityReport {
    /// `|tr ρ - 1|`
    pub trace_deviation: f64,
    /// `max |ρ - ρ†|`
    pub hermiticity_deviation: f64,
    /// Smallest eigenvalue of the Hermitian part.
    pub min_eigenvalue: f64,
    pub trace_ok: bool,
    pub hermitian_ok: bool,
    pub positive_ok: bool,
}

impl DensityReport {
    pub fn passed(&self) -> bool {
        self.trace_ok && self.hermitian_ok && self.positive_ok
    }
}

/// Checks the density-matrix invariants of an arbitrary 4×4 matrix with the
/// same tolerance for all three criteria.
pub fn validate_density(m: &Mat4, tol: f64) -> DensityReport {
    validate_density_with(m, DensityTolerance::uniform(tol))
}

pub fn validate_density_with(m: &Mat4, tol: DensityTolerance) -> DensityReport {
    let trace_deviation = (m.trace() - C64::new(1.0, 0.0)).norm();
    let hermiticity_deviation = m.hermiticity_error();
    let min_eigenvalue = if m.is_finite() {
        hermitian_eigenvalues4(m)[0]
    } else {
        f64::NAN
    };
    DensityReport {
        trace_deviation,
        hermiticity_deviation,
        min_eigenvalue,
        trace_ok: trace_deviation <= tol.trace,
        hermitian_ok: hermiticity_deviation <= tol.hermiticity,
        positive_ok: min_eigenvalue >= -tol.eigenvalue,
    }
}

/// A validated 4×4 density matrix over `|g,m⟩, |g,n⟩, |e,m⟩, |e,n⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Mat4);

impl DensityMatrix {
    /// Validates `m` against [`DensityTolerance::STRICT`].
    pub fn new(m: Mat4) -> Result<Self> {
        Self::with_tolerance(m, DensityTolerance::STRICT)
    }

    pub fn with_tolerance(m: Mat4, tol: DensityTolerance) -> Result<Self> {
        let report = validate_density_with(&m, tol);
        if report.passed() {
            Ok(Self(m))
        } else {
            Err(Error::InvalidDensity(format!(
                "trace deviation {:.3e}, hermiticity deviation {:.3e}, min eigenvalue {:.3e}",
                report.trace_deviation, report.hermiticity_deviation, report.min_eigenvalue
            )))
        }
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        Self::new(Mat4::from_matrix(m)?)
    }

    /// Wraps an evolved state without re-validating it.
    pub(crate) fn from_evolved(m: Mat4) -> Self {
        Self(m)
    }

    /// Projector onto one of the [`basis`] states.
    pub fn basis_state(index: usize) -> Self {
        assert!(index < 4, "basis index {index} out of range");
        Self(Mat4::unit(index, index))
    }

    /// `|ψ⟩⟨ψ|` for a state vector, normalized here.
    pub fn pure(psi: [C64; 4]) -> Result<Self> {
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::InvalidDensity("state vector has zero or non-finite norm".into()));
        }
        let inv = 1.0 / num_traits::Float::sqrt(norm);
        Self::new(Mat4::outer(psi.map(|z| z * inv)))
    }

    /// `ρ_q ⊗ ρ_r` from 2×2 qubit and resonator factors.
    pub fn product(qubit: &ComplexMatrix, resonator: &ComplexMatrix) -> Result<Self> {
        if qubit.rows() != 2 || qubit.cols() != 2 || resonator.rows() != 2 || resonator.cols() != 2
        {
            return Err(Error::Dimension("product state needs two 2x2 factors".into()));
        }
        Self::from_matrix(&tensor_product(qubit, resonator))
    }

    pub fn maximally_mixed() -> Self {
        Self(Mat4::from_real_diagonal([0.25; 4]))
    }

    pub fn matrix(&self) -> &Mat4 {
        &self.0
    }

    pub fn into_matrix(self) -> Mat4 {
        self.0
    }

    pub fn element(&self, row: usize, col: usize) -> C64 {
        self.0 .0[row][col]
    }

    pub fn population(&self, index: usize) -> f64 {
        self.0 .0[index][index].re
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// `tr ρ²`
    pub fn purity(&self) -> f64 {
        (self.0 * self.0).trace().re
    }

    pub fn report(&self, tol: f64) -> DensityReport {
        validate_density(&self.0, tol)
    }
}

/// Reduced qubit state `tr_resonator ρ` as a 2×2 matrix.
pub fn partial_trace_resonator(rho: &DensityMatrix) -> ComplexMatrix {
    reduce_to_qubit(rho.matrix())
}

/// Partial trace over the resonator for any 4×4 operator; linear in `m`.
pub fn reduce_to_qubit(m: &Mat4) -> ComplexMatrix {
    ComplexMatrix::from_fn(2, 2, |a, b| m.0[2 * a][2 * b] + m.0[2 * a + 1][2 * b + 1])
}
