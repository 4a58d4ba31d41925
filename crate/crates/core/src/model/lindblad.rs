use num_complex::Complex64 as C64;

use super::{hamiltonian_series, HarmonicHamiltonian, ModelParameters};
use crate::error::Result;
use crate::linalg::{tensor_product, ComplexMatrix, Mat4};
use crate::state::DensityMatrix;

const O: C64 = C64::new(0.0, 0.0);
const I1: C64 = C64::new(1.0, 0.0);

/// `Σ_q = |g⟩⟨e| ⊗ I`.
pub const JUMP_QUBIT: Mat4 = Mat4([[O, O, I1, O], [O, O, O, I1], [O, O, O, O], [O, O, O, O]]);

/// `A = I ⊗ |m⟩⟨n|`.
pub const JUMP_RESONATOR: Mat4 = Mat4([[O, I1, O, O], [O, O, O, O], [O, O, O, I1], [O, O, O, O]]);

/// Time structure of a generator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Periodicity {
    Static,
    /// `L(t + T) = L(t)` with the given period in seconds.
    Periodic(f64),
    Aperiodic,
}

/// Right-hand side of the master equation for fixed parameters.
///
/// Building the generator once precomputes the harmonic decomposition of the
/// Hamiltonian, so repeated RHS evaluations only sum a few phases.
#[derive(Debug, Clone)]
pub struct Generator {
    hamiltonian: HarmonicHamiltonian,
    kappa_q: f64,
    kappa_r: f64,
    /// `½(κ_q Σ†Σ + κ_r A†A)`, diagonal.
    half_damping: [f64; 4],
}

impl Generator {
    pub fn new(p: &ModelParameters) -> Result<Self> {
        p.validate()?;
        let e = p.effective();
        let (kq, kr) = (e.kappa_q, e.kappa_r);
        Ok(Self {
            hamiltonian: hamiltonian_series(p),
            kappa_q: kq,
            kappa_r: kr,
            half_damping: [0.0, 0.5 * kr, 0.5 * kq, 0.5 * (kq + kr)],
        })
    }

    pub fn hamiltonian(&self) -> &HarmonicHamiltonian {
        &self.hamiltonian
    }

    pub fn rates(&self) -> (f64, f64) {
        (self.kappa_q, self.kappa_r)
    }

    pub fn rhs(&self, rho: &Mat4, t: f64) -> Mat4 {
        self.rhs_with_hamiltonian(rho, &self.hamiltonian.at(t))
    }

    /// `-i(H_eff ρ - ρ H_eff†) + κ_q Σ ρ Σ† + κ_r A ρ A†` with
    /// `H_eff = H - (i/2)(κ_q Σ†Σ + κ_r A†A)`.
    pub fn rhs_with_hamiltonian(&self, rho: &Mat4, h: &Mat4) -> Mat4 {
        let r = &rho.0;
        let h = &h.0;
        let d = &self.half_damping;
        let mut out = Mat4::zeros();
        for j in 0..4 {
            for k in 0..4 {
                let mut hr = O;
                let mut rh = O;
                for l in 0..4 {
                    hr += h[j][l] * r[l][k];
                    rh += r[j][l] * h[l][k];
                }
                // -i[H, ρ] - {K/2, ρ} with K diagonal.
                out.0[j][k] = C64::new(hr.im - rh.im, rh.re - hr.re) - r[j][k] * (d[j] + d[k]);
            }
        }
        for a in 0..2 {
            for b in 0..2 {
                out.0[a][b] += r[a + 2][b + 2] * self.kappa_q;
                out.0[2 * a][2 * b] += r[2 * a + 1][2 * b + 1] * self.kappa_r;
            }
        }
        out
    }

    /// 16×16 superoperator assembled from Kronecker products.
    pub fn liouvillian(&self, t: f64) -> Liouvillian {
        let h = self.hamiltonian.at(t).to_matrix();
        let id = ComplexMatrix::identity(4);
        let minus_i = C64::new(0.0, -1.0);
        let mut l = &tensor_product(&id, &h) - &tensor_product(&h.transpose(), &id);
        l = l.scale(minus_i);
        for (kappa, jump) in [(self.kappa_q, JUMP_QUBIT), (self.kappa_r, JUMP_RESONATOR)] {
            if kappa == 0.0 {
                continue;
            }
            let j = jump.to_matrix();
            let jdj = &j.adjoint() * &j;
            let half = C64::new(0.5, 0.0);
            let d = &(&tensor_product(&j.conj(), &j) - &tensor_product(&id, &jdj).scale(half))
                - &tensor_product(&jdj.transpose(), &id).scale(half);
            l = &l + &d.scale(C64::new(kappa, 0.0));
        }
        Liouvillian {
            matrix: l,
            time_dependent: !self.hamiltonian.is_static(),
        }
    }

    pub fn periodicity(&self) -> Periodicity {
        if self.hamiltonian.is_static() {
            Periodicity::Static
        } else {
            match self.hamiltonian.fundamental() {
                Some(w) if w > 0.0 => Periodicity::Periodic(core::f64::consts::TAU / w),
                _ => Periodicity::Aperiodic,
            }
        }
    }

    /// Largest angular frequency present: harmonic frequencies, the spread of
    /// the static level energies, twice the largest coupling, and the rates.
    pub fn omega_max(&self) -> f64 {
        let h = &self.hamiltonian;
        let stat = h.static_part();
        let diag = (0..4).map(|i| stat.0[i][i].re);
        let spread = diag.clone().fold(f64::NEG_INFINITY, f64::max) - diag.fold(f64::INFINITY, f64::min);
        let coupling = h
            .terms()
            .iter()
            .flat_map(|t| {
                (0..4).flat_map(move |r| (0..4).filter(move |&c| c != r).map(move |c| t.matrix.0[r][c].norm()))
            })
            .fold(0.0, f64::max);
        h.max_frequency()
            .max(spread)
            .max(2.0 * coupling)
            .max(self.kappa_q)
            .max(self.kappa_r)
    }
}

/// Superoperator `L(t)` acting on column-stacked density matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Liouvillian {
    pub matrix: ComplexMatrix,
    pub time_dependent: bool,
}

impl Liouvillian {
    /// `unvec(L · vec ρ)`.
    pub fn apply(&self, rho: &Mat4) -> Mat4 {
        let v = rho.vectorize();
        let mut out = [O; 16];
        self.matrix.mul_vec_into(&v, &mut out);
        Mat4::from_vectorized(&out)
    }

    /// `max |vec(I)† L|`; zero for a trace-preserving generator.
    pub fn trace_annihilation_error(&self) -> f64 {
        (0..16)
            .map(|c| {
                [0usize, 5, 10, 15]
                    .iter()
                    .fold(O, |s, &r| s + self.matrix[(r, c)])
                    .norm()
            })
            .fold(0.0, f64::max)
    }
}

pub fn lindblad_rhs(rho: &DensityMatrix, t: f64, p: &ModelParameters) -> Result<Mat4> {
    Ok(Generator::new(p)?.rhs(rho.matrix(), t))
}

pub fn liouvillian_superoperator(p: &ModelParameters, t: f64) -> Result<Liouvillian> {
    Ok(Generator::new(p)?.liouvillian(t))
}
