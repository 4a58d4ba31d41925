use alloc::vec::Vec;

use num_complex::Complex64 as C64;
// Unused when another crate links std and brings inherent float methods.
#[allow(unused_imports)]
use num_traits::Float;

use super::{Frame, ModelParameters};
use crate::linalg::Mat4;

/// Excitation number of each basis state, the generator of the rotating frame.
const EXCITATIONS: [f64; 4] = [0.0, 1.0, 1.0, 2.0];

/// Non-zero entries of `(σ + σ†) ⊗ I`.
const QUBIT_FLIP: [(usize, usize); 4] = [(0, 2), (2, 0), (1, 3), (3, 1)];
/// Non-zero entries of `I ⊗ (a + a†)`.
const RESONATOR_FLIP: [(usize, usize); 4] = [(0, 1), (1, 0), (2, 3), (3, 2)];
/// Non-zero entries of `(σ + σ†) ⊗ (a + a†)`.
const EXCHANGE: [(usize, usize); 4] = [(0, 3), (3, 0), (1, 2), (2, 1)];

/// One Fourier component `A·e^{iνt}` of a Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicTerm {
    /// ν in rad/s.
    pub frequency: f64,
    pub matrix: Mat4,
}

/// `H(t)/ħ = Σ_k A_k e^{iν_k t}` with Hermitian sum for real t.
///
/// Every frame produces a finite set of harmonics, so the Hamiltonian is
/// stored once and evaluated cheaply at any time.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicHamiltonian {
    terms: Vec<HarmonicTerm>,
    /// All frequencies are integer multiples of this, when set.
    fundamental: Option<f64>,
}

impl HarmonicHamiltonian {
    pub fn terms(&self) -> &[HarmonicTerm] {
        &self.terms
    }

    pub fn fundamental(&self) -> Option<f64> {
        self.fundamental
    }

    pub fn is_static(&self) -> bool {
        self.terms.iter().all(|t| t.frequency == 0.0)
    }

    /// Largest |ν| among the harmonics.
    pub fn max_frequency(&self) -> f64 {
        self.terms.iter().fold(0.0, |m, t| m.max(t.frequency.abs()))
    }

    /// Static (ν = 0) component.
    pub fn static_part(&self) -> Mat4 {
        self.terms
            .iter()
            .filter(|t| t.frequency == 0.0)
            .fold(Mat4::zeros(), |acc, t| acc + t.matrix)
    }

    pub fn at(&self, t: f64) -> Mat4 {
        let mut h = Mat4::zeros();
        for term in &self.terms {
            if term.frequency == 0.0 {
                h += term.matrix;
            } else {
                let (s, c) = (term.frequency * t).sin_cos();
                h += term.matrix.scale(C64::new(c, s));
            }
        }
        h
    }

    fn from_elements(elements: &[Element], fundamental: Option<f64>) -> Self {
        let mut terms: Vec<HarmonicTerm> = Vec::new();
        for e in elements {
            if e.coeff == C64::new(0.0, 0.0) {
                continue;
            }
            let tol = 1e-12 * e.freq.abs().max(1.0);
            let slot = match terms.iter().position(|t| (t.frequency - e.freq).abs() <= tol) {
                Some(i) => i,
                None => {
                    terms.push(HarmonicTerm {
                        frequency: e.freq,
                        matrix: Mat4::zeros(),
                    });
                    terms.len() - 1
                }
            };
            terms[slot].matrix.0[e.row][e.col] += e.coeff;
        }
        terms.sort_by(|a, b| a.frequency.total_cmp(&b.frequency));
        Self { terms, fundamental }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Part {
    Free,
    Exchange,
    Drive,
}

/// A single matrix element `coeff·e^{i·freq·t}` at `(row, col)`.
#[derive(Debug, Clone, Copy)]
struct Element {
    row: usize,
    col: usize,
    coeff: C64,
    freq: f64,
    part: Part,
}

/// Diagonal of the free Hamiltonian `(ω₀/2)σ_z ⊗ I + ω_M I ⊗ |n⟩⟨n|`.
fn free_energies(p: &ModelParameters) -> [f64; 4] {
    let signs = p.sigma_z_convention.signs();
    core::array::from_fn(|i| 0.5 * p.omega0 * signs[i / 2] + p.omega_m * (i % 2) as f64)
}

/// Lab-frame Hamiltonian as matrix elements. The semiclassical beam enters as
/// `cos(ω_e t + φ) = ½e^{iφ}e^{iω_e t} + ½e^{-iφ}e^{-iω_e t}`.
fn lab_elements(p: &ModelParameters) -> Vec<Element> {
    let mut out = Vec::with_capacity(28);
    for (i, e) in free_energies(p).into_iter().enumerate() {
        out.push(Element {
            row: i,
            col: i,
            coeff: C64::new(e, 0.0),
            freq: 0.0,
            part: Part::Free,
        });
    }
    for &(row, col) in &EXCHANGE {
        out.push(Element {
            row,
            col,
            coeff: C64::new(p.coupling_qr, 0.0),
            freq: 0.0,
            part: Part::Exchange,
        });
    }
    let half_up = C64::from_polar(0.5, p.drive_phase);
    let half_down = half_up.conj();
    let drives = QUBIT_FLIP
        .iter()
        .map(|&rc| (rc, -p.rabi_b))
        .chain(RESONATOR_FLIP.iter().map(|&rc| (rc, 2.0 * p.coupling_br)));
    for ((row, col), amplitude) in drives {
        for (phase, freq) in [(half_up, p.omega_drive), (half_down, -p.omega_drive)] {
            out.push(Element {
                row,
                col,
                coeff: phase * amplitude,
                freq,
                part: Part::Drive,
            });
        }
    }
    out
}

/// Fourier decomposition of the Hamiltonian in the frame selected by `p`.
///
/// * lab: as written, harmonics at 0 and ±ω_e.
/// * rotating: `U†HU - iU†U̇` with `U = exp(-iω_e t N)`, `N` the excitation
///   number; element `(j,k)` picks up `e^{iω_e t (N_j - N_k)}` and the diagonal
///   is shifted by `-ω_e N`.
/// * rwa: interaction picture with respect to the free Hamiltonian. Element
///   `(j,k)` then rotates at `E_j - E_k` plus its drive frequency. Exchange
///   elements may absorb one beam quantum, which moves their frequency by
///   `∓ω_e` towards resonance. Elements rotating faster than `rwa_cutoff` are
///   dropped, which removes the counter-rotating terms.
pub fn hamiltonian_series(p: &ModelParameters) -> HarmonicHamiltonian {
    let p = p.effective();
    let lab = lab_elements(&p);
    let fundamental = (p.omega_drive > 0.0).then_some(p.omega_drive);
    match p.frame {
        Frame::Lab => HarmonicHamiltonian::from_elements(&lab, fundamental),
        Frame::Rotating => {
            let w = p.omega_drive;
            let mut elements: Vec<Element> = lab
                .into_iter()
                .map(|e| Element {
                    freq: e.freq + w * (EXCITATIONS[e.row] - EXCITATIONS[e.col]),
                    ..e
                })
                .collect();
            for (i, n) in EXCITATIONS.iter().enumerate() {
                elements.push(Element {
                    row: i,
                    col: i,
                    coeff: C64::new(-w * n, 0.0),
                    freq: 0.0,
                    part: Part::Free,
                });
            }
            HarmonicHamiltonian::from_elements(&elements, fundamental)
        }
        Frame::Rwa => {
            let energies = free_energies(&p);
            let resolution = 1e-12 * (p.omega0 + p.omega_m + p.omega_drive);
            let elements: Vec<Element> = lab
                .into_iter()
                .filter(|e| e.part != Part::Free)
                .map(|e| {
                    let detuning = energies[e.row] - energies[e.col];
                    let freq = match e.part {
                        Part::Exchange => {
                            let assisted = detuning - detuning.signum() * p.omega_drive;
                            if assisted.abs() < detuning.abs() {
                                assisted
                            } else {
                                detuning
                            }
                        }
                        _ => e.freq + detuning,
                    };
                    Element { freq, ..e }
                })
                .map(|e| Element {
                    // Differences of large level energies leave rounding residue.
                    freq: if e.freq.abs() <= resolution { 0.0 } else { e.freq },
                    ..e
                })
                .filter(|e| e.freq.abs() <= p.rwa_cutoff)
                .collect();
            let mut h = HarmonicHamiltonian::from_elements(&elements, None);
            if h.is_static() {
                h.fundamental = None;
            }
            h
        }
    }
}

/// `H(t)/ħ` in rad/s in the frame selected by `p`.
pub fn build_hamiltonian(p: &ModelParameters, t: f64) -> Mat4 {
    hamiltonian_series(p).at(t)
}
