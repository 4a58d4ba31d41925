//! Open-system dynamics of a spin qubit inside a two-level resonator, driven by
//! the near field of a current-modulated electron beam.
//!
//! The joint qubit ⊗ resonator state is a 4×4 density matrix in the basis
//! `|g,m⟩, |g,n⟩, |e,m⟩, |e,n⟩` (qubit index slow). The crate provides
//!
//! * [`linalg`]: dense complex matrices, Kronecker products, the matrix
//!   exponential and a Hermitian eigenvalue solver,
//! * [`state`]: density matrices, validation and the partial trace,
//! * [`model`]: Hamiltonian, Lindblad right-hand side and Liouvillian,
//! * [`engine`]: RK4 and piecewise matrix-exponential propagation,
//! * [`analysis`]: oscillation counting and exponential envelope fits,
//! * [`physics`]: closed-form beam and cavity design calculators.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod analysis;
pub mod engine;
pub mod error;
pub mod linalg;
pub mod model;
pub mod physics;
pub mod state;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Mat4};
pub use num_complex::Complex64 as C64;
pub use state::DensityMatrix;
