//! Closed-form beam and cavity design calculators.

use alloc::format;

// Unused when another crate links std and brings inherent float methods.
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;
/// μ₀/(2π) in T·m/A.
pub const MU0_OVER_2PI: f64 = 2e-7;
/// Vacuum permeability, T·m/A.
pub const MU0: f64 = 4.0 * core::f64::consts::PI * 1e-7;
/// Electron rest energy, eV.
pub const ELECTRON_REST_ENERGY_EV: f64 = 510_998.95;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;

/// Default ratio below which a "much smaller than" assumption holds.
pub const DEFAULT_ASSUMPTION_THRESHOLD: f64 = 0.1;

/// Rectangular cavity with a TE/TM mode index.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CavityGeometry {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub epsilon_r: f64,
    pub mu_r: f64,
    pub mode: (u32, u32, u32),
}

impl CavityGeometry {
    /// Vacuum-filled cavity.
    pub fn vacuum(l1: f64, l2: f64, l3: f64, mode: (u32, u32, u32)) -> Self {
        Self {
            l1,
            l2,
            l3,
            epsilon_r: 1.0,
            mu_r: 1.0,
            mode,
        }
    }
}

/// `f = c / (2√(ε_r μ_r)) · √((m/l₁)² + (n/l₂)² + (q/l₃)²)` in Hz.
pub fn cavity_resonance_frequency(g: &CavityGeometry) -> Result<f64> {
    let (m, n, q) = g.mode;
    if m == 0 && n == 0 && q == 0 {
        return Err(Error::Domain("mode (0,0,0) does not resonate".into()));
    }
    for (name, l) in [("l1", g.l1), ("l2", g.l2), ("l3", g.l3)] {
        if !(l.is_finite() && l > 0.0) {
            return Err(Error::Domain(format!("cavity dimension {name} must be positive, got {l}")));
        }
    }
    for (name, x) in [("epsilon_r", g.epsilon_r), ("mu_r", g.mu_r)] {
        if !(x.is_finite() && x >= 1.0) {
            return Err(Error::Domain(format!("{name} must be at least 1, got {x}")));
        }
    }
    let k2 = (m as f64 / g.l1).powi(2) + (n as f64 / g.l2).powi(2) + (q as f64 / g.l3).powi(2);
    Ok(SPEED_OF_LIGHT / (2.0 * (g.epsilon_r * g.mu_r).sqrt()) * k2.sqrt())
}

/// Field of an infinite straight wire, `B = μ₀I / (2πh)`, in tesla.
pub fn beam_field_at_distance(current: f64, distance: f64) -> Result<f64> {
    if !(distance.is_finite() && distance > 0.0) {
        return Err(Error::Domain(format!("distance must be positive, got {distance}")));
    }
    if !(current.is_finite() && current >= 0.0) {
        return Err(Error::Domain(format!("current must be non-negative, got {current}")));
    }
    Ok(MU0_OVER_2PI * current / distance)
}

/// Inverse of [`beam_field_at_distance`]: `h = μ₀I / (2πB)`.
pub fn distance_for_target_field(current: f64, target_field: f64) -> Result<f64> {
    if !(current.is_finite() && current > 0.0) {
        return Err(Error::Domain(format!("current must be positive, got {current}")));
    }
    if !(target_field.is_finite() && target_field > 0.0) {
        return Err(Error::Domain(format!("target field must be positive, got {target_field}")));
    }
    Ok(MU0_OVER_2PI * current / target_field)
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Kinematics {
    pub gamma_factor: f64,
    /// v/c
    pub beta: f64,
    /// m/s
    pub speed: f64,
}

/// Relativistic speed of an electron with the given kinetic energy in eV.
pub fn beam_kinematics(kinetic_energy: f64) -> Result<Kinematics> {
    if !(kinetic_energy.is_finite() && kinetic_energy >= 0.0) {
        return Err(Error::Domain(format!(
            "kinetic energy must be finite and non-negative, got {kinetic_energy}"
        )));
    }
    let gamma = 1.0 + kinetic_energy / ELECTRON_REST_ENERGY_EV;
    // 1 - 1/γ² written to avoid cancellation at small energies.
    let x = kinetic_energy / ELECTRON_REST_ENERGY_EV;
    let beta = (x * (x + 2.0)).sqrt() / gamma;
    Ok(Kinematics {
        gamma_factor: gamma,
        beta,
        speed: SPEED_OF_LIGHT * beta,
    })
}

/// Kinetic energy in eV gained by an electron accelerated from rest through
/// `voltage` volts.
pub fn kinetic_energy_from_voltage(voltage: f64) -> Result<f64> {
    if !(voltage.is_finite() && voltage >= 0.0) {
        return Err(Error::Domain(format!("voltage must be non-negative, got {voltage}")));
    }
    Ok(voltage)
}

/// Accelerating voltage that brings an electron from `initial_speed` (m/s) to
/// the given kinetic energy (eV).
pub fn voltage_for_kinetic_energy(kinetic_energy: f64, initial_speed: f64) -> Result<f64> {
    if !(initial_speed.is_finite() && (0.0..SPEED_OF_LIGHT).contains(&initial_speed)) {
        return Err(Error::Domain(format!(
            "initial speed must lie in [0, c), got {initial_speed}"
        )));
    }
    let _ = beam_kinematics(kinetic_energy)?;
    let beta0 = initial_speed / SPEED_OF_LIGHT;
    let ke0 = ELECTRON_REST_ENERGY_EV * (1.0 / (1.0 - beta0 * beta0).sqrt() - 1.0);
    if ke0 > kinetic_energy {
        return Err(Error::Domain(format!(
            "initial kinetic energy {ke0} eV exceeds the target {kinetic_energy} eV"
        )));
    }
    Ok(kinetic_energy - ke0)
}

/// `Ω = γ_dipole · B` in rad/s.
pub fn rabi_frequency(field: f64, gyromagnetic_ratio: f64) -> f64 {
    gyromagnetic_ratio * field
}

/// `|μ| B / ħ` in rad/s for a dipole moment in J/T.
pub fn rabi_frequency_from_dipole(field: f64, dipole_moment: f64) -> f64 {
    dipole_moment * field / HBAR
}

/// Geometry of the beam relative to the qubit.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BeamParameters {
    /// A
    pub current: f64,
    /// a, m
    pub beam_radius: f64,
    /// h, m
    pub distance: f64,
    /// λ₀, m
    pub modulation_wavelength: f64,
    /// Δz, m
    pub packet_length: f64,
    /// eV
    pub kinetic_energy: f64,
    /// V₀, V
    pub accelerating_voltage: f64,
    /// u₀, m/s
    pub initial_speed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum AssumptionStatus {
    Ok,
    Violated,
    /// The denominator was zero or a value was not finite.
    Indeterminate,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AssumptionCheck {
    pub name: &'static str,
    pub ratio: f64,
    pub status: AssumptionStatus,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct AssumptionReport {
    pub threshold: f64,
    /// Δz/λ₀, 2a/h, size/λ₀, size/h in that order.
    pub checks: [AssumptionCheck; 4],
}

impl AssumptionReport {
    pub fn all_ok(&self) -> bool {
        self.checks.iter().all(|c| c.status == AssumptionStatus::Ok)
    }

    pub fn any_violated(&self) -> bool {
        self.checks.iter().any(|c| c.status == AssumptionStatus::Violated)
    }
}

pub fn validate_assumptions(b: &BeamParameters, system_size: f64) -> AssumptionReport {
    validate_assumptions_with(b, system_size, DEFAULT_ASSUMPTION_THRESHOLD)
}

pub fn validate_assumptions_with(b: &BeamParameters, system_size: f64, threshold: f64) -> AssumptionReport {
    let check = |name, num: f64, den: f64| {
        let ratio = if den == 0.0 { f64::NAN } else { num / den };
        let status = if !ratio.is_finite() || ratio < 0.0 {
            AssumptionStatus::Indeterminate
        } else if ratio <= threshold {
            AssumptionStatus::Ok
        } else {
            AssumptionStatus::Violated
        };
        AssumptionCheck { name, ratio, status }
    };
    AssumptionReport {
        threshold,
        checks: [
            check("packet_length/modulation_wavelength", b.packet_length, b.modulation_wavelength),
            check("beam_diameter/distance", 2.0 * b.beam_radius, b.distance),
            check("system_size/modulation_wavelength", system_size, b.modulation_wavelength),
            check("system_size/distance", system_size, b.distance),
        ],
    }
}
