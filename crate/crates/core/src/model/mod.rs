//! Physical model: parameters, presets, Hamiltonian and Lindblad generator.
//!
//! All frequencies are angular (rad/s) and all rates are in 1/s. Hamiltonians
//! are returned divided by ħ.

mod hamiltonian;
mod lindblad;

use alloc::format;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};

pub use hamiltonian::{build_hamiltonian, hamiltonian_series, HarmonicHamiltonian, HarmonicTerm};
pub use lindblad::{
    lindblad_rhs, liouvillian_superoperator, Generator, Liouvillian, Periodicity, JUMP_QUBIT,
    JUMP_RESONATOR,
};

/// Electron-spin gyromagnetic ratio g_e·μ_B/ħ in rad s⁻¹ T⁻¹.
pub const ELECTRON_GYROMAGNETIC_RATIO: f64 = 1.761e11;

/// Drive field at the qubit assumed by the presets, in tesla.
pub const PRESET_BEAM_FIELD: f64 = 3e-9;

/// Qubit and resonator coupling/dissipation constant of the presets, "150 Hz".
pub const PRESET_RATE: f64 = 150.0;

/// Default RWA cutoff: rotating terms slower than this are kept.
pub const DEFAULT_RWA_CUTOFF: f64 = 1e6;

/// Picture in which the state is evolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Frame {
    /// Laboratory frame, no transformation.
    Lab,
    /// Exact frame rotating at the drive frequency with the excitation-number
    /// generator `|e⟩⟨e| ⊗ I + I ⊗ |n⟩⟨n|`.
    Rotating,
    /// Interaction picture with beam-assisted exchange, keeping only terms
    /// that rotate slower than the RWA cutoff.
    Rwa,
}

impl Frame {
    pub const fn as_str(self) -> &'static str {
        match self {
            Frame::Lab => "lab",
            Frame::Rotating => "rotating",
            Frame::Rwa => "rwa",
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Frame {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "lab" => Ok(Frame::Lab),
            "rotating" => Ok(Frame::Rotating),
            "rwa" => Ok(Frame::Rwa),
            other => Err(Error::Config(format!("unknown frame '{other}' (lab, rotating, rwa)"))),
        }
    }
}

/// Sign convention of the qubit Pauli-z operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SigmaZConvention {
    /// `|g⟩⟨g| - |e⟩⟨e|`
    GroundPositive,
    /// `|e⟩⟨e| - |g⟩⟨g|`
    Standard,
}

impl SigmaZConvention {
    pub const fn as_str(self) -> &'static str {
        match self {
            SigmaZConvention::GroundPositive => "ground_positive",
            SigmaZConvention::Standard => "standard",
        }
    }

    /// Eigenvalue of σ_z on the ground and excited qubit levels.
    pub(crate) const fn signs(self) -> [f64; 2] {
        match self {
            SigmaZConvention::GroundPositive => [1.0, -1.0],
            SigmaZConvention::Standard => [-1.0, 1.0],
        }
    }
}

impl fmt::Display for SigmaZConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SigmaZConvention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "ground_positive" => Ok(SigmaZConvention::GroundPositive),
            "standard" => Ok(SigmaZConvention::Standard),
            other => Err(Error::Config(format!(
                "unknown sigma_z convention '{other}' (ground_positive, standard)"
            ))),
        }
    }
}

/// Every physical constant entering the Hamiltonian and the dissipators.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ModelParameters {
    /// Qubit transition frequency ω₀.
    pub omega0: f64,
    /// Resonator frequency ω_M.
    pub omega_m: f64,
    /// Beam modulation frequency ω_e.
    pub omega_drive: f64,
    /// Drive phase φ in `cos(ω_e t + φ)`, radians.
    pub drive_phase: f64,
    /// Magnetic-dipole drive strength Ω_B.
    pub rabi_b: f64,
    /// Qubit–resonator coupling g_n.
    pub coupling_qr: f64,
    /// Beam–resonator coupling g_b.
    pub coupling_br: f64,
    /// Qubit decay rate.
    pub kappa_q: f64,
    /// Resonator decay rate.
    pub kappa_r: f64,
    pub frame: Frame,
    pub sigma_z_convention: SigmaZConvention,
    /// Uniform rescaling λ applied to every frequency and rate.
    pub scale: f64,
    /// Terms rotating faster than this (rad/s) are dropped in [`Frame::Rwa`].
    pub rwa_cutoff: f64,
}

impl Default for ModelParameters {
    fn default() -> Self {
        Self::zero()
    }
}

impl ModelParameters {
    /// Everything off, lab frame, standard σ_z, unit scale.
    pub const fn zero() -> Self {
        Self {
            omega0: 0.0,
            omega_m: 0.0,
            omega_drive: 0.0,
            drive_phase: 0.0,
            rabi_b: 0.0,
            coupling_qr: 0.0,
            coupling_br: 0.0,
            kappa_q: 0.0,
            kappa_r: 0.0,
            frame: Frame::Lab,
            sigma_z_convention: SigmaZConvention::Standard,
            scale: 1.0,
            rwa_cutoff: DEFAULT_RWA_CUTOFF,
        }
    }

    /// Named frequency/rate fields, in a fixed order.
    pub fn numeric_fields(&self) -> [(&'static str, f64); 9] {
        [
            ("omega0", self.omega0),
            ("omegaM", self.omega_m),
            ("omega_drive", self.omega_drive),
            ("rabi_B", self.rabi_b),
            ("coupling_qr", self.coupling_qr),
            ("coupling_br", self.coupling_br),
            ("kappa_q", self.kappa_q),
            ("kappa_r", self.kappa_r),
            ("rwa_cutoff", self.rwa_cutoff),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        for (name, value) in self.numeric_fields() {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::Config(format!(
                    "{name} must be finite and non-negative, got {value}"
                )));
            }
        }
        if !self.drive_phase.is_finite() {
            return Err(Error::Config("drive_phase must be finite".into()));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::Config(format!("scale must be positive, got {}", self.scale)));
        }
        Ok(())
    }

    /// Multiplies every frequency and rate by `lambda`; `scale` is untouched.
    pub fn scaled_by(&self, lambda: f64) -> Self {
        Self {
            omega0: self.omega0 * lambda,
            omega_m: self.omega_m * lambda,
            omega_drive: self.omega_drive * lambda,
            rabi_b: self.rabi_b * lambda,
            coupling_qr: self.coupling_qr * lambda,
            coupling_br: self.coupling_br * lambda,
            kappa_q: self.kappa_q * lambda,
            kappa_r: self.kappa_r * lambda,
            rwa_cutoff: self.rwa_cutoff * lambda,
            ..*self
        }
    }

    /// Parameters with `scale` folded into the frequencies and rates.
    pub fn effective(&self) -> Self {
        if self.scale == 1.0 {
            *self
        } else {
            Self {
                scale: 1.0,
                ..self.scaled_by(self.scale)
            }
        }
    }

    /// Sets the four "150 Hz" constants at once.
    pub fn with_couplings_and_rates(mut self, coupling_qr: f64, coupling_br: f64, kq: f64, kr: f64) -> Self {
        self.coupling_qr = coupling_qr;
        self.coupling_br = coupling_br;
        self.kappa_q = kq;
        self.kappa_r = kr;
        self
    }
}

/// Parameter sets for the two qubit platforms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum PresetName {
    /// ⁴¹K atom, 254 MHz hyperfine transition.
    K41,
    /// NV⁻ centre in diamond, 2.78 GHz.
    Nv,
}

impl PresetName {
    pub const ALL: [PresetName; 2] = [PresetName::K41, PresetName::Nv];

    pub const fn as_str(self) -> &'static str {
        match self {
            PresetName::K41 => "k41",
            PresetName::Nv => "nv",
        }
    }
}

impl fmt::Display for PresetName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for PresetName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "k41" => Ok(PresetName::K41),
            "nv" => Ok(PresetName::Nv),
            other => Err(Error::Config(format!("unknown preset '{other}' (k41, nv)"))),
        }
    }
}

/// Knobs for how a preset turns its quoted constants into parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PresetOptions {
    /// Treat the quoted "150 Hz" couplings as cycles per second and multiply
    /// them by 2π. Dissipation rates are never converted.
    pub hz_is_angular: bool,
    /// Beam field at the qubit, tesla.
    pub beam_field: f64,
    /// Dipole scale |μ|/ħ in rad s⁻¹ T⁻¹.
    pub gyromagnetic_ratio: f64,
}

impl Default for PresetOptions {
    fn default() -> Self {
        Self {
            hz_is_angular: false,
            beam_field: PRESET_BEAM_FIELD,
            gyromagnetic_ratio: ELECTRON_GYROMAGNETIC_RATIO,
        }
    }
}

pub fn preset(name: PresetName) -> ModelParameters {
    preset_with(name, &PresetOptions::default())
}

/// Builds a preset. The drive frequency defaults to `|ω₀ - ω_M|` and the frame
/// to [`Frame::Rotating`].
pub fn preset_with(name: PresetName, opts: &PresetOptions) -> ModelParameters {
    let (omega0, omega_m) = match name {
        PresetName::K41 => (1.60e9, 1.13e9),
        PresetName::Nv => (17.34e9, 12.26e9),
    };
    let coupling = if opts.hz_is_angular {
        core::f64::consts::TAU * PRESET_RATE
    } else {
        PRESET_RATE
    };
    ModelParameters {
        omega0,
        omega_m,
        omega_drive: (omega0 - omega_m).abs(),
        rabi_b: opts.gyromagnetic_ratio * opts.beam_field,
        frame: Frame::Rotating,
        ..ModelParameters::zero()
    }
    .with_couplings_and_rates(coupling, coupling, PRESET_RATE, PRESET_RATE)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k41_preset_values() {
        let p = preset(PresetName::K41);
        assert_eq!(p.omega0, 1.60e9);
        assert_eq!(p.omega_m, 1.13e9);
        assert!((p.omega_drive - 0.47e9).abs() < 1.0);
        assert_eq!(p.coupling_qr, 150.0);
        assert_eq!(p.kappa_r, 150.0);
        assert!((p.rabi_b - 528.3).abs() < 1e-9);
        assert_eq!(p.frame, Frame::Rotating);
    }

    #[test]
    fn nv_preset_values() {
        let p = preset(PresetName::Nv);
        assert_eq!(p.omega0, 17.34e9);
        assert_eq!(p.omega_m, 12.26e9);
        assert!((p.omega_drive - 5.08e9).abs() < 10.0);
    }

    #[test]
    fn hz_switch_converts_couplings_only() {
        let opts = PresetOptions {
            hz_is_angular: true,
            ..Default::default()
        };
        let p = preset_with(PresetName::K41, &opts);
        assert!((p.coupling_qr - 942.477_796_076_938).abs() < 1e-9);
        assert_eq!(p.kappa_q, 150.0);
    }

    #[test]
    fn unknown_names_are_config_errors() {
        assert!(matches!("rb87".parse::<PresetName>(), Err(Error::Config(_))));
        assert!(matches!("dressed".parse::<Frame>(), Err(Error::Config(_))));
        assert_eq!("RWA".parse::<Frame>().unwrap(), Frame::Rwa);
    }

    #[test]
    fn validation_rejects_negative_and_zero_scale() {
        let mut p = preset(PresetName::Nv);
        p.omega0 = -1.0;
        assert!(p.validate().is_err());
        let mut p = preset(PresetName::Nv);
        p.scale = 0.0;
        assert!(p.validate().is_err());
        assert!(preset(PresetName::Nv).validate().is_ok());
    }

    #[test]
    fn effective_folds_scale() {
        let mut p = preset(PresetName::K41);
        p.scale = 2.0;
        let e = p.effective();
        assert_eq!(e.scale, 1.0);
        assert_eq!(e.omega0, 3.2e9);
        assert_eq!(e.kappa_q, 300.0);
        assert_eq!(e.drive_phase, p.drive_phase);
    }
}
