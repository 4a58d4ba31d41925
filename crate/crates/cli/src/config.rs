//! Flat `key = value` run configuration.
//!
//! A `#` starts a comment anywhere on a line. Keys may appear in any order and
//! at most once. Preset defaults are applied first, then every explicit model
//! key overrides them.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::str::FromStr;

use beamqubit_core::engine::{InitialState, IntegratorConfig, Method, TARGET_RECORDS};
use beamqubit_core::model::{preset_with, Frame, Generator, ModelParameters, PresetName, PresetOptions, SigmaZConvention};
use beamqubit_core::analysis::DEFAULT_HYSTERESIS;

use crate::error::{CliError, CliResult};

pub const DEFAULT_T_END: f64 = 1e-3;

/// Model keys accepted by sweeps, in render order.
pub const NUMERIC_MODEL_KEYS: [&str; 11] = [
    "omega0",
    "omegaM",
    "omega_drive",
    "drive_phase",
    "rabi_B",
    "coupling_qr",
    "coupling_br",
    "kappa_q",
    "kappa_r",
    "scale",
    "rwa_cutoff",
];

const OTHER_KEYS: [&str; 17] = [
    "preset",
    "frame",
    "sigma_z_convention",
    "hz_is_angular",
    "beam_field",
    "gyromagnetic_ratio",
    "t_end",
    "dt",
    "method",
    "record_stride",
    "renormalize",
    "allow_coarse_step",
    "initial_state",
    "csv_path",
    "report_path",
    "record_full_state",
    "hysteresis",
];

/// Integrator settings before the step is resolved against a model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IntegratorSettings {
    pub t_end: f64,
    /// `None` picks the step automatically.
    pub dt: Option<f64>,
    pub method: Method,
    /// `None` targets about two thousand snapshots.
    pub record_stride: Option<usize>,
    pub renormalize: bool,
    pub allow_coarse_step: bool,
}

impl Default for IntegratorSettings {
    fn default() -> Self {
        Self {
            t_end: DEFAULT_T_END,
            dt: None,
            method: Method::Rk4,
            record_stride: None,
            renormalize: false,
            allow_coarse_step: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub preset: Option<PresetName>,
    pub preset_options: PresetOptions,
    pub model: ModelParameters,
    pub integrator: IntegratorSettings,
    /// `gn` or `em`.
    pub initial_state: InitialState,
    pub csv_path: Option<PathBuf>,
    pub report_path: Option<PathBuf>,
    pub record_full_state: bool,
    pub hysteresis: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            preset: None,
            preset_options: PresetOptions::default(),
            model: ModelParameters::zero(),
            integrator: IntegratorSettings::default(),
            initial_state: InitialState::Em,
            csv_path: None,
            report_path: None,
            record_full_state: false,
            hysteresis: DEFAULT_HYSTERESIS,
        }
    }
}

impl RunConfig {
    /// Config for a named preset with every other setting at its default.
    pub fn from_preset(name: PresetName) -> Self {
        let opts = PresetOptions::default();
        Self {
            preset: Some(name),
            preset_options: opts,
            model: preset_with(name, &opts),
            ..Self::default()
        }
    }

    /// Checks every invariant, including the step-size limit.
    pub fn validate(&self) -> CliResult<()> {
        self.model.validate()?;
        self.integrator_config()?;
        if !matches!(self.initial_state, InitialState::Gn | InitialState::Em) {
            return Err(CliError::Config("initial_state must be gn or em".into()));
        }
        if !(self.hysteresis.is_finite() && self.hysteresis >= 0.0) {
            return Err(CliError::Config(format!("hysteresis must be non-negative, got {}", self.hysteresis)));
        }
        let o = &self.preset_options;
        for (key, v) in [("beam_field", o.beam_field), ("gyromagnetic_ratio", o.gyromagnetic_ratio)] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(CliError::Config(format!("{key} must be finite and non-negative, got {v}")));
            }
        }
        for (key, path) in [("csv_path", &self.csv_path), ("report_path", &self.report_path)] {
            if let Some(p) = path {
                let s = p.to_string_lossy();
                if s.trim().is_empty() || s.trim() != s || s.contains(['#', '\n', '\r']) {
                    return Err(CliError::Config(format!(
                        "{key} must be non-empty without '#', line breaks or surrounding spaces"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Resolves the automatic step and stride for this model.
    pub fn integrator_config(&self) -> CliResult<IntegratorConfig> {
        let s = &self.integrator;
        let p = self.model.effective();
        let gen = Generator::new(&p)?;
        let mut cfg = match s.dt {
            Some(dt) => IntegratorConfig::new(s.t_end, dt, s.method),
            None => IntegratorConfig::auto(&p, s.t_end, s.method)?,
        };
        if s.dt.is_some() {
            cfg.record_stride = (cfg.step_count() / TARGET_RECORDS).max(1);
        }
        if let Some(stride) = s.record_stride {
            cfg.record_stride = stride;
        }
        cfg.renormalize = s.renormalize;
        cfg.allow_coarse_step = s.allow_coarse_step;
        cfg.validate(&gen)?;
        Ok(cfg)
    }

    pub fn numeric_model_value(&self, key: &str) -> Option<f64> {
        let m = &self.model;
        Some(match key {
            "omega0" => m.omega0,
            "omegaM" => m.omega_m,
            "omega_drive" => m.omega_drive,
            "drive_phase" => m.drive_phase,
            "rabi_B" => m.rabi_b,
            "coupling_qr" => m.coupling_qr,
            "coupling_br" => m.coupling_br,
            "kappa_q" => m.kappa_q,
            "kappa_r" => m.kappa_r,
            "scale" => m.scale,
            "rwa_cutoff" => m.rwa_cutoff,
            _ => return None,
        })
    }

    /// Sets a numeric model field by its config key.
    pub fn set_numeric_model_value(&mut self, key: &str, value: f64) -> CliResult<()> {
        let m = &mut self.model;
        let slot = match key {
            "omega0" => &mut m.omega0,
            "omegaM" => &mut m.omega_m,
            "omega_drive" => &mut m.omega_drive,
            "drive_phase" => &mut m.drive_phase,
            "rabi_B" => &mut m.rabi_b,
            "coupling_qr" => &mut m.coupling_qr,
            "coupling_br" => &mut m.coupling_br,
            "kappa_q" => &mut m.kappa_q,
            "kappa_r" => &mut m.kappa_r,
            "scale" => &mut m.scale,
            "rwa_cutoff" => &mut m.rwa_cutoff,
            other => {
                return Err(CliError::Config(format!(
                    "'{other}' is not a numeric model key ({})",
                    NUMERIC_MODEL_KEYS.join(", ")
                )))
            }
        };
        *slot = value;
        Ok(())
    }
}

/// Writes a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Renders every key explicitly, so the text does not depend on preset defaults.
pub fn render(cfg: &RunConfig) -> String {
    let mut out = String::new();
    let mut line = |k: &str, v: String| {
        let _ = writeln!(out, "{k} = {v}");
    };
    if let Some(p) = cfg.preset {
        line("preset", p.as_str().into());
    }
    line("hz_is_angular", cfg.preset_options.hz_is_angular.to_string());
    line("beam_field", fmt_f64(cfg.preset_options.beam_field));
    line("gyromagnetic_ratio", fmt_f64(cfg.preset_options.gyromagnetic_ratio));
    for key in NUMERIC_MODEL_KEYS {
        line(key, fmt_f64(cfg.numeric_model_value(key).unwrap()));
    }
    line("frame", cfg.model.frame.as_str().into());
    line("sigma_z_convention", cfg.model.sigma_z_convention.as_str().into());

    let s = &cfg.integrator;
    line("t_end", fmt_f64(s.t_end));
    line("dt", s.dt.map_or_else(|| "auto".into(), fmt_f64));
    line("method", s.method.as_str().into());
    line("record_stride", s.record_stride.map_or_else(|| "auto".into(), |n| n.to_string()));
    line("renormalize", s.renormalize.to_string());
    line("allow_coarse_step", s.allow_coarse_step.to_string());

    line("initial_state", cfg.initial_state.label().into());
    if let Some(p) = &cfg.csv_path {
        line("csv_path", p.display().to_string());
    }
    if let Some(p) = &cfg.report_path {
        line("report_path", p.display().to_string());
    }
    line("record_full_state", cfg.record_full_state.to_string());
    line("hysteresis", fmt_f64(cfg.hysteresis));
    out
}

struct Entry {
    line: usize,
    value: String,
}

impl Entry {
    fn parse<T: FromStr>(&self, key: &str, kind: &str) -> CliResult<T> {
        self.value.parse().map_err(|_| {
            CliError::Config(format!(
                "line {}: {key} expects {kind}, got '{}'",
                self.line, self.value
            ))
        })
    }

    fn real(&self, key: &str) -> CliResult<f64> {
        let v: f64 = self.parse(key, "a real number")?;
        if !v.is_finite() {
            return Err(CliError::Config(format!("line {}: {key} must be finite", self.line)));
        }
        Ok(v)
    }

    fn flag(&self, key: &str) -> CliResult<bool> {
        self.parse(key, "true or false")
    }

    fn named<T: FromStr<Err = beamqubit_core::Error>>(&self, key: &str) -> CliResult<T> {
        self.value
            .parse()
            .map_err(|e| CliError::Config(format!("line {}: {key}: {e}", self.line)))
    }

    fn auto_or<T>(&self, f: impl FnOnce() -> CliResult<T>) -> CliResult<Option<T>> {
        if self.value.eq_ignore_ascii_case("auto") {
            Ok(None)
        } else {
            f().map(Some)
        }
    }
}

fn tokenize(text: &str) -> CliResult<BTreeMap<String, Entry>> {
    let mut entries = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {line}: expected 'key = value', got '{content}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if !NUMERIC_MODEL_KEYS.contains(&key) && !OTHER_KEYS.contains(&key) {
            return Err(CliError::Config(format!("line {line}: unknown key '{key}'")));
        }
        if value.is_empty() {
            return Err(CliError::Config(format!("line {line}: {key} has no value")));
        }
        let entry = Entry {
            line,
            value: value.to_string(),
        };
        if let Some(prev) = entries.insert(key.to_string(), entry) {
            return Err(CliError::Config(format!(
                "line {line}: duplicate key '{key}' (first set on line {})",
                prev.line
            )));
        }
    }
    Ok(entries)
}

/// Strict parse followed by [`RunConfig::validate`].
pub fn parse_config(text: &str) -> CliResult<RunConfig> {
    let mut entries = tokenize(text)?;
    let mut cfg = RunConfig::default();
    let mut take = |key: &str| entries.remove(key);

    let opts = &mut cfg.preset_options;
    if let Some(e) = take("hz_is_angular") {
        opts.hz_is_angular = e.flag("hz_is_angular")?;
    }
    if let Some(e) = take("beam_field") {
        opts.beam_field = e.real("beam_field")?;
    }
    if let Some(e) = take("gyromagnetic_ratio") {
        opts.gyromagnetic_ratio = e.real("gyromagnetic_ratio")?;
    }
    if let Some(e) = take("preset") {
        let name: PresetName = e.named("preset")?;
        cfg.preset = Some(name);
        cfg.model = preset_with(name, &cfg.preset_options);
    }
    for key in NUMERIC_MODEL_KEYS {
        if let Some(e) = take(key) {
            let v = e.real(key)?;
            cfg.set_numeric_model_value(key, v)?;
        }
    }
    if let Some(e) = take("frame") {
        cfg.model.frame = e.named::<Frame>("frame")?;
    }
    if let Some(e) = take("sigma_z_convention") {
        cfg.model.sigma_z_convention = e.named::<SigmaZConvention>("sigma_z_convention")?;
    }

    let s = &mut cfg.integrator;
    if let Some(e) = take("t_end") {
        s.t_end = e.real("t_end")?;
    }
    if let Some(e) = take("dt") {
        s.dt = e.auto_or(|| e.real("dt"))?;
    }
    if let Some(e) = take("method") {
        s.method = e.named("method")?;
    }
    if let Some(e) = take("record_stride") {
        s.record_stride = e.auto_or(|| e.parse("record_stride", "a positive integer or auto"))?;
    }
    if let Some(e) = take("renormalize") {
        s.renormalize = e.flag("renormalize")?;
    }
    if let Some(e) = take("allow_coarse_step") {
        s.allow_coarse_step = e.flag("allow_coarse_step")?;
    }

    if let Some(e) = take("initial_state") {
        cfg.initial_state = e.named("initial_state")?;
    }
    if let Some(e) = take("csv_path") {
        cfg.csv_path = Some(PathBuf::from(e.value));
    }
    if let Some(e) = take("report_path") {
        cfg.report_path = Some(PathBuf::from(e.value));
    }
    if let Some(e) = take("record_full_state") {
        cfg.record_full_state = e.flag("record_full_state")?;
    }
    if let Some(e) = take("hysteresis") {
        cfg.hysteresis = e.real("hysteresis")?;
    }
    debug_assert!(entries.is_empty());

    cfg.validate()?;
    Ok(cfg)
}

/// A sweep over one numeric model key.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub parameter: String,
    pub values: Vec<f64>,
    pub parallelism: usize,
}

impl SweepSpec {
    pub fn validate(&self) -> CliResult<()> {
        if !NUMERIC_MODEL_KEYS.contains(&self.parameter.as_str()) {
            return Err(CliError::Config(format!(
                "sweep parameter '{}' is not a numeric model key ({})",
                self.parameter,
                NUMERIC_MODEL_KEYS.join(", ")
            )));
        }
        if self.values.is_empty() {
            return Err(CliError::Config("sweep needs at least one value".into()));
        }
        if let Some(v) = self.values.iter().find(|v| !v.is_finite()) {
            return Err(CliError::Config(format!("sweep value {v} is not finite")));
        }
        let mut sorted = self.values.clone();
        sorted.sort_by(f64::total_cmp);
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(CliError::Config("sweep values must be distinct".into()));
        }
        if self.parallelism == 0 {
            return Err(CliError::Config("parallelism must be at least 1".into()));
        }
        Ok(())
    }
}
