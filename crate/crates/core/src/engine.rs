//! Time evolution of the joint density matrix.
//!
//! Two independent propagators are provided: classical fixed-step RK4 on the
//! master-equation right-hand side, and a piecewise-constant matrix
//! exponential of the 16×16 Liouvillian frozen at each step midpoint.

use alloc::vec::Vec;
use alloc::{format, string::String};
use core::fmt;
use core::str::FromStr;

use num_complex::Complex64 as C64;
// Unused when another crate links std and brings inherent float methods.
#[allow(unused_imports)]
use num_traits::Float;

use crate::analysis::ObservableSeries;
use crate::error::{Error, Result};
use crate::linalg::{matrix_exponential, ComplexMatrix, Mat4};
use crate::model::{Generator, ModelParameters, Periodicity};
use crate::state::{basis, validate_density, DensityMatrix};

/// Time steps per period of the fastest frequency required by default.
pub const STEPS_PER_PERIOD: f64 = 20.0;

/// Snapshots must pass [`validate_density`] at this tolerance.
pub const SNAPSHOT_TOLERANCE: f64 = 1e-6;

/// Automatic record strides aim for about this many snapshots.
pub const TARGET_RECORDS: usize = 2000;

/// Propagator caches larger than this are not built.
const MAX_CACHED_PROPAGATORS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Method {
    Rk4,
    ExpmPiecewise,
}

impl Method {
    pub const fn as_str(self) -> &'static str {
        match self {
            Method::Rk4 => "rk4",
            Method::ExpmPiecewise => "expm_piecewise",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "rk4" => Ok(Method::Rk4),
            "expm_piecewise" | "expm" => Ok(Method::ExpmPiecewise),
            other => Err(Error::Config(format!("unknown method '{other}' (rk4, expm_piecewise)"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct IntegratorConfig {
    /// s
    pub t_end: f64,
    /// s
    pub dt: f64,
    pub method: Method,
    /// Record every n-th step. The initial and final states are always kept.
    pub record_stride: usize,
    /// Divide by the trace after every step.
    pub renormalize: bool,
    /// Accept steps longer than the resolution limit.
    pub allow_coarse_step: bool,
}

impl IntegratorConfig {
    pub fn new(t_end: f64, dt: f64, method: Method) -> Self {
        Self {
            t_end,
            dt,
            method,
            record_stride: 1,
            renormalize: false,
            allow_coarse_step: false,
        }
    }

    /// Picks a step that resolves the fastest frequency of `p` and, for
    /// periodic generators, divides the drive period exactly. The stride is
    /// chosen for about [`TARGET_RECORDS`] snapshots.
    pub fn auto(p: &ModelParameters, t_end: f64, method: Method) -> Result<Self> {
        let dt = auto_dt(&Generator::new(p)?, t_end)?;
        let steps = step_count(t_end, dt);
        Ok(Self {
            record_stride: (steps / TARGET_RECORDS).max(1),
            ..Self::new(t_end, dt, method)
        })
    }

    pub fn step_count(&self) -> usize {
        step_count(self.t_end, self.dt)
    }

    /// Checks the config and the step-size limit for `gen`.
    pub fn validate(&self, gen: &Generator) -> Result<()> {
        if !(self.t_end.is_finite() && self.t_end > 0.0) {
            return Err(Error::Config(format!("t_end must be positive, got {}", self.t_end)));
        }
        if !(self.dt.is_finite() && self.dt > 0.0 && self.dt <= self.t_end) {
            return Err(Error::Config(format!(
                "dt must satisfy 0 < dt <= t_end, got dt = {} with t_end = {}",
                self.dt, self.t_end
            )));
        }
        if self.record_stride == 0 {
            return Err(Error::Config("record_stride must be at least 1".into()));
        }
        // A frozen static generator is propagated exactly at any step.
        let exact = self.method == Method::ExpmPiecewise && gen.periodicity() == Periodicity::Static;
        let limit = max_stable_dt(gen);
        if !exact && !self.allow_coarse_step && self.dt > limit * (1.0 + 1e-12) {
            return Err(Error::Config(format!(
                "dt = {:e} s exceeds the resolution limit {:e} s (2π/ω_max/{}); \
                 set allow_coarse_step to override",
                self.dt, limit, STEPS_PER_PERIOD
            )));
        }
        Ok(())
    }
}

fn step_count(t_end: f64, dt: f64) -> usize {
    let n = t_end / dt;
    let r = n.round();
    if (n - r).abs() <= 1e-9 * r.max(1.0) {
        (r as usize).max(1)
    } else {
        n.ceil() as usize
    }
}

/// `(2π/ω_max)/20`, infinite when nothing evolves.
pub fn max_stable_dt(gen: &Generator) -> f64 {
    let w = gen.omega_max();
    if w > 0.0 {
        core::f64::consts::TAU / w / STEPS_PER_PERIOD
    } else {
        f64::INFINITY
    }
}

/// Default step for `gen` over `[0, t_end]`.
pub fn auto_dt(gen: &Generator, t_end: f64) -> Result<f64> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::Config(format!("t_end must be positive, got {t_end}")));
    }
    let limit = max_stable_dt(gen);
    if let Periodicity::Periodic(period) = gen.periodicity() {
        let n = (period / limit).ceil().max(1.0);
        return Ok(period / n);
    }
    // Static or aperiodic generators: keep at least 10⁴ steps for accuracy.
    let target = limit.min(t_end / 1e4);
    Ok(t_end / (t_end / target).ceil())
}

/// Starting state of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InitialState {
    /// `|g,n⟩⟨g,n|`
    Gn,
    /// `|e,m⟩⟨e,m|`
    Em,
    Custom(DensityMatrix),
}

impl InitialState {
    pub fn density(&self) -> DensityMatrix {
        match self {
            InitialState::Gn => DensityMatrix::basis_state(basis::GN),
            InitialState::Em => DensityMatrix::basis_state(basis::EM),
            InitialState::Custom(rho) => *rho,
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            InitialState::Gn => "gn",
            InitialState::Em => "em",
            InitialState::Custom(_) => "custom",
        }
    }
}

impl FromStr for InitialState {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "gn" => Ok(InitialState::Gn),
            "em" => Ok(InitialState::Em),
            other => Err(Error::Config(format!("unknown initial state '{other}' (gn, em)"))),
        }
    }
}

/// Numerical health of a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunDiagnostics {
    pub steps: usize,
    pub dt: f64,
    /// The step exceeded the resolution limit under an override.
    pub coarse_step: bool,
    /// `max |tr ρ - 1|` over every step.
    pub max_trace_drift: f64,
    /// Worst values over the recorded snapshots.
    pub max_hermiticity_deviation: f64,
    pub min_eigenvalue: f64,
    /// Propagators built by the exponential method.
    pub propagators: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectoryRecord {
    /// s, strictly increasing.
    pub times: Vec<f64>,
    pub states: Vec<DensityMatrix>,
    pub observables: ObservableSeries,
    pub diagnostics: RunDiagnostics,
}

impl TrajectoryRecord {
    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> Option<&DensityMatrix> {
        self.states.last()
    }
}

/// Collects snapshots and structure diagnostics.
struct Recorder {
    times: Vec<f64>,
    states: Vec<DensityMatrix>,
    obs: ObservableSeries,
    diag: RunDiagnostics,
}

impl Recorder {
    fn new(cfg: &IntegratorConfig, gen: &Generator) -> Self {
        let cap = cfg.step_count() / cfg.record_stride + 2;
        Self {
            times: Vec::with_capacity(cap),
            states: Vec::with_capacity(cap),
            obs: ObservableSeries::with_capacity(cap),
            diag: RunDiagnostics {
                steps: cfg.step_count(),
                dt: cfg.dt,
                coarse_step: cfg.dt > max_stable_dt(gen) * (1.0 + 1e-12),
                min_eigenvalue: f64::INFINITY,
                ..Default::default()
            },
        }
    }

    fn record(&mut self, step: usize, t: f64, rho: &Mat4) -> Result<()> {
        let report = validate_density(rho, SNAPSHOT_TOLERANCE);
        if !rho.is_finite() || !report.passed() {
            return Err(Error::Divergence { step, time: t });
        }
        self.diag.max_hermiticity_deviation =
            self.diag.max_hermiticity_deviation.max(report.hermiticity_deviation);
        self.diag.min_eigenvalue = self.diag.min_eigenvalue.min(report.min_eigenvalue);
        self.diag.max_trace_drift = self.diag.max_trace_drift.max(report.trace_deviation);
        self.times.push(t);
        self.states.push(DensityMatrix::from_evolved(*rho));
        self.obs.push(rho);
        Ok(())
    }

    fn track(&mut self, step: usize, t: f64, rho: &Mat4) -> Result<()> {
        let tr = rho.trace();
        if !(tr.re.is_finite() && tr.im.is_finite()) {
            return Err(Error::Divergence { step, time: t });
        }
        self.diag.max_trace_drift = self.diag.max_trace_drift.max((tr - C64::new(1.0, 0.0)).norm());
        Ok(())
    }

    fn finish(self) -> TrajectoryRecord {
        TrajectoryRecord {
            times: self.times,
            states: self.states,
            observables: self.obs,
            diagnostics: self.diag,
        }
    }
}

/// Runs the configured method from a named or custom initial state.
pub fn run_experiment(p: &ModelParameters, initial: InitialState, cfg: &IntegratorConfig) -> Result<TrajectoryRecord> {
    let rho0 = initial.density();
    match cfg.method {
        Method::Rk4 => integrate_rk4(&rho0, p, cfg),
        Method::ExpmPiecewise => propagate_expm_piecewise(&rho0, p, cfg),
    }
}

fn finish_step(rho: &mut Mat4, renormalize: bool) {
    *rho = rho.hermitian_part();
    if renormalize {
        let tr = rho.trace().re;
        if tr != 0.0 && tr.is_finite() {
            *rho = rho.scale_real(1.0 / tr);
        }
    }
}

fn is_recorded(step: usize, steps: usize, stride: usize) -> bool {
    step.is_multiple_of(stride) || step == steps
}

/// Time of step `k`; the last step ends exactly at `t_end`.
fn step_time(k: usize, steps: usize, cfg: &IntegratorConfig) -> f64 {
    if k == steps {
        cfg.t_end
    } else {
        k as f64 * cfg.dt
    }
}

/// Classical fourth-order Runge–Kutta with Hermitian symmetrization.
pub fn integrate_rk4(rho0: &DensityMatrix, p: &ModelParameters, cfg: &IntegratorConfig) -> Result<TrajectoryRecord> {
    let gen = Generator::new(p)?;
    cfg.validate(&gen)?;
    let steps = cfg.step_count();
    let mut rec = Recorder::new(cfg, &gen);
    let mut rho = *rho0.matrix();
    rec.record(0, 0.0, &rho)?;

    let ham = gen.hamiltonian();
    let is_static = ham.is_static();
    let h_static = ham.static_part();
    let h_at = |t: f64| if is_static { h_static } else { ham.at(t) };

    let mut t0 = 0.0;
    let mut h0 = h_at(0.0);
    for k in 1..=steps {
        let t1 = step_time(k, steps, cfg);
        let h = t1 - t0;
        let hm = h_at(t0 + 0.5 * h);
        let h1 = h_at(t1);
        let k1 = gen.rhs_with_hamiltonian(&rho, &h0);
        let k2 = gen.rhs_with_hamiltonian(&(rho + k1.scale_real(0.5 * h)), &hm);
        let k3 = gen.rhs_with_hamiltonian(&(rho + k2.scale_real(0.5 * h)), &hm);
        let k4 = gen.rhs_with_hamiltonian(&(rho + k3.scale_real(h)), &h1);
        rho += (k1 + (k2 + k3).scale_real(2.0) + k4).scale_real(h / 6.0);
        finish_step(&mut rho, cfg.renormalize);
        rec.track(k, t1, &rho)?;
        if is_recorded(k, steps, cfg.record_stride) {
            rec.record(k, t1, &rho)?;
        }
        t0 = t1;
        h0 = h1;
    }
    Ok(rec.finish())
}

/// Source of step propagators `exp(L(t_mid)·h)`.
enum Propagators {
    /// One propagator for every full step.
    Static(ComplexMatrix),
    /// One propagator per step phase within a drive period.
    Cycle(Vec<ComplexMatrix>),
    /// Built on demand.
    OnDemand,
}

fn step_propagator(gen: &Generator, t_mid: f64, h: f64) -> Result<ComplexMatrix> {
    matrix_exponential(&gen.liouvillian(t_mid).matrix, h)
}

/// Exponential midpoint rule on the vectorized state.
pub fn propagate_expm_piecewise(
    rho0: &DensityMatrix,
    p: &ModelParameters,
    cfg: &IntegratorConfig,
) -> Result<TrajectoryRecord> {
    let gen = Generator::new(p)?;
    cfg.validate(&gen)?;
    let steps = cfg.step_count();
    let dt = cfg.dt;
    let mut rec = Recorder::new(cfg, &gen);
    let mut rho = *rho0.matrix();
    rec.record(0, 0.0, &rho)?;

    let cache = match gen.periodicity() {
        Periodicity::Static => {
            rec.diag.propagators = 1;
            Propagators::Static(step_propagator(&gen, 0.0, dt)?)
        }
        Periodicity::Periodic(period) => {
            let n = period / dt;
            let r = n.round();
            if r >= 1.0 && (n - r).abs() <= 1e-9 * r && (r as usize) <= MAX_CACHED_PROPAGATORS {
                let props = (0..r as usize)
                    .map(|k| step_propagator(&gen, (k as f64 + 0.5) * dt, dt))
                    .collect::<Result<Vec<_>>>()?;
                rec.diag.propagators = props.len();
                Propagators::Cycle(props)
            } else {
                Propagators::OnDemand
            }
        }
        Periodicity::Aperiodic => Propagators::OnDemand,
    };

    let mut v = rho.vectorize();
    let mut out = [C64::new(0.0, 0.0); 16];
    let mut t0 = 0.0;
    for k in 1..=steps {
        let t1 = step_time(k, steps, cfg);
        let h = t1 - t0;
        let full = k < steps || (h - dt).abs() <= 1e-9 * dt;
        let owned;
        let prop = match (&cache, full) {
            (Propagators::Static(m), true) => m,
            (Propagators::Cycle(ms), true) => &ms[(k - 1) % ms.len()],
            _ => {
                owned = step_propagator(&gen, t0 + 0.5 * h, h)?;
                rec.diag.propagators += 1;
                &owned
            }
        };
        prop.mul_vec_into(&v, &mut out);
        rho = Mat4::from_vectorized(&out);
        finish_step(&mut rho, cfg.renormalize);
        v = rho.vectorize();
        rec.track(k, t1, &rho)?;
        if is_recorded(k, steps, cfg.record_stride) {
            rec.record(k, t1, &rho)?;
        }
        t0 = t1;
    }
    Ok(rec.finish())
}

/// Largest absolute difference between matching observables of two runs
/// recorded on the same grid.
pub fn max_observable_difference(a: &TrajectoryRecord, b: &TrajectoryRecord) -> Result<f64> {
    if a.times.len() != b.times.len() {
        return Err(Error::Input(format!(
            "trajectories have {} and {} records",
            a.times.len(),
            b.times.len()
        )));
    }
    let pairs = [
        (&a.observables.p_gn, &b.observables.p_gn),
        (&a.observables.p_em, &b.observables.p_em),
        (&a.observables.d, &b.observables.d),
        (&a.observables.s, &b.observables.s),
    ];
    Ok(pairs
        .iter()
        .flat_map(|(x, y)| x.iter().zip(y.iter()).map(|(u, w)| (u - w).abs()))
        .fold(0.0, f64::max))
}

/// Human-readable one-line summary of the diagnostics.
pub fn describe(d: &RunDiagnostics) -> String {
    format!(
        "{} steps of {:e} s, trace drift {:.2e}, hermiticity {:.2e}, min eigenvalue {:.2e}{}",
        d.steps,
        d.dt,
        d.max_trace_drift,
        d.max_hermiticity_deviation,
        d.min_eigenvalue,
        if d.coarse_step { " (coarse step override)" } else { "" }
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{preset, Frame, PresetName, SigmaZConvention};

    fn decay() -> ModelParameters {
        ModelParameters {
            kappa_q: 150.0,
            ..ModelParameters::zero()
        }
    }

    #[test]
    fn free_state_is_stationary() {
        let cfg = IntegratorConfig::new(0.01, 1e-4, Method::Rk4);
        let tr = run_experiment(&ModelParameters::zero(), InitialState::Em, &cfg).unwrap();
        assert!(tr.observables.p_em.iter().all(|&x| x == 1.0));
        assert_eq!(tr.len(), 101);
    }

    #[test]
    fn analytic_decay_both_methods() {
        let want = (-1.5f64).exp();
        let cfg = IntegratorConfig::new(0.01, 1e-5, Method::Rk4);
        let tr = run_experiment(&decay(), InitialState::Em, &cfg).unwrap();
        assert!((tr.observables.p_em.last().unwrap() - want).abs() < 1e-6);
        assert!((tr.observables.p_em.last().unwrap() - 0.22313).abs() < 1e-5);

        let cfg = IntegratorConfig::new(0.01, 1e-3, Method::ExpmPiecewise);
        let tr = run_experiment(&decay(), InitialState::Em, &cfg).unwrap();
        assert!((tr.observables.p_em.last().unwrap() - want).abs() < 1e-9);
        // Decay feeds |g,m⟩, so P_gn stays zero.
        assert!(tr.observables.p_gn.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn rk4_is_fourth_order() {
        let p = ModelParameters {
            kappa_q: 1500.0,
            ..ModelParameters::zero()
        };
        let want = (-15.0f64).exp();
        let err = |dt| {
            let mut cfg = IntegratorConfig::new(0.01, dt, Method::Rk4);
            cfg.allow_coarse_step = true;
            let tr = run_experiment(&p, InitialState::Em, &cfg).unwrap();
            (tr.observables.p_em.last().unwrap() - want).abs()
        };
        let ratio = err(1e-4) / err(5e-5);
        assert!(ratio >= 8.0, "ratio {ratio}");
    }

    #[test]
    fn vacuum_rabi_first_zero() {
        let g = 150.0;
        let p = ModelParameters {
            omega0: 1e9,
            omega_m: 1e9,
            coupling_qr: g,
            frame: Frame::Rwa,
            ..ModelParameters::zero()
        };
        let cfg = IntegratorConfig::new(0.02, 1e-6, Method::Rk4);
        let tr = run_experiment(&p, InitialState::Em, &cfg).unwrap();
        let first = tr
            .observables
            .p_em
            .windows(2)
            .position(|w| w[1] > w[0])
            .unwrap();
        let t_zero = tr.times[first];
        let want = core::f64::consts::FRAC_PI_2 / g;
        assert!(((t_zero - want) / want).abs() < 0.01, "{t_zero}");
        for (t, pe) in tr.times.iter().zip(&tr.observables.p_em) {
            assert!((pe - (g * t).cos().powi(2)).abs() < 1e-8);
        }
        for s in &tr.states {
            assert!((s.purity() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn unitary_purity_over_hundred_periods() {
        let p = preset(PresetName::K41).with_couplings_and_rates(150.0, 150.0, 0.0, 0.0);
        let period = core::f64::consts::TAU / p.omega_drive;
        let cfg = IntegratorConfig::auto(&p, 100.0 * period, Method::Rk4).unwrap();
        let tr = run_experiment(&p, InitialState::Em, &cfg).unwrap();
        for s in &tr.states {
            assert!((s.purity() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn static_expm_is_partition_independent() {
        let mut p = preset(PresetName::K41);
        p.frame = Frame::Rwa;
        let one = IntegratorConfig::new(0.01, 0.01, Method::ExpmPiecewise);
        let many = IntegratorConfig::new(0.01, 1e-4, Method::ExpmPiecewise);
        let a = run_experiment(&p, InitialState::Em, &one).unwrap();
        let b = run_experiment(&p, InitialState::Em, &many).unwrap();
        let diff = a.final_state().unwrap().matrix().max_abs_diff(b.final_state().unwrap().matrix());
        assert!(diff < 1e-10, "{diff}");
    }

    #[test]
    fn coarse_step_requires_override() {
        let p = preset(PresetName::K41);
        let cfg = IntegratorConfig::new(1e-6, 1e-8, Method::Rk4);
        assert!(matches!(run_experiment(&p, InitialState::Em, &cfg), Err(Error::Config(_))));
    }

    #[test]
    fn nan_parameters_rejected_and_divergence_reported() {
        let mut p = decay();
        p.kappa_q = f64::NAN;
        let cfg = IntegratorConfig::new(0.01, 1e-4, Method::Rk4);
        assert!(matches!(run_experiment(&p, InitialState::Em, &cfg), Err(Error::Config(_))));

        // Forced instability: RK4 with hκ = 10.
        let p = ModelParameters {
            kappa_q: 1e5,
            ..ModelParameters::zero()
        };
        let mut cfg = IntegratorConfig::new(0.01, 1e-4, Method::Rk4);
        cfg.allow_coarse_step = true;
        assert!(matches!(
            run_experiment(&p, InitialState::Em, &cfg),
            Err(Error::Divergence { step: 1, .. })
        ));
    }

    #[test]
    fn dissipation_makes_sum_non_increasing() {
        let p = ModelParameters {
            omega0: 1e3,
            omega_m: 2e3,
            kappa_q: 100.0,
            kappa_r: 300.0,
            ..ModelParameters::zero()
        };
        let rho0 = DensityMatrix::pure([C64::new(0.0, 0.0), C64::new(0.6, 0.0), C64::new(0.0, 0.8), C64::new(0.0, 0.0)]).unwrap();
        let cfg = IntegratorConfig::auto(&p, 0.02, Method::Rk4).unwrap();
        let tr = integrate_rk4(&rho0, &p, &cfg).unwrap();
        assert!(tr.observables.s.windows(2).all(|w| w[1] <= w[0] + 1e-15));
    }

    #[test]
    fn convention_does_not_change_free_populations() {
        let run = |conv| {
            let p = ModelParameters {
                omega0: 3e3,
                omega_m: 1e3,
                kappa_q: 50.0,
                sigma_z_convention: conv,
                ..ModelParameters::zero()
            };
            let s = 0.5f64.sqrt();
            let rho0 = DensityMatrix::pure([C64::new(s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, s), C64::new(0.0, 0.0)]).unwrap();
            let cfg = IntegratorConfig::auto(&p, 0.01, Method::Rk4).unwrap();
            integrate_rk4(&rho0, &p, &cfg).unwrap()
        };
        let a = run(SigmaZConvention::GroundPositive);
        let b = run(SigmaZConvention::Standard);
        for (x, y) in a.states.iter().zip(&b.states) {
            for i in 0..4 {
                assert!((x.population(i) - y.population(i)).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn auto_dt_divides_drive_period() {
        let p = preset(PresetName::K41);
        let cfg = IntegratorConfig::auto(&p, 1e-6, Method::ExpmPiecewise).unwrap();
        let period = core::f64::consts::TAU / p.omega_drive;
        let n = period / cfg.dt;
        assert!((n - n.round()).abs() < 1e-9);
        assert!(cfg.dt <= max_stable_dt(&Generator::new(&p).unwrap()));
        let tr = run_experiment(&p, InitialState::Em, &cfg).unwrap();
        assert_eq!(tr.diagnostics.propagators as f64, n.round() + 1.0);
        assert_eq!(*tr.times.last().unwrap(), 1e-6);
    }
}
