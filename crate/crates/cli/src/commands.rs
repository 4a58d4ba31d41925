use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use beamqubit_core::analysis::{coherence_report, trajectory_report, CoherenceReport};
use beamqubit_core::engine::{run_experiment, TrajectoryRecord};
use beamqubit_core::physics::{
    beam_field_at_distance, beam_kinematics, cavity_resonance_frequency, distance_for_target_field,
    kinetic_energy_from_voltage, validate_assumptions_with, voltage_for_kinetic_energy, AssumptionReport,
    AssumptionStatus, BeamParameters, CavityGeometry,
};
use rayon::prelude::*;

use crate::config::{RunConfig, SweepSpec};
use crate::error::{CliError, CliResult};
use crate::io::{load_trajectory_csv, save_report_json, save_trajectory_csv, write_summary_csv, SummaryRow};

pub struct Simulation {
    pub trajectory: TrajectoryRecord,
    pub report: CoherenceReport,
}

/// Runs one experiment and writes whichever outputs the config names.
pub fn simulate(cfg: &RunConfig) -> CliResult<Simulation> {
    cfg.validate()?;
    let icfg = cfg.integrator_config()?;
    let trajectory = run_experiment(&cfg.model.effective(), cfg.initial_state, &icfg)?;
    let report = trajectory_report(&trajectory, cfg.hysteresis)?;
    if let Some(path) = &cfg.csv_path {
        save_trajectory_csv(path, &trajectory, cfg.record_full_state)?;
    }
    if let Some(path) = &cfg.report_path {
        save_report_json(path, &report)?;
    }
    Ok(Simulation { trajectory, report })
}

/// File stem for one sweep value, e.g. `kappa_q=7.5e1`.
pub fn sweep_stem(parameter: &str, value: f64) -> String {
    format!("{parameter}={value:e}")
}

/// Config of one sweep child, writing into `out_dir`.
pub fn sweep_child(base: &RunConfig, parameter: &str, value: f64, out_dir: &Path) -> CliResult<RunConfig> {
    let mut cfg = base.clone();
    cfg.set_numeric_model_value(parameter, value)?;
    let stem = sweep_stem(parameter, value);
    cfg.csv_path = Some(out_dir.join(format!("{stem}.csv")));
    cfg.report_path = Some(out_dir.join(format!("{stem}.json")));
    Ok(cfg)
}

/// Runs every value on a pool of `parallelism` threads and writes
/// `summary.csv` sorted by value. The summary is written even when children
/// fail; the first failure by value is then returned.
pub fn sweep(base: &RunConfig, spec: &SweepSpec, out_dir: &Path) -> CliResult<Vec<SummaryRow>> {
    spec.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|e| CliError::io(out_dir, e))?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(spec.parallelism)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start {} workers: {e}", spec.parallelism)))?;

    let mut values = spec.values.clone();
    values.sort_by(f64::total_cmp);
    let mut results: Vec<(f64, CliResult<CoherenceReport>)> = pool.install(|| {
        values
            .par_iter()
            .map(|&v| {
                let run = sweep_child(base, &spec.parameter, v, out_dir).and_then(|c| simulate(&c));
                (v, run.map(|s| s.report))
            })
            .collect()
    });
    results.sort_by(|a, b| a.0.total_cmp(&b.0));

    let rows: Vec<SummaryRow> = results
        .iter()
        .map(|(v, r)| SummaryRow {
            value: *v,
            outcome: r.as_ref().map_err(ToString::to_string).cloned(),
        })
        .collect();
    let summary = out_dir.join("summary.csv");
    let file = std::fs::File::create(&summary).map_err(|e| CliError::io(&summary, e))?;
    write_summary_csv(std::io::BufWriter::new(file), &rows).map_err(|e| CliError::io(&summary, e))?;

    match results.into_iter().find_map(|(v, r)| r.err().map(|e| (v, e))) {
        None => Ok(rows),
        Some((v, e)) => {
            let msg = format!("{} = {v:e}: {e}", spec.parameter);
            Err(match e {
                CliError::Config(_) => CliError::Config(msg),
                CliError::Divergence(_) => CliError::Divergence(msg),
                CliError::Io(_) => CliError::Io(msg),
            })
        }
    }
}

/// Analysis of an existing trajectory CSV.
pub fn fit(csv: &Path, hysteresis: f64) -> CliResult<CoherenceReport> {
    if !(hysteresis.is_finite() && hysteresis >= 0.0) {
        return Err(CliError::Config(format!("hysteresis must be non-negative, got {hysteresis}")));
    }
    let table = load_trajectory_csv(csv)?;
    Ok(coherence_report(&table.times, &table.observables, hysteresis)?)
}

pub fn params_cavity(dims: [f64; 3], mode: [u32; 3], epsilon_r: f64, mu_r: f64) -> CliResult<String> {
    let g = CavityGeometry {
        l1: dims[0],
        l2: dims[1],
        l3: dims[2],
        epsilon_r,
        mu_r,
        mode: (mode[0], mode[1], mode[2]),
    };
    let f = cavity_resonance_frequency(&g)?;
    Ok(format!(
        "mode ({}, {}, {}) in {} x {} x {} m (epsilon_r = {epsilon_r}, mu_r = {mu_r})\n\
         frequency = {f:.6e} Hz\n\
         angular frequency = {:.6e} rad/s\n",
        mode[0],
        mode[1],
        mode[2],
        dims[0],
        dims[1],
        dims[2],
        std::f64::consts::TAU * f
    ))
}

pub fn params_field(current: f64, distance: f64) -> CliResult<String> {
    let b = beam_field_at_distance(current, distance)?;
    Ok(format!("current = {current:e} A\ndistance = {distance:e} m\nfield = {b:.6e} T\n"))
}

pub fn params_distance(current: f64, field: f64) -> CliResult<String> {
    let h = distance_for_target_field(current, field)?;
    Ok(format!("current = {current:e} A\nfield = {field:e} T\ndistance = {h:.6e} m\n"))
}

/// Either the kinetic energy or the voltage from rest must be given. A
/// nonzero `initial_speed` adds the voltage that reaches the same energy from
/// that speed.
pub fn params_kinematics(ke: Option<f64>, voltage: Option<f64>, initial_speed: f64) -> CliResult<String> {
    let ke = match (ke, voltage) {
        (Some(ke), None) => ke,
        (None, Some(v)) => kinetic_energy_from_voltage(v)?,
        _ => return Err(CliError::Config("give exactly one of --ke or --voltage".into())),
    };
    let k = beam_kinematics(ke)?;
    let mut out = format!(
        "kinetic energy = {ke:.6e} eV\ngamma = {:.6}\nbeta = {:.6}\nspeed = {:.6e} m/s\nvoltage from rest = {:.6e} V\n",
        k.gamma_factor,
        k.beta,
        k.speed,
        kinetic_energy_from_voltage(ke)?
    );
    if initial_speed != 0.0 {
        let v = voltage_for_kinetic_energy(ke, initial_speed)?;
        let _ = writeln!(out, "voltage from {initial_speed:e} m/s = {v:.6e} V");
    }
    Ok(out)
}

pub fn assumption_report(b: &BeamParameters, system_size: f64, threshold: f64) -> CliResult<AssumptionReport> {
    if !(threshold.is_finite() && threshold > 0.0) {
        return Err(CliError::Config(format!("threshold must be positive, got {threshold}")));
    }
    Ok(validate_assumptions_with(b, system_size, threshold))
}

pub fn render_assumptions(r: &AssumptionReport) -> String {
    let mut out = format!("threshold = {}\n", r.threshold);
    for c in &r.checks {
        let status = match c.status {
            AssumptionStatus::Ok => "ok",
            AssumptionStatus::Violated => "VIOLATED",
            AssumptionStatus::Indeterminate => "indeterminate",
        };
        let _ = writeln!(out, "{:<36} {:>12.4e}  {status}", c.name, c.ratio);
    }
    out
}

/// `sweep_<parameter>` in the working directory.
pub fn default_sweep_dir(parameter: &str) -> PathBuf {
    PathBuf::from(format!("sweep_{parameter}"))
}
