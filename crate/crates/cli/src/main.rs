use std::path::{Path, PathBuf};
use std::process::ExitCode;

use beamqubit::commands;
use beamqubit::config::{parse_config, RunConfig, SweepSpec};
use beamqubit::io::report_json;
use beamqubit::{CliError, CliResult};
use beamqubit_core::analysis::DEFAULT_HYSTERESIS;
use beamqubit_core::engine::describe;
use beamqubit_core::physics::{BeamParameters, DEFAULT_ASSUMPTION_THRESHOLD};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "beamqubit", version, about = "Qubit-resonator dynamics under a modulated electron beam")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment from a config file.
    Simulate {
        config: PathBuf,
        /// Overrides `csv_path`.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Overrides `report_path`; without either the report goes to stdout.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Run the base config once per value of one model parameter.
    Sweep {
        config: PathBuf,
        #[arg(long)]
        param: String,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
        values: Vec<f64>,
        #[arg(long, default_value_t = 1)]
        parallelism: usize,
        /// Output directory, `sweep_<param>` by default.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyse an existing trajectory CSV.
    Fit {
        csv: PathBuf,
        #[arg(long, default_value_t = DEFAULT_HYSTERESIS)]
        hysteresis: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Design calculators.
    #[command(subcommand)]
    Params(Params),
    /// Check the beam geometry assumptions.
    Validate(ValidateArgs),
}

#[derive(Subcommand)]
enum Params {
    /// Resonance of a rectangular cavity mode.
    Cavity {
        /// Dimensions l1 l2 l3 in metres.
        #[arg(long = "l", num_args = 3, required = true)]
        dims: Vec<f64>,
        #[arg(long, num_args = 3, required = true)]
        mode: Vec<u32>,
        #[arg(long, default_value_t = 1.0)]
        epsilon_r: f64,
        #[arg(long, default_value_t = 1.0)]
        mu_r: f64,
    },
    /// Beam field at a distance, tesla.
    Field {
        /// Beam current, A.
        #[arg(long, allow_hyphen_values = true)]
        current: f64,
        /// m
        #[arg(long, allow_hyphen_values = true)]
        distance: f64,
    },
    /// Distance giving a target field, metres.
    Distance {
        /// A
        #[arg(long, allow_hyphen_values = true)]
        current: f64,
        /// T
        #[arg(long, allow_hyphen_values = true)]
        field: f64,
    },
    /// Electron speed from kinetic energy (eV) or voltage from rest (V).
    Kinematics {
        #[arg(long, allow_hyphen_values = true)]
        ke: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        voltage: Option<f64>,
        /// m/s
        #[arg(long, default_value_t = 0.0)]
        initial_speed: f64,
    },
    /// Same as the top-level `validate`.
    Validate(ValidateArgs),
}

#[derive(Args)]
struct ValidateArgs {
    /// Beam radius a, m.
    #[arg(long, default_value_t = 0.0)]
    beam_radius: f64,
    /// Beam-to-qubit distance h, m.
    #[arg(long, default_value_t = 0.0)]
    distance: f64,
    /// Modulation wavelength, m.
    #[arg(long, default_value_t = 0.0)]
    wavelength: f64,
    /// Electron packet length, m.
    #[arg(long, default_value_t = 0.0)]
    packet_length: f64,
    /// Size of the quantum system, m.
    #[arg(long, default_value_t = 0.0)]
    system_size: f64,
    #[arg(long, default_value_t = DEFAULT_ASSUMPTION_THRESHOLD)]
    threshold: f64,
    /// Print JSON instead of a table.
    #[arg(long)]
    json: bool,
}

fn load_config(path: &Path) -> CliResult<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_config(&text).map_err(|e| match e {
        CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
        other => other,
    })
}

fn validate(a: &ValidateArgs) -> CliResult<()> {
    let beam = BeamParameters {
        beam_radius: a.beam_radius,
        distance: a.distance,
        modulation_wavelength: a.wavelength,
        packet_length: a.packet_length,
        ..Default::default()
    };
    let report = commands::assumption_report(&beam, a.system_size, a.threshold)?;
    if a.json {
        println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    } else {
        print!("{}", commands::render_assumptions(&report));
    }
    Ok(())
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Simulate { config, csv, report } => {
            let mut cfg = load_config(&config)?;
            cfg.csv_path = csv.or(cfg.csv_path);
            cfg.report_path = report.or(cfg.report_path);
            let sim = commands::simulate(&cfg)?;
            eprintln!("{}", describe(&sim.trajectory.diagnostics));
            if cfg.report_path.is_none() {
                println!("{}", report_json(&sim.report));
            }
        }
        Command::Sweep { config, param, values, parallelism, out } => {
            let base = load_config(&config)?;
            let spec = SweepSpec { parameter: param, values, parallelism };
            let dir = out.unwrap_or_else(|| commands::default_sweep_dir(&spec.parameter));
            let rows = commands::sweep(&base, &spec, &dir)?;
            eprintln!("{} runs written to {}", rows.len(), dir.display());
        }
        Command::Fit { csv, hysteresis, report } => {
            let r = commands::fit(&csv, hysteresis)?;
            match report {
                Some(path) => beamqubit::io::save_report_json(&path, &r)?,
                None => println!("{}", report_json(&r)),
            }
        }
        Command::Params(p) => match p {
            Params::Cavity { dims, mode, epsilon_r, mu_r } => {
                print!("{}", commands::params_cavity([dims[0], dims[1], dims[2]], [mode[0], mode[1], mode[2]], epsilon_r, mu_r)?)
            }
            Params::Field { current, distance } => print!("{}", commands::params_field(current, distance)?),
            Params::Distance { current, field } => print!("{}", commands::params_distance(current, field)?),
            Params::Kinematics { ke, voltage, initial_speed } => {
                print!("{}", commands::params_kinematics(ke, voltage, initial_speed)?)
            }
            Params::Validate(a) => validate(&a)?,
        },
        Command::Validate(a) => validate(&a)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("beamqubit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
