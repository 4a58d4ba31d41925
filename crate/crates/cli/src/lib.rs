//! Command-line front end for `beamqubit-core`: config files, simulations,
//! parameter sweeps, fits of stored trajectories and the design calculators.

pub mod commands;
pub mod config;
pub mod error;
pub mod io;

pub use config::{parse_config, render, RunConfig, SweepSpec};
pub use error::{exit, CliError, CliResult};
