//! Experiment driver for Krylov quantum-classical correspondence runs.
//!
//! A run is described by a TOML [`config::ExperimentConfig`]; the
//! `system` key selects a map from [`registry::maps`] and the `mode` key a
//! backend from [`registry::backends`]. Results land in a run directory
//! written by [`output::write_run`].

#![deny(unsafe_code)]

pub mod backend;
pub mod compare;
pub mod config;
pub mod error;
pub mod output;
pub mod portrait;
pub mod registry;
pub mod semicheck;

use std::path::{Path, PathBuf};

pub use error::{CliError, Result};

use config::{ExperimentConfig, RunConfig};
use output::RunOutput;

/// Runs the configured backend without touching the file system.
pub fn execute(config: &RunConfig) -> Result<RunOutput> {
    let backend = config
        .backend
        .ok_or_else(|| CliError::config("missing key `mode`"))?;
    log::info!(
        "running {} / {} for {} steps",
        config.map.name(),
        backend.name(),
        config.steps
    );
    backend.run(config)
}

/// `run`: loads, executes and writes a run directory. `out` overrides the
/// config's `output` key.
pub fn run_config_file(path: &Path, out: Option<&Path>) -> Result<PathBuf> {
    let config = ExperimentConfig::load(path)?.resolve(true)?;
    let dir = out
        .map(Path::to_path_buf)
        .or_else(|| config.output.clone())
        .ok_or_else(|| CliError::config("no output directory: set `output` or pass --out"))?;
    let result = execute(&config)?;
    output::write_run(&dir, &config, &result)?;
    Ok(dir)
}
