//! Configuration, execution and CSV output behind the `dynwave` binary.

pub mod config;
pub mod error;
pub mod output;

use std::fs;
use std::path::{Path, PathBuf};

use dynwave::harness::{convergence_study_with, run, Preset, Reference, Trajectory};

pub use error::CliError;

/// Runs one experiment and writes `snapshots.csv`, `energy.csv` and
/// `diagnostics.csv`. Returns the output directory and the trajectory.
pub fn cmd_run(config: &Path, overrides: &[String]) -> Result<(PathBuf, Trajectory), CliError> {
    let loaded = config::load(config, overrides)?;
    let experiment = loaded.experiment()?;
    let trajectory = run(&experiment)?;
    let outdir = loaded.outdir();
    fs::create_dir_all(&outdir)?;
    output::write_snapshots(&outdir.join("snapshots.csv"), &trajectory)?;
    output::write_energy(&outdir.join("energy.csv"), &trajectory)?;
    output::write_diagnostics(&outdir.join("diagnostics.csv"), &trajectory)?;
    Ok((outdir, trajectory))
}

/// Runs a self-convergence study and writes `convergence.csv`.
pub fn cmd_converge(
    config: &Path,
    overrides: &[String],
    levels: usize,
    reference: Reference,
) -> Result<(PathBuf, Vec<dynwave::harness::ConvergenceRow>), CliError> {
    let loaded = config::load(config, overrides)?;
    let experiment = loaded.experiment()?;
    let rows = convergence_study_with(&experiment, levels, reference)?;
    let outdir = loaded.outdir();
    fs::create_dir_all(&outdir)?;
    output::write_convergence(&outdir.join("convergence.csv"), &rows)?;
    Ok((outdir, rows))
}

pub fn presets_listing() -> String {
    Preset::ALL
        .iter()
        .map(|p| format!("{}: {}\n", p.name(), p.formula()))
        .collect()
}
