//! CSV emission and initial-data input.
//!
//! Reals are written as `{:.16e}` (17 significant digits), which
//! round-trips every binary64 value.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use dynwave::harness::{energy_drift, ConvergenceRow, Trajectory};
use dynwave::Grid;

use crate::error::CliError;

pub const SNAPSHOTS_HEADER: [&str; 5] = ["n", "t", "k", "x", "u"];
pub const ENERGY_HEADER: [&str; 5] = ["n", "t", "J", "delta", "drift"];
pub const DIAGNOSTICS_HEADER: [&str; 5] = ["n", "iterations", "final_increment", "M_n", "radius_ok"];
pub const CONVERGENCE_HEADER: [&str; 9] =
    ["level", "K", "N", "dx", "dt", "err_l2", "err_h1", "err_composite", "observed_order"];
pub const INITIAL_HEADER: [&str; 3] = ["x", "u0", "v0"];

/// Relative tolerance when matching `x` against the grid nodes.
pub const NODE_TOL: f64 = 1e-12;

pub fn real(v: f64) -> String {
    format!("{v:.16e}")
}

fn writer(path: &Path) -> Result<csv::Writer<File>, CliError> {
    let file = File::create(path).map_err(|e| CliError::Io(format!("cannot create {}: {e}", path.display())))?;
    Ok(csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(file))
}

fn finish(mut w: csv::Writer<File>) -> Result<(), CliError> {
    w.flush()?;
    Ok(())
}

pub fn write_snapshots(path: &Path, t: &Trajectory) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(SNAPSHOTS_HEADER)?;
    for s in &t.snapshots {
        for (k, u) in s.values.iter().enumerate() {
            w.write_record([s.n.to_string(), real(s.t), k.to_string(), real(t.grid.x(k)), real(*u)])?;
        }
    }
    finish(w)
}

pub fn write_energy(path: &Path, t: &Trajectory) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(ENERGY_HEADER)?;
    for (i, e) in t.energy.iter().enumerate() {
        let drift = energy_drift(&t.energy[..=i]);
        w.write_record([e.n.to_string(), real(e.t), real(e.energy), real(e.delta), real(drift)])?;
    }
    finish(w)
}

pub fn write_diagnostics(path: &Path, t: &Trajectory) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(DIAGNOSTICS_HEADER)?;
    for (n, d) in &t.diagnostics {
        let radius = d.radius_ok.map(|b| b.to_string()).unwrap_or_default();
        w.write_record([n.to_string(), d.iterations.to_string(), real(d.final_increment), real(d.m_n), radius])?;
    }
    finish(w)
}

pub fn write_convergence(path: &Path, rows: &[ConvergenceRow]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(CONVERGENCE_HEADER)?;
    for r in rows {
        w.write_record([
            r.level.to_string(),
            r.intervals.to_string(),
            r.steps.to_string(),
            real(r.dx),
            real(r.dt),
            real(r.err_l2),
            real(r.err_h1),
            real(r.err_composite),
            real(r.observed_order.unwrap_or(f64::NAN)),
        ])?;
    }
    finish(w)
}

/// Reads `x,u0,v0` with exactly one row per grid node.
pub fn read_initial_csv(path: &Path, grid: &Grid) -> Result<(Vec<f64>, Vec<f64>), CliError> {
    let config_err = |msg: String| CliError::Config(format!("initial_csv {}: {msg}", path.display()));
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| config_err(e.to_string()))?;
    let header = reader.headers().map_err(|e| config_err(e.to_string()))?;
    if header.iter().ne(INITIAL_HEADER) {
        return Err(config_err(format!("header must be `x,u0,v0`, found `{}`", header.iter().collect::<Vec<_>>().join(","))));
    }
    let (mut u0, mut v0) = (Vec::new(), Vec::new());
    for (k, record) in reader.records().enumerate() {
        let row = k + 2;
        let record = record.map_err(|e| config_err(e.to_string()))?;
        let num = |i: usize| -> Result<f64, CliError> {
            record
                .get(i)
                .and_then(|s| s.parse::<f64>().ok())
                .filter(|v| v.is_finite())
                .ok_or_else(|| config_err(format!("row {row}: column `{}` is not a finite number", INITIAL_HEADER[i])))
        };
        let x = num(0)?;
        if k > grid.intervals() {
            return Err(config_err(format!("expected {} rows, found more", grid.nodes())));
        }
        let node = grid.x(k);
        if (x - node).abs() > NODE_TOL * node.abs().max(1.0) {
            return Err(config_err(format!("row {row}: x = {x} does not match grid node {node}")));
        }
        u0.push(num(1)?);
        v0.push(num(2)?);
    }
    if u0.len() != grid.nodes() {
        return Err(config_err(format!("expected {} rows, found {}", grid.nodes(), u0.len())));
    }
    Ok((u0, v0))
}

/// Writes nodal initial data in the `x,u0,v0` format.
pub fn write_initial_csv(path: &Path, grid: &Grid, u0: &[f64], v0: &[f64]) -> Result<(), CliError> {
    let mut w = writer(path)?;
    w.write_record(INITIAL_HEADER)?;
    for k in 0..grid.nodes() {
        w.write_record([real(grid.x(k)), real(u0[k]), real(v0[k])])?;
    }
    finish(w)
}

/// Writes `text` verbatim; used for the preset listing.
pub fn print(mut out: impl Write, text: &str) -> Result<(), CliError> {
    out.write_all(text.as_bytes())?;
    Ok(())
}
