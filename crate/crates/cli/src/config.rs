//! TOML experiment configuration.
//!
//! ```toml
//! [grid]
//! L = 6.0
//! T = 5.0
//! K = 100
//! N = 2000
//!
//! [problem]
//! kind = "semilinear"      # or "general"
//! nonlinearity = "cubic"   # cubic | sine-gordon | klein-gordon | zero
//! bc = "dynamic"           # or "neumann"
//! preset = "case1"         # or initial_csv = "initial.csv"
//! flux = "string"          # general scheme only
//!
//! [solver]
//! tol = 1e-13
//! max_iter = 100
//! check_radius = false
//!
//! [output]
//! outdir = "out"
//! snapshot_stride = 10
//! ```
//!
//! Every key is optional and falls back to the value shown. Relative paths
//! are resolved against the directory of the configuration file.

use std::fs;
use std::path::{Path, PathBuf};

use dynwave::harness::{ExperimentConfig, InitialData, Preset, ProblemKind};
use dynwave::{Boundary, Grid, SolverParams};
use serde::Deserialize;

use crate::error::CliError;
use crate::output::read_initial_csv;

pub const OUTDIR_ENV: &str = "DYNWAVE_OUTDIR";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub problem: ProblemSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub output: OutputSection,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    #[serde(rename = "L", default = "defaults::length")]
    pub length: f64,
    #[serde(rename = "T", default = "defaults::final_time")]
    pub final_time: f64,
    #[serde(rename = "K", default = "defaults::intervals")]
    pub intervals: usize,
    #[serde(rename = "N", default = "defaults::steps")]
    pub steps: usize,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemSection {
    #[serde(default = "defaults::kind")]
    pub kind: String,
    #[serde(default = "defaults::nonlinearity")]
    pub nonlinearity: String,
    #[serde(default = "defaults::bc")]
    pub bc: String,
    pub preset: Option<String>,
    pub initial_csv: Option<PathBuf>,
    #[serde(default = "defaults::flux")]
    pub flux: String,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolverSection {
    #[serde(default = "defaults::tol")]
    pub tol: f64,
    #[serde(default = "defaults::max_iter")]
    pub max_iter: usize,
    #[serde(default)]
    pub check_radius: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub outdir: Option<PathBuf>,
    #[serde(default = "defaults::snapshot_stride")]
    pub snapshot_stride: usize,
}

mod defaults {
    pub fn length() -> f64 {
        6.0
    }
    pub fn final_time() -> f64 {
        5.0
    }
    pub fn intervals() -> usize {
        100
    }
    pub fn steps() -> usize {
        2000
    }
    pub fn kind() -> String {
        "semilinear".into()
    }
    pub fn nonlinearity() -> String {
        "cubic".into()
    }
    pub fn bc() -> String {
        "dynamic".into()
    }
    pub fn flux() -> String {
        "string".into()
    }
    pub fn tol() -> f64 {
        1e-13
    }
    pub fn max_iter() -> usize {
        100
    }
    pub fn snapshot_stride() -> usize {
        10
    }
}

impl Default for GridSection {
    fn default() -> Self {
        Self {
            length: defaults::length(),
            final_time: defaults::final_time(),
            intervals: defaults::intervals(),
            steps: defaults::steps(),
        }
    }
}

impl Default for ProblemSection {
    fn default() -> Self {
        Self {
            kind: defaults::kind(),
            nonlinearity: defaults::nonlinearity(),
            bc: defaults::bc(),
            preset: None,
            initial_csv: None,
            flux: defaults::flux(),
        }
    }
}

impl Default for SolverSection {
    fn default() -> Self {
        Self {
            tol: defaults::tol(),
            max_iter: defaults::max_iter(),
            check_radius: false,
        }
    }
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            outdir: None,
            snapshot_stride: defaults::snapshot_stride(),
        }
    }
}

/// A parsed configuration together with the directory it was read from.
#[derive(Debug)]
pub struct LoadedConfig {
    pub file: ConfigFile,
    pub base: PathBuf,
}

/// Reads `path` and applies `section.key=value` overrides on top of it.
pub fn load(path: &Path, overrides: &[String]) -> Result<LoadedConfig, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
    let mut table: toml::Table = text
        .parse()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    for o in overrides {
        apply_override(&mut table, o)?;
    }
    let file: ConfigFile = table
        .try_into()
        .map_err(|e: toml::de::Error| CliError::Config(e.message().to_string()))?;
    let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
    Ok(LoadedConfig { file, base })
}

fn apply_override(table: &mut toml::Table, spec: &str) -> Result<(), CliError> {
    let bad = || CliError::Config(format!("override `{spec}` is not of the form section.key=value"));
    let (path, raw) = spec.split_once('=').ok_or_else(bad)?;
    let (section, key) = path.trim().split_once('.').ok_or_else(bad)?;
    if section.is_empty() || key.is_empty() {
        return Err(bad());
    }
    let value = format!("v = {}", raw.trim())
        .parse::<toml::Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.trim().to_string()));
    let entry = table
        .entry(section.to_string())
        .or_insert_with(|| toml::Value::Table(toml::Table::new()));
    let toml::Value::Table(inner) = entry else {
        return Err(CliError::Config(format!("`{section}` is not a section")));
    };
    inner.insert(key.to_string(), value);
    Ok(())
}

impl LoadedConfig {
    fn resolve(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        let g = &self.file.grid;
        Grid::new(g.length, g.final_time, g.intervals, g.steps).map_err(|e| CliError::Config(format!("[grid] {e}")))
    }

    /// Output directory: `[output] outdir`, then `DYNWAVE_OUTDIR`, then `.`.
    pub fn outdir(&self) -> PathBuf {
        match &self.file.output.outdir {
            Some(p) => self.resolve(p),
            None => std::env::var_os(OUTDIR_ENV).map(PathBuf::from).unwrap_or_else(|| PathBuf::from(".")),
        }
    }

    /// Builds the experiment, validating names and initial data.
    pub fn experiment(&self) -> Result<ExperimentConfig, CliError> {
        let grid = self.grid()?;
        let p = &self.file.problem;
        let kind = ProblemKind::by_name(&p.kind)
            .ok_or_else(|| CliError::Config(format!("[problem] kind: unknown kind `{}` (semilinear | general)", p.kind)))?;
        let bc = Boundary::by_name(&p.bc)
            .ok_or_else(|| CliError::Config(format!("[problem] bc: unknown boundary `{}` (dynamic | neumann)", p.bc)))?;
        dynwave::Nonlinearity::by_name(&p.nonlinearity).map_err(|e| CliError::Config(format!("[problem] nonlinearity: {e}")))?;
        if kind == ProblemKind::General {
            dynwave::FluxDensity::by_name(&p.flux).map_err(|e| CliError::Config(format!("[problem] flux: {e}")))?;
        }
        let initial = match (&p.preset, &p.initial_csv) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("[problem] preset and initial_csv are mutually exclusive".into()))
            }
            (Some(name), None) => {
                InitialData::Preset(Preset::by_name(name).map_err(|e| CliError::Config(format!("[problem] preset: {e}")))?)
            }
            (None, Some(path)) => {
                let (u0, v0) = read_initial_csv(&self.resolve(path), &grid)?;
                InitialData::Samples { u0, v0 }
            }
            (None, None) => InitialData::Preset(Preset::Case1),
        };
        let s = &self.file.solver;
        if s.tol.is_nan() || s.tol <= 0.0 {
            return Err(CliError::Config(format!("[solver] tol must be positive, got {}", s.tol)));
        }
        if s.max_iter == 0 {
            return Err(CliError::Config("[solver] max_iter must be at least 1".into()));
        }
        if self.file.output.snapshot_stride == 0 {
            return Err(CliError::Config("[output] snapshot_stride must be at least 1".into()));
        }
        Ok(ExperimentConfig {
            length: grid.length(),
            final_time: grid.final_time(),
            intervals: grid.intervals(),
            steps: grid.steps(),
            kind,
            nonlinearity: p.nonlinearity.clone(),
            flux: p.flux.clone(),
            bc,
            initial,
            solver: SolverParams {
                tol: s.tol,
                max_iter: s.max_iter,
                check_radius: s.check_radius,
            },
            snapshot_stride: self.file.output.snapshot_stride,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str, overrides: &[&str]) -> Result<ConfigFile, CliError> {
        let mut table: toml::Table = text.parse().unwrap();
        for o in overrides {
            apply_override(&mut table, o)?;
        }
        table.try_into().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))
    }

    #[test]
    fn empty_document_gives_defaults() {
        let c = parse("", &[]).unwrap();
        assert_eq!((c.grid.length, c.grid.final_time, c.grid.intervals, c.grid.steps), (6.0, 5.0, 100, 2000));
        assert_eq!(c.solver.tol, 1e-13);
        assert_eq!(c.output.snapshot_stride, 10);
    }

    #[test]
    fn integers_are_accepted_for_reals() {
        let c = parse("[grid]\nL = 6\nT = 1", &[]).unwrap();
        assert_eq!(c.grid.length, 6.0);
        assert_eq!(c.grid.final_time, 1.0);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse("[grid]\nK = 10\nKK = 3", &[]).unwrap_err();
        assert!(err.to_string().contains("KK"), "{err}");
        assert!(parse("[gird]\nK = 10", &[]).is_err());
    }

    #[test]
    fn overrides_take_precedence() {
        let c = parse("[grid]\nK = 10", &["grid.K=20", "problem.nonlinearity=sine-gordon", "solver.tol=1e-10"]).unwrap();
        assert_eq!(c.grid.intervals, 20);
        assert_eq!(c.problem.nonlinearity, "sine-gordon");
        assert_eq!(c.solver.tol, 1e-10);
        assert!(parse("", &["grid.K"]).is_err());
        assert!(parse("", &["K=3"]).is_err());
    }

    #[test]
    fn full_precision_reals() {
        let c = parse("[grid]\nL = 6.000000000000001", &[]).unwrap();
        assert_eq!(c.grid.length, 6.000000000000001);
    }
}
