//! Experiment presets, trajectory recording and convergence studies.

use std::fmt;

use crate::error::{Error, Result};
use crate::general::GeneralProblem;
use crate::mesh::{norm_h1, norm_l2, Field, Grid, StatePair};
use crate::quotients::{FluxDensity, Nonlinearity};
use crate::semilinear::{Boundary, EnergySample, SemilinearScheme, SolverParams, StepDiagnostics};

/// The three initial data sets of the reference experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Case1,
    Case2,
    Case3,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Preset::Case1, Preset::Case2, Preset::Case3];

    pub fn by_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().replace(['-', '_', ' '], "").as_str() {
            "case1" => Ok(Self::Case1),
            "case2" => Ok(Self::Case2),
            "case3" => Ok(Self::Case3),
            _ => Err(Error::UnknownPreset(name.to_string())),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Case1 => "case1",
            Self::Case2 => "case2",
            Self::Case3 => "case3",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            Self::Case1 => "u0 = exp(-(x-L/2)^2), v0 = 0",
            Self::Case2 => "u0 = exp(-4(x-L/3)^2) + exp(-4(x-2L/3)^2), v0 = -4(x-L/3) exp(-4(x-L/3)^2)",
            Self::Case3 => "u0 = 5 exp(-4(x-L/3)^2) + exp(-4(x-2L/3)^2), v0 = -4(x-L/3) exp(-4(x-L/3)^2)",
        }
    }

    /// `(u0(x), v0(x))` on a domain of length `length`.
    pub fn eval(self, x: f64, length: f64) -> (f64, f64) {
        let bump = |c: f64| (-4.0 * (x - c).powi(2)).exp();
        let third = length / 3.0;
        let v = -4.0 * (x - third) * bump(third);
        match self {
            Self::Case1 => ((-(x - 0.5 * length).powi(2)).exp(), 0.0),
            Self::Case2 => (bump(third) + bump(2.0 * third), v),
            Self::Case3 => (5.0 * bump(third) + bump(2.0 * third), v),
        }
    }

    pub fn sample(self, grid: &Grid) -> (Field, Field) {
        let l = grid.length();
        (
            Field::from_fn(grid, |x| self.eval(x, l).0),
            Field::from_fn(grid, |x| self.eval(x, l).1),
        )
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitialData {
    Preset(Preset),
    /// Nodal values on the configured grid, `K + 1` each.
    Samples { u0: Vec<f64>, v0: Vec<f64> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ProblemKind {
    #[default]
    Semilinear,
    General,
}

impl ProblemKind {
    pub fn by_name(name: &str) -> Option<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "semilinear" => Some(Self::Semilinear),
            "general" => Some(Self::General),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub length: f64,
    pub final_time: f64,
    pub intervals: usize,
    pub steps: usize,
    pub kind: ProblemKind,
    pub nonlinearity: String,
    /// Flux density of the general scheme; ignored for semilinear runs.
    pub flux: String,
    pub bc: Boundary,
    pub initial: InitialData,
    pub solver: SolverParams,
    /// Record every `snapshot_stride`-th level (the last level is always kept).
    pub snapshot_stride: usize,
}

impl ExperimentConfig {
    /// `L = 6`, `T = 5`, `K = 100`, `N = 2000`, dynamic boundaries.
    pub fn reference_grid(nonlinearity: &str, initial: InitialData) -> Self {
        Self {
            length: 6.0,
            final_time: 5.0,
            intervals: 100,
            steps: 2000,
            kind: ProblemKind::Semilinear,
            nonlinearity: nonlinearity.to_string(),
            flux: "string".to_string(),
            bc: Boundary::Dynamic,
            initial,
            solver: SolverParams::default(),
            snapshot_stride: 10,
        }
    }

    pub fn grid(&self) -> Result<Grid> {
        Grid::new(self.length, self.final_time, self.intervals, self.steps)
    }

    fn initial_fields(&self, grid: &Grid) -> Result<(Field, Field)> {
        match &self.initial {
            InitialData::Preset(p) => Ok(p.sample(grid)),
            InitialData::Samples { u0, v0 } => Ok((Field::new(grid, u0.clone())?, Field::new(grid, v0.clone())?)),
        }
    }

    fn refined(&self, factor: usize) -> Result<Self> {
        if matches!(self.initial, InitialData::Samples { .. }) && factor > 1 {
            return Err(Error::InvalidConfig(
                "convergence studies need a preset as initial data".into(),
            ));
        }
        Ok(Self {
            intervals: self.intervals * factor,
            steps: self.steps * factor,
            ..self.clone()
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub n: usize,
    pub t: f64,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub grid: Grid,
    pub snapshots: Vec<Snapshot>,
    /// One sample per step `n = 1..N-1`.
    pub energy: Vec<EnergySample>,
    /// Solver diagnostics of the step that produced level `n + 1`.
    pub diagnostics: Vec<(usize, StepDiagnostics)>,
}

impl Trajectory {
    pub fn energy_drift(&self) -> f64 {
        energy_drift(&self.energy)
    }

    pub fn max_iterations(&self) -> usize {
        self.diagnostics.iter().map(|(_, d)| d.iterations).max().unwrap_or(0)
    }

    /// `(t, u(t,0), u(t,L))` at every recorded level.
    pub fn boundary_traces(&self) -> Vec<(f64, f64, f64)> {
        self.snapshots
            .iter()
            .map(|s| (s.t, s.values[0], s.values[s.values.len() - 1]))
            .collect()
    }
}

/// `max_n |J_n - J_first| / max(1, |J_first|)`; zero for an empty series.
pub fn energy_drift(series: &[EnergySample]) -> f64 {
    let Some(first) = series.first() else {
        return 0.0;
    };
    let j0 = first.energy;
    series.iter().map(|s| (s.energy - j0).abs()).fold(0.0, f64::max) / j0.abs().max(1.0)
}

enum Stepper {
    Semilinear(SemilinearScheme),
    General(GeneralProblem),
}

impl Stepper {
    fn new(config: &ExperimentConfig, grid: Grid) -> Result<Self> {
        let nl = Nonlinearity::by_name(&config.nonlinearity)?;
        match config.kind {
            ProblemKind::Semilinear => Ok(Self::Semilinear(SemilinearScheme::with_boundary(grid, nl, config.bc))),
            ProblemKind::General => {
                if config.bc != Boundary::Dynamic {
                    return Err(Error::InvalidConfig(
                        "the general scheme supports dynamic boundaries only".into(),
                    ));
                }
                Ok(Self::General(GeneralProblem::new(grid, FluxDensity::by_name(&config.flux)?, nl)))
            }
        }
    }

    fn first_step(&self, u0: &Field, v0: &Field) -> Field {
        match self {
            Self::Semilinear(s) => s.first_step(u0, v0),
            Self::General(g) => g.first_step(u0, v0),
        }
    }

    fn step(&self, pair: &StatePair, params: &SolverParams) -> Result<(Field, StepDiagnostics)> {
        match self {
            Self::Semilinear(s) => s.step(pair, params),
            Self::General(g) => g.general_step(pair, params),
        }
    }

    fn energy(&self, next: &[f64], curr: &[f64]) -> f64 {
        match self {
            Self::Semilinear(s) => s.energy(next, curr),
            Self::General(g) => g.general_energy(next, curr),
        }
    }
}

/// Runs the configured experiment from `n = 0` to `n = N`.
pub fn run(config: &ExperimentConfig) -> Result<Trajectory> {
    if config.snapshot_stride == 0 {
        return Err(Error::InvalidConfig("snapshot_stride must be at least 1".into()));
    }
    let grid = config.grid()?;
    let stride = config.snapshot_stride;
    let mut snapshots = Vec::new();
    let mut keep = |n: usize, values: &Field| {
        if n.is_multiple_of(stride) || n == grid.steps() {
            snapshots.push(Snapshot {
                n,
                t: grid.t(n),
                values: values.to_vec(),
            });
        }
    };
    let (energy, diagnostics) = march(config, &grid, &mut keep)?;
    Ok(Trajectory {
        grid,
        snapshots,
        energy,
        diagnostics,
    })
}

type Record = (Vec<EnergySample>, Vec<(usize, StepDiagnostics)>);

fn march(config: &ExperimentConfig, grid: &Grid, visit: &mut dyn FnMut(usize, &Field)) -> Result<Record> {
    let stepper = Stepper::new(config, *grid)?;
    let (u0, v0) = config.initial_fields(grid)?;
    let u1 = stepper.first_step(&u0, &v0);
    if !u1.is_finite() {
        return Err(Error::NonFinite(u1.iter().position(|v| !v.is_finite()).unwrap_or(0)));
    }
    visit(0, &u0);
    visit(1, &u1);

    let dt = grid.dt();
    let mut previous = stepper.energy(&u1, &u0);
    let mut pair = StatePair::new(u0, u1, 1)?;
    let mut energy = Vec::with_capacity(grid.steps());
    let mut diagnostics = Vec::with_capacity(grid.steps());
    while pair.n < grid.steps() {
        let n = pair.n;
        let (next, diag) = stepper.step(&pair, &config.solver).map_err(|e| e.at_step(n))?;
        let j = stepper.energy(&next, &pair.curr);
        energy.push(EnergySample {
            n,
            t: grid.t(n),
            energy: j,
            delta: (j - previous) / dt,
        });
        diagnostics.push((n, diag));
        previous = j;
        visit(n + 1, &next);
        pair = pair.advance(next);
    }
    Ok((energy, diagnostics))
}

fn full_history(config: &ExperimentConfig) -> Result<(Grid, Vec<Vec<f64>>)> {
    let grid = config.grid()?;
    let mut levels = Vec::with_capacity(grid.steps() + 1);
    march(config, &grid, &mut |_, u| levels.push(u.to_vec()))?;
    Ok((grid, levels))
}

/// Reference solution of a self-convergence study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Reference {
    /// `(4 U_finest - U_second) / 3` on the second-finest grid.
    #[default]
    Richardson,
    /// The finest level itself.
    Finest,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceRow {
    pub level: usize,
    pub intervals: usize,
    pub steps: usize,
    pub dx: f64,
    pub dt: f64,
    /// `max_n ||e^(n)||_2`.
    pub err_l2: f64,
    /// `max_n ||e^(n)||_H1`.
    pub err_h1: f64,
    /// `max_n (||d-t e^(n)||_2 + ||e^(n)||_H1 + |d-t e_0^(n)| + |d-t e_K^(n)|)`.
    pub err_composite: f64,
    /// `log2` of the composite error ratio to the previous level.
    pub observed_order: Option<f64>,
}

/// Self-convergence study with a Richardson-extrapolated reference.
pub fn convergence_study(config: &ExperimentConfig, levels: usize) -> Result<Vec<ConvergenceRow>> {
    convergence_study_with(config, levels, Reference::Richardson)
}

/// Runs `levels` refinements `(K 2^l, N 2^l)` and reports the error of
/// every level but the finest against the chosen reference.
pub fn convergence_study_with(
    config: &ExperimentConfig,
    levels: usize,
    reference: Reference,
) -> Result<Vec<ConvergenceRow>> {
    if levels < 3 {
        return Err(Error::TooFewLevels { min: 3, got: levels });
    }
    let configs = (0..levels)
        .map(|l| config.refined(1 << l))
        .collect::<Result<Vec<_>>>()?;
    let histories = run_levels(&configs)?;

    let (fine_grid, fine) = &histories[levels - 1];
    let (ref_grid, reference_values) = match reference {
        Reference::Finest => (*fine_grid, fine.clone()),
        Reference::Richardson => {
            let (grid, second) = &histories[levels - 2];
            let extrapolated = second
                .iter()
                .enumerate()
                .map(|(n, u)| {
                    u.iter()
                        .enumerate()
                        .map(|(k, &c)| (4.0 * fine[2 * n][2 * k] - c) / 3.0)
                        .collect()
                })
                .collect();
            (*grid, extrapolated)
        }
    };

    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(levels - 1);
    for (level, (grid, values)) in histories.iter().enumerate().take(levels - 1) {
        let factor = ref_grid.intervals() / grid.intervals();
        let errors = level_errors(grid, values, &reference_values, factor);
        let observed_order = rows
            .last()
            .map(|prev| (prev.err_composite / errors.2).log2());
        rows.push(ConvergenceRow {
            level,
            intervals: grid.intervals(),
            steps: grid.steps(),
            dx: grid.dx(),
            dt: grid.dt(),
            err_l2: errors.0,
            err_h1: errors.1,
            err_composite: errors.2,
            observed_order,
        });
    }
    Ok(rows)
}

fn level_errors(grid: &Grid, values: &[Vec<f64>], reference: &[Vec<f64>], factor: usize) -> (f64, f64, f64) {
    let kk = grid.intervals();
    let dt = grid.dt();
    let error_at = |n: usize| -> Vec<f64> {
        let r = &reference[n * factor];
        (0..=kk).map(|k| values[n][k] - r[k * factor]).collect()
    };
    let mut previous = error_at(0);
    let (mut l2, mut h1, mut composite) = (norm_l2(&previous, grid), norm_h1(&previous, grid), 0.0f64);
    for n in 1..=grid.steps() {
        let e = error_at(n);
        let rate: Vec<f64> = e.iter().zip(&previous).map(|(a, b)| (a - b) / dt).collect();
        let e_h1 = norm_h1(&e, grid);
        l2 = l2.max(norm_l2(&e, grid));
        h1 = h1.max(e_h1);
        composite = composite.max(norm_l2(&rate, grid) + e_h1 + rate[0].abs() + rate[kk].abs());
        previous = e;
    }
    (l2, h1, composite)
}

#[cfg(not(target_arch = "wasm32"))]
fn run_levels(configs: &[ExperimentConfig]) -> Result<Vec<(Grid, Vec<Vec<f64>>)>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = configs.iter().map(|c| scope.spawn(move || full_history(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("refinement level panicked"))
            .collect()
    })
}

#[cfg(target_arch = "wasm32")]
fn run_levels(configs: &[ExperimentConfig]) -> Result<Vec<(Grid, Vec<Vec<f64>>)>> {
    configs.iter().map(full_history).collect()
}
