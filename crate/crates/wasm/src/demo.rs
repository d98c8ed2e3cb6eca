use dynwave::harness::{convergence_study, run, ExperimentConfig, InitialData, Preset, Trajectory};
use dynwave::Boundary;
use wasm_bindgen::prelude::*;

/// Largest grid the page may request, to keep the tab responsive.
pub const MAX_WORK: usize = 4_000_000;

fn config(
    nonlinearity: &str,
    preset: &str,
    intervals: usize,
    steps: usize,
    length: f64,
    final_time: f64,
) -> Result<ExperimentConfig, String> {
    if intervals.saturating_mul(steps) > MAX_WORK {
        return Err(format!("K*N = {} exceeds the demo limit {MAX_WORK}", intervals.saturating_mul(steps)));
    }
    let preset = Preset::by_name(preset).map_err(|e| e.to_string())?;
    let mut c = ExperimentConfig::reference_grid(nonlinearity, InitialData::Preset(preset));
    c.intervals = intervals;
    c.steps = steps;
    c.length = length;
    c.final_time = final_time;
    c.snapshot_stride = 1;
    Ok(c)
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct Simulation {
    nodes: usize,
    x: Vec<f64>,
    frame_times: Vec<f64>,
    frames: Vec<f64>,
    energy_times: Vec<f64>,
    energy: Vec<f64>,
    drift: f64,
    max_iterations: usize,
}

#[wasm_bindgen]
impl Simulation {
    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    pub fn frame_times(&self) -> Vec<f64> {
        self.frame_times.clone()
    }

    /// Row-major `frames x nodes` values of `U`.
    pub fn frames(&self) -> Vec<f64> {
        self.frames.clone()
    }

    pub fn energy_times(&self) -> Vec<f64> {
        self.energy_times.clone()
    }

    pub fn energy(&self) -> Vec<f64> {
        self.energy.clone()
    }

    pub fn drift(&self) -> f64 {
        self.drift
    }

    pub fn max_iterations(&self) -> usize {
        self.max_iterations
    }
}

impl Simulation {
    fn from_trajectory(t: &Trajectory, frames: usize) -> Self {
        let total = t.snapshots.len();
        let every = total.div_ceil(frames.max(2) - 1).max(1);
        let picked: Vec<_> = t
            .snapshots
            .iter()
            .enumerate()
            .filter(|(i, _)| i.is_multiple_of(every) || i + 1 == total)
            .map(|(_, s)| s)
            .collect();
        Self {
            nodes: t.grid.nodes(),
            x: (0..t.grid.nodes()).map(|k| t.grid.x(k)).collect(),
            frame_times: picked.iter().map(|s| s.t).collect(),
            frames: picked.iter().flat_map(|s| s.values.iter().copied()).collect(),
            energy_times: t.energy.iter().map(|e| e.t).collect(),
            energy: t.energy.iter().map(|e| e.energy).collect(),
            drift: t.energy_drift(),
            max_iterations: t.max_iterations(),
        }
    }

    pub fn frame_count(&self) -> usize {
        self.frame_times.len()
    }

    pub fn frame(&self, i: usize) -> &[f64] {
        &self.frames[i * self.nodes..(i + 1) * self.nodes]
    }
}

#[allow(clippy::too_many_arguments)]
pub fn simulate(
    nonlinearity: &str,
    preset: &str,
    boundary: &str,
    intervals: usize,
    steps: usize,
    length: f64,
    final_time: f64,
    frames: usize,
) -> Result<Simulation, String> {
    let mut c = config(nonlinearity, preset, intervals, steps, length, final_time)?;
    c.bc = Boundary::by_name(boundary).ok_or_else(|| format!("unknown boundary `{boundary}` (dynamic | neumann)"))?;
    let t = run(&c).map_err(|e| e.to_string())?;
    Ok(Simulation::from_trajectory(&t, frames))
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct BoundaryComparison {
    times: Vec<f64>,
    dynamic_left: Vec<f64>,
    dynamic_right: Vec<f64>,
    neumann_left: Vec<f64>,
    neumann_right: Vec<f64>,
}

#[wasm_bindgen]
impl BoundaryComparison {
    pub fn times(&self) -> Vec<f64> {
        self.times.clone()
    }

    pub fn dynamic_left(&self) -> Vec<f64> {
        self.dynamic_left.clone()
    }

    pub fn dynamic_right(&self) -> Vec<f64> {
        self.dynamic_right.clone()
    }

    pub fn neumann_left(&self) -> Vec<f64> {
        self.neumann_left.clone()
    }

    pub fn neumann_right(&self) -> Vec<f64> {
        self.neumann_right.clone()
    }
}

pub fn compare_boundaries(
    nonlinearity: &str,
    preset: &str,
    intervals: usize,
    steps: usize,
    length: f64,
    final_time: f64,
) -> Result<BoundaryComparison, String> {
    let mut c = config(nonlinearity, preset, intervals, steps, length, final_time)?;
    let dynamic = run(&c).map_err(|e| e.to_string())?.boundary_traces();
    c.bc = Boundary::Neumann;
    let neumann = run(&c).map_err(|e| e.to_string())?.boundary_traces();
    Ok(BoundaryComparison {
        times: dynamic.iter().map(|p| p.0).collect(),
        dynamic_left: dynamic.iter().map(|p| p.1).collect(),
        dynamic_right: dynamic.iter().map(|p| p.2).collect(),
        neumann_left: neumann.iter().map(|p| p.1).collect(),
        neumann_right: neumann.iter().map(|p| p.2).collect(),
    })
}

#[wasm_bindgen]
#[derive(Debug, Clone)]
pub struct ConvergenceTable {
    dx: Vec<f64>,
    errors: Vec<f64>,
    orders: Vec<f64>,
}

#[wasm_bindgen]
impl ConvergenceTable {
    pub fn dx(&self) -> Vec<f64> {
        self.dx.clone()
    }

    /// Composite errors, one per level except the finest.
    pub fn errors(&self) -> Vec<f64> {
        self.errors.clone()
    }

    /// Observed orders; `NaN` for the coarsest level.
    pub fn orders(&self) -> Vec<f64> {
        self.orders.clone()
    }
}

pub fn convergence(
    nonlinearity: &str,
    preset: &str,
    intervals: usize,
    steps: usize,
    final_time: f64,
    levels: usize,
) -> Result<ConvergenceTable, String> {
    if !(3..=6).contains(&levels) {
        return Err(format!("levels must be between 3 and 6, got {levels}"));
    }
    let finest = 1usize << (levels - 1);
    let c = config(nonlinearity, preset, intervals, steps, 6.0, final_time)?;
    config(nonlinearity, preset, intervals * finest, steps * finest, 6.0, final_time)?;
    let rows = convergence_study(&c, levels).map_err(|e| e.to_string())?;
    Ok(ConvergenceTable {
        dx: rows.iter().map(|r| r.dx).collect(),
        errors: rows.iter().map(|r| r.err_composite).collect(),
        orders: rows.iter().map(|r| r.observed_order.unwrap_or(f64::NAN)).collect(),
    })
}
