//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Each exported function wraps a plain Rust function of the same name in
//! [`demo`], which returns `Result<_, String>` and can be exercised natively.

use wasm_bindgen::prelude::*;

pub mod demo;

pub use demo::{BoundaryComparison, ConvergenceTable, Simulation};

/// Runs one experiment on `[0, length] x [0, final_time]`.
#[wasm_bindgen]
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
) -> Result<Simulation, JsError> {
    demo::simulate(nonlinearity, preset, boundary, intervals, steps, length, final_time, frames).map_err(|e| JsError::new(&e))
}

/// Runs the same data with dynamic and Neumann boundaries.
#[wasm_bindgen]
pub fn compare_boundaries(
    nonlinearity: &str,
    preset: &str,
    intervals: usize,
    steps: usize,
    length: f64,
    final_time: f64,
) -> Result<BoundaryComparison, JsError> {
    demo::compare_boundaries(nonlinearity, preset, intervals, steps, length, final_time).map_err(|e| JsError::new(&e))
}

/// Self-convergence study starting from `(intervals, steps)`.
#[wasm_bindgen]
pub fn convergence(
    nonlinearity: &str,
    preset: &str,
    intervals: usize,
    steps: usize,
    final_time: f64,
    levels: usize,
) -> Result<ConvergenceTable, JsError> {
    demo::convergence(nonlinearity, preset, intervals, steps, final_time, levels).map_err(|e| JsError::new(&e))
}
