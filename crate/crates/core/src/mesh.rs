//! Uniform space-time grids, difference operators, trapezoidal summation
//! and the discrete norms.
//!
//! Ghost values at indices `-1` and `K+1` are never stored in a [`Field`];
//! operators that need them take them as explicit arguments.

use std::ops::{Deref, Index};

use crate::error::{Error, Result};

/// Uniform grid on `[0, L] x [0, T]` with `K` space intervals and `N` time steps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    length: f64,
    final_time: f64,
    intervals: usize,
    steps: usize,
    dx: f64,
    dt: f64,
}

impl Grid {
    pub fn new(length: f64, final_time: f64, intervals: usize, steps: usize) -> Result<Self> {
        if !(length > 0.0 && length.is_finite()) {
            return Err(Error::InvalidGrid(format!("L must be positive, got {length}")));
        }
        if !(final_time > 0.0 && final_time.is_finite()) {
            return Err(Error::InvalidGrid(format!("T must be positive, got {final_time}")));
        }
        if intervals < 2 {
            return Err(Error::InvalidGrid(format!("K must be at least 2, got {intervals}")));
        }
        if steps < 2 {
            return Err(Error::InvalidGrid(format!("N must be at least 2, got {steps}")));
        }
        Ok(Self {
            length,
            final_time,
            intervals,
            steps,
            dx: length / intervals as f64,
            dt: final_time / steps as f64,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn final_time(&self) -> f64 {
        self.final_time
    }

    /// Number of space intervals `K`; fields carry `K + 1` nodes.
    pub fn intervals(&self) -> usize {
        self.intervals
    }

    /// Number of time steps `N`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dx(&self) -> f64 {
        self.dx
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn nodes(&self) -> usize {
        self.intervals + 1
    }

    /// Coordinate of node `k`.
    pub fn x(&self, k: usize) -> f64 {
        k as f64 * self.dx
    }

    /// Time of level `n`.
    pub fn t(&self, n: usize) -> f64 {
        n as f64 * self.dt
    }

    /// Same spatial and temporal extent, refined by `factor` in both directions.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        Self::new(
            self.length,
            self.final_time,
            self.intervals * factor,
            self.steps * factor,
        )
    }
}

/// One time level of the solution, sampled on nodes `k = 0..=K`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field(Vec<f64>);

impl Field {
    pub fn new(grid: &Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.nodes() {
            return Err(Error::LengthMismatch {
                expected: grid.nodes(),
                found: values.len(),
            });
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite(k));
        }
        Ok(Self(values))
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self(vec![0.0; grid.nodes()])
    }

    pub fn constant(grid: &Grid, value: f64) -> Self {
        Self(vec![value; grid.nodes()])
    }

    /// Samples `f(x_k)` at every node.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> f64) -> Self {
        Self((0..grid.nodes()).map(|k| f(grid.x(k))).collect())
    }

    /// Wraps a vector that is already known to have the right length.
    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        Self(values)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|v| v.is_finite())
    }
}

impl Deref for Field {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl Index<usize> for Field {
    type Output = f64;

    fn index(&self, k: usize) -> &f64 {
        &self.0[k]
    }
}

/// Two consecutive time levels `(U^(n-1), U^(n))`, the full state of the
/// two-step scheme.
#[derive(Debug, Clone, PartialEq)]
pub struct StatePair {
    pub prev: Field,
    pub curr: Field,
    /// Time index of `curr`.
    pub n: usize,
}

impl StatePair {
    pub fn new(prev: Field, curr: Field, n: usize) -> Result<Self> {
        if prev.len() != curr.len() {
            return Err(Error::LengthMismatch {
                expected: prev.len(),
                found: curr.len(),
            });
        }
        Ok(Self { prev, curr, n })
    }

    /// Shifts the window forward: `(U^(n), U^(n+1))`.
    pub fn advance(self, next: Field) -> Self {
        Self {
            prev: self.curr,
            curr: next,
            n: self.n + 1,
        }
    }
}

/// `(f[k+1] - f[k]) / dx` for `k = 0..K`; `K` entries.
pub fn forward_diff(f: &[f64], grid: &Grid) -> Vec<f64> {
    let inv = 1.0 / grid.dx();
    f.windows(2).map(|w| (w[1] - w[0]) * inv).collect()
}

/// Second central difference on nodes `0..=K`, with the ghost values at
/// `-1` and `K+1` supplied by the caller.
pub fn second_diff(f: &[f64], ghost_left: f64, ghost_right: f64, grid: &Grid) -> Vec<f64> {
    let n = f.len();
    let inv = 1.0 / (grid.dx() * grid.dx());
    (0..n)
        .map(|k| {
            let left = if k == 0 { ghost_left } else { f[k - 1] };
            let right = if k + 1 == n { ghost_right } else { f[k + 1] };
            (right - 2.0 * f[k] + left) * inv
        })
        .collect()
}

/// Trapezoidal sum `(f_0/2 + f_1 + ... + f_{K-1} + f_K/2) dx`.
pub fn trapz_sum(f: &[f64], grid: &Grid) -> f64 {
    let n = f.len();
    let interior: f64 = f[1..n - 1].iter().sum();
    (0.5 * f[0] + interior + 0.5 * f[n - 1]) * grid.dx()
}

/// Defect `LHS - RHS` of the summation-by-parts identity
///
/// ```text
/// sum_{k<K} f_k (d+ g)_k dx + sum''_k (d- f)_k g_k dx = [ (mu- f)_k g_k ]_0^K
/// ```
///
/// `f_ext` holds `f` on indices `-1..=K` (length `K + 2`), `g` on `0..=K`.
pub fn sbp_defect(f_ext: &[f64], g: &[f64], grid: &Grid) -> f64 {
    assert_eq!(f_ext.len(), g.len() + 1, "f_ext must carry the ghost f[-1]");
    let kk = g.len() - 1;
    let dx = grid.dx();
    let f = |k: usize| f_ext[k + 1];
    let f_minus = |k: usize| f_ext[k];

    let dg = forward_diff(g, grid);
    let first: f64 = (0..kk).map(|k| f(k) * dg[k]).sum::<f64>() * dx;
    let backward: Vec<f64> = (0..=kk).map(|k| (f(k) - f_minus(k)) / dx * g[k]).collect();
    let second = trapz_sum(&backward, grid);
    let boundary = 0.5 * (f(kk) + f_minus(kk)) * g[kk] - 0.5 * (f(0) + f_minus(0)) * g[0];
    first + second - boundary
}

/// Discrete `L2` norm based on the trapezoidal sum.
pub fn norm_l2(f: &[f64], grid: &Grid) -> f64 {
    let sq: Vec<f64> = f.iter().map(|v| v * v).collect();
    trapz_sum(&sq, grid).sqrt()
}

/// Gradient seminorm `||D f|| = (sum_{k<K} |d+ f_k|^2 dx)^(1/2)`.
pub fn seminorm_d(f: &[f64], grid: &Grid) -> f64 {
    let s: f64 = forward_diff(f, grid).iter().map(|d| d * d).sum();
    (s * grid.dx()).sqrt()
}

pub fn norm_h1(f: &[f64], grid: &Grid) -> f64 {
    let l2 = norm_l2(f, grid);
    let d = seminorm_d(f, grid);
    (l2 * l2 + d * d).sqrt()
}

pub fn norm_inf(f: &[f64]) -> f64 {
    f.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Constant of the discrete Sobolev inequality `||f||_inf <= C_S ||f||_H1`
/// on a domain of length `L`.
pub fn sobolev_constant(length: f64) -> Result<f64> {
    if length.is_nan() || length <= 0.0 {
        return Err(Error::NonPositiveLength(length));
    }
    Ok((((1.0 + 4.0 * length * length).sqrt() + 1.0) / (2.0 * length)).sqrt())
}
