//! The energy-conserving scheme for the semilinear problem
//!
//! ```text
//! d2t U_k = d2x ((U_k^(n+1) + U_k^(n-1)) / 2) - dF/d(U_k^(n+1), U_k^(n-1))     k = 0..K
//! d2t U_0 - d1x ((U_0^(n+1) + U_0^(n-1)) / 2) = 0
//! d2t U_K + d1x ((U_K^(n+1) + U_K^(n-1)) / 2) = 0
//! ```
//!
//! with ghost nodes at `-1` and `K+1` that only ever enter through the
//! averages `W = (U^(n+1) + U^(n-1)) / 2`. The boundary equations fix those
//! averages, so they are eliminated rather than stored.
//!
//! Each step is solved by the fixed-point map `U -> U~` defined by
//!
//! ```text
//! (U~ - 2U^(n) + U^(n-1)) / dt^2 = d2x W~ - W~ + (U + U^(n-1))/2 - dF/d(U, U^(n-1))
//! ```
//!
//! together with the boundary equations, which after elimination is the
//! tridiagonal system of [`crate::linsys`]. The map contracts for
//! `dt < R1(M_n)`, started from `U^(n)`.

use crate::error::{Error, Result};
use crate::linsys::TridiagonalSystem;
use crate::mesh::{forward_diff, norm_h1, norm_l2, second_diff, sobolev_constant, trapz_sum, Field, Grid, StatePair};
use crate::quotients::{two_point_quotient, Nonlinearity};

/// Boundary closure of the scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// `u_tt(0) = u_x(0)`, `u_tt(L) = -u_x(L)`.
    #[default]
    Dynamic,
    /// Homogeneous Neumann: mirrored ghost averages, no boundary kinetic energy.
    Neumann,
}

impl Boundary {
    pub fn by_name(name: &str) -> Option<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "dynamic" => Some(Self::Dynamic),
            "neumann" => Some(Self::Neumann),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::Dynamic => "dynamic",
            Self::Neumann => "neumann",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams {
    /// Stop once `||U_{j+1} - U_j||_2 <= tol (1 + ||U_j||_2)`.
    pub tol: f64,
    pub max_iter: usize,
    /// Evaluate the contraction condition `dt < 1 / C_contr(M_n)` each step.
    pub check_radius: bool,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            tol: 1e-13,
            max_iter: 100,
            check_radius: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepDiagnostics {
    pub iterations: usize,
    pub final_increment: f64,
    /// X-norm of the incoming pair.
    pub m_n: f64,
    pub radius_ok: Option<bool>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergySample {
    pub n: usize,
    pub t: f64,
    /// `J_d(U^(n+1), U^(n))`.
    pub energy: f64,
    /// `(J_n - J_{n-1}) / dt`.
    pub delta: f64,
}

/// Constants of the local existence argument, evaluated with sampled
/// bounds of `F~'` and `F~''` on `[-sqrt(3) C_S M_n, sqrt(3) C_S M_n]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusDiagnostics {
    pub c_into: f64,
    pub c_contr: f64,
    /// `min(1 / C_contr, M_n / (sqrt(6) C_into))`.
    pub r1: f64,
}

pub fn radius_diagnostics(m_n: f64, grid: &Grid, nl: &Nonlinearity) -> RadiusDiagnostics {
    let cs = sobolev_constant(grid.length()).expect("grid length is positive");
    let rho = 3f64.sqrt() * cs * m_n;
    let c1 = nl.derivative_bound(rho);
    let c2 = nl.second_derivative_bound(rho);
    let sqrt_l = grid.length().sqrt();
    let quotient_bound =
        (c1 * sqrt_l).min((nl.derivative)(0.0).abs() * sqrt_l + (1.0 + 3f64.sqrt()) * c2 * m_n);
    let c_into = (4.0 * m_n * m_n + 2.0 * quotient_bound * quotient_bound).sqrt();
    let c_contr = (0.5 + 0.5 * c2 * c2).sqrt();
    let into = if c_into > 0.0 {
        m_n / (6f64.sqrt() * c_into)
    } else {
        f64::INFINITY
    };
    RadiusDiagnostics {
        c_into,
        c_contr,
        r1: (1.0 / c_contr).min(into),
    }
}

/// `||(U, V)||_X` with `U = U^(n-1)` and `V = U^(n) - U^(n-1)`.
pub fn xnorm(pair: &StatePair, grid: &Grid) -> f64 {
    let u = &pair.prev;
    let v: Vec<f64> = pair.curr.iter().zip(u.iter()).map(|(c, p)| c - p).collect();
    let dt2 = grid.dt() * grid.dt();
    let h1 = norm_h1(u, grid);
    let l2 = norm_l2(&v, grid);
    let kk = v.len() - 1;
    (h1 * h1 + l2 * l2 / dt2 + (v[0] * v[0] + v[kk] * v[kk]) / dt2).sqrt()
}

/// Discrete energy `J_d(next, curr)` of the dynamic-boundary scheme.
pub fn discrete_energy(next: &[f64], curr: &[f64], grid: &Grid, nl: &Nonlinearity) -> f64 {
    energy_parts(next, curr, grid, nl, Boundary::Dynamic)
}

fn energy_parts(next: &[f64], curr: &[f64], grid: &Grid, nl: &Nonlinearity, boundary: Boundary) -> f64 {
    let dt = grid.dt();
    let kinetic: Vec<f64> = next.iter().zip(curr).map(|(a, b)| 0.5 * ((a - b) / dt).powi(2)).collect();
    let dn = forward_diff(next, grid);
    let dc = forward_diff(curr, grid);
    let gradient: f64 = dn.iter().zip(&dc).map(|(a, b)| 0.25 * (a * a + b * b)).sum::<f64>() * grid.dx();
    let potential: Vec<f64> = next.iter().zip(curr).map(|(&a, &b)| nl.pair_potential(a, b)).collect();
    let mut energy = trapz_sum(&kinetic, grid) + gradient + trapz_sum(&potential, grid);
    if boundary == Boundary::Dynamic {
        let kk = next.len() - 1;
        energy += kinetic[0] + kinetic[kk];
    }
    energy
}

/// Semilinear scheme on a fixed grid with a fixed nonlinearity.
#[derive(Debug, Clone)]
pub struct SemilinearScheme {
    grid: Grid,
    nl: Nonlinearity,
    boundary: Boundary,
    system: TridiagonalSystem,
}

impl SemilinearScheme {
    pub fn new(grid: Grid, nl: Nonlinearity) -> Self {
        Self::with_boundary(grid, nl, Boundary::Dynamic)
    }

    /// Same interior scheme closed by homogeneous Neumann conditions.
    pub fn neumann(grid: Grid, nl: Nonlinearity) -> Self {
        Self::with_boundary(grid, nl, Boundary::Neumann)
    }

    pub fn with_boundary(grid: Grid, nl: Nonlinearity, boundary: Boundary) -> Self {
        let system = match boundary {
            Boundary::Dynamic => TridiagonalSystem::assemble(&grid),
            Boundary::Neumann => TridiagonalSystem::assemble_neumann(&grid),
        };
        Self {
            grid,
            nl,
            boundary,
            system,
        }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nl
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn system(&self) -> &TridiagonalSystem {
        &self.system
    }

    /// Discrete energy of the pair `(next, curr)`; the Neumann variant has
    /// no boundary kinetic terms.
    pub fn energy(&self, next: &[f64], curr: &[f64]) -> f64 {
        energy_parts(next, curr, &self.grid, &self.nl, self.boundary)
    }

    /// The same energy assembled from the densities `G+_k` and `G-_k`.
    pub fn energy_density_form(&self, next: &[f64], curr: &[f64]) -> f64 {
        let grid = &self.grid;
        let dt = grid.dt();
        let dx = grid.dx();
        let kk = grid.intervals();
        let dn = forward_diff(next, grid);
        let dc = forward_diff(curr, grid);
        let face = |k: usize| 0.5 * (dn[k] * dn[k] + dc[k] * dc[k]) / 2.0;
        let pot = |k: usize| self.nl.pair_potential(next[k], curr[k]);

        let g_plus: f64 = (0..kk).map(|k| face(k) + pot(k)).sum();
        let g_minus: f64 = (1..=kk).map(|k| face(k - 1) + pot(k)).sum();
        let kinetic: Vec<f64> = (0..=kk).map(|k| 0.5 * ((next[k] - curr[k]) / dt).powi(2)).collect();

        let mut energy = trapz_sum(&kinetic, grid) + 0.5 * g_plus * dx + 0.5 * g_minus * dx;
        if self.boundary == Boundary::Dynamic {
            energy += kinetic[0] + kinetic[kk];
        }
        energy
    }

    /// Averaged ghost values `(W_{-1}, W_{K+1})` of `W = (next + prev) / 2`
    /// implied by the boundary equations.
    pub fn ghost_average(&self, next: &[f64], pair: &StatePair) -> (f64, f64) {
        let kk = self.grid.intervals();
        let w = |k: usize| 0.5 * (next[k] + pair.prev[k]);
        match self.boundary {
            Boundary::Dynamic => {
                let dt2 = self.grid.dt() * self.grid.dt();
                let accel = |k: usize| (next[k] - 2.0 * pair.curr[k] + pair.prev[k]) / dt2;
                let two_dx = 2.0 * self.grid.dx();
                (w(1) - two_dx * accel(0), w(kk - 1) - two_dx * accel(kk))
            }
            Boundary::Neumann => (w(1), w(kk - 1)),
        }
    }

    /// One application of the fixed-point map.
    pub fn phi_apply(&self, guess: &[f64], pair: &StatePair) -> Result<Field> {
        let rhs = self.phi_rhs(guess, pair);
        Ok(Field::from_raw(self.system.solve_with(&rhs)?))
    }

    fn phi_rhs(&self, guess: &[f64], pair: &StatePair) -> Vec<f64> {
        let kk = self.grid.intervals();
        let dt2 = self.grid.dt() * self.grid.dt();
        let alpha = self.system.alpha;
        let beta = self.system.beta;
        let (p, c) = (&pair.prev, &pair.curr);
        let coercive = |k: usize| 0.5 * dt2 * guess[k] - dt2 * two_point_quotient(&self.nl, guess[k], p[k]);

        (0..=kk)
            .map(|k| {
                if k == 0 {
                    (1.0 + beta) * (2.0 * c[0] - p[0]) + 2.0 * alpha * (p[1] - p[0]) + coercive(0)
                } else if k == kk {
                    (1.0 + beta) * (2.0 * c[kk] - p[kk]) + 2.0 * alpha * (p[kk - 1] - p[kk]) + coercive(kk)
                } else {
                    2.0 * c[k] - p[k] + alpha * (p[k + 1] - 2.0 * p[k] + p[k - 1]) + coercive(k)
                }
            })
            .collect()
    }

    /// Defect of the scheme equations at `next`, one entry per node, in
    /// units of acceleration. The boundary equations enter through the
    /// eliminated ghost averages.
    pub fn scheme_residual(&self, next: &[f64], pair: &StatePair) -> Vec<f64> {
        let dt2 = self.grid.dt() * self.grid.dt();
        let w: Vec<f64> = next.iter().zip(pair.prev.iter()).map(|(a, b)| 0.5 * (a + b)).collect();
        let (left, right) = self.ghost_average(next, pair);
        let lap = second_diff(&w, left, right, &self.grid);
        (0..next.len())
            .map(|k| {
                let accel = (next[k] - 2.0 * pair.curr[k] + pair.prev[k]) / dt2;
                accel - lap[k] + two_point_quotient(&self.nl, next[k], pair.prev[k])
            })
            .collect()
    }

    /// Advances `(U^(n-1), U^(n))` to `U^(n+1)` by fixed-point iteration
    /// started from `U^(n)`.
    pub fn step(&self, pair: &StatePair, params: &SolverParams) -> Result<(Field, StepDiagnostics)> {
        self.iterate(pair, params, None)
    }

    /// [`step`](Self::step), additionally returning the increment norm of
    /// every iterate.
    pub fn step_traced(&self, pair: &StatePair, params: &SolverParams) -> Result<(Field, StepDiagnostics, Vec<f64>)> {
        let mut trace = Vec::new();
        let (next, diag) = self.iterate(pair, params, Some(&mut trace))?;
        Ok((next, diag, trace))
    }

    fn iterate(
        &self,
        pair: &StatePair,
        params: &SolverParams,
        mut trace: Option<&mut Vec<f64>>,
    ) -> Result<(Field, StepDiagnostics)> {
        let m_n = xnorm(pair, &self.grid);
        let radius_ok = params
            .check_radius
            .then(|| self.grid.dt() < 1.0 / radius_diagnostics(m_n, &self.grid, &self.nl).c_contr);

        let mut guess = pair.curr.clone();
        let mut increment = f64::INFINITY;
        for iteration in 1..=params.max_iter {
            let next = self.phi_apply(&guess, pair)?;
            let diff: Vec<f64> = next.iter().zip(guess.iter()).map(|(a, b)| a - b).collect();
            increment = norm_l2(&diff, &self.grid);
            if let Some(t) = trace.as_deref_mut() {
                t.push(increment);
            }
            if !increment.is_finite() || !next.is_finite() {
                return Err(Error::NoConvergence {
                    step: Some(pair.n),
                    iterations: iteration,
                    increment,
                });
            }
            let converged = increment <= params.tol * (1.0 + norm_l2(&guess, &self.grid));
            guess = next;
            if converged {
                return Ok((
                    guess,
                    StepDiagnostics {
                        iterations: iteration,
                        final_increment: increment,
                        m_n,
                        radius_ok,
                    },
                ));
            }
        }
        Err(Error::NoConvergence {
            step: Some(pair.n),
            iterations: params.max_iter,
            increment,
        })
    }

    /// Second-order Taylor start `U^(1) = u0 + dt v0 + dt^2/2 a` where `a`
    /// is the acceleration the equations assign to the initial data.
    pub fn first_step(&self, u0: &Field, v0: &Field) -> Field {
        let grid = &self.grid;
        let kk = grid.intervals();
        let dx = grid.dx();
        let dt = grid.dt();
        let force = |k: usize| (self.nl.derivative)(u0[k]);

        let (ghost_left, ghost_right) = (u0[1], u0[kk - 1]);
        let lap = second_diff(u0, ghost_left, ghost_right, grid);
        let accel: Vec<f64> = (0..=kk)
            .map(|k| match self.boundary {
                Boundary::Dynamic if k == 0 => (-3.0 * u0[0] + 4.0 * u0[1] - u0[2]) / (2.0 * dx),
                Boundary::Dynamic if k == kk => -(3.0 * u0[kk] - 4.0 * u0[kk - 1] + u0[kk - 2]) / (2.0 * dx),
                _ => lap[k] - force(k),
            })
            .collect();
        Field::from_raw(
            (0..=kk)
                .map(|k| u0[k] + dt * v0[k] + 0.5 * dt * dt * accel[k])
                .collect(),
        )
    }
}
