//! The general scheme with a gradient energy density `X(a,b)`:
//!
//! ```text
//! d2t U_k = d-x Q_k - dF/d(U_k^(n+1), U_k^(n-1))                         k = 0..K
//! d2t U_0 - (Q_0 + Q_-1) / 2 = 0
//! d2t U_K + (Q_K + Q_K-1) / 2 = 0
//! Q_k = d(X,loc)/d(d+U_k^(n+1), d+U_k^(n) : d+U_k^(n), d+U_k^(n-1))
//! ```
//!
//! The boundary rows give `Q_-1 = 2 d2t U_0 - Q_0` and
//! `Q_K = -2 d2t U_K - Q_K-1`; substituting them into the end rows yields
//!
//! ```text
//! (1 + 2/dx) d2t U_0 - (2/dx) Q_0    + dF/d(U_0, .) = 0
//! (1 + 2/dx) d2t U_K + (2/dx) Q_K-1  + dF/d(U_K, .) = 0
//! ```
//!
//! With `X(a,b) = (a^2 + b^2) / 4` this is exactly the semilinear scheme.
//!
//! Steps are computed by a damped Picard iteration around the semilinear
//! linear operator: writing the residual as `r(U) = r_lin(U) + d(U)`, with
//! `r_lin` the linear wave residual,
//!
//! ```text
//! U~ = M^-1 [ -dt^2 r_lin(0) + dt^2 (U/2 - d(U)) ],     U <- U + theta (U~ - U)
//! ```

use crate::error::{Error, Result};
use crate::linsys::TridiagonalSystem;
use crate::mesh::{forward_diff, norm_l2, trapz_sum, Field, Grid, StatePair};
use crate::quotients::{two_point_quotient, FluxDensity, Nonlinearity};
use crate::semilinear::{radius_diagnostics, xnorm, SolverParams, StepDiagnostics};

/// Maximal number of times the damping factor is halved within one step.
pub const MAX_HALVINGS: usize = 4;

#[derive(Debug, Clone)]
pub struct GeneralProblem {
    grid: Grid,
    flux: FluxDensity,
    nl: Nonlinearity,
    /// Optional per-face density `X_{d,k}`; `flux` is used when absent.
    face_flux: Option<fn(usize) -> FluxDensity>,
    system: TridiagonalSystem,
}

impl GeneralProblem {
    pub fn new(grid: Grid, flux: FluxDensity, nl: Nonlinearity) -> Self {
        Self {
            system: TridiagonalSystem::assemble(&grid),
            grid,
            flux,
            nl,
            face_flux: None,
        }
    }

    /// The string vibration equation `u_tt = (u_x / sqrt(1 + u_x^2))_x - F'(u)`.
    pub fn string(grid: Grid, nl: Nonlinearity) -> Self {
        Self::new(grid, FluxDensity::string(), nl)
    }

    pub fn with_face_flux(mut self, face_flux: fn(usize) -> FluxDensity) -> Self {
        self.face_flux = Some(face_flux);
        self
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn flux(&self) -> &FluxDensity {
        &self.flux
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nl
    }

    fn flux_at(&self, k: usize) -> FluxDensity {
        self.face_flux.map_or(self.flux, |f| f(k))
    }

    /// Discrete energy: kinetic, flux density, potential and the two
    /// boundary kinetic terms.
    pub fn general_energy(&self, next: &[f64], curr: &[f64]) -> f64 {
        let grid = &self.grid;
        let dt = grid.dt();
        let kk = grid.intervals();
        let kinetic: Vec<f64> = next.iter().zip(curr).map(|(a, b)| 0.5 * ((a - b) / dt).powi(2)).collect();
        let dn = forward_diff(next, grid);
        let dc = forward_diff(curr, grid);
        let faces: f64 = (0..kk).map(|k| (self.flux_at(k).density)(dn[k], dc[k])).sum::<f64>() * grid.dx();
        let potential: Vec<f64> = next.iter().zip(curr).map(|(&a, &b)| self.nl.pair_potential(a, b)).collect();
        trapz_sum(&kinetic, grid) + faces + trapz_sum(&potential, grid) + kinetic[0] + kinetic[kk]
    }

    /// Face fluxes `Q_k`, `k = 0..K-1`, between the levels `next` and `prev`.
    pub fn flux_values(&self, next: &[f64], prev: &[f64]) -> Vec<f64> {
        let dn = forward_diff(next, &self.grid);
        let dp = forward_diff(prev, &self.grid);
        (0..dn.len()).map(|k| self.flux_at(k).quotient(dn[k], dp[k])).collect()
    }

    /// Defect of the scheme at `next`, with the ghost fluxes eliminated.
    pub fn general_residual(&self, next: &[f64], pair: &StatePair) -> Vec<f64> {
        residual(&self.grid, next, pair, &self.flux_values(next, &pair.prev), &self.nl)
    }

    /// Advances `(U^(n-1), U^(n))` by one step.
    pub fn general_step(&self, pair: &StatePair, params: &SolverParams) -> Result<(Field, StepDiagnostics)> {
        let grid = &self.grid;
        let dt2 = grid.dt() * grid.dt();
        let zero = Nonlinearity::zero();
        let m_n = xnorm(pair, grid);
        let radius_ok = params
            .check_radius
            .then(|| grid.dt() < 1.0 / radius_diagnostics(m_n, grid, &self.nl).c_contr);

        let linear_flux = |u: &[f64]| -> Vec<f64> {
            u.windows(2)
                .zip(pair.prev.windows(2))
                .map(|(a, b)| 0.5 * ((a[1] - a[0]) + (b[1] - b[0])) / grid.dx())
                .collect()
        };
        let origin = vec![0.0; grid.nodes()];
        let r0 = residual(grid, &origin, pair, &linear_flux(&origin), &zero);

        let picard = |u: &[f64]| -> Result<Vec<f64>> {
            let r_gen = self.general_residual(u, pair);
            let r_lin = residual(grid, u, pair, &linear_flux(u), &zero);
            let rhs: Vec<f64> = (0..u.len())
                .map(|k| -dt2 * r0[k] + dt2 * (0.5 * u[k] - (r_gen[k] - r_lin[k])))
                .collect();
            self.system.solve_with(&rhs)
        };

        let mut u = pair.curr.to_vec();
        let mut theta = 1.0;
        let mut halvings = 0;
        let mut last = f64::INFINITY;
        let mut increment = f64::INFINITY;
        for iteration in 1..=params.max_iter {
            let target = picard(&u)?;
            let update: Vec<f64> = target.iter().zip(&u).map(|(t, v)| theta * (t - v)).collect();
            increment = norm_l2(&update, grid);
            if !increment.is_finite() {
                break;
            }
            if increment > last && halvings < MAX_HALVINGS {
                theta *= 0.5;
                halvings += 1;
            }
            last = increment;
            let scale = 1.0 + norm_l2(&u, grid);
            u.iter_mut().zip(&update).for_each(|(v, d)| *v += d);
            if increment <= params.tol * scale {
                return Ok((
                    Field::from_raw(u),
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

    /// Taylor start `U^(1) = u0 + dt v0 + dt^2/2 a` with the acceleration
    /// built from the continuous flux `X~'` of the initial gradients.
    pub fn first_step(&self, u0: &Field, v0: &Field) -> Field {
        let grid = &self.grid;
        let kk = grid.intervals();
        let (dx, dt) = (grid.dx(), grid.dt());
        let grad = forward_diff(u0, grid);
        let q: Vec<f64> = grad.iter().enumerate().map(|(k, &g)| (self.flux_at(k).diagonal_derivative)(g)).collect();
        let s0 = (-3.0 * u0[0] + 4.0 * u0[1] - u0[2]) / (2.0 * dx);
        let sk = (3.0 * u0[kk] - 4.0 * u0[kk - 1] + u0[kk - 2]) / (2.0 * dx);
        let accel: Vec<f64> = (0..=kk)
            .map(|k| {
                if k == 0 {
                    (self.flux_at(0).diagonal_derivative)(s0)
                } else if k == kk {
                    -(self.flux_at(kk - 1).diagonal_derivative)(sk)
                } else {
                    (q[k] - q[k - 1]) / dx - (self.nl.derivative)(u0[k])
                }
            })
            .collect();
        Field::from_raw((0..=kk).map(|k| u0[k] + dt * v0[k] + 0.5 * dt * dt * accel[k]).collect())
    }
}

fn residual(grid: &Grid, next: &[f64], pair: &StatePair, q: &[f64], nl: &Nonlinearity) -> Vec<f64> {
    let kk = grid.intervals();
    let (dx, dt2) = (grid.dx(), grid.dt() * grid.dt());
    let two_dx = 2.0 / dx;
    (0..=kk)
        .map(|k| {
            let accel = (next[k] - 2.0 * pair.curr[k] + pair.prev[k]) / dt2;
            let force = two_point_quotient(nl, next[k], pair.prev[k]);
            if k == 0 {
                (1.0 + two_dx) * accel - two_dx * q[0] + force
            } else if k == kk {
                (1.0 + two_dx) * accel + two_dx * q[kk - 1] + force
            } else {
                accel - (q[k] - q[k - 1]) / dx + force
            }
        })
        .collect()
}
