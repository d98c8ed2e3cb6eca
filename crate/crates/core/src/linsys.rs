//! The linear system behind the fixed-point map.
//!
//! After the ghost values are eliminated through the boundary equations,
//! each fixed-point update solves `((1 + dt^2/2) E - A) U~ = G`, where
//!
//! ```text
//!     | -2a-b   2a                    |
//!     |   a   -2a    a                |
//! A = |         ...  ...  ...         |      a = dt^2 / (2 dx^2),  b = 2 / dx
//!     |                a   -2a    a   |
//!     |                    2a  -2a-b  |
//! ```
//!
//! `A` is negative definite for the trapezoidal inner product, so the
//! system matrix is strictly diagonally dominant and the Thomas algorithm
//! needs no pivoting.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::error::{Error, Result};
use crate::mesh::{trapz_sum, Grid};

/// Three-band storage of `(1 + dt^2/2) E - A` plus a right-hand side.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalSystem {
    pub sub: Vec<f64>,
    pub diag: Vec<f64>,
    pub sup: Vec<f64>,
    pub rhs: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

impl TridiagonalSystem {
    /// The dynamic-boundary system, `beta = 2 / dx`.
    pub fn assemble(grid: &Grid) -> Self {
        Self::with_boundary_weight(grid, 2.0 / grid.dx())
    }

    /// Homogeneous Neumann closure: the same stencil without boundary mass, `beta = 0`.
    pub fn assemble_neumann(grid: &Grid) -> Self {
        Self::with_boundary_weight(grid, 0.0)
    }

    fn with_boundary_weight(grid: &Grid, beta: f64) -> Self {
        let kk = grid.intervals();
        let dt2 = grid.dt() * grid.dt();
        let alpha = dt2 / (2.0 * grid.dx() * grid.dx());
        let base = 1.0 + 0.5 * dt2 + 2.0 * alpha;

        let mut diag = vec![base; kk + 1];
        diag[0] += beta;
        diag[kk] += beta;
        let mut sub = vec![-alpha; kk];
        let mut sup = vec![-alpha; kk];
        sup[0] = -2.0 * alpha;
        sub[kk - 1] = -2.0 * alpha;

        Self {
            sub,
            diag,
            sup,
            rhs: vec![0.0; kk + 1],
            alpha,
            beta,
        }
    }

    pub fn size(&self) -> usize {
        self.diag.len()
    }

    /// Matrix-vector product with the system matrix.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let n = self.size();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.sub[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.sup[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Solves with the stored right-hand side.
    pub fn solve(&self) -> Result<Vec<f64>> {
        self.solve_with(&self.rhs)
    }

    /// Thomas algorithm for an arbitrary right-hand side.
    pub fn solve_with(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        let n = self.size();
        assert_eq!(rhs.len(), n, "rhs length must match the system size");
        let mut c = vec![0.0; n];
        let mut d = vec![0.0; n];

        let mut pivot = self.diag[0];
        check_pivot(0, pivot)?;
        c[0] = if n > 1 { self.sup[0] / pivot } else { 0.0 };
        d[0] = rhs[0] / pivot;
        for i in 1..n {
            pivot = self.diag[i] - self.sub[i - 1] * c[i - 1];
            check_pivot(i, pivot)?;
            if i + 1 < n {
                c[i] = self.sup[i] / pivot;
            }
            d[i] = (rhs[i] - self.sub[i - 1] * d[i - 1]) / pivot;
        }

        for i in (0..n - 1).rev() {
            d[i] -= c[i] * d[i + 1];
        }
        Ok(d)
    }
}

fn check_pivot(row: usize, pivot: f64) -> Result<()> {
    if pivot.abs() < 1e-300 || !pivot.is_finite() {
        Err(Error::SingularPivot { row, pivot })
    } else {
        Ok(())
    }
}

/// `A U` for the dynamic-boundary matrix `A`.
pub fn apply_a(grid: &Grid, u: &[f64]) -> Vec<f64> {
    let kk = grid.intervals();
    let alpha = grid.dt() * grid.dt() / (2.0 * grid.dx() * grid.dx());
    let beta = 2.0 / grid.dx();
    (0..=kk)
        .map(|k| {
            if k == 0 {
                (-2.0 * alpha - beta) * u[0] + 2.0 * alpha * u[1]
            } else if k == kk {
                2.0 * alpha * u[kk - 1] + (-2.0 * alpha - beta) * u[kk]
            } else {
                alpha * (u[k - 1] - 2.0 * u[k] + u[k + 1])
            }
        })
        .collect()
}

/// Trapezoidal inner product `sum'' u_k v_k dx`.
pub fn trapz_inner(u: &[f64], v: &[f64], grid: &Grid) -> f64 {
    assert_eq!(u.len(), v.len());
    let prod: Vec<f64> = u.iter().zip(v).map(|(a, b)| a * b).collect();
    trapz_sum(&prod, grid)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefinitenessReport {
    /// Largest observed `<A U, U>''`; negative when `A` is negative definite.
    pub max_form: f64,
    /// Smallest observed `<M U, U>'' - (1 + dt^2/2) <U, U>''`.
    pub min_margin: f64,
    pub trials: usize,
}

/// Probes the definiteness of `A` and of the system matrix with random
/// nonzero vectors drawn uniformly from `[-1, 1]^(K+1)`.
pub fn definiteness_check(grid: &Grid, trials: usize, seed: u64) -> DefinitenessReport {
    let mut rng = StdRng::seed_from_u64(seed);
    let system = TridiagonalSystem::assemble(grid);
    let shift = 1.0 + 0.5 * grid.dt() * grid.dt();
    let mut max_form = f64::NEG_INFINITY;
    let mut min_margin = f64::INFINITY;
    let mut done = 0;
    while done < trials {
        let u: Vec<f64> = (0..grid.nodes()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        if u.iter().all(|&v| v == 0.0) {
            continue;
        }
        max_form = max_form.max(trapz_inner(&apply_a(grid, &u), &u, grid));
        let margin = trapz_inner(&system.apply(&u), &u, grid) - shift * trapz_inner(&u, &u, grid);
        min_margin = min_margin.min(margin);
        done += 1;
    }
    DefinitenessReport {
        max_form,
        min_margin,
        trials,
    }
}
