//! Structure-preserving finite difference schemes for one-dimensional
//! nonlinear wave equations whose boundary conditions are themselves
//! evolution equations (dynamic boundary conditions):
//!
//! ```text
//! u_tt = u_xx - F'(u)        in (0,T) x (0,L)
//! u_tt(t,0) - u_x(t,0) = 0
//! u_tt(t,L) + u_x(t,L) = 0
//! ```
//!
//! The schemes are built from the discrete variational derivative method,
//! so that a discrete energy including the boundary kinetic terms is
//! conserved exactly by every solution of the scheme.
//!
//! * [`mesh`] - grids, difference operators, trapezoidal sums and norms
//! * [`quotients`] - difference quotients and the nonlinearity catalog
//! * [`linsys`] - the boundary-eliminated tridiagonal system
//! * [`semilinear`] - the semilinear scheme and its fixed-point stepper
//! * [`general`] - the quasilinear scheme driven by a flux density
//! * [`harness`] - experiment presets, trajectories and convergence studies
//!
//! ```
//! use dynwave::harness::{run, ExperimentConfig, InitialData, Preset};
//!
//! let mut config = ExperimentConfig::reference_grid("cubic", InitialData::Preset(Preset::Case1));
//! config.steps = 200;
//! config.final_time = 0.5;
//! let trajectory = run(&config).unwrap();
//! assert!(trajectory.energy_drift() < 1e-9);
//! ```

pub mod error;
pub mod general;
pub mod harness;
pub mod linsys;
pub mod mesh;
pub mod quotients;
pub mod semilinear;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
pub use mesh::{Field, Grid, StatePair};
pub use quotients::{FluxDensity, Nonlinearity};
pub use semilinear::{Boundary, SemilinearScheme, SolverParams, StepDiagnostics};
