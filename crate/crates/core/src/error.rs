use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("length mismatch: expected {expected} values, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("non-finite value at index {0}")]
    NonFinite(usize),

    #[error("domain length must be positive, got {0}")]
    NonPositiveLength(f64),

    #[error("unknown nonlinearity `{0}` (expected one of: cubic, sine-gordon, klein-gordon, zero)")]
    UnknownNonlinearity(String),

    #[error("unknown flux density `{0}` (expected one of: string, quadratic)")]
    UnknownFlux(String),

    #[error("unknown preset `{0}` (expected one of: case1, case2, case3)")]
    UnknownPreset(String),

    #[error("degenerate four-point quotient requires a diagonal-derivative callback")]
    MissingDiagonalDerivative,

    #[error("tridiagonal solve hit a vanishing pivot {pivot:e} at row {row}")]
    SingularPivot { row: usize, pivot: f64 },

    #[error(
        "fixed-point iteration did not converge{} after {iterations} iterations \
         (last increment {increment:e}); reduce Δt so that Δt < R1(M_n)",
        .step.map(|n| format!(" at step n={n}")).unwrap_or_default()
    )]
    NoConvergence {
        step: Option<usize>,
        iterations: usize,
        increment: f64,
    },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("convergence study needs at least {min} levels, got {got}")]
    TooFewLevels { min: usize, got: usize },
}

impl Error {
    /// Attaches the time index of the failing step to a solver error.
    pub fn at_step(self, n: usize) -> Self {
        match self {
            Error::NoConvergence {
                iterations,
                increment,
                ..
            } => Error::NoConvergence {
                step: Some(n),
                iterations,
                increment,
            },
            other => other,
        }
    }
}
