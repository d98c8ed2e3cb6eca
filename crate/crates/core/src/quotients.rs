//! Difference quotients and the catalog of nonlinearities and flux densities.
//!
//! The two-point quotient `dF/d(a,c) = (F(a) - F(c)) / (a - c)` is the
//! discrete chain rule behind energy conservation. Catalog entries carry a
//! closed form of it that is free of cancellation; generic potentials fall
//! back to the ratio, switching to the derivative at the midpoint when the
//! arguments nearly coincide.

use crate::error::{Error, Result};

/// Relative threshold below which two arguments are treated as equal.
pub const EPS_SWITCH: f64 = 1e-8;

/// Number of samples used for `C_f(rho) = max_{|x| <= rho} |f(x)|`.
pub const BOUND_SAMPLES: usize = 1000;

fn nearly_equal(a: f64, c: f64) -> bool {
    (a - c).abs() <= EPS_SWITCH * (1.0 + a.abs() + c.abs())
}

fn numeric_step(x: f64) -> f64 {
    f64::EPSILON.cbrt() * (1.0 + x.abs())
}

/// A potential `F~` together with its derivatives and, when available, a
/// cancellation-free closed form of its two-point quotient.
#[derive(Debug, Clone, Copy)]
pub struct Nonlinearity {
    pub name: &'static str,
    pub potential: fn(f64) -> f64,
    pub derivative: fn(f64) -> f64,
    pub second_derivative: Option<fn(f64) -> f64>,
    pub stable_quotient: Option<fn(f64, f64) -> f64>,
}

impl Nonlinearity {
    /// `F(u) = u^4 / 4`, the defocusing cubic `-u^3` force.
    pub fn cubic() -> Self {
        Self {
            name: "cubic",
            potential: |u| u.powi(4) / 4.0,
            derivative: |u| u.powi(3),
            second_derivative: Some(|u| 3.0 * u * u),
            stable_quotient: Some(|a, c| (a + c) * (a * a + c * c) / 4.0),
        }
    }

    /// `F(u) = 1 - cos u`.
    pub fn sine_gordon() -> Self {
        Self {
            name: "sine-gordon",
            potential: |u| 1.0 - u.cos(),
            derivative: f64::sin,
            second_derivative: Some(f64::cos),
            stable_quotient: Some(|a, c| sinc(0.5 * (a - c)) * (0.5 * (a + c)).sin()),
        }
    }

    /// `F(u) = u^4 / 4 + u^2 / 2`.
    pub fn klein_gordon() -> Self {
        Self {
            name: "klein-gordon",
            potential: |u| u.powi(4) / 4.0 + u * u / 2.0,
            derivative: |u| u.powi(3) + u,
            second_derivative: Some(|u| 3.0 * u * u + 1.0),
            stable_quotient: Some(|a, c| (a + c) * (a * a + c * c) / 4.0 + 0.5 * (a + c)),
        }
    }

    /// `F = 0`: the linear wave equation.
    pub fn zero() -> Self {
        Self {
            name: "zero",
            potential: |_| 0.0,
            derivative: |_| 0.0,
            second_derivative: Some(|_| 0.0),
            stable_quotient: Some(|_, _| 0.0),
        }
    }

    /// `F(u) = u^2 / 2`; not a named catalog entry, handy for checks.
    pub fn quadratic() -> Self {
        Self {
            name: "quadratic",
            potential: |u| u * u / 2.0,
            derivative: |u| u,
            second_derivative: Some(|_| 1.0),
            stable_quotient: Some(|a, c| 0.5 * (a + c)),
        }
    }

    /// Looks up a catalog entry by name (`-` and `_` are interchangeable).
    pub fn by_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "cubic" => Ok(Self::cubic()),
            "sine-gordon" | "sinegordon" => Ok(Self::sine_gordon()),
            "klein-gordon" | "kleingordon" => Ok(Self::klein_gordon()),
            "zero" | "linear" => Ok(Self::zero()),
            _ => Err(Error::UnknownNonlinearity(name.to_string())),
        }
    }

    pub fn catalog() -> [Self; 4] {
        [Self::cubic(), Self::sine_gordon(), Self::klein_gordon(), Self::zero()]
    }

    /// Symmetric two-level potential `F(a,b) = (F~(a) + F~(b)) / 2`.
    pub fn pair_potential(&self, a: f64, b: f64) -> f64 {
        0.5 * ((self.potential)(a) + (self.potential)(b))
    }

    pub fn quotient(&self, a: f64, c: f64) -> f64 {
        two_point_quotient(self, a, c)
    }

    /// `F~''(x)`, by central differences of `F~'` when no closed form is given.
    pub fn second_derivative_at(&self, x: f64) -> f64 {
        match self.second_derivative {
            Some(f) => f(x),
            None => {
                let h = numeric_step(x);
                ((self.derivative)(x + h) - (self.derivative)(x - h)) / (2.0 * h)
            }
        }
    }

    /// Sampled `C_{F~'}(rho)`.
    pub fn derivative_bound(&self, rho: f64) -> f64 {
        sampled_max_abs(self.derivative, rho)
    }

    /// Sampled `C_{F~''}(rho)`.
    pub fn second_derivative_bound(&self, rho: f64) -> f64 {
        sampled_max_abs(|x| self.second_derivative_at(x), rho)
    }
}

/// `sin(x)/x` with a Taylor branch near the origin.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sin() / x
    }
}

/// `max_{|x| <= rho} |f(x)|` over [`BOUND_SAMPLES`] equispaced points.
pub fn sampled_max_abs(f: impl Fn(f64) -> f64, rho: f64) -> f64 {
    let rho = rho.abs();
    if rho == 0.0 {
        return f(0.0).abs();
    }
    (0..=BOUND_SAMPLES)
        .map(|i| {
            let x = -rho + 2.0 * rho * i as f64 / BOUND_SAMPLES as f64;
            f(x).abs()
        })
        .fold(0.0, f64::max)
}

/// Two-point difference quotient `dF/d(a,c)`.
pub fn two_point_quotient(nl: &Nonlinearity, a: f64, c: f64) -> f64 {
    if let Some(q) = nl.stable_quotient {
        return q(a, c);
    }
    if nearly_equal(a, c) {
        (nl.derivative)(0.5 * (a + c))
    } else {
        ((nl.potential)(a) - (nl.potential)(c)) / (a - c)
    }
}

/// Componentwise `dF/d(U_k, V_k)`.
pub fn quotient_vec(nl: &Nonlinearity, u: &[f64], v: &[f64]) -> Vec<f64> {
    u.iter().zip(v).map(|(&a, &c)| two_point_quotient(nl, a, c)).collect()
}

/// Four-point difference quotient `d(f,loc)/d(a,b:c,d)` with
/// `loc(a,b) = (a+b)/2`.
///
/// In the degenerate branch `loc(a,b) == loc(c,d)` the value is
/// `d/dx f(x,x)` at `loc(a,b)`, supplied through `diagonal_derivative`.
pub fn four_point_quotient(
    f: impl Fn(f64, f64) -> f64,
    diagonal_derivative: Option<&dyn Fn(f64) -> f64>,
    a: f64,
    b: f64,
    c: f64,
    d: f64,
) -> Result<f64> {
    let l1 = 0.5 * (a + b);
    let l2 = 0.5 * (c + d);
    if nearly_equal(l1, l2) {
        diagonal_derivative
            .map(|dd| dd(l1))
            .ok_or(Error::MissingDiagonalDerivative)
    } else {
        Ok((f(a, b) - f(c, d)) / (l1 - l2))
    }
}

/// [`four_point_quotient`] with the diagonal derivative taken by central
/// differences of step `eps^(1/3) (1 + |x|)`.
pub fn four_point_quotient_numeric(f: impl Fn(f64, f64) -> f64, a: f64, b: f64, c: f64, d: f64) -> f64 {
    let diag = |x: f64| {
        let h = numeric_step(x);
        (f(x + h, x + h) - f(x - h, x - h)) / (2.0 * h)
    };
    four_point_quotient(&f, Some(&diag), a, b, c, d).expect("diagonal derivative supplied")
}

/// Averaged second order difference quotient `F''(xi, xi~; eta, eta~)`:
/// the quotient in `xi` of `dF/d(., eta) + dF/d(., eta~)`.
pub fn averaged_second_quotient(nl: &Nonlinearity, xi: f64, xit: f64, eta: f64, etat: f64) -> f64 {
    let inner = |x: f64| two_point_quotient(nl, x, eta) + two_point_quotient(nl, x, etat);
    if nearly_equal(xi, xit) {
        let h = numeric_step(xit);
        (inner(xit + h) - inner(xit - h)) / (2.0 * h)
    } else {
        (inner(xi) - inner(xit)) / (xi - xit)
    }
}

/// `LHS - RHS` of
/// `dF/d(xi,eta) - dF/d(xi~,eta~) = F''(xi,xi~;eta,eta~)(xi-xi~)/2 + F''(eta,eta~;xi,xi~)(eta-eta~)/2`.
pub fn quotient_decomposition_defect(nl: &Nonlinearity, xi: f64, xit: f64, eta: f64, etat: f64) -> f64 {
    let lhs = two_point_quotient(nl, xi, eta) - two_point_quotient(nl, xit, etat);
    let rhs = 0.5 * averaged_second_quotient(nl, xi, xit, eta, etat) * (xi - xit)
        + 0.5 * averaged_second_quotient(nl, eta, etat, xi, xit) * (eta - etat);
    lhs - rhs
}

/// A two-level gradient energy density `X(a,b)` for the quasilinear scheme,
/// of the factored form `(X~(a) + X~(b)) / 2`.
#[derive(Debug, Clone, Copy)]
pub struct FluxDensity {
    pub name: &'static str,
    /// `X(a,b)`.
    pub density: fn(f64, f64) -> f64,
    /// The four-point quotient along the time diagonal,
    /// `d(X,loc)/d(a,b:b,c)`, which depends only on `(a,c)`.
    pub stable_quotient: fn(f64, f64) -> f64,
    /// `d/dx X(x,x)`, the continuous flux `X~'(x)`.
    pub diagonal_derivative: fn(f64) -> f64,
}

impl FluxDensity {
    /// String vibration: `X(a,b) = (sqrt(1+a^2) + sqrt(1+b^2)) / 2`.
    pub fn string() -> Self {
        Self {
            name: "string",
            density: |a, b| 0.5 * ((1.0 + a * a).sqrt() + (1.0 + b * b).sqrt()),
            stable_quotient: |a, c| (a + c) / ((1.0 + a * a).sqrt() + (1.0 + c * c).sqrt()),
            diagonal_derivative: |x| x / (1.0 + x * x).sqrt(),
        }
    }

    /// `X(a,b) = (a^2 + b^2) / 4`, which turns the general scheme into the
    /// semilinear one.
    pub fn quadratic() -> Self {
        Self {
            name: "quadratic",
            density: |a, b| 0.25 * (a * a + b * b),
            stable_quotient: |a, c| 0.5 * (a + c),
            diagonal_derivative: |x| x,
        }
    }

    pub fn by_name(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "string" => Ok(Self::string()),
            "quadratic" | "linear" => Ok(Self::quadratic()),
            _ => Err(Error::UnknownFlux(name.to_string())),
        }
    }

    /// Face flux `d(X,loc)/d(a,b:b,c)` for gradients `a` (new level) and
    /// `c` (old level).
    pub fn quotient(&self, a: f64, c: f64) -> f64 {
        (self.stable_quotient)(a, c)
    }
}
