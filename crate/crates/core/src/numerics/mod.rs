//! Numerical substrate: quadrature, elliptic integrals, modular j, ODE
//! tools, continued fractions, and double-double arithmetic.
//!
//! All routines are pure functions of their inputs. Integrand evaluations
//! inside the 2D cubature may run concurrently; reductions happen in a
//! fixed canonical order so results are deterministic for a given
//! tolerance.

pub mod contfrac;
pub mod cubature;
pub mod dd;
pub mod elliptic;
pub mod modular;
pub mod ode;
pub mod sphere;
pub mod tanhsinh;

pub use contfrac::{continued_fraction, continued_fraction_dd, CfExpansion};
pub use cubature::{integrate_2d, Cubature2dOptions, Region};
pub use dd::Dd;
pub use elliptic::{agm, elliptic_k};
pub use modular::j_function;
pub use ode::{
    default_residual_step, ode_residual, solve_ivp, IvpSolution, Poly, RationalFn, RationalOde,
};
pub use sphere::{integrate_sphere, integrate_sphere_sector};
pub use tanhsinh::{integrate_1d, TanhSinhOptions};

use num_complex::Complex64;

/// Errors raised by the numerical substrate.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("evaluation at a registered singular point ({0})")]
    SingularPoint(Complex64),
    #[error("quadrature did not converge: {0}")]
    NonConvergence(String),
    #[error("stencil or interval hits a coefficient pole at {0}")]
    CoefficientPole(f64),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Outcome of a quadrature: value, an honest absolute-error estimate, the
/// number of integrand evaluations, and whether the requested tolerance was
/// met within budget.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureResult<T = f64> {
    pub value: T,
    pub err_abs: f64,
    pub evals: u64,
    pub converged: bool,
}

impl<T> QuadratureResult<T> {
    pub fn map<U>(self, f: impl FnOnce(T) -> U) -> QuadratureResult<U> {
        QuadratureResult {
            value: f(self.value),
            err_abs: self.err_abs,
            evals: self.evals,
            converged: self.converged,
        }
    }
}

/// Kinds of integrable singularities the quadrature knows how to treat.
///
/// `InverseModulus` is a 2D pole of type 1/|z-z0| (absolutely integrable),
/// `Logarithmic` a log|z-z0| weight, and `SqrtEndpoint` a 1D x^(-1/2)
/// endpoint. Every kind listed here is absolutely integrable on its
/// natural domain; the registry is a refinement hint, not a licence for
/// divergent integrands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SingularityKind {
    InverseModulus,
    Logarithmic,
    SqrtEndpoint,
}

/// A declared singular point of an integrand.
#[derive(Debug, Clone, Copy)]
pub struct Singularity {
    pub location: Complex64,
    pub kind: SingularityKind,
}

/// Collection of declared singularities guiding adaptive refinement.
#[derive(Debug, Clone, Default)]
pub struct SingularityRegistry {
    entries: Vec<Singularity>,
}

impl SingularityRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, location: Complex64, kind: SingularityKind) {
        self.entries.push(Singularity { location, kind });
    }

    pub fn with(mut self, location: Complex64, kind: SingularityKind) -> Self {
        self.push(location, kind);
        self
    }

    pub fn entries(&self) -> &[Singularity] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Distinct singular locations, merging duplicates closer than `tol`.
    pub fn distinct_locations(&self, tol: f64) -> Vec<Complex64> {
        let mut out: Vec<Complex64> = Vec::new();
        for e in &self.entries {
            if !out.iter().any(|p| (p - e.location).norm() <= tol) {
                out.push(e.location);
            }
        }
        out
    }
}
