//! Numerical laboratory for explicit K3-surface computations.
//!
//! The crate is organized around five subsystems:
//!
//! - [`numerics`]: the language-agnostic substrate — adaptive quadrature on
//!   intervals, planar regions and the Riemann sphere (with declared
//!   integrable singularities), AGM/elliptic integrals, the modular
//!   j-function by q-expansion, rational-coefficient ODE tools, continued
//!   fractions, and a software double-double type for extended precision.
//! - [`kummer`]: exact geometry of the two-parameter Kummer quartic family —
//!   conic and nodal-fiber parametrizations, the singular-fiber census, and
//!   branch points of the elliptic pencil.
//! - [`regulator`]: the real-regulator densities on the normalized nodal
//!   fiber, the integrals psi/eta over the sphere, the limit at the
//!   diagonal degeneration, asymptotic log-fits, and the local estimate
//!   checks backing the convergence analysis.
//! - [`picardfuchs`]: the quartic normal form, moduli invariants, the four
//!   transcribed Picard-Fuchs operators, AGM-based period residual checks,
//!   the modular parametrization, and the two-isogeny consistency test.
//! - [`shioda`]: the rank-20 specialization — root geometry of the fiber
//!   quadratic, the kappa period ratio with dual tail strategies, the
//!   theta-to-mu fibration match, and j-invariant consistency.
//!
//! [`checks`] aggregates the verification suites used by both the CLI
//! `verify` command and the acceptance test target.

pub mod checks;
pub mod kummer;
pub mod numerics;
pub mod picardfuchs;
pub mod regulator;
pub mod shioda;

pub use num_complex::Complex64;
