//! Extremal trigonometric polynomials for the inequality `‖t‖_C ≤ C_n ‖t‖_L`.
//!
//! The crate builds the three-pole spectral family `φ̂(z) = ω(z)·cos(2πz)`,
//! evaluates the asymptotic ratio functional `ρ(z1, z2)` in closed form via
//! the sine integral, maximizes it over the admissible box, and constructs
//! the associated polynomials `F_n` together with their C- and L1-norms.
//!
//! Modules, bottom-up:
//!
//! * [`specfun`]: sine integral, Catalan's constant, `sinc`.
//! * [`quad`]: adaptive Gauss–Kronrod and fixed Gauss–Legendre rules.
//! * [`simplex`]: Nelder–Mead minimizer used by the optimizers.
//! * [`spectral`]: poles, residues, `ω`, `φ`, `φ̂`, its antiderivative and sign pattern.
//! * [`bound`]: `ρ(z1, z2)`, its maximization and the classical reference constants.
//! * [`polys`]: `F_n`, Rogosinski polynomials, norms, ratio curves, small-`n` brute force.
//! * [`verify`]: the identity suite behind `nikolskii verify`.

pub mod bound;
mod error;
pub mod polys;
pub mod quad;
pub mod simplex;
pub mod specfun;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};
