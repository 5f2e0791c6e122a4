use thiserror::Error;

use crate::bound::OptimizationResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("evaluation at z = {z} is within {distance:e} of the pole q = {pole}")]
    Pole { z: f64, pole: f64, distance: f64 },

    #[error("shape parameters (z1 = {z1}, z2 = {z2}) outside {domain}")]
    InvalidParams {
        z1: f64,
        z2: f64,
        domain: &'static str,
    },

    #[error("ratio denominator is not positive (D = {0:e})")]
    DegenerateDenominator(f64),

    #[error(
        "no restart converged; best iterate z1 = {}, z2 = {}, rho = {}, |grad| = {:e}",
        best.z1_star, best.z2_star, best.rho_star, best.gradient_inf_norm
    )]
    NonConvergence { best: Box<OptimizationResult> },

    #[error("unsupported: {0}")]
    Unsupported(String),
}
