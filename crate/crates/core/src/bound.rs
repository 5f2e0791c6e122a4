//! The asymptotic ratio functional and its maximization.
//!
//! For the polynomials `F_n` built from `(z1, z2)`,
//! `‖F_n‖_C / ‖F_n‖_L ≥ ρ(z1, z2)·n + O(1/n)` with
//!
//! ```text
//! ρ(z1, z2) = φ̂(0) / D,   D = 4 (∫₀^{q1} + ∫_{q2}^{q3} − ∫_{z1}^{z2}) φ̂(z) dz = ∫_ℝ |φ̂|.
//! ```
//!
//! `D` is evaluated exactly through the sine-integral antiderivative; an
//! independent adaptive-quadrature route is kept for cross-checks.

use std::cmp::Ordering;
use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quad::gauss_kronrod;
use crate::simplex::{self, SimplexOptions};
use crate::specfun::{catalan, si_pi, Tolerance};
use crate::spectral::{ShapeParams, SpectralModel, POLES};
use crate::{Error, Result};

/// Finite-difference step for the stationarity certificate.
pub const GRADIENT_STEP: f64 = 1e-5;

/// A maximizer is certified stationary below this gradient ∞-norm.
pub const GRADIENT_TOL: f64 = 1e-6;

/// Maximizers closer than this to the box boundary are not reported as converged.
pub const BOUNDARY_GUARD: f64 = 1e-9;

/// Grid cells within this of `ρ*` are listed in the result.
pub const NEAR_OPTIMAL_BAND: f64 = 1e-6;

fn checked_ratio(numerator: f64, denominator: f64) -> Result<f64> {
    if denominator > 0.0 && denominator.is_finite() {
        Ok(numerator / denominator)
    } else {
        Err(Error::DegenerateDenominator(denominator))
    }
}

/// `D = 4 (∫₀^{q1} + ∫_{q2}^{q3} − ∫_{z1}^{z2}) φ̂` via the antiderivative.
pub fn rho_denominator(model: &SpectralModel) -> f64 {
    let phi = |z: f64| model.antiderivative(z);
    let [q1, q2, q3] = POLES;
    let p = model.params();
    4.0 * ((phi(q1) - phi(0.0)) + (phi(q3) - phi(q2)) - (phi(p.z2()) - phi(p.z1())))
}

/// `ρ(z1, z2)`; accepts the closed parameter box.
pub fn rho(params: ShapeParams) -> Result<f64> {
    let model = SpectralModel::new(params);
    checked_ratio(model.phi_hat_at_zero(), rho_denominator(&model))
}

/// `ρ(z1, z2)` with `φ̂(0)` taken from `φ̂` itself and every integral done
/// by adaptive Gauss–Kronrod quadrature. Shares no code with [`rho`]
/// beyond `φ̂`.
pub fn rho_by_quadrature(params: ShapeParams, tol: Tolerance) -> Result<f64> {
    let model = SpectralModel::new(params);
    let integral = |a: f64, b: f64| -> Result<f64> {
        let r = gauss_kronrod(|z| model.phi_hat(z), a, b, tol);
        if r.converged {
            Ok(r.value)
        } else {
            Err(Error::Domain(format!(
                "quadrature of phi_hat on [{a}, {b}] did not converge (error {:e})",
                r.error
            )))
        }
    };
    let [q1, q2, q3] = POLES;
    let d = 4.0 * (integral(0.0, q1)? + integral(q2, q3)? - integral(params.z1(), params.z2())?);
    checked_ratio(model.phi_hat(0.0), d)
}

/// Central-difference gradient of `ρ` in `(z1, z2)`.
pub fn rho_gradient(params: ShapeParams) -> Result<[f64; 2]> {
    let h = GRADIENT_STEP;
    let (z1, z2) = (params.z1(), params.z2());
    let at = |a: f64, b: f64| ShapeParams::closed(a, b).and_then(rho);
    Ok([
        (at(z1 + h, z2)? - at(z1 - h, z2)?) / (2.0 * h),
        (at(z1, z2 + h)? - at(z1, z2 - h)?) / (2.0 * h),
    ])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub z1: f64,
    pub z2: f64,
    pub rho: f64,
}

/// Descending in `ρ`, then lexicographically ascending in `(z1, z2)`.
fn rank(a: &GridPoint, b: &GridPoint) -> Ordering {
    b.rho
        .total_cmp(&a.rho)
        .then(a.z1.total_cmp(&b.z1))
        .then(a.z2.total_cmp(&b.z2))
}

/// `ρ` tabulated on a rectangular grid, row-major in `z1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RhoGrid {
    pub z1_axis: Vec<f64>,
    pub z2_axis: Vec<f64>,
    pub points: Vec<GridPoint>,
}

impl RhoGrid {
    fn over(z1_axis: Vec<f64>, z2_axis: Vec<f64>) -> Result<Self> {
        let pairs: Vec<(f64, f64)> = z1_axis
            .iter()
            .flat_map(|&a| z2_axis.iter().map(move |&b| (a, b)))
            .collect();
        let points = pairs
            .par_iter()
            .map(|&(z1, z2)| {
                let rho = rho(ShapeParams::closed(z1, z2)?)?;
                Ok(GridPoint { z1, z2, rho })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            z1_axis,
            z2_axis,
            points,
        })
    }

    /// Cell centres of a `resolution × resolution` partition of the open box.
    pub fn cell_centres(resolution: usize) -> Result<Self> {
        if resolution == 0 {
            return Err(Error::Domain("grid resolution must be positive".into()));
        }
        let axis = |lo: f64| -> Vec<f64> {
            (0..resolution)
                .map(|i| lo + 0.5 * (i as f64 + 0.5) / resolution as f64)
                .collect()
        };
        Self::over(axis(0.5), axis(1.0))
    }

    /// `points × points` nodes of the closed box, boundary included.
    pub fn closed_box(points: usize) -> Result<Self> {
        if points < 2 {
            return Err(Error::Domain(
                "closed grid needs at least 2 points per axis".into(),
            ));
        }
        let axis = |lo: f64| -> Vec<f64> {
            (0..points)
                .map(|i| lo + 0.5 * i as f64 / (points - 1) as f64)
                .collect()
        };
        Self::over(axis(0.5), axis(1.0))
    }

    /// Highest `ρ`, ties broken towards the lexicographically smallest `(z1, z2)`.
    pub fn best(&self) -> GridPoint {
        *self
            .points
            .iter()
            .min_by(|a, b| rank(a, b))
            .expect("grid is non-empty")
    }

    fn ranked(&self) -> Vec<GridPoint> {
        let mut v = self.points.clone();
        v.sort_by(rank);
        v
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub z1_star: f64,
    pub z2_star: f64,
    pub rho_star: f64,
    pub gradient_inf_norm: f64,
    pub restarts_used: usize,
    pub converged: bool,
    /// Best value of the coarse scan that seeded the refinement.
    pub grid_best: GridPoint,
    /// Every scanned cell with `ρ ≥ ρ* − 1e-6`.
    pub near_optimal_cells: Vec<GridPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub seed: u64,
    pub restarts: usize,
    /// Coarse scan resolution per axis.
    pub scan: usize,
    pub tol: Tolerance,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 5,
            scan: 64,
            tol: Tolerance::default(),
        }
    }
}

/// Grid scan followed by Nelder–Mead refinement from the best cells.
pub fn maximize_rho(seed: u64, restarts: usize, tol: Tolerance) -> Result<OptimizationResult> {
    let config = OptimizerConfig {
        seed,
        restarts,
        tol,
        ..OptimizerConfig::default()
    };
    let grid = RhoGrid::cell_centres(config.scan)?;
    maximize_rho_on_grid(&grid, &config)
}

/// Refinement stage of [`maximize_rho`] on a precomputed scan.
pub fn maximize_rho_on_grid(
    grid: &RhoGrid,
    config: &OptimizerConfig,
) -> Result<OptimizationResult> {
    if config.restarts == 0 {
        return Err(Error::Domain("at least one restart is required".into()));
    }
    let ranked = grid.ranked();
    let grid_best = ranked[0];
    let cell = |axis: &[f64]| {
        if axis.len() > 1 {
            (axis[1] - axis[0]).abs()
        } else {
            0.05
        }
    };
    let (h1, h2) = (cell(&grid.z1_axis), cell(&grid.z2_axis));

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let starts: Vec<(GridPoint, [f64; 2])> = ranked
        .iter()
        .take(config.restarts)
        .map(|&p| {
            (
                p,
                [h1 * rng.gen_range(0.5..1.0), h2 * rng.gen_range(0.5..1.0)],
            )
        })
        .collect();

    let objective = |x: &[f64]| match ShapeParams::closed(x[0], x[1]).and_then(rho) {
        Ok(v) => -v,
        Err(_) => f64::INFINITY,
    };

    let mut candidates: Vec<(GridPoint, f64, bool)> = starts
        .par_iter()
        .map(|(start, step)| {
            let opts = SimplexOptions {
                initial_step: step.to_vec(),
                x_tol: config.tol.rel_tol,
                f_tol: config.tol.abs_tol,
                max_iter: 4000,
            };
            let out = simplex::minimize(objective, &[start.z1, start.z2], &opts);
            let point = GridPoint {
                z1: out.x[0],
                z2: out.x[1],
                rho: -out.value,
            };
            let params = ShapeParams::closed(point.z1, point.z2).ok();
            let interior = params.is_some_and(|p| p.boundary_distance() > BOUNDARY_GUARD);
            let grad = params
                .and_then(|p| rho_gradient(p).ok())
                .map_or(f64::INFINITY, |g| g[0].abs().max(g[1].abs()));
            let ok = out.converged && interior && grad <= GRADIENT_TOL;
            (point, grad, ok)
        })
        .collect();
    candidates.sort_by(|a, b| rank(&a.0, &b.0));

    let chosen = candidates
        .iter()
        .find(|c| c.2)
        .copied()
        .unwrap_or(candidates[0]);
    let (best, grad, converged) = chosen;
    let rho_star = rho(ShapeParams::closed(best.z1, best.z2)?)?;
    let near_optimal_cells = ranked
        .iter()
        .take_while(|p| p.rho >= rho_star - NEAR_OPTIMAL_BAND)
        .copied()
        .collect();
    let result = OptimizationResult {
        z1_star: best.z1,
        z2_star: best.z2,
        rho_star,
        gradient_inf_norm: grad,
        restarts_used: starts.len(),
        converged,
        grid_best,
        near_optimal_cells,
    };
    if converged {
        Ok(result)
    } else {
        Err(Error::NonConvergence {
            best: Box::new(result),
        })
    }
}

/// The classical two-sided constants and their ingredients.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceConstants {
    /// `2 / Si(π)`, attained by the Rogosinski polynomials.
    pub taikov_lower: f64,
    /// `4G / π`.
    pub taikov_upper: f64,
    pub catalan: f64,
    pub si_pi: f64,
}

pub fn reference_constants() -> ReferenceConstants {
    let si_pi = si_pi();
    let catalan = catalan();
    ReferenceConstants {
        taikov_lower: 2.0 / si_pi,
        taikov_upper: 4.0 * catalan / PI,
        catalan,
        si_pi,
    }
}
