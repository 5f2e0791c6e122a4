//! The three-pole spectral family.
//!
//! With `q_k = k/2 − 1/4` (the zeros of `cos 2πt`) and free zeros
//! `z1 ∈ (1/2, 1)`, `z2 ∈ (1, 3/2)`, the weight
//!
//! ```text
//! ω(z) = (z1² − z²)(z2² − z²) / ((q1² − z²)(q2² − z²)(q3² − z²))
//! ```
//!
//! is a proper rational function of `z²`, so `ω(z) = Σ A_k / (q_k² − z²)`.
//! Each summand is the Fourier transform (up to `cos 2πz`) of the tent-like
//! profile `σ_k(x) = (π/q_k) sin(2π q_k (1 − |x|))` supported on `[-1, 1]`,
//! which gives the compactly supported `φ = Σ A_k σ_k` with spectrum
//! `φ̂(z) = ω(z) cos 2πz`. The poles of `ω` are cancelled by zeros of the
//! cosine, so `φ̂` is entire.
//!
//! Integrals of `φ̂` are exact through the antiderivative
//!
//! ```text
//! Φ(z) = Σ_k A_k s_k / (2 q_k) · [Si(2π(z − q_k)) + Si(2π(z + q_k))],
//! ```
//!
//! where `s_k = sin 2πq_k = (−1)^{k+1}`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::specfun::{si_finite, sinc};
use crate::{Error, Result};

/// The first three positive zeros of `cos 2πt`; the poles of `ω`.
pub const POLES: [f64; 3] = [0.25, 0.75, 1.25];

/// `sin 2πq_k` for the three poles.
pub const POLE_SIGNS: [f64; 3] = [1.0, -1.0, 1.0];

/// Below this distance from `±q_k` the pole factor of `φ̂` switches to its sinc form.
pub const NEAR_POLE: f64 = 1e-4;

/// `ω` refuses to evaluate closer than this to a pole.
pub const POLE_GUARD: f64 = 1e-12;

/// `q_k = k/2 − 1/4`, the `k`-th zero of `cos 2πt`.
pub fn cos_zero(k: i64) -> f64 {
    k as f64 / 2.0 - 0.25
}

/// The free zeros `(z1, z2)` of `ω`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShapeParams {
    z1: f64,
    z2: f64,
}

impl ShapeParams {
    /// Parameters strictly inside `1/2 < z1 < 1 < z2 < 3/2`.
    pub fn new(z1: f64, z2: f64) -> Result<Self> {
        if z1 > 0.5 && z1 < 1.0 && z2 > 1.0 && z2 < 1.5 {
            Ok(Self { z1, z2 })
        } else {
            Err(Error::InvalidParams {
                z1,
                z2,
                domain: "the open box 1/2 < z1 < 1 < z2 < 3/2",
            })
        }
    }

    /// Parameters in the closed box `1/2 ≤ z1 ≤ 1 ≤ z2 ≤ 3/2`.
    pub fn closed(z1: f64, z2: f64) -> Result<Self> {
        if (0.5..=1.0).contains(&z1) && (1.0..=1.5).contains(&z2) {
            Ok(Self { z1, z2 })
        } else {
            Err(Error::InvalidParams {
                z1,
                z2,
                domain: "the closed box 1/2 <= z1 <= 1 <= z2 <= 3/2",
            })
        }
    }

    /// `(q2, q3)`: the family degenerates to the Rogosinski kernel.
    pub fn rogosinski() -> Self {
        Self {
            z1: POLES[1],
            z2: POLES[2],
        }
    }

    /// The optimum as published to five digits, `(0.72096, 1.23305)`.
    pub fn published_optimum() -> Self {
        Self {
            z1: 0.72096,
            z2: 1.23305,
        }
    }

    pub fn z1(&self) -> f64 {
        self.z1
    }

    pub fn z2(&self) -> f64 {
        self.z2
    }

    /// Distance to the boundary of the box, `0` on the boundary.
    pub fn boundary_distance(&self) -> f64 {
        (self.z1 - 0.5)
            .min(1.0 - self.z1)
            .min(self.z2 - 1.0)
            .min(1.5 - self.z2)
    }
}

/// Partial-fraction coefficients `A_k = lim_{z→q_k} (q_k² − z²) ω(z)`.
pub fn residues(params: ShapeParams) -> [f64; 3] {
    let (z1s, z2s) = (params.z1 * params.z1, params.z2 * params.z2);
    let mut out = [0.0; 3];
    for (k, a) in out.iter_mut().enumerate() {
        let qk2 = POLES[k] * POLES[k];
        let num = (z1s - qk2) * (z2s - qk2);
        let den: f64 = (0..3)
            .filter(|&j| j != k)
            .map(|j| POLES[j] * POLES[j] - qk2)
            .product();
        *a = num / den;
    }
    out
}

/// `σ_k(x) = (π/q_k) sin(2π q_k (1 − |x|))` on `|x| < 1`, zero elsewhere.
pub fn sigma(k: usize, x: f64) -> Result<f64> {
    if !(1..=3).contains(&k) {
        return Err(Error::Domain(format!("sigma index {k} not in 1..=3")));
    }
    let ax = x.abs();
    if ax >= 1.0 {
        return Ok(0.0);
    }
    let q = POLES[k - 1];
    Ok(PI / q * (2.0 * PI * q * (1.0 - ax)).sin())
}

/// A half-open/closed interval `[lo, hi]` on the real line.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn is_empty(&self) -> bool {
        self.hi <= self.lo
    }

    pub fn contains(&self, z: f64) -> bool {
        self.lo <= z && z <= self.hi
    }
}

/// Sign pattern of `φ̂` on `[0, truncation_bound]`.
///
/// Positive pieces are closed, negative pieces open; together they tile
/// the half-line up to the truncation bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignDecomposition {
    pub positive_intervals: Vec<Interval>,
    pub negative_intervals: Vec<Interval>,
    pub truncation_bound: f64,
}

impl SignDecomposition {
    /// All pieces in increasing order, tagged `+1.0` or `-1.0`.
    pub fn pieces(&self) -> Vec<(Interval, f64)> {
        let mut all: Vec<(Interval, f64)> = self
            .positive_intervals
            .iter()
            .map(|&i| (i, 1.0))
            .chain(self.negative_intervals.iter().map(|&i| (i, -1.0)))
            .collect();
        all.sort_by(|a, b| a.0.lo.total_cmp(&b.0.lo));
        all
    }
}

/// `ω`, `φ` and `φ̂` for a fixed choice of `(z1, z2)`. Immutable.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralModel {
    params: ShapeParams,
    residues: [f64; 3],
}

impl SpectralModel {
    pub fn new(params: ShapeParams) -> Self {
        Self {
            params,
            residues: residues(params),
        }
    }

    pub fn params(&self) -> ShapeParams {
        self.params
    }

    pub fn residues(&self) -> [f64; 3] {
        self.residues
    }

    pub fn poles(&self) -> [f64; 3] {
        POLES
    }

    pub fn signs(&self) -> [f64; 3] {
        POLE_SIGNS
    }

    fn numerator(&self, z2: f64) -> f64 {
        let (a, b) = (self.params.z1, self.params.z2);
        (a * a - z2) * (b * b - z2)
    }

    /// The rational weight `ω(z)`; errors within [`POLE_GUARD`] of `±q_k`.
    pub fn omega(&self, z: f64) -> Result<f64> {
        if !z.is_finite() {
            return Err(Error::Domain(format!("omega at non-finite z = {z}")));
        }
        let az = z.abs();
        for q in POLES {
            let distance = (az - q).abs();
            if distance <= POLE_GUARD {
                return Err(Error::Pole {
                    z,
                    pole: q,
                    distance,
                });
            }
        }
        let z2 = az * az;
        let den: f64 = POLES.iter().map(|q| q * q - z2).product();
        Ok(self.numerator(z2) / den)
    }

    /// `Σ A_k / (q_k² − z²)`; equals [`omega`](Self::omega) off the poles.
    pub fn omega_from_residues(&self, z: f64) -> f64 {
        let z2 = z * z;
        self.residues
            .iter()
            .zip(POLES)
            .map(|(a, q)| a / (q * q - z2))
            .sum()
    }

    /// The spectrum `φ̂(z) = ω(z) cos 2πz`, finite for every real `z`.
    ///
    /// Within [`NEAR_POLE`] of `q_k` the factor `cos 2πz / (q_k² − z²)` is
    /// replaced by `s_k · 2π · sinc(2π(z − q_k)) / (q_k + z)`.
    pub fn phi_hat(&self, z: f64) -> f64 {
        let z = z.abs();
        let z2 = z * z;
        let num = self.numerator(z2);
        match POLES.iter().position(|q| (z - q).abs() < NEAR_POLE) {
            Some(k) => {
                let q = POLES[k];
                let rest: f64 = (0..3)
                    .filter(|&j| j != k)
                    .map(|j| POLES[j] * POLES[j] - z2)
                    .product();
                let d = z - q;
                num / rest * POLE_SIGNS[k] * 2.0 * PI * sinc(2.0 * PI * d) / (q + z)
            }
            None => {
                let den: f64 = POLES.iter().map(|q| q * q - z2).product();
                num / den * (2.0 * PI * z).cos()
            }
        }
    }

    /// `φ(x) = Σ A_k σ_k(x)`, supported on `[-1, 1]`.
    pub fn phi(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax >= 1.0 {
            return 0.0;
        }
        self.residues
            .iter()
            .zip(POLES)
            .map(|(a, q)| a * PI / q * (2.0 * PI * q * (1.0 - ax)).sin())
            .sum()
    }

    /// `φ(0) = π Σ s_k A_k / q_k`.
    pub fn phi_at_zero(&self) -> f64 {
        PI * (0..3)
            .map(|k| POLE_SIGNS[k] * self.residues[k] / POLES[k])
            .sum::<f64>()
    }

    /// `φ̂(0) = z1² z2² / (q1² q2² q3²) = (4096/225) z1² z2²`.
    pub fn phi_hat_at_zero(&self) -> f64 {
        let (a, b) = (self.params.z1, self.params.z2);
        4096.0 / 225.0 * a * a * b * b
    }

    /// The odd antiderivative `Φ` of `φ̂` with `Φ(0) = 0`.
    pub fn antiderivative(&self, z: f64) -> f64 {
        let tau = 2.0 * PI;
        (0..3)
            .map(|k| {
                let q = POLES[k];
                self.residues[k] * POLE_SIGNS[k] / (2.0 * q)
                    * (si_finite(tau * (z - q)) + si_finite(tau * (z + q)))
            })
            .sum()
    }

    /// `∫_a^b φ̂ = Φ(b) − Φ(a)`, exact up to the accuracy of `Si`.
    pub fn integrate_phi_hat(&self, a: f64, b: f64) -> Result<f64> {
        if !(a.is_finite() && b.is_finite()) || a > b {
            return Err(Error::Domain(format!(
                "integration bounds must satisfy a <= b (a = {a}, b = {b})"
            )));
        }
        if a == b {
            return Ok(0.0);
        }
        Ok(self.antiderivative(b) - self.antiderivative(a))
    }

    /// The sets where `φ̂ ≥ 0` and `φ̂ < 0` on `[0, truncation_bound]`:
    ///
    /// `E₊ = [0, z1] ∪ [z2, q4] ∪ [q5, q6] ∪ [q7, q8] ∪ …`,
    /// `E₋ = (z1, z2) ∪ (q4, q5) ∪ (q6, q7) ∪ …`.
    pub fn sign_decomposition(&self, truncation_bound: f64) -> Result<SignDecomposition> {
        let q4 = cos_zero(4);
        if !truncation_bound.is_finite() || truncation_bound < q4 {
            return Err(Error::Domain(format!(
                "truncation bound {truncation_bound} must be at least q4 = {q4}"
            )));
        }
        let mut breaks = vec![0.0, self.params.z1, self.params.z2, q4];
        let mut k = 5;
        while *breaks.last().expect("non-empty") < truncation_bound {
            breaks.push(cos_zero(k));
            k += 1;
        }
        let mut out = SignDecomposition {
            positive_intervals: Vec::new(),
            negative_intervals: Vec::new(),
            truncation_bound,
        };
        for (i, w) in breaks.windows(2).enumerate() {
            let piece = Interval {
                lo: w[0],
                hi: w[1].min(truncation_bound),
            };
            if piece.is_empty() {
                continue;
            }
            if i % 2 == 0 {
                out.positive_intervals.push(piece);
            } else {
                out.negative_intervals.push(piece);
            }
        }
        Ok(out)
    }

    /// Symmetric lattice sum `Σ_{|k| ≤ K} φ̂(z + k)`, which tends to `φ(0)`.
    pub fn poisson_sum(&self, z: f64, terms: usize) -> f64 {
        let mut sum = 0.0;
        for k in (1..=terms).rev() {
            let k = k as f64;
            sum += self.phi_hat(z + k) + self.phi_hat(z - k);
        }
        sum + self.phi_hat(z)
    }

    /// A bound `C` with `z² |φ̂(z)| ≤ C` for all `|z| ≥ from`; needs `from ≥ 3/2`.
    ///
    /// Beyond `z2` both numerator factors are at most `z²`, hence
    /// `z²|ω(z)| ≤ z⁶ / (z² − q3²)³`, which decreases in `z`.
    pub fn decay_constant(&self, from: f64) -> f64 {
        assert!(from >= 1.5, "decay bound needs |z| >= 3/2");
        let q3 = POLES[2];
        let z2 = from * from;
        z2 * z2 * z2 / (z2 - q3 * q3).powi(3)
    }

    /// Upper bound on `∫_{from}^∞ |φ̂|`.
    pub fn tail_bound(&self, from: f64) -> f64 {
        self.decay_constant(from) / from
    }

    /// `∫_ℝ |φ̂|` summed piecewise over the sign decomposition up to
    /// `truncation_bound`; returns `(partial, tail)` where the true value
    /// lies in `[partial, partial + tail]`.
    pub fn l1_norm_of_spectrum(&self, truncation_bound: f64) -> Result<(f64, f64)> {
        let dec = self.sign_decomposition(truncation_bound)?;
        let mut partial = 0.0;
        for (piece, _) in dec.pieces() {
            partial += self.integrate_phi_hat(piece.lo, piece.hi)?.abs();
        }
        let from = truncation_bound.max(1.5);
        Ok((2.0 * partial, 2.0 * self.tail_bound(from)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::gauss_kronrod;
    use crate::specfun::{si, Tolerance};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn optimum() -> SpectralModel {
        SpectralModel::new(ShapeParams::published_optimum())
    }

    fn tight() -> Tolerance {
        Tolerance::new(1e-14, 1e-13).unwrap()
    }

    #[test]
    fn params_validation() {
        assert!(ShapeParams::new(0.7, 1.2).is_ok());
        assert!(ShapeParams::new(0.5, 1.2).is_err());
        assert!(ShapeParams::new(0.7, 1.5).is_err());
        assert!(ShapeParams::new(1.1, 1.2).is_err());
        assert!(ShapeParams::closed(0.5, 1.5).is_ok());
        assert!(ShapeParams::closed(0.49, 1.2).is_err());
        assert!(ShapeParams::closed(f64::NAN, 1.2).is_err());
    }

    #[test]
    fn rogosinski_residues() {
        assert_eq!(residues(ShapeParams::rogosinski()), [1.0, 0.0, 0.0]);
    }

    #[test]
    fn residue_matches_limit_at_first_pole() {
        let m = optimum();
        let a1 = m.residues()[0];
        assert!((a1 - 0.8889).abs() < 1e-4, "A1 = {a1}");
        let q = POLES[0];
        for h in [1e-6, -1e-6] {
            let z: f64 = q + h;
            let lim = (q * q - z * z) * m.omega(z).unwrap();
            assert!((lim - a1).abs() < 1e-5);
        }
    }

    #[test]
    fn omega_values() {
        let rog = SpectralModel::new(ShapeParams::rogosinski());
        assert!((rog.omega(0.0).unwrap() - 16.0).abs() < 1e-13);
        let m = optimum();
        assert_eq!(m.omega(0.72096).unwrap(), 0.0);
        let v = m.omega(0.5).unwrap();
        let pf = m.omega_from_residues(0.5);
        assert!(((v - pf) / pf).abs() < 1e-12);
        assert!(matches!(m.omega(0.25), Err(Error::Pole { .. })));
        assert!(matches!(m.omega(-0.75), Err(Error::Pole { .. })));
        assert!(m.omega(0.75 + 1e-6).is_ok());
    }

    #[test]
    fn partial_fractions_at_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = ShapeParams::new(rng.gen_range(0.51..0.99), rng.gen_range(1.01..1.49)).unwrap();
            let m = SpectralModel::new(p);
            for _ in 0..100 {
                let z: f64 = rng.gen_range(-5.0..5.0);
                if POLES.iter().any(|q| (z.abs() - q).abs() < 1e-3) {
                    continue;
                }
                let (a, b) = (m.omega(z).unwrap(), m.omega_from_residues(z));
                assert!(
                    (a - b).abs() <= 1e-12 * a.abs().max(1e-3),
                    "z = {z}: {a} vs {b}"
                );
            }
        }
    }

    #[test]
    fn phi_hat_special_values() {
        let m = optimum();
        let (z1, z2) = (0.72096f64, 1.23305f64);
        let expect = 4096.0 / 225.0 * z1 * z1 * z2 * z2;
        assert!((m.phi_hat(0.0) - expect).abs() < 1e-13);
        assert_eq!(m.phi_hat_at_zero(), expect);
        assert_eq!(m.phi_hat(z1), 0.0);
        assert_eq!(m.phi_hat(z2), 0.0);
        let a1 = m.residues()[0];
        assert!((m.phi_hat(0.25) - 4.0 * PI * a1).abs() < 1e-12);
        for h in [1e-7, -1e-7] {
            assert!((m.phi_hat(0.25 + h) - 4.0 * PI * a1).abs() < 1e-5);
        }
    }

    #[test]
    fn phi_hat_continuous_across_pole_switch() {
        let m = optimum();
        for q in POLES {
            let v = m.phi_hat(q);
            for h in [1e-9, -1e-9] {
                assert!((m.phi_hat(q + h) - v).abs() <= 1e-6);
            }
            // Both branches agree at the switching radius.
            let inside = m.phi_hat(q + NEAR_POLE * 0.999_999);
            let outside = m.phi_hat(q + NEAR_POLE * 1.000_001);
            assert!((inside - outside).abs() < 1e-8, "q = {q}");
        }
    }

    #[test]
    fn sigma_values() {
        assert!((sigma(1, 0.0).unwrap() - 4.0 * PI).abs() < 1e-13);
        assert_eq!(sigma(2, 1.0).unwrap(), 0.0);
        let expect = PI / 1.25 * (PI * 1.25).sin();
        assert!((sigma(3, 0.5).unwrap() - expect).abs() < 1e-14);
        assert!(sigma(0, 0.0).is_err());
        assert!(sigma(4, 0.0).is_err());
    }

    #[test]
    fn sigma_fourier_transform_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for k in 1..=3 {
            let q = POLES[k - 1];
            let mut n = 0;
            while n < 50 {
                let z: f64 = rng.gen_range(-4.0..4.0);
                if (z.abs() - q).abs() < 0.05 {
                    continue;
                }
                n += 1;
                let quad = gauss_kronrod(
                    |x| sigma(k, x).unwrap() * (2.0 * PI * z * x).cos(),
                    0.0,
                    1.0,
                    tight(),
                );
                let exact = (2.0 * PI * z).cos() / (q * q - z * z);
                assert!((2.0 * quad.value - exact).abs() < 1e-8, "k = {k}, z = {z}");
            }
        }
    }

    #[test]
    fn phi_values() {
        let m = optimum();
        assert_eq!(m.phi(1.0), 0.0);
        assert_eq!(m.phi(-3.5), 0.0);
        assert!((m.phi(0.0) - m.phi_at_zero()).abs() < 1e-13);
        let rog = SpectralModel::new(ShapeParams::rogosinski());
        assert!((rog.phi(0.0) - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn antiderivative_rogosinski_first_lobe() {
        let rog = SpectralModel::new(ShapeParams::rogosinski());
        assert_eq!(rog.antiderivative(0.0), 0.0);
        let si_pi = si(PI).unwrap();
        let exact = rog.integrate_phi_hat(0.0, 0.25).unwrap();
        assert!((4.0 * exact - 8.0 * si_pi).abs() < 1e-12);
        let quad = gauss_kronrod(|z| rog.phi_hat(z), 0.0, 0.25, tight());
        assert!((exact - quad.value).abs() < 1e-12);
    }

    #[test]
    fn antiderivative_matches_quadrature() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let p = ShapeParams::new(rng.gen_range(0.51..0.99), rng.gen_range(1.01..1.49)).unwrap();
            let m = SpectralModel::new(p);
            let a: f64 = rng.gen_range(-6.0..6.0);
            let b = a + rng.gen_range(0.0..6.0);
            let exact = m.integrate_phi_hat(a, b).unwrap();
            let quad = gauss_kronrod(|z| m.phi_hat(z), a, b, tight());
            assert!((exact - quad.value).abs() < 1e-10, "[{a}, {b}]");
        }
    }

    #[test]
    fn antiderivative_derivative_is_phi_hat() {
        let m = optimum();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let h = 1e-5;
        for _ in 0..100 {
            let z: f64 = rng.gen_range(-4.0..4.0);
            let fd = (m.antiderivative(z + h) - m.antiderivative(z - h)) / (2.0 * h);
            assert!((fd - m.phi_hat(z)).abs() < 1e-6, "z = {z}");
        }
    }

    #[test]
    fn integrate_phi_hat_edges() {
        let m = optimum();
        assert_eq!(m.integrate_phi_hat(0.3, 0.3).unwrap(), 0.0);
        let b = 0.9;
        let sym = m.integrate_phi_hat(-b, b).unwrap();
        assert!((sym - 2.0 * m.antiderivative(b)).abs() < 1e-14);
        assert!(m.integrate_phi_hat(1.0, 0.0).is_err());
    }

    #[test]
    fn sign_decomposition_pattern() {
        let m = optimum();
        let (z1, z2) = (0.72096, 1.23305);
        let d = m.sign_decomposition(cos_zero(4)).unwrap();
        assert_eq!(
            d.positive_intervals,
            vec![Interval { lo: 0.0, hi: z1 }, Interval { lo: z2, hi: 1.75 }]
        );
        assert_eq!(d.negative_intervals, vec![Interval { lo: z1, hi: z2 }]);

        let d = m.sign_decomposition(cos_zero(6)).unwrap();
        assert_eq!(d.negative_intervals[1], Interval { lo: 1.75, hi: 2.25 });
        assert_eq!(d.positive_intervals[2], Interval { lo: 2.25, hi: 2.75 });
        assert_eq!(d.positive_intervals.len(), 3);

        assert!(m.sign_decomposition(1.0).is_err());

        let d = m.sign_decomposition(10.1).unwrap();
        let pieces = d.pieces();
        assert_eq!(pieces[0].0.lo, 0.0);
        assert_eq!(pieces.last().unwrap().0.hi, 10.1);
        for w in pieces.windows(2) {
            assert_eq!(w[0].0.hi, w[1].0.lo);
            assert_ne!(w[0].1, w[1].1);
        }
    }

    #[test]
    fn sign_pattern_by_dense_sampling() {
        let m = optimum();
        let bound = cos_zero(12);
        let d = m.sign_decomposition(bound).unwrap();
        for i in 0..10_000 {
            let z = bound * (i as f64 + 0.5) / 10_000.0;
            let v = m.phi_hat(z);
            if d.positive_intervals.iter().any(|p| p.contains(z)) {
                assert!(v >= -1e-12, "z = {z}: {v}");
            } else {
                assert!(v <= 1e-12, "z = {z}: {v}");
            }
        }
    }

    #[test]
    fn poisson_sums() {
        let rog = SpectralModel::new(ShapeParams::rogosinski());
        assert!((rog.poisson_sum(0.0, 10_000) - 4.0 * PI).abs() < 2e-3);
        assert_eq!(rog.poisson_sum(0.0, 0), rog.phi_hat(0.0));

        let m = optimum();
        let k = 10_000usize;
        let z = 0.3;
        let tail = 2.0 * m.decay_constant(k as f64 - z) / (k as f64 - z);
        assert!((m.poisson_sum(z, k) - m.phi_at_zero()).abs() <= tail);
    }

    #[test]
    fn spectrum_decays_quadratically() {
        let m = optimum();
        let c = m.decay_constant(10.0);
        let mut z = 10.0;
        while z <= 1000.0 {
            assert!(m.phi_hat(z).abs() * z * z <= c);
            z += 0.0137;
        }
    }

    #[test]
    fn total_variation_telescopes_to_ratio_denominator() {
        let m = optimum();
        let (z1, z2) = (0.72096, 1.23305);
        let [q1, q2, q3] = POLES;
        let denominator = 4.0
            * (m.integrate_phi_hat(0.0, q1).unwrap() + m.integrate_phi_hat(q2, q3).unwrap()
                - m.integrate_phi_hat(z1, z2).unwrap());
        let mut last_gap = f64::INFINITY;
        for bound in [cos_zero(20), cos_zero(200), cos_zero(2000)] {
            let (partial, tail) = m.l1_norm_of_spectrum(bound).unwrap();
            let gap = denominator - partial;
            assert!(
                gap >= -1e-10 && gap <= tail + 1e-10,
                "bound {bound}: gap {gap}, tail {tail}"
            );
            assert!(gap < last_gap);
            last_gap = gap;
        }
    }

    proptest! {
        #[test]
        fn phi_and_phi_hat_are_even(z1 in 0.5001f64..0.9999, z2 in 1.0001f64..1.4999, x in -20.0f64..20.0) {
            let m = SpectralModel::new(ShapeParams::new(z1, z2).unwrap());
            prop_assert_eq!(m.phi_hat(x), m.phi_hat(-x));
            prop_assert_eq!(m.phi(x), m.phi(-x));
            prop_assert_eq!(m.antiderivative(x), -m.antiderivative(-x));
        }

        #[test]
        fn omega_agrees_with_partial_fractions(z1 in 0.5001f64..0.9999, z2 in 1.0001f64..1.4999, z in 0.0f64..6.0) {
            prop_assume!(POLES.iter().all(|q| (z - q).abs() > 1e-3));
            let m = SpectralModel::new(ShapeParams::new(z1, z2).unwrap());
            let a = m.omega(z).unwrap();
            let b = m.omega_from_residues(z);
            prop_assert!((a - b).abs() <= 1e-11 * a.abs().max(1e-2));
        }
    }
}
