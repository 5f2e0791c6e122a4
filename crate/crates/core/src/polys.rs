//! Real trigonometric polynomials, their C- and L1-norms, and the two
//! extremal families: `F_n` with coefficients `φ(ν/n)` and the Rogosinski
//! polynomials `R_n` with coefficients `cos(2π ν/(4n))`.
//!
//! Both families have a closed form obtained by summing the spectrum over
//! the lattice `n(x + ℤ)`:
//!
//! ```text
//! F_n(x) = cos(2πnx) Σ_k (π/q_k) A_k sin(2πq_k/n) / (cos 2πx − cos(2πq_k/n))
//! R_n(x) = sin(2π/(4n)) cos(2πnx) / (cos 2πx − cos(2π/(4n)))
//! ```
//!
//! The quotients have removable singularities at `x ≡ ±q_k/n`; they are
//! evaluated through a Dirichlet-kernel rewriting that is finite everywhere
//! (see [`lattice_quotient`]).

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::quad::GaussLegendre;
use crate::simplex::{self, SimplexOptions};
use crate::specfun::sinc;
use crate::spectral::{SpectralModel, POLES, POLE_SIGNS};
use crate::{Error, Result};

/// Samples per unit degree used to bracket extrema and sign changes.
pub const SAMPLES_PER_DEGREE: usize = 16;

/// Width to which each local maximum of `|t|` is refined.
pub const ARGMAX_WIDTH: f64 = 1e-12;

/// Width to which each sign change of `t` is bisected.
pub const ROOT_WIDTH: f64 = 1e-13;

/// Gauss–Legendre order on sign-constant pieces.
pub const LEGENDRE_ORDER: usize = 32;

/// `t(x) = a_0 + Σ_{0<ν<n} (a_ν cos 2πνx + b_ν sin 2πνx)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrigPolynomial {
    n: usize,
    cos_coeffs: Vec<f64>,
    sin_coeffs: Vec<f64>,
}

impl TrigPolynomial {
    /// `cos_coeffs = [a_0, …, a_{n−1}]`, `sin_coeffs = [b_1, …, b_{n−1}]`.
    pub fn new(cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Result<Self> {
        let n = cos_coeffs.len();
        if n == 0 {
            return Err(Error::Domain("a trigonometric polynomial needs a_0".into()));
        }
        if sin_coeffs.len() + 1 != n {
            return Err(Error::Domain(format!(
                "expected {} sine coefficients for degree bound {n}, got {}",
                n - 1,
                sin_coeffs.len()
            )));
        }
        if cos_coeffs.iter().chain(&sin_coeffs).any(|c| !c.is_finite()) {
            return Err(Error::Domain("coefficients must be finite".into()));
        }
        Ok(Self {
            n,
            cos_coeffs,
            sin_coeffs,
        })
    }

    /// An even (cosine) polynomial.
    pub fn cosine(cos_coeffs: Vec<f64>) -> Result<Self> {
        let m = cos_coeffs.len().saturating_sub(1);
        Self::new(cos_coeffs, vec![0.0; m])
    }

    /// The degree bound `n` (frequencies `|ν| < n`).
    pub fn degree_bound(&self) -> usize {
        self.n
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos_coeffs
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin_coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.cos_coeffs
            .iter()
            .chain(&self.sin_coeffs)
            .all(|&c| c == 0.0)
    }

    /// Exponential-basis coefficient `t̂(ν)` as `(re, im)`; `t̂(−ν)` is its conjugate.
    pub fn fourier_coefficient(&self, nu: i64) -> (f64, f64) {
        let k = nu.unsigned_abs() as usize;
        if k >= self.n {
            return (0.0, 0.0);
        }
        if k == 0 {
            return (self.cos_coeffs[0], 0.0);
        }
        let (a, b) = (self.cos_coeffs[k], self.sin_coeffs[k - 1]);
        let im = if nu > 0 { -0.5 * b } else { 0.5 * b };
        (0.5 * a, im)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let has_sine = self.sin_coeffs.iter().any(|&b| b != 0.0);
        let mut sum = 0.0;
        for nu in (1..self.n).rev() {
            let theta = 2.0 * PI * nu as f64 * x;
            if has_sine {
                let (s, c) = theta.sin_cos();
                sum += self.cos_coeffs[nu] * c + self.sin_coeffs[nu - 1] * s;
            } else {
                sum += self.cos_coeffs[nu] * theta.cos();
            }
        }
        sum + self.cos_coeffs[0]
    }
}

/// C- and L1-norm of a polynomial over one period.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormReport {
    pub c_norm: f64,
    /// A point of `[−1/2, 1/2)` where `|t|` attains `c_norm`.
    pub c_argmax: f64,
    pub l_norm: f64,
    pub l_norm_error_bound: f64,
    pub ratio: f64,
}

fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, width: f64) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > width {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        if c >= d {
            break;
        }
    }
    if fc >= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

fn wrap_period(x: f64) -> f64 {
    let y = x - x.round();
    if y >= 0.5 {
        y - 1.0
    } else {
        y
    }
}

fn require_nonzero(t: &TrigPolynomial) -> Result<()> {
    if t.is_zero() {
        Err(Error::Domain("norm of the zero polynomial".into()))
    } else {
        Ok(())
    }
}

/// `max |t|` over one period and a maximizing point.
///
/// `|t|` is sampled at `16n` equispaced points of `[−1/2, 1/2)`; every
/// sampled local maximum is refined by golden-section search on its two
/// neighbouring cells. Among equal maxima (to `1e-12` relative) a point
/// with `t > 0` is preferred, then the first in scan order.
pub fn c_norm(t: &TrigPolynomial) -> Result<(f64, f64)> {
    require_nonzero(t)?;
    let m = SAMPLES_PER_DEGREE * t.degree_bound();
    let h = 1.0 / m as f64;
    let xs: Vec<f64> = (0..m).map(|j| -0.5 + j as f64 * h).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| t.eval(x)).collect();

    // (|t|, x, t)
    let mut best: Option<(f64, f64, f64)> = None;
    let better = |cand: (f64, f64, f64), cur: (f64, f64, f64)| -> bool {
        let tie = 1e-12 * cur.0.max(f64::MIN_POSITIVE);
        if cand.0 > cur.0 + tie {
            true
        } else if cand.0 >= cur.0 - tie {
            cand.2 > 0.0 && cur.2 < 0.0
        } else {
            false
        }
    };
    for j in 0..m {
        let v = vals[j].abs();
        let prev = vals[(j + m - 1) % m].abs();
        let next = vals[(j + 1) % m].abs();
        if v < prev || v < next {
            continue;
        }
        let mut cand = (v, xs[j], vals[j]);
        let (xr, vr) = golden_max(|x| t.eval(x).abs(), xs[j] - h, xs[j] + h, ARGMAX_WIDTH);
        if vr > v * (1.0 + 1e-12) {
            let x = wrap_period(xr);
            cand = (vr, x, t.eval(x));
        }
        best = match best {
            Some(cur) if !better(cand, cur) => Some(cur),
            _ => Some(cand),
        };
    }
    let (value, x, _) = best.expect("a periodic sample sequence has a maximum");
    Ok((value, x))
}

fn bisect_root<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, fa: f64, width: f64) -> f64 {
    let mut fa_sign = fa > 0.0;
    while b - a > width {
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == fa_sign {
            a = mid;
            fa_sign = fm > 0.0;
        } else {
            b = mid;
        }
    }
    0.5 * (a + b)
}

/// `∫_{−1/2}^{1/2} |t|` and an error estimate.
///
/// Sign changes are bracketed on `16n` samples and bisected to `1e-13`;
/// `t` is then integrated with Gauss–Legendre on each sign-constant piece
/// (split into cells no longer than `1/n`). The error bound sums
/// `|G32 − G24|` over all cells.
pub fn l_norm(t: &TrigPolynomial) -> Result<(f64, f64)> {
    require_nonzero(t)?;
    let n = t.degree_bound();
    let m = SAMPLES_PER_DEGREE * n;
    let h = 1.0 / m as f64;
    let f = |x: f64| t.eval(x);

    let mut breaks = vec![-0.5];
    let mut x0 = -0.5;
    let mut f0 = f(x0);
    for j in 1..=m {
        let x1 = if j == m { 0.5 } else { -0.5 + j as f64 * h };
        let f1 = f(x1);
        if f0 == 0.0 && j > 1 {
            breaks.push(x0);
        } else if f0 * f1 < 0.0 {
            breaks.push(bisect_root(f, x0, x1, f0, ROOT_WIDTH));
        }
        x0 = x1;
        f0 = f1;
    }
    breaks.push(0.5);

    let fine = GaussLegendre::new(LEGENDRE_ORDER);
    let coarse = GaussLegendre::new(LEGENDRE_ORDER * 3 / 4);
    let cell = 1.0 / n as f64;
    let mut total = 0.0;
    let mut error = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        if b <= a {
            continue;
        }
        let pieces = ((b - a) / cell).ceil().max(1.0) as usize;
        let step = (b - a) / pieces as f64;
        let mut piece = 0.0;
        for i in 0..pieces {
            let lo = a + i as f64 * step;
            let hi = if i + 1 == pieces { b } else { lo + step };
            let g = fine.integrate(f, lo, hi);
            error += (g - coarse.integrate(f, lo, hi)).abs();
            piece += g;
        }
        total += piece.abs();
    }
    Ok((total, error))
}

pub fn norm_report(t: &TrigPolynomial) -> Result<NormReport> {
    let (c, x) = c_norm(t)?;
    let (l, err) = l_norm(t)?;
    Ok(NormReport {
        c_norm: c,
        c_argmax: x,
        l_norm: l,
        l_norm_error_bound: err,
        ratio: c / l,
    })
}

fn require_degree(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::Domain("degree bound n must be at least 1".into()))
    } else {
        Ok(())
    }
}

/// `F_n(x) = Σ_{|ν|<n} φ(ν/n) e(νx)` as a cosine polynomial: `a_0 = φ(0)`,
/// `a_ν = 2φ(ν/n)`.
pub fn build_f(model: &SpectralModel, n: usize) -> Result<TrigPolynomial> {
    require_degree(n)?;
    let coeffs = (0..n)
        .map(|nu| {
            let v = model.phi(nu as f64 / n as f64);
            if nu == 0 {
                v
            } else {
                2.0 * v
            }
        })
        .collect();
    TrigPolynomial::cosine(coeffs)
}

/// `R_n(x) = Σ_{|ν|<n} cos(2πν/(4n)) e(νx)`.
pub fn build_rogosinski(n: usize) -> Result<TrigPolynomial> {
    require_degree(n)?;
    let coeffs = (0..n)
        .map(|nu| {
            let v = (2.0 * PI * nu as f64 / (4 * n) as f64).cos();
            if nu == 0 {
                v
            } else {
                2.0 * v
            }
        })
        .collect();
    TrigPolynomial::cosine(coeffs)
}

/// `sin(2πnd) / sin(πd)`, finite for every `d`.
fn dirichlet_quotient(n: usize, d: f64) -> f64 {
    let m = d.round();
    let e = d - m;
    let sign = if (m as i64).rem_euclid(2) == 0 {
        1.0
    } else {
        -1.0
    };
    let nf = n as f64;
    sign * 2.0 * nf * sinc(2.0 * PI * nf * e) / sinc(PI * e)
}

/// `cos(2πnx) / (cos 2πx − cos(2πq/n))` for a zero `q` of `cos 2πt` with
/// `sin 2πq = sign`.
///
/// With `a = q/n`, `cos(2πnx) = −sign·sin(2πn(x − a)) = sign·sin(2πn(x + a))`
/// and `cos 2πx − cos 2πa = −2 sin π(x + a) sin π(x − a)`, so the quotient
/// is a Dirichlet quotient in whichever of `x ∓ a` is closer to an integer,
/// divided by the sine of the other one (bounded away from zero).
pub fn lattice_quotient(n: usize, q: f64, sign: f64, x: f64) -> f64 {
    let a = q / n as f64;
    let (dm, dp) = (x - a, x + a);
    let (sm, sp) = ((PI * dm).sin(), (PI * dp).sin());
    if sm.abs() <= sp.abs() {
        sign * dirichlet_quotient(n, dm) / (2.0 * sp)
    } else {
        -sign * dirichlet_quotient(n, dp) / (2.0 * sm)
    }
}

/// `F_n(x)` from its closed form.
pub fn eval_f_closed(model: &SpectralModel, n: usize, x: f64) -> Result<f64> {
    require_degree(n)?;
    let nf = n as f64;
    let residues = model.residues();
    Ok((0..3)
        .map(|k| {
            let q = POLES[k];
            PI / q
                * residues[k]
                * (2.0 * PI * q / nf).sin()
                * lattice_quotient(n, q, POLE_SIGNS[k], x)
        })
        .sum())
}

/// `R_n(x)` from its closed form.
pub fn eval_r(n: usize, x: f64) -> Result<f64> {
    require_degree(n)?;
    let a = 0.25 / n as f64;
    Ok((2.0 * PI * a).sin() * lattice_quotient(n, 0.25, 1.0, x))
}

/// Symmetric partial sum `Σ_{|ν|≤K} 1/(a² − (z + ν)²)`.
pub fn lattice_sum(a: f64, z: f64, terms: usize) -> f64 {
    let a2 = a * a;
    let mut sum = 0.0;
    for nu in (1..=terms).rev() {
        let nu = nu as f64;
        sum += 1.0 / (a2 - (z + nu).powi(2)) + 1.0 / (a2 - (z - nu).powi(2));
    }
    sum + 1.0 / (a2 - z * z)
}

/// `(π/a) sin(2πa) / (cos 2πz − cos 2πa)`, the value of the full lattice sum.
pub fn lattice_sum_closed(a: f64, z: f64) -> f64 {
    PI / a * (2.0 * PI * a).sin() / ((2.0 * PI * z).cos() - (2.0 * PI * a).cos())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub n: usize,
    pub ratio: f64,
    pub ratio_per_n: f64,
    pub c_argmax: f64,
}

/// `‖F_n‖_C / ‖F_n‖_L` and its normalization by `n` for each `n`.
pub fn ratio_curve(model: &SpectralModel, ns: &[usize]) -> Result<Vec<RatioPoint>> {
    if let Some(&bad) = ns.iter().find(|&&n| n < 2) {
        return Err(Error::Domain(format!(
            "ratio curve needs n >= 2, got {bad}"
        )));
    }
    ns.par_iter()
        .map(|&n| {
            let report = norm_report(&build_f(model, n)?)?;
            Ok(RatioPoint {
                n,
                ratio: report.ratio,
                ratio_per_n: report.ratio / n as f64,
                c_argmax: report.c_argmax,
            })
        })
        .collect()
}

/// A lower estimate of `C_n` and the polynomial attaining it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BruteForceResult {
    pub n: usize,
    pub value: f64,
    pub witness: TrigPolynomial,
    pub restarts: usize,
}

const BRUTE_FORCE_RESTARTS: usize = 12;

fn gauged_polynomial(n: usize, p: &[f64]) -> TrigPolynomial {
    // n = 2: a_0 + cos 2πx. n = 3: a_0 + cos 2πx + a_2 cos 4πx + b_2 sin 4πx.
    let built = match n {
        2 => TrigPolynomial::new(vec![p[0], 1.0], vec![0.0]),
        3 => TrigPolynomial::new(vec![p[0], 1.0, p[1]], vec![0.0, p[2]]),
        _ => unreachable!("gauge defined for n = 2, 3"),
    };
    built.expect("gauged coefficients are finite")
}

fn gauged_ratio(n: usize, p: &[f64]) -> f64 {
    if p.iter().any(|v| !v.is_finite() || v.abs() > 1e6) {
        return f64::NAN;
    }
    norm_report(&gauged_polynomial(n, p)).map_or(f64::NAN, |r| r.ratio)
}

/// Numerical `C_n` for `n ≤ 3` by multistart Nelder–Mead.
///
/// The ratio is invariant under scaling and translation `x → x + h`. For
/// `n ≥ 2` the first harmonic is rotated onto `cos 2πx` with unit amplitude
/// (a vanishing first harmonic reduces to a smaller `n` after `x → x/2`),
/// leaving `a_0` for `n = 2` and `(a_0, a_2, b_2)` for `n = 3`.
pub fn brute_force_cn(n: usize, seed: u64) -> Result<BruteForceResult> {
    match n {
        0 => return Err(Error::Domain("degree bound n must be at least 1".into())),
        1 => {
            return Ok(BruteForceResult {
                n,
                value: 1.0,
                witness: TrigPolynomial::cosine(vec![1.0])?,
                restarts: 0,
            })
        }
        2 | 3 => {}
        _ => {
            return Err(Error::Unsupported(format!(
                "brute-force C_n is limited to n <= 3 (got {n})"
            )))
        }
    }

    let dim = 2 * n - 3;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if n == 3 {
        let lower = brute_force_cn(2, seed)?;
        starts.push(vec![lower.witness.cos_coeffs()[0], 0.0, 0.0]);
    }
    while starts.len() < BRUTE_FORCE_RESTARTS {
        starts.push((0..dim).map(|_| rng.gen_range(-1.5..1.5)).collect());
    }

    let objective = |p: &[f64]| -gauged_ratio(n, p);
    let opts = SimplexOptions {
        initial_step: vec![0.25; dim],
        x_tol: 1e-10,
        f_tol: 1e-13,
        max_iter: 3000,
    };
    let runs: Vec<(Vec<f64>, f64)> = starts
        .par_iter()
        .map(|start| {
            // Restarting the simplex at its own optimum escapes the kinks of max|t|.
            let mut out = simplex::minimize(objective, start, &opts);
            for _ in 0..3 {
                let again = simplex::minimize(objective, &out.x, &opts);
                if again.value >= out.value {
                    break;
                }
                out = again;
            }
            (out.x, -out.value)
        })
        .collect();

    let (best_x, _) = runs
        .iter()
        .filter(|r| r.1.is_finite())
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Domain("no restart produced a finite ratio".into()))?;
    let witness = gauged_polynomial(n, best_x);
    let value = norm_report(&witness)?.ratio;
    Ok(BruteForceResult {
        n,
        value,
        witness,
        restarts: starts.len(),
    })
}
