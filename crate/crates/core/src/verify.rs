//! Identity suite: every algebraic and analytic identity the construction
//! relies on, evaluated numerically with its residual and threshold.
//!
//! A [`Fault`] can be injected to confirm that the suite notices a broken
//! building block.

use std::f64::consts::PI;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::bound::{reference_constants, rho, rho_by_quadrature};
use crate::polys::{
    build_f, c_norm, eval_f_closed, eval_r, lattice_sum, lattice_sum_closed, norm_report,
};
use crate::quad::gauss_kronrod;
use crate::specfun::{catalan, si, sinc, Tolerance};
use crate::spectral::{cos_zero, residues, sigma, ShapeParams, SpectralModel, POLES};

/// Deliberate defects for exercising the suite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Fault {
    /// Flip the sign of the antiderivative `Φ`.
    AntiderivativeSign,
}

impl FromStr for Fault {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "antiderivative" | "antiderivative-sign" => Ok(Fault::AntiderivativeSign),
            other => Err(format!("unknown fault '{other}' (known: antiderivative)")),
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct VerifyOptions {
    pub seed: u64,
    pub fault: Option<Fault>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckOutcome {
    pub name: String,
    pub description: String,
    pub residual: f64,
    pub threshold: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub checks: Vec<CheckOutcome>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

struct Suite {
    rng: ChaCha8Rng,
    fault: Option<Fault>,
    checks: Vec<CheckOutcome>,
}

impl Suite {
    fn record(&mut self, name: &str, description: &str, residual: f64, threshold: f64) {
        self.checks.push(CheckOutcome {
            name: name.to_string(),
            description: description.to_string(),
            residual,
            threshold,
            passed: residual <= threshold,
        });
    }

    fn antiderivative(&self, model: &SpectralModel, z: f64) -> f64 {
        let v = model.antiderivative(z);
        match self.fault {
            Some(Fault::AntiderivativeSign) => -v,
            None => v,
        }
    }

    fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    fn random_model(&mut self) -> SpectralModel {
        let z1 = self.uniform(0.51, 0.99);
        let z2 = self.uniform(1.01, 1.49);
        SpectralModel::new(ShapeParams::new(z1, z2).expect("sampled inside the box"))
    }
}

fn tight() -> Tolerance {
    Tolerance {
        abs_tol: 1e-14,
        rel_tol: 1e-13,
    }
}

/// Run every identity check.
pub fn run(options: &VerifyOptions) -> VerifyReport {
    let mut s = Suite {
        rng: ChaCha8Rng::seed_from_u64(options.seed),
        fault: options.fault,
        checks: Vec::new(),
    };
    special_functions(&mut s);
    spectral_identities(&mut s);
    antiderivative_identities(&mut s);
    lattice_identities(&mut s);
    ratio_identities(&mut s);
    polynomial_identities(&mut s);
    VerifyReport { checks: s.checks }
}

fn special_functions(s: &mut Suite) {
    let mut odd = 0.0f64;
    let mut quad = 0.0f64;
    let mut deriv = 0.0f64;
    let h = 1e-5;
    for _ in 0..200 {
        let x = s.uniform(-50.0, 50.0);
        let v = si(x).unwrap_or(f64::NAN);
        odd = odd.max((v + si(-x).unwrap_or(f64::NAN)).abs());
        quad = quad.max((v - gauss_kronrod(sinc, 0.0, x, tight()).value).abs());
    }
    for _ in 0..50 {
        let x = s.uniform(-50.0, 50.0);
        let fd = (si(x + h).unwrap_or(f64::NAN) - si(x - h).unwrap_or(f64::NAN)) / (2.0 * h);
        deriv = deriv.max((fd - sinc(x)).abs());
    }
    s.record("si_oddness", "Si(-x) = -Si(x)", odd, 0.0);
    s.record(
        "si_quadrature",
        "Si(x) against adaptive quadrature of sin(t)/t",
        quad,
        1e-11,
    );
    s.record(
        "si_derivative",
        "central difference of Si equals sinc",
        deriv,
        1e-6,
    );

    let mut partial = 0.0f64;
    let mut prev = 0.0f64;
    for k in 0..1_000_000usize {
        prev = partial;
        let t = 1.0 / ((2 * k + 1) as f64).powi(2);
        partial += if k % 2 == 0 { t } else { -t };
    }
    s.record(
        "catalan_series",
        "Euler-accelerated alternating series for Catalan's constant",
        (0.5 * (partial + prev) - catalan()).abs(),
        1e-12,
    );

    let c = reference_constants();
    let si_pi_quad = gauss_kronrod(sinc, 0.0, PI, tight()).value;
    s.record(
        "taikov_lower_constant",
        "2/Si(pi) from the series against 2/quadrature",
        (c.taikov_lower - 2.0 / si_pi_quad).abs(),
        1e-10,
    );
}

fn spectral_identities(s: &mut Suite) {
    let mut pf = 0.0f64;
    for _ in 0..20 {
        let m = s.random_model();
        for _ in 0..100 {
            let z = s.uniform(-5.0, 5.0);
            if POLES.iter().any(|q| (z.abs() - q).abs() < 1e-3) {
                continue;
            }
            let direct = m.omega(z).unwrap_or(f64::NAN);
            let scale: f64 = m
                .residues()
                .iter()
                .zip(POLES)
                .map(|(a, q)| (a / (q * q - z * z)).abs())
                .sum();
            pf = pf.max((direct - m.omega_from_residues(z)).abs() / scale);
        }
    }
    s.record(
        "partial_fractions",
        "omega equals sum of A_k/(q_k^2 - z^2), relative to the term magnitudes",
        pf,
        1e-12,
    );

    let r = residues(ShapeParams::rogosinski());
    let degen = (r[0] - 1.0).abs().max(r[1].abs()).max(r[2].abs());
    s.record(
        "residues_degenerate",
        "A = (1, 0, 0) at (q2, q3)",
        degen,
        1e-15,
    );

    let mut fourier = 0.0f64;
    for k in 1..=3 {
        let q = POLES[k - 1];
        let mut count = 0;
        while count < 50 {
            let z = s.uniform(-4.0, 4.0);
            if (z.abs() - q).abs() < 0.05 {
                continue;
            }
            count += 1;
            let numeric = 2.0
                * gauss_kronrod(
                    |x| sigma(k, x).unwrap_or(f64::NAN) * (2.0 * PI * z * x).cos(),
                    0.0,
                    1.0,
                    tight(),
                )
                .value;
            let exact = (2.0 * PI * z).cos() / (q * q - z * z);
            fourier = fourier.max((numeric - exact).abs());
        }
    }
    s.record(
        "sigma_fourier_transform",
        "quadrature of sigma_k(x) cos(2 pi z x) equals cos(2 pi z)/(q_k^2 - z^2)",
        fourier,
        1e-8,
    );

    let mut even = 0.0f64;
    for _ in 0..10 {
        let m = s.random_model();
        for _ in 0..100 {
            let z = s.uniform(-20.0, 20.0);
            even = even
                .max((m.phi_hat(z) - m.phi_hat(-z)).abs())
                .max((m.phi(z) - m.phi(-z)).abs());
        }
    }
    s.record("evenness", "phi and phi_hat are even", even, 1e-15);

    let m = SpectralModel::new(ShapeParams::published_optimum());
    let mut jump = 0.0f64;
    for q in POLES {
        for h in [1e-9, -1e-9] {
            jump = jump.max((m.phi_hat(q + h) - m.phi_hat(q)).abs());
        }
    }
    s.record(
        "pole_continuity",
        "phi_hat is continuous at q_1, q_2, q_3",
        jump,
        1e-6,
    );

    let c = m.decay_constant(10.0);
    let mut worst = 0.0f64;
    let mut z = 10.0;
    while z <= 1000.0 {
        worst = worst.max(m.phi_hat(z).abs() * z * z);
        z += 0.0137;
    }
    s.record(
        "spectrum_decay",
        "z^2 |phi_hat(z)| bounded on [10, 1000]",
        worst,
        c,
    );

    let bound = cos_zero(12);
    let mut violation = 0.0f64;
    match m.sign_decomposition(bound) {
        Ok(d) => {
            for i in 0..10_000 {
                let z = bound * (i as f64 + 0.5) / 10_000.0;
                let v = m.phi_hat(z);
                let wrong = if d.positive_intervals.iter().any(|p| p.contains(z)) {
                    -v
                } else {
                    v
                };
                violation = violation.max(wrong);
            }
        }
        Err(_) => violation = f64::INFINITY,
    }
    s.record(
        "sign_pattern",
        "phi_hat >= 0 on E+ and <= 0 on E-",
        violation,
        1e-12,
    );
}

fn antiderivative_identities(s: &mut Suite) {
    let m = SpectralModel::new(ShapeParams::published_optimum());
    let h = 1e-5;
    let mut fd = 0.0f64;
    for _ in 0..100 {
        let z = s.uniform(-4.0, 4.0);
        let d = (s.antiderivative(&m, z + h) - s.antiderivative(&m, z - h)) / (2.0 * h);
        fd = fd.max((d - m.phi_hat(z)).abs());
    }
    s.record(
        "antiderivative_derivative",
        "Phi' = phi_hat by central differences",
        fd,
        1e-6,
    );

    let mut quad = 0.0f64;
    for _ in 0..30 {
        let model = s.random_model();
        let a = s.uniform(-6.0, 6.0);
        let b = a + s.uniform(0.0, 6.0);
        let exact = s.antiderivative(&model, b) - s.antiderivative(&model, a);
        let numeric = gauss_kronrod(|z| model.phi_hat(z), a, b, tight()).value;
        quad = quad.max((exact - numeric).abs());
    }
    s.record(
        "antiderivative_quadrature",
        "Phi(b) - Phi(a) against adaptive quadrature of phi_hat",
        quad,
        1e-10,
    );

    let [q1, q2, q3] = POLES;
    let p = m.params();
    let phi = |z: f64| s.antiderivative(&m, z);
    let denominator =
        4.0 * ((phi(q1) - phi(0.0)) + (phi(q3) - phi(q2)) - (phi(p.z2()) - phi(p.z1())));
    let truncation = cos_zero(2000);
    let outside = match m.sign_decomposition(truncation) {
        Ok(d) => {
            let partial: f64 = 2.0
                * d.pieces()
                    .iter()
                    .map(|(piece, _)| (phi(piece.hi) - phi(piece.lo)).abs())
                    .sum::<f64>();
            let tail = 2.0 * m.tail_bound(truncation);
            let gap = denominator - partial;
            (-gap).max(gap - tail).max(0.0)
        }
        Err(_) => f64::INFINITY,
    };
    s.record(
        "total_variation",
        "integral of |phi_hat| over the sign pieces telescopes to the ratio denominator",
        outside,
        1e-10,
    );
}

fn lattice_identities(s: &mut Suite) {
    let k = 10_000usize;
    let m = SpectralModel::new(ShapeParams::published_optimum());
    let mut poisson = 0.0f64;
    for _ in 0..5 {
        let z = s.uniform(-0.5, 0.5);
        poisson = poisson.max((m.poisson_sum(z, k) - m.phi_at_zero()).abs());
    }
    let far = k as f64 - 0.5;
    let tail = 2.0 * m.decay_constant(far) / far;
    s.record(
        "poisson_sum",
        "sum of phi_hat(z + k) over |k| <= 10^4 equals phi(0) within the tail bound",
        poisson,
        tail,
    );

    let mut lattice = 0.0f64;
    let mut taken = 0;
    while taken < 50 {
        let a = s.uniform(0.1, 1.4);
        let z = s.uniform(-0.5, 0.5);
        if ((2.0 * PI * z).cos() - (2.0 * PI * a).cos()).abs() < 0.05 {
            continue;
        }
        taken += 1;
        lattice = lattice.max((lattice_sum(a, z, k) - lattice_sum_closed(a, z)).abs());
    }
    s.record(
        "lattice_cotangent_identity",
        "sum of 1/(a^2 - (z + v)^2) equals (pi/a) s(a)/(c(z) - c(a)) within O(1/K)",
        lattice,
        2.0 / (k as f64 - 3.0),
    );
}

fn ratio_identities(s: &mut Suite) {
    let rog = ShapeParams::rogosinski();
    let model = SpectralModel::new(rog);
    let [q1, q2, q3] = POLES;
    let phi = |z: f64| s.antiderivative(&model, z);
    let d = 4.0 * ((phi(q1) - phi(0.0)) + (phi(q3) - phi(q2)) - (phi(rog.z2()) - phi(rog.z1())));
    let via_phi = model.phi_hat_at_zero() / d;
    let via_quad = rho_by_quadrature(rog, tight()).unwrap_or(f64::NAN);
    let target = reference_constants().taikov_lower;
    s.record(
        "rho_rogosinski_antiderivative",
        "rho(q2, q3) through Phi equals 2/Si(pi)",
        (via_phi - target).abs(),
        1e-10,
    );
    s.record(
        "rho_rogosinski_two_paths",
        "rho(q2, q3) through Phi and through adaptive quadrature agree",
        (via_phi - via_quad).abs(),
        1e-9,
    );
    let opt = rho(ShapeParams::published_optimum()).unwrap_or(f64::NAN);
    s.record(
        "rho_improves_lower_bound",
        "rho at the published optimum exceeds 2/Si(pi) by at least 1e-3",
        (target + 1e-3 - opt).max(0.0),
        0.0,
    );
}

fn polynomial_identities(s: &mut Suite) {
    let m = SpectralModel::new(ShapeParams::published_optimum());
    let mut closed = 0.0f64;
    for n in [4usize, 16, 64, 256] {
        let f = build_f(&m, n).expect("n >= 1");
        let scale = c_norm(&f).map_or(f64::NAN, |c| c.0);
        for _ in 0..1000 {
            let x = s.uniform(-0.5, 0.5);
            let v = eval_f_closed(&m, n, x).unwrap_or(f64::NAN);
            closed = closed.max((v - f.eval(x)).abs() / scale);
        }
    }
    s.record(
        "closed_form_equivalence",
        "closed form of F_n equals its coefficient sum, relative to max|F_n|",
        closed,
        1e-8,
    );

    let rog = SpectralModel::new(ShapeParams::rogosinski());
    let mut degen = 0.0f64;
    for n in [1usize, 2, 4, 8, 16, 32, 64] {
        let f = build_f(&rog, n).expect("n >= 1");
        for i in 0..=1024 {
            let x = -0.5 + i as f64 / 1024.0;
            let r = eval_r(n, x).unwrap_or(f64::NAN);
            degen = degen.max((f.eval(x) - 4.0 * PI * r).abs() / n as f64);
        }
    }
    s.record(
        "rogosinski_degeneration",
        "F_n = 4 pi R_n at (q2, q3), deviation divided by n",
        degen,
        1e-9,
    );

    let mut below = 0.0f64;
    for n in [2usize, 5, 33] {
        let model = s.random_model();
        if let Ok(r) = build_f(&model, n).and_then(|f| norm_report(&f)) {
            below = below.max(1.0 - r.ratio);
        } else {
            below = f64::INFINITY;
        }
    }
    s.record(
        "norm_ordering",
        "||F_n||_C >= ||F_n||_L on a unit interval",
        below,
        1e-12,
    );
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_build_passes() {
        let report = run(&VerifyOptions::default());
        let failed: Vec<_> = report.failures().collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(report.checks.len() >= 12);
    }

    #[test]
    fn injected_fault_is_caught() {
        let report = run(&VerifyOptions {
            seed: 0,
            fault: Some(Fault::AntiderivativeSign),
        });
        assert!(!report.all_passed());
        assert!(report
            .failures()
            .any(|c| c.name.starts_with("antiderivative")));
        assert!(report.failures().all(|c| {
            c.name.starts_with("antiderivative")
                || c.name == "total_variation"
                || c.name.starts_with("rho_rogosinski")
        }));
    }

    #[test]
    fn fault_names_parse() {
        assert_eq!("antiderivative".parse(), Ok(Fault::AntiderivativeSign));
        assert!("nonsense".parse::<Fault>().is_err());
    }
}
