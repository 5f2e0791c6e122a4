//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nikolskii_core::bound::{maximize_rho, reference_constants, rho, rho_by_quadrature};
use nikolskii_core::polys::{brute_force_cn, build_f, c_norm, eval_f_closed, eval_r, ratio_curve};
use nikolskii_core::specfun::{si, Tolerance};
use nikolskii_core::spectral::{ShapeParams, SpectralModel};
use nikolskii_core::verify::{self, VerifyOptions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: String) -> Outcome {
    Outcome { ok, detail }
}

/// First `digits` decimals of `v`, truncated.
fn printed(v: f64, digits: i32) -> f64 {
    let scale = 10f64.powi(digits);
    (v * scale).floor() / scale
}

fn same_digits(v: f64, quoted: f64) -> bool {
    (printed(v, 5) - quoted).abs() < 1e-9
}

fn taikov_lower() -> Outcome {
    let c = reference_constants();
    let exact = 2.0 / si(PI).unwrap();
    let dev = (c.taikov_lower - exact).abs();
    outcome(
        same_digits(c.taikov_lower, 1.07995) && dev <= 1e-10,
        format!(
            "value {:.12}, |2/Si(pi) - value| = {dev:.2e}",
            c.taikov_lower
        ),
    )
}

fn taikov_upper() -> Outcome {
    let c = reference_constants();
    outcome(
        same_digits(c.taikov_upper, 1.16624) && same_digits(c.catalan, 0.91596),
        format!("4G/pi = {:.10}, G = {:.10}", c.taikov_upper, c.catalan),
    )
}

fn degenerate_rho() -> Outcome {
    let p = ShapeParams::rogosinski();
    let target = 2.0 / si(PI).unwrap();
    let via_si = rho(p).unwrap();
    let via_quad = rho_by_quadrature(p, Tolerance::new(1e-14, 1e-13).unwrap()).unwrap();
    let d_si = via_si - target;
    let d_paths = (via_si - via_quad).abs();
    outcome(
        d_si.abs() <= 1e-10 && d_paths <= 1e-9,
        format!("rho - 2/Si(pi) = {d_si:.2e}, |antiderivative - quadrature| = {d_paths:.2e}"),
    )
}

fn optimum() -> Outcome {
    match maximize_rho(0, 5, Tolerance::default()) {
        Ok(r) => {
            let ok = (r.rho_star - 1.08176).abs() <= 1e-4
                && (r.z1_star - 0.72096).abs() <= 5e-4
                && (r.z2_star - 1.23305).abs() <= 5e-4
                && r.gradient_inf_norm <= 1e-6;
            outcome(
                ok,
                format!(
                    "rho* = {:.10} at ({:.8}, {:.8}), |grad| = {:.2e}",
                    r.rho_star, r.z1_star, r.z2_star, r.gradient_inf_norm
                ),
            )
        }
        Err(e) => outcome(false, format!("optimizer failed: {e}")),
    }
}

fn closed_form() -> Outcome {
    let model = SpectralModel::new(ShapeParams::published_optimum());
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for n in [4usize, 16, 64, 256] {
        let f = build_f(&model, n).unwrap();
        let scale = c_norm(&f).unwrap().0;
        for _ in 0..1000 {
            let x: f64 = rng.gen_range(-0.5..0.5);
            let direct = f.eval(x);
            let closed = eval_f_closed(&model, n, x).unwrap();
            worst = worst.max((closed - direct).abs() / direct.abs().max(scale));
        }
    }
    outcome(worst <= 1e-8, format!("max relative deviation {worst:.2e}"))
}

fn rogosinski() -> Outcome {
    let model = SpectralModel::new(ShapeParams::rogosinski());
    let mut worst = 0.0f64;
    for n in 1..=64usize {
        let f = build_f(&model, n).unwrap();
        for i in 0..=2048 {
            let x = -0.5 + i as f64 / 2048.0;
            let dev = (f.eval(x) - 4.0 * PI * eval_r(n, x).unwrap()).abs();
            worst = worst.max(dev / n as f64);
        }
    }
    outcome(
        worst <= 1e-9,
        format!("max |F_n - 4 pi R_n| / n = {worst:.2e}"),
    )
}

fn trend() -> Outcome {
    let model = SpectralModel::new(ShapeParams::published_optimum());
    let target = rho(ShapeParams::published_optimum()).unwrap();
    let curve = ratio_curve(&model, &[32, 512]).unwrap();
    let d32 = (curve[0].ratio_per_n - target).abs();
    let d512 = (curve[1].ratio_per_n - target).abs();
    outcome(
        (curve[1].ratio_per_n - 1.08176).abs() <= 1e-2 && d512 < d32,
        format!(
            "ratio/n = {:.7} (n = 32), {:.7} (n = 512); deviation {d32:.2e} -> {d512:.2e}",
            curve[0].ratio_per_n, curve[1].ratio_per_n
        ),
    )
}

fn small_n() -> Outcome {
    let c1 = brute_force_cn(1, 0).unwrap();
    let c2 = brute_force_cn(2, 0).unwrap();
    let constant = c1.witness.degree_bound() == 1;
    outcome(
        c1.value == 1.0 && constant && (c2.value - 2.12532).abs() <= 1e-3,
        format!("C_1 = {}, C_2 = {:.7}", c1.value, c2.value),
    )
}

fn identities() -> Outcome {
    let report = verify::run(&VerifyOptions::default());
    let failed: Vec<String> = report
        .failures()
        .map(|c| format!("{} ({:.2e} > {:.2e})", c.name, c.residual, c.threshold))
        .collect();
    let detail = if failed.is_empty() {
        format!("{} checks passed", report.checks.len())
    } else {
        format!("failed: {}", failed.join(", "))
    };
    outcome(report.all_passed() && report.checks.len() >= 12, detail)
}

fn main() -> ExitCode {
    type Criterion = (&'static str, u64, fn() -> Outcome);
    let criteria: [Criterion; 9] = [
        ("1 lower constant 2/Si(pi)", 1, taikov_lower),
        ("2 upper constant 4G/pi", 1, taikov_upper),
        ("3 degenerate ratio, two paths", 1, degenerate_rho),
        ("4 optimum of the ratio functional", 30, optimum),
        ("5 closed form against coefficient sum", 30, closed_form),
        ("6 degeneration to 4 pi R_n", 10, rogosinski),
        ("7 ratio curve trend", 60, trend),
        ("8 small-n brute force", 60, small_n),
        ("9 identity suite", 60, identities),
    ];
    let mut all = true;
    for (name, limit, check) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let in_time = elapsed <= Duration::from_secs(limit);
        let ok = result.ok && in_time;
        all &= ok;
        println!(
            "{} criterion {name}: {} [{:.2} s / {limit} s]",
            if ok { "PASS" } else { "FAIL" },
            result.detail,
            elapsed.as_secs_f64()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
