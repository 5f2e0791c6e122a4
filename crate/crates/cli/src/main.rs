//! `nikolskii`: constants, the ratio functional and its optimizer, the
//! extremal polynomials, and the identity suite, as JSON or CSV.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use nikolskii_core::bound::{
    maximize_rho_on_grid, reference_constants, rho, rho_by_quadrature, rho_denominator,
    rho_gradient, OptimizationResult, OptimizerConfig, RhoGrid,
};
use nikolskii_core::polys::{
    brute_force_cn, build_f, norm_report, ratio_curve, NormReport, RatioPoint,
};
use nikolskii_core::specfun::Tolerance;
use nikolskii_core::spectral::{ShapeParams, SpectralModel};
use nikolskii_core::verify::{self, CheckOutcome, Fault, VerifyOptions};
use nikolskii_core::Error;

const SCHEMA: u32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "nikolskii",
    version,
    about = "Lower bounds for the Nikolskii constant C_n"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reference constants next to their quoted digits, plus the recomputed optimum.
    Constants {
        #[command(flatten)]
        opt: OptimizeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Ratio functional at one parameter pair, through the antiderivative and by quadrature.
    Rho {
        #[command(flatten)]
        shape: ShapeArgs,
        /// Relative tolerance of the quadrature path.
        #[arg(long, default_value_t = 1e-12)]
        quad_tol: f64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Maximize the ratio functional. `--out DIR` writes optimize.json and rho_grid.csv.
    Optimize {
        #[command(flatten)]
        opt: OptimizeArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Build F_n. `--out DIR` writes F_n.csv, coefficients.csv and norms.json.
    ///
    /// coefficients.csv lists nu >= 0 only. `cos_coefficient` is the cosine-series
    /// coefficient a_nu of F_n(x) = a_0 + sum a_nu cos(2 pi nu x); for nu >= 1 it is
    /// twice `fourier_coefficient`, the shared value of the +nu and -nu exponential
    /// coefficients.
    Poly {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        n: usize,
        /// Number of equispaced sample points on [-1/2, 1/2).
        #[arg(long, default_value_t = 4096)]
        grid: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// ||F_n||_C / ||F_n||_L for n = n-min, n-min + n-step, ..., n-max.
    RatioCurve {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, default_value_t = 32)]
        n_min: usize,
        #[arg(long, default_value_t = 512)]
        n_max: usize,
        #[arg(long, default_value_t = 32)]
        n_step: usize,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Numerical C_n for n <= 3 by multistart simplex search.
    BruteForce {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Run the identity suite; exit status 1 if any check fails.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, hide = true)]
        inject_fault: Option<Fault>,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Args, Debug, Clone, Copy)]
struct ShapeArgs {
    #[arg(long, default_value_t = ShapeParams::published_optimum().z1(), allow_negative_numbers = true)]
    z1: f64,
    #[arg(long, default_value_t = ShapeParams::published_optimum().z2(), allow_negative_numbers = true)]
    z2: f64,
}

impl ShapeArgs {
    fn params(&self) -> Result<ShapeParams, CliError> {
        Ok(ShapeParams::new(self.z1, self.z2)?)
    }
}

#[derive(Args, Debug, Clone, Copy)]
struct OptimizeArgs {
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 5)]
    restarts: usize,
    /// Coarse scan cells per axis.
    #[arg(long, default_value_t = 64)]
    scan: usize,
    /// Relative step tolerance of the simplex; the value tolerance is 1/100 of it.
    #[arg(long, default_value_t = 1e-10)]
    opt_tol: f64,
}

impl OptimizeArgs {
    fn config(&self) -> Result<OptimizerConfig, CliError> {
        Ok(OptimizerConfig {
            seed: self.seed,
            restarts: self.restarts,
            scan: self.scan,
            tol: Tolerance::new(self.opt_tol / 100.0, self.opt_tol)?,
        })
    }
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file, or output directory for `poly` and `optimize`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug)]
enum CliError {
    Core(Error),
    Io { path: PathBuf, source: io::Error },
    Encode(String),
    VerifyFailed(Vec<CheckOutcome>),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Encode(e.to_string())
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Encode(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::VerifyFailed(_) => 1,
            CliError::Core(Error::NonConvergence { .. }) => 3,
            CliError::Core(_) => 2,
            CliError::Io { .. } | CliError::Encode(_) => 4,
        }
    }

    fn report(&self) {
        match self {
            CliError::Core(e) => eprintln!("error: {e}"),
            CliError::Io { path, source } => eprintln!("error: {}: {source}", path.display()),
            CliError::Encode(e) => eprintln!("error: {e}"),
            CliError::VerifyFailed(failed) => {
                for c in failed {
                    eprintln!(
                        "error: identity '{}' failed: residual {:e} exceeds {:e}",
                        c.name, c.residual, c.threshold
                    );
                }
            }
        }
    }
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct QuotedConstant {
    name: String,
    value: f64,
    quoted: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ConstantsReport {
    schema: u32,
    constants: Vec<QuotedConstant>,
    optimum: OptimizationResult,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RhoReport {
    schema: u32,
    z1: f64,
    z2: f64,
    rho: f64,
    rho_quadrature: f64,
    denominator: f64,
    phi_hat_at_zero: f64,
    residues: [f64; 3],
    gradient: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct OptimizeReport {
    schema: u32,
    #[serde(flatten)]
    result: OptimizationResult,
    config: OptimizerConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct PolyReport {
    schema: u32,
    z1: f64,
    z2: f64,
    n: usize,
    rho: f64,
    ratio_per_n: f64,
    norms: NormReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct RatioCurveReport {
    schema: u32,
    z1: f64,
    z2: f64,
    rho: f64,
    points: Vec<RatioPoint>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct BruteForceReport {
    schema: u32,
    n: usize,
    seed: u64,
    value: f64,
    restarts: usize,
    cos_coeffs: Vec<f64>,
    sin_coeffs: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct VerifyOutput {
    schema: u32,
    all_passed: bool,
    checks: Vec<CheckOutcome>,
}

#[derive(Serialize)]
struct SampleRow {
    x: f64,
    #[serde(rename = "F_n")]
    value: f64,
}

#[derive(Serialize)]
struct CoefficientRow {
    nu: usize,
    cos_coefficient: f64,
    fourier_coefficient: f64,
}

#[derive(Serialize)]
struct GridRow {
    z1: f64,
    z2: f64,
    rho: f64,
}

fn json<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut v = serde_json::to_vec_pretty(value)?;
    v.push(b'\n');
    Ok(v)
}

fn csv_rows<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)?;
    }
    w.into_inner().map_err(|e| CliError::Encode(e.to_string()))
}

fn emit(
    out: &OutputArgs,
    json_bytes: impl FnOnce() -> Result<Vec<u8>, CliError>,
    csv_bytes: impl FnOnce() -> Result<Vec<u8>, CliError>,
) -> Result<(), CliError> {
    let bytes = match out.format {
        Format::Json => json_bytes()?,
        Format::Csv => csv_bytes()?,
    };
    match &out.out {
        Some(path) => fs::write(path, bytes).map_err(io_err(path)),
        None => match io::stdout().write_all(&bytes) {
            Err(e) if e.kind() == io::ErrorKind::BrokenPipe => Ok(()),
            r => r.map_err(io_err(Path::new("<stdout>"))),
        },
    }
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<(), CliError> {
    let path = dir.join(name);
    fs::write(&path, bytes).map_err(io_err(&path))
}

fn optimize(
    opt: &OptimizeArgs,
) -> Result<(RhoGrid, OptimizerConfig, OptimizationResult), CliError> {
    let config = opt.config()?;
    let grid = RhoGrid::cell_centres(config.scan)?;
    let result = maximize_rho_on_grid(&grid, &config)?;
    Ok((grid, config, result))
}

fn cmd_constants(opt: &OptimizeArgs, out: &OutputArgs) -> Result<(), CliError> {
    let c = reference_constants();
    let (_, _, best) = optimize(opt)?;
    let quoted = |name: &str, value: f64, q: &str| QuotedConstant {
        name: name.into(),
        value,
        quoted: q.into(),
    };
    let report = ConstantsReport {
        schema: SCHEMA,
        constants: vec![
            quoted("taikov_lower", c.taikov_lower, "1.07995"),
            quoted("taikov_upper", c.taikov_upper, "1.16624"),
            quoted("catalan", c.catalan, "0.91596"),
            quoted("si_pi", c.si_pi, "1.85193"),
            quoted("rho_star", best.rho_star, "1.08176"),
            quoted("z1_star", best.z1_star, "0.72096"),
            quoted("z2_star", best.z2_star, "1.23305"),
        ],
        optimum: best,
    };
    emit(out, || json(&report), || csv_rows(&report.constants))
}

fn cmd_rho(shape: &ShapeArgs, quad_tol: f64, out: &OutputArgs) -> Result<(), CliError> {
    let params = shape.params()?;
    let model = SpectralModel::new(params);
    let tol = Tolerance::new(quad_tol / 100.0, quad_tol)?;
    let report = RhoReport {
        schema: SCHEMA,
        z1: params.z1(),
        z2: params.z2(),
        rho: rho(params)?,
        rho_quadrature: rho_by_quadrature(params, tol)?,
        denominator: rho_denominator(&model),
        phi_hat_at_zero: model.phi_hat_at_zero(),
        residues: model.residues(),
        gradient: rho_gradient(params)?,
    };
    emit(
        out,
        || json(&report),
        || {
            csv_rows([GridRow {
                z1: report.z1,
                z2: report.z2,
                rho: report.rho,
            }])
        },
    )
}

fn cmd_optimize(opt: &OptimizeArgs, out: &OutputArgs) -> Result<(), CliError> {
    let (grid, config, result) = optimize(opt)?;
    let report = OptimizeReport {
        schema: SCHEMA,
        result,
        config,
    };
    let grid_csv = || {
        csv_rows(grid.points.iter().map(|p| GridRow {
            z1: p.z1,
            z2: p.z2,
            rho: p.rho,
        }))
    };
    match &out.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
            write_file(dir, "optimize.json", &json(&report)?)?;
            write_file(dir, "rho_grid.csv", &grid_csv()?)
        }
        None => emit(out, || json(&report), grid_csv),
    }
}

fn cmd_poly(shape: &ShapeArgs, n: usize, grid: usize, out: &OutputArgs) -> Result<(), CliError> {
    if grid == 0 {
        return Err(Error::Domain("--grid must be positive".into()).into());
    }
    let params = shape.params()?;
    let model = SpectralModel::new(params);
    let f = build_f(&model, n)?;
    let norms = norm_report(&f)?;
    let report = PolyReport {
        schema: SCHEMA,
        z1: params.z1(),
        z2: params.z2(),
        n,
        rho: rho(params)?,
        ratio_per_n: norms.ratio / n as f64,
        norms,
    };
    let samples = || {
        csv_rows((0..grid).map(|i| {
            let x = -0.5 + i as f64 / grid as f64;
            SampleRow {
                x,
                value: f.eval(x),
            }
        }))
    };
    match &out.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(io_err(dir))?;
            write_file(dir, "F_n.csv", &samples()?)?;
            let coeffs =
                csv_rows(
                    f.cos_coeffs()
                        .iter()
                        .enumerate()
                        .map(|(nu, &a)| CoefficientRow {
                            nu,
                            cos_coefficient: a,
                            fourier_coefficient: f.fourier_coefficient(nu as i64).0,
                        }),
                )?;
            write_file(dir, "coefficients.csv", &coeffs)?;
            write_file(dir, "norms.json", &json(&report)?)
        }
        None => emit(out, || json(&report), samples),
    }
}

fn cmd_ratio_curve(
    shape: &ShapeArgs,
    n_min: usize,
    n_max: usize,
    n_step: usize,
    out: &OutputArgs,
) -> Result<(), CliError> {
    if n_step == 0 || n_min > n_max {
        return Err(Error::Domain(format!(
            "empty range: n-min = {n_min}, n-max = {n_max}, n-step = {n_step}"
        ))
        .into());
    }
    let params = shape.params()?;
    let model = SpectralModel::new(params);
    let ns: Vec<usize> = (n_min..=n_max).step_by(n_step).collect();
    let report = RatioCurveReport {
        schema: SCHEMA,
        z1: params.z1(),
        z2: params.z2(),
        rho: rho(params)?,
        points: ratio_curve(&model, &ns)?,
    };
    emit(out, || json(&report), || csv_rows(&report.points))
}

fn cmd_brute_force(n: usize, seed: u64, out: &OutputArgs) -> Result<(), CliError> {
    let r = brute_force_cn(n, seed)?;
    let report = BruteForceReport {
        schema: SCHEMA,
        n,
        seed,
        value: r.value,
        restarts: r.restarts,
        cos_coeffs: r.witness.cos_coeffs().to_vec(),
        sin_coeffs: r.witness.sin_coeffs().to_vec(),
    };
    #[derive(Serialize)]
    struct Row {
        n: usize,
        seed: u64,
        value: f64,
    }
    emit(
        out,
        || json(&report),
        || {
            csv_rows([Row {
                n,
                seed,
                value: r.value,
            }])
        },
    )
}

fn cmd_verify(seed: u64, fault: Option<Fault>, out: &OutputArgs) -> Result<(), CliError> {
    let report = verify::run(&VerifyOptions { seed, fault });
    for c in &report.checks {
        eprintln!(
            "{} {:<30} residual {:>10.3e}  threshold {:>10.3e}",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.residual,
            c.threshold
        );
    }
    let output = VerifyOutput {
        schema: SCHEMA,
        all_passed: report.all_passed(),
        checks: report.checks.clone(),
    };
    emit(out, || json(&output), || csv_rows(&output.checks))?;
    if output.all_passed {
        Ok(())
    } else {
        Err(CliError::VerifyFailed(report.failures().cloned().collect()))
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Constants { opt, out } => cmd_constants(opt, out),
        Command::Rho {
            shape,
            quad_tol,
            out,
        } => cmd_rho(shape, *quad_tol, out),
        Command::Optimize { opt, out } => cmd_optimize(opt, out),
        Command::Poly {
            shape,
            n,
            grid,
            out,
        } => cmd_poly(shape, *n, *grid, out),
        Command::RatioCurve {
            shape,
            n_min,
            n_max,
            n_step,
            out,
        } => cmd_ratio_curve(shape, *n_min, *n_max, *n_step, out),
        Command::BruteForce { n, seed, out } => cmd_brute_force(*n, *seed, out),
        Command::Verify {
            seed,
            inject_fault,
            out,
        } => cmd_verify(*seed, *inject_fault, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            e.report();
            ExitCode::from(e.exit_code())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn round_trip<T: Serialize + for<'de> Deserialize<'de> + PartialEq + std::fmt::Debug>(
        value: &T,
    ) {
        let text = serde_json::to_string(value).unwrap();
        let back: T = serde_json::from_str(&text).unwrap();
        assert_eq!(&back, value);
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn reports_round_trip() {
        let params = ShapeParams::published_optimum();
        let model = SpectralModel::new(params);
        round_trip(&RhoReport {
            schema: SCHEMA,
            z1: params.z1(),
            z2: params.z2(),
            rho: rho(params).unwrap(),
            rho_quadrature: 1.0 / 3.0,
            denominator: rho_denominator(&model),
            phi_hat_at_zero: model.phi_hat_at_zero(),
            residues: model.residues(),
            gradient: [1e-9, -2.5e-8],
        });
        let f = build_f(&model, 7).unwrap();
        let norms = norm_report(&f).unwrap();
        round_trip(&PolyReport {
            schema: SCHEMA,
            z1: params.z1(),
            z2: params.z2(),
            n: 7,
            rho: 1.08,
            ratio_per_n: norms.ratio / 7.0,
            norms,
        });
    }

    #[test]
    fn fault_flag_parses() {
        let cli = Cli::try_parse_from(["nikolskii", "verify", "--inject-fault", "antiderivative"])
            .unwrap();
        assert!(matches!(
            cli.command,
            Command::Verify {
                inject_fault: Some(Fault::AntiderivativeSign),
                ..
            }
        ));
        assert!(Cli::try_parse_from(["nikolskii", "rho", "--bogus"]).is_err());
    }
}
