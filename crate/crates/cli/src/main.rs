//! Batch driver for the kernel, decay, region and wave-solver experiments.
//!
//! Exit codes: 0 success, 1 usage error, 2 admissibility rejection,
//! 3 numerical non-convergence. Rational parameters cross the boundary as
//! exact `p/q` strings and are echoed back in the same form.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;

use waveamalgam::amalgam::{amalgam_norm_radial, amalgam_surrogate_radial, RadialProfile, Window};
use waveamalgam::decaylab::{
    fit_decay, kernel_time_profile, log_spaced, profile_csv, strichartz_quotient, DecayError,
    DecaySummary, Estimator, ExperimentConfig, Regime, RegimeFitSummary,
};
use waveamalgam::kernel::{
    in_cone_band, kernel_damped, kernel_eval, verify_pointwise, EvalMethod, KernelError,
    KernelQuery,
};
use waveamalgam::nlw::{
    fixed_point_solve_with_slices, gaussian_datum, persistence_check, Nonlinearity,
    NonlinearityForm, NlwError,
};
use waveamalgam::rational::ExtendedRational;
use waveamalgam::regions::{
    corollary_admissible, is_wave_admissible, k_max_csv, k_max_curve, nlw_admissible,
    propfix_admissible, region_csv, sample_thm1_region, thm1_admissible, thm2_admissible,
    DualIndices, ExponentTuple,
};

const SCHEMA_VERSION: u32 = 1;

#[derive(Parser)]
#[command(name = "waveamalgam", version, about = "Wave-kernel and amalgam-norm experiments")]
struct Cli {
    /// Output directory for CSV/JSON artifacts
    /// (default: $WAVEAMALGAM_OUTDIR, else the working directory)
    #[arg(long, global = true)]
    output_dir: Option<PathBuf>,

    /// Worker threads; outputs are identical for any thread count
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact admissibility checks and region/threshold samplers
    Regions(RegionsArgs),
    /// Pointwise kernel evaluation and bound verification
    Kernel(KernelArgs),
    /// Windowed kernel-norm decay experiment with slope fits
    Decay(DecayArgs),
    /// Radial amalgam norms of a profile read from CSV
    Norms(NormsArgs),
    /// Dilation stability of the propagator quotient
    Quotient(QuotientArgs),
    /// Semilinear fixed-point solve with contraction diagnostics
    Nlw(NlwArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CheckKind {
    Wave,
    Thm1,
    Thm2,
    Propfix,
    Corollary,
    Nlw,
}

#[derive(Args)]
struct RegionsArgs {
    /// Which predicate to evaluate
    #[arg(long, value_enum)]
    check: Option<CheckKind>,
    #[arg(long, default_value = "3")]
    n: u32,
    #[arg(long)]
    sigma: Option<ExtendedRational>,
    #[arg(long)]
    gamma: Option<ExtendedRational>,
    #[arg(long)]
    q: Option<ExtendedRational>,
    #[arg(long)]
    qt: Option<ExtendedRational>,
    #[arg(long)]
    r: Option<ExtendedRational>,
    #[arg(long)]
    rt: Option<ExtendedRational>,
    #[arg(long)]
    q1: Option<ExtendedRational>,
    #[arg(long)]
    qt1: Option<ExtendedRational>,
    #[arg(long)]
    r1: Option<ExtendedRational>,
    #[arg(long)]
    rt1: Option<ExtendedRational>,
    /// Nonlinearity power for --check nlw
    #[arg(long)]
    k: Option<ExtendedRational>,
    /// Sample the (1/r, 1/r~) region for this sigma into CSV
    #[arg(long)]
    sample: Option<ExtendedRational>,
    /// Emit the maximal-power curve sigma -> k(sigma) into CSV
    #[arg(long)]
    kmax_curve: bool,
    /// Grid denominator for the samplers
    #[arg(long, default_value = "24")]
    denom: i64,
}

#[derive(Args)]
struct KernelArgs {
    #[arg(long)]
    gamma: f64,
    /// Radius |x| (point mode)
    #[arg(long)]
    r: Option<f64>,
    /// Time t (point mode)
    #[arg(long)]
    t: Option<f64>,
    /// Abel damping; when present the damped value is reported instead of
    /// the extrapolated one
    #[arg(long)]
    epsilon: Option<f64>,
    /// Run the pointwise-bound sweep instead of a point evaluation
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value = "50")]
    grid_points: usize,
    #[arg(long, default_value = "10.0")]
    r_max: f64,
    #[arg(long, default_value = "20.0")]
    t_max: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RegimeArg {
    Small,
    Large,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum EstimatorArg {
    Direct,
    Surrogate,
    Both,
}

#[derive(Args)]
struct DecayArgs {
    #[arg(long)]
    gamma: ExtendedRational,
    #[arg(long)]
    r: ExtendedRational,
    #[arg(long)]
    rt: ExtendedRational,
    #[arg(long, value_enum, default_value = "both")]
    regime: RegimeArg,
    #[arg(long, value_enum, default_value = "direct")]
    estimator: EstimatorArg,
    /// Points per regime window
    #[arg(long, default_value = "12")]
    points: usize,
    #[arg(long, default_value = "4096")]
    radius_points: usize,
}

#[derive(Args)]
struct NormsArgs {
    /// CSV file of rows `radius,re,im` (a header line is skipped)
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    inner: ExtendedRational,
    #[arg(long)]
    outer: ExtendedRational,
    /// Also compute the annulus surrogate
    #[arg(long)]
    surrogate: bool,
}

#[derive(Args)]
struct QuotientArgs {
    #[arg(long)]
    sigma: ExtendedRational,
    #[arg(long)]
    qt: ExtendedRational,
    #[arg(long)]
    q: ExtendedRational,
    #[arg(long)]
    rt: ExtendedRational,
    #[arg(long)]
    r: ExtendedRational,
    /// Comma-separated dilation factors as rationals
    #[arg(long, default_value = "1/8,1/4,1/2,1,2,4,8")]
    dilations: String,
    #[arg(long, default_value = "1.0")]
    amplitude: f64,
    #[arg(long, default_value = "4.0")]
    shape: f64,
    #[arg(long, default_value = "4095")]
    modes: usize,
}

#[derive(Args)]
struct NlwArgs {
    #[arg(long)]
    k: ExtendedRational,
    #[arg(long)]
    qt: ExtendedRational,
    #[arg(long)]
    q: ExtendedRational,
    #[arg(long)]
    rt: ExtendedRational,
    #[arg(long)]
    r: ExtendedRational,
    #[arg(long, default_value = "0.05")]
    amplitude_f: f64,
    #[arg(long, default_value = "0.02")]
    amplitude_g: f64,
    #[arg(long, default_value = "4.0")]
    shape: f64,
    /// Estimate constant C of the contraction budget
    #[arg(long, default_value = "1.0")]
    constant: f64,
    /// Time exponent q0~ of the contraction budget
    #[arg(long, default_value = "4")]
    q0t: ExtendedRational,
    #[arg(long, default_value = "4095")]
    modes: usize,
    #[arg(long, default_value = "65")]
    slices: usize,
    /// Keep every n-th time slice as a CSV snapshot
    #[arg(long, default_value = "8")]
    snapshot_stride: usize,
}

enum CliError {
    Usage(String),
    Inadmissible(String),
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Inadmissible(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Inadmissible(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> Self {
        match e {
            KernelError::NonConvergence(_) => CliError::Numerical(e.to_string()),
            KernelError::ConeBand { .. } => CliError::Inadmissible(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<DecayError> for CliError {
    fn from(e: DecayError) -> Self {
        match e {
            DecayError::Inadmissible(_) => CliError::Inadmissible(e.to_string()),
            DecayError::Kernel(k) => k.into(),
            DecayError::Nlw(n) => n.into(),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<NlwError> for CliError {
    fn from(e: NlwError) -> Self {
        match e {
            NlwError::NonContraction(_) | NlwError::NonConvergence(_) | NlwError::Aliasing(_) => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Usage(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    if let Some(threads) = cli.threads {
        // ignore the error when a pool already exists (e.g. under a test harness)
        let _ = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global();
    }
    let out_dir = cli
        .output_dir
        .or_else(|| std::env::var_os("WAVEAMALGAM_OUTDIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("."));

    let result = match cli.command {
        Command::Regions(args) => run_regions(args, &out_dir),
        Command::Kernel(args) => run_kernel(args, &out_dir),
        Command::Decay(args) => run_decay(args, &out_dir),
        Command::Norms(args) => run_norms(args, &out_dir),
        Command::Quotient(args) => run_quotient(args, &out_dir),
        Command::Nlw(args) => run_nlw(args, &out_dir),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn write_artifact(out_dir: &Path, name: &str, contents: &str) -> Result<(), CliError> {
    fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Usage(format!("cannot create {}: {e}", out_dir.display())))?;
    let path = out_dir.join(name);
    fs::write(&path, contents)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

fn emit_json<T: Serialize>(out_dir: &Path, name: &str, value: &T) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Usage(format!("serialization failed: {e}")))?;
    println!("{json}");
    write_artifact(out_dir, name, &format!("{json}\n"))
}

fn require<T: Copy>(opt: Option<T>, flag: &str) -> Result<T, CliError> {
    opt.ok_or_else(|| CliError::Usage(format!("missing required flag --{flag}")))
}

#[derive(Serialize)]
struct RegionsCheckOutput {
    schema_version: u32,
    check: String,
    admissible: bool,
    n: u32,
    sigma: Option<ExtendedRational>,
    gamma: Option<ExtendedRational>,
    q_tilde: Option<ExtendedRational>,
    q: Option<ExtendedRational>,
    r_tilde: Option<ExtendedRational>,
    r: Option<ExtendedRational>,
    k: Option<ExtendedRational>,
}

#[derive(Serialize)]
struct SamplerOutput {
    schema_version: u32,
    kind: String,
    rows: usize,
    admissible_rows: usize,
    csv_file: String,
}

fn run_regions(args: RegionsArgs, out_dir: &Path) -> Result<(), CliError> {
    if let Some(sigma) = args.sample {
        let samples = sample_thm1_region(args.n, sigma, args.denom);
        let csv = region_csv(&samples);
        write_artifact(out_dir, "region_samples.csv", &csv)?;
        let output = SamplerOutput {
            schema_version: SCHEMA_VERSION,
            kind: "region".into(),
            rows: samples.len(),
            admissible_rows: samples.iter().filter(|s| s.admissible).count(),
            csv_file: "region_samples.csv".into(),
        };
        return emit_json(out_dir, "region_samples.json", &output);
    }
    if args.kmax_curve {
        let curve = k_max_curve(args.n, args.denom);
        let csv = k_max_csv(&curve);
        write_artifact(out_dir, "kmax_curve.csv", &csv)?;
        let output = SamplerOutput {
            schema_version: SCHEMA_VERSION,
            kind: "kmax".into(),
            rows: curve.len(),
            admissible_rows: curve.len(),
            csv_file: "kmax_curve.csv".into(),
        };
        return emit_json(out_dir, "kmax_curve.json", &output);
    }
    let check = args
        .check
        .ok_or_else(|| CliError::Usage("one of --check, --sample, --kmax-curve is required".into()))?;

    let tuple = |args: &RegionsArgs| -> Result<ExponentTuple, CliError> {
        let sigma = require(args.sigma, "sigma")?;
        let mut t = ExponentTuple::new(
            args.n,
            sigma,
            require(args.qt, "qt")?,
            require(args.q, "q")?,
            require(args.rt, "rt")?,
            require(args.r, "r")?,
        )
        .map_err(|e| CliError::Usage(e.to_string()))?;
        if let Some(g) = args.gamma {
            t = t.with_gamma(g).map_err(|e| CliError::Usage(e.to_string()))?;
        }
        if let (Some(qt1), Some(q1), Some(rt1), Some(r1)) = (args.qt1, args.q1, args.rt1, args.r1) {
            t = t
                .with_dual(DualIndices { q1_tilde: qt1, q1, r1_tilde: rt1, r1 })
                .map_err(|e| CliError::Usage(e.to_string()))?;
        }
        Ok(t)
    };

    let (name, admissible) = match check {
        CheckKind::Wave => (
            "wave",
            is_wave_admissible(
                args.n,
                require(args.q, "q")?,
                require(args.r, "r")?,
                require(args.sigma, "sigma")?,
            ),
        ),
        CheckKind::Thm1 => ("thm1", thm1_admissible(&tuple(&args)?)),
        CheckKind::Thm2 => ("thm2", thm2_admissible(&tuple(&args)?)),
        CheckKind::Propfix => (
            "propfix",
            propfix_admissible(
                args.n,
                require(args.gamma, "gamma")?,
                require(args.r, "r")?,
                require(args.rt, "rt")?,
            ),
        ),
        CheckKind::Corollary => (
            "corollary",
            corollary_admissible(require(args.sigma, "sigma")?, &tuple(&args)?),
        ),
        CheckKind::Nlw => ("nlw", nlw_admissible(&tuple(&args)?, require(args.k, "k")?)),
    };
    let output = RegionsCheckOutput {
        schema_version: SCHEMA_VERSION,
        check: name.into(),
        admissible,
        n: args.n,
        sigma: args.sigma,
        gamma: args.gamma,
        q_tilde: args.qt,
        q: args.q,
        r_tilde: args.rt,
        r: args.r,
        k: args.k,
    };
    emit_json(out_dir, "regions_check.json", &output)
}

#[derive(Serialize)]
struct KernelPointOutput {
    schema_version: u32,
    gamma: f64,
    radius: f64,
    time: f64,
    epsilon: Option<f64>,
    value_re: f64,
    value_im: f64,
    abs_error_estimate: Option<f64>,
    method: String,
}

#[derive(Serialize)]
struct PointwiseOutput {
    schema_version: u32,
    gamma: f64,
    grid_size: usize,
    max_ratio: f64,
    argmax_radius: f64,
    argmax_time: f64,
}

fn run_kernel(args: KernelArgs, out_dir: &Path) -> Result<(), CliError> {
    if args.verify {
        let n = args.grid_points.max(2);
        let mut grid = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let r = 0.1 + i as f64 * ((args.r_max - 0.1) / (n - 1) as f64);
                let t = j as f64 * (args.t_max / (n - 1) as f64);
                if !in_cone_band(r, t) {
                    grid.push((r, t));
                }
            }
        }
        let report = verify_pointwise(args.gamma, &grid)?;
        let output = PointwiseOutput {
            schema_version: SCHEMA_VERSION,
            gamma: args.gamma,
            grid_size: report.grid_size,
            max_ratio: report.max_ratio,
            argmax_radius: report.argmax.0,
            argmax_time: report.argmax.1,
        };
        return emit_json(out_dir, "pointwise_report.json", &output);
    }
    let r = require(args.r, "r")?;
    let t = require(args.t, "t")?;
    let query = KernelQuery::new(3, args.gamma, r, t)?;
    let (value, err, method) = match args.epsilon {
        Some(eps) => (kernel_damped(&query, eps)?, None, "damped"),
        None => {
            let v = kernel_eval(&query)?;
            let method = match v.method {
                EvalMethod::DampedExtrapolated => "damped_extrapolated",
                EvalMethod::SplitAsymptotic => "split_asymptotic",
                EvalMethod::ClosedFormN3 => "closed_form_n3",
            };
            (v.value, Some(v.abs_error_estimate), method)
        }
    };
    let output = KernelPointOutput {
        schema_version: SCHEMA_VERSION,
        gamma: args.gamma,
        radius: r,
        time: t,
        epsilon: args.epsilon,
        value_re: value.re,
        value_im: value.im,
        abs_error_estimate: err,
        method: method.into(),
    };
    emit_json(out_dir, "kernel_value.json", &output)
}

fn run_decay(args: DecayArgs, out_dir: &Path) -> Result<(), CliError> {
    let regimes: Vec<Regime> = match args.regime {
        RegimeArg::Small => vec![Regime::SmallT],
        RegimeArg::Large => vec![Regime::LargeT],
        RegimeArg::Both => vec![Regime::SmallT, Regime::LargeT],
    };
    let estimators: Vec<Estimator> = match args.estimator {
        EstimatorArg::Direct => vec![Estimator::Direct],
        EstimatorArg::Surrogate => vec![Estimator::Surrogate],
        EstimatorArg::Both => vec![Estimator::Direct, Estimator::Surrogate],
    };
    if args.points < 8 {
        return Err(CliError::Usage("--points must be at least 8 for a slope fit".into()));
    }
    let mut summaries = Vec::new();
    for estimator in &estimators {
        let mut fits = Vec::new();
        for regime in &regimes {
            let (t_min, t_max, tolerance) = match regime {
                Regime::SmallT => (1.0 / 64.0, 0.5, 0.15),
                Regime::LargeT => (4.0, 64.0, 0.10),
            };
            let cfg = ExperimentConfig::new(
                args.gamma,
                args.r,
                args.rt,
                log_spaced(t_min, t_max, args.points),
                *estimator,
            )?
            .with_radius_points(args.radius_points);
            let rows = kernel_time_profile(&cfg)?;
            let est_name = match estimator {
                Estimator::Direct => "direct",
                Estimator::Surrogate => "surrogate",
            };
            let regime_name = match regime {
                Regime::SmallT => "small",
                Regime::LargeT => "large",
            };
            write_artifact(
                out_dir,
                &format!("decay_profile_{est_name}_{regime_name}.csv"),
                &profile_csv(&rows, &cfg),
            )?;
            let fit = fit_decay(&rows, *regime)?;
            let (small, large) = cfg.targets()?;
            let target = match regime {
                Regime::SmallT => small,
                Regime::LargeT => large,
            };
            fits.push(RegimeFitSummary::new(*regime, &fit, target, tolerance));
        }
        summaries.push(DecaySummary {
            schema_version: SCHEMA_VERSION,
            gamma: args.gamma,
            r: args.r,
            r_tilde: args.rt,
            estimator: match estimator {
                Estimator::Direct => "direct".into(),
                Estimator::Surrogate => "surrogate".into(),
            },
            fits,
        });
    }
    emit_json(out_dir, "decay_summary.json", &summaries)
}

#[derive(Serialize)]
struct NormsOutput {
    schema_version: u32,
    input: String,
    inner: ExtendedRational,
    outer: ExtendedRational,
    samples: usize,
    direct_norm: f64,
    surrogate_norm: Option<f64>,
}

fn run_norms(args: NormsArgs, out_dir: &Path) -> Result<(), CliError> {
    let text = fs::read_to_string(&args.input)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", args.input.display())))?;
    let mut radii = Vec::new();
    let mut values = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if lineno == 0 && fields[0].parse::<f64>().is_err() {
            continue; // header
        }
        if fields.len() < 2 {
            return Err(CliError::Usage(format!("line {}: expected radius,re[,im]", lineno + 1)));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("line {}: bad number `{s}`", lineno + 1)))
        };
        radii.push(parse(fields[0])?);
        let re = parse(fields[1])?;
        let im = if fields.len() > 2 { parse(fields[2])? } else { 0.0 };
        values.push(Complex64::new(re, im));
    }
    let profile =
        RadialProfile::new(radii, values).map_err(|e| CliError::Usage(e.to_string()))?;
    let direct = amalgam_norm_radial(&profile, args.inner, args.outer, &Window::default())
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let surrogate = if args.surrogate {
        Some(
            amalgam_surrogate_radial(&profile, args.inner, args.outer)
                .map_err(|e| CliError::Usage(e.to_string()))?,
        )
    } else {
        None
    };
    let output = NormsOutput {
        schema_version: SCHEMA_VERSION,
        input: args.input.display().to_string(),
        inner: args.inner,
        outer: args.outer,
        samples: profile.values.len(),
        direct_norm: direct,
        surrogate_norm: surrogate,
    };
    emit_json(out_dir, "norms.json", &output)
}

#[derive(Serialize)]
struct QuotientOutput {
    schema_version: u32,
    sigma: ExtendedRational,
    q_tilde: ExtendedRational,
    q: ExtendedRational,
    r_tilde: ExtendedRational,
    r: ExtendedRational,
    dilations: Vec<ExtendedRational>,
    quotients: Vec<f64>,
    max_min_ratio: f64,
}

fn run_quotient(args: QuotientArgs, out_dir: &Path) -> Result<(), CliError> {
    let tuple = ExponentTuple::new(3, args.sigma, args.qt, args.q, args.rt, args.r)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if !(thm1_admissible(&tuple) || corollary_admissible(args.sigma, &tuple)) {
        return Err(CliError::Inadmissible(
            "tuple fails both homogeneous admissibility checks".into(),
        ));
    }
    let dilations: Result<Vec<ExtendedRational>, CliError> = args
        .dilations
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<ExtendedRational>()
                .map_err(|e| CliError::Usage(format!("bad dilation `{s}`: {e}")))
        })
        .collect();
    let dilations = dilations?;
    let datum = gaussian_datum(32.0, args.modes, args.amplitude, args.shape, 1.0);
    let lambda_f: Vec<f64> = dilations.iter().map(|d| d.to_f64()).collect();
    let rows = strichartz_quotient(args.sigma, &tuple, &[datum], &lambda_f)?;
    let quotients: Vec<f64> = rows.iter().map(|r| r.quotient).collect();
    let max = quotients.iter().copied().fold(f64::MIN, f64::max);
    let min = quotients.iter().copied().fold(f64::MAX, f64::min);

    let mut csv = String::from("lambda,quotient\n");
    for (d, q) in dilations.iter().zip(&quotients) {
        csv.push_str(&format!("{d},{q}\n"));
    }
    write_artifact(out_dir, "quotient.csv", &csv)?;

    let output = QuotientOutput {
        schema_version: SCHEMA_VERSION,
        sigma: args.sigma,
        q_tilde: args.qt,
        q: args.q,
        r_tilde: args.rt,
        r: args.r,
        dilations,
        quotients,
        max_min_ratio: max / min,
    };
    emit_json(out_dir, "quotient_summary.json", &output)
}

#[derive(Serialize)]
struct NlwOutput {
    schema_version: u32,
    k: ExtendedRational,
    q_tilde: ExtendedRational,
    q: ExtendedRational,
    r_tilde: ExtendedRational,
    r: ExtendedRational,
    sigma: f64,
    constant: f64,
    q0_tilde: ExtendedRational,
    amplitude_f: f64,
    amplitude_g: f64,
    ball_radius: f64,
    life_span: f64,
    iterations: usize,
    contraction_ratios: Vec<f64>,
    mixed_norm: f64,
    sup_hsigma: f64,
    sup_hsigma_minus_1: f64,
    persistence_ratio: f64,
    snapshots: Vec<String>,
}

fn run_nlw(args: NlwArgs, out_dir: &Path) -> Result<(), CliError> {
    // sigma implied by the scaling relation; stored on the tuple for reference
    let sigma = ExtendedRational::new(3, 2) - args.q.recip() - ExtendedRational::int(3) * args.r.recip();
    let tuple = ExponentTuple::new(3, sigma, args.qt, args.q, args.rt, args.r)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    if !nlw_admissible(&tuple, args.k) {
        return Err(CliError::Inadmissible(format!(
            "tuple (q~={}, q={}, r~={}, r={}) is not admissible for k = {}",
            args.qt, args.q, args.rt, args.r, args.k
        )));
    }
    let nonlinearity = Nonlinearity::new(args.k, NonlinearityForm::SignedPower, 1.0)
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let f = gaussian_datum(32.0, args.modes, args.amplitude_f, args.shape, 1.0);
    let g = gaussian_datum(32.0, args.modes, args.amplitude_g, args.shape, 1.0);
    let result = fixed_point_solve_with_slices(
        &f,
        &g,
        &nonlinearity,
        &tuple,
        args.constant,
        args.q0t,
        args.slices,
    )?;
    let report = persistence_check(&result, &f, &g, &nonlinearity)?;

    let mut snapshots = Vec::new();
    for (i, slice) in result.solution.iter().enumerate().step_by(args.snapshot_stride.max(1)) {
        let name = format!("solution_t{:05}.csv", (result.times[i] * 1000.0).round() as i64);
        let mut csv = String::from("radius,re,im\n");
        for (r, v) in slice.radii.iter().zip(&slice.values) {
            csv.push_str(&format!("{r},{},{}\n", v.re, v.im));
        }
        write_artifact(out_dir, &name, &csv)?;
        snapshots.push(name);
    }

    let output = NlwOutput {
        schema_version: SCHEMA_VERSION,
        k: args.k,
        q_tilde: args.qt,
        q: args.q,
        r_tilde: args.rt,
        r: args.r,
        sigma: result.sigma,
        constant: args.constant,
        q0_tilde: args.q0t,
        amplitude_f: args.amplitude_f,
        amplitude_g: args.amplitude_g,
        ball_radius: result.plan.ball_radius,
        life_span: result.plan.life_span,
        iterations: result.iterations,
        contraction_ratios: result.contraction_ratios.clone(),
        mixed_norm: result.mixed_norm,
        sup_hsigma: report.sup_hsigma,
        sup_hsigma_minus_1: report.sup_hsigma_minus_1,
        persistence_ratio: report.data_norm_ratio,
        snapshots,
    };
    emit_json(out_dir, "run_manifest.json", &output)
}
