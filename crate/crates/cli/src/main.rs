use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use motionlab::bounds::{
    area_distortion_bound, dim_distortion_interval, quasisymmetric_spectrum, smirnov_quasicircle_bound, AreaCase,
};
use motionlab::config::{BuiltMotion, MotionConfig};
use motionlab::dimest::{
    dyadic_box_counts, dyadic_diameters, minkowski_estimate, packing_counts, packing_estimate, Window,
};
use motionlab::ifs::{similarity_dimension, RenderMethod};
use motionlab::io::{cloud_svg, estimate_block, fmt_f64, read_cloud_csv, write_cloud_csv, write_counts_csv};
use motionlab::motion::{Address, MotionFamily};
use motionlab::verify::{
    check_diameter_harnack, check_distortion_sandwich, check_estimator_vs_theory, check_harnack_pairs,
    check_mean_value_grid, random_disk_points, run_qsh_experiment, square_grid, sweep_csv, CheckReport,
    DiameterCheck, EstimatorConfig, MeanValueMode,
};
use motionlab::{parse_complex, ComplexPoint, Error};

const DEFAULT_SEED: u64 = 42;
const SEED_ENV: &str = "MOTIONLAB_SEED";
const GRID_CLIP: f64 = 0.95;

#[derive(Parser)]
#[command(name = "motionlab", version, about = "Holomorphic motions of self-similar sets and their dimensions")]
struct Cli {
    /// Worker threads for grid sweeps (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Decimal places for values printed to stdout.
    #[arg(long, global = true, default_value_t = 6)]
    digits: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Similarity dimension of a list of contraction ratios.
    Simdim {
        #[arg(long, value_delimiter = ',', required = true, allow_negative_numbers = true)]
        ratios: Vec<f64>,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
    #[command(subcommand)]
    Motion(MotionCmd),
    #[command(subcommand)]
    Dim(DimCmd),
    #[command(subcommand)]
    Bounds(BoundsCmd),
    /// Run a numerical check against a motion config.
    Verify(VerifyArgs),
    /// Scatter plot of a cloud CSV.
    Plot {
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 800)]
        size: u32,
    },
}

#[derive(Subcommand)]
enum MotionCmd {
    /// Build a motion and write its config with the disk centers filled in.
    Build {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Closed-form dimension at one parameter or on a square grid.
    Dim {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<String>,
        /// N×N mesh over [-0.95, 0.95]² clipped to |λ| ≤ 0.95, written as CSV.
        #[arg(long, conflicts_with = "lambda")]
        grid: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the limit set at one parameter to a cloud CSV.
    Render {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        lambda: String,
        #[arg(long, value_enum, default_value_t = Method::Chaos)]
        method: Method,
        #[arg(long, default_value_t = 200_000)]
        points: usize,
        #[arg(long, default_value_t = 4)]
        depth: u32,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Chaos,
    Det,
}

#[derive(Subcommand)]
enum DimCmd {
    /// Box-counting (and optionally packing) estimate from a cloud CSV.
    Estimate {
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long, requires = "kmax", conflicts_with = "auto")]
        kmin: Option<u32>,
        #[arg(long, requires = "kmin", conflicts_with = "auto")]
        kmax: Option<u32>,
        /// Automatic window over levels 0..=40 (the default).
        #[arg(long)]
        auto: bool,
        #[arg(long)]
        packing: bool,
        /// Also write the dyadic counts as CSV.
        #[arg(long)]
        counts_out: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum BoundsCmd {
    /// Dimension interval for the image of a set of dimension D.
    Dim {
        #[arg(long)]
        dim: f64,
        #[command(flatten)]
        k: KArg,
    },
    /// Area bound for the image of a set of area A.
    Area {
        #[arg(long)]
        area: f64,
        #[arg(long, value_enum, default_value_t = CaseArg::General)]
        case: CaseArg,
        #[command(flatten)]
        k: KArg,
    },
    /// Dimension bound for a k-quasicircle.
    Smirnov {
        #[command(flatten)]
        k: KArg,
    },
    /// Dimension spectrum under a k-quasisymmetric map of the line.
    Qs {
        #[arg(long)]
        delta: f64,
        #[command(flatten)]
        k: KArg,
    },
}

#[derive(Args)]
struct KArg {
    #[arg(long, default_value_t = 0.0)]
    k: f64,
    /// Instead of a single value, write a CSV over N values of k in [0, 0.95].
    #[arg(long)]
    sweep: Option<usize>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CaseArg {
    On,
    Off,
    General,
}

impl From<CaseArg> for AreaCase {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::On => AreaCase::ConformalOnA,
            CaseArg::Off => AreaCase::ConformalOffA,
            CaseArg::General => AreaCase::General,
        }
    }
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(value_enum)]
    check: CheckName,
    #[arg(long)]
    config: PathBuf,
    /// Write the CSV report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    tol: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// harnack: number of random pairs.
    #[arg(long, default_value_t = 100)]
    pairs: usize,
    /// harnack, mean-value: largest |λ| of sampled points.
    #[arg(long, default_value_t = 0.6)]
    max_modulus: f64,
    /// sandwich: values of k.
    #[arg(long, value_delimiter = ',', default_value = "0,0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9")]
    k_grid: Vec<f64>,
    /// diameter: radius of the disk of the bound.
    #[arg(long, default_value_t = 0.9)]
    rho: f64,
    /// diameter: radius used to form the interval (negative control when > rho).
    #[arg(long)]
    bound_rho: Option<f64>,
    /// diameter: points of S as `j` (fixed point of map j) or `p1.p2:j`.
    #[arg(long, value_delimiter = ',', default_value = "0,1")]
    address: Vec<String>,
    /// diameter, estimator: N×N grid size.
    #[arg(long)]
    grid: Option<usize>,
    /// diameter: radius of the parameter grid.
    #[arg(long, default_value_t = 0.5)]
    grid_radius: f64,
    /// qsh: samples on |λ| = 1/2.
    #[arg(long, default_value_t = 360)]
    samples: usize,
    /// mean-value: number of circle centers.
    #[arg(long, default_value_t = 50)]
    centers: usize,
    /// mean-value: circle radius.
    #[arg(long, default_value_t = 0.3)]
    radius: f64,
    /// estimator: parameters to test.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, default_value = "0,0.5,-0.5")]
    lambda: Vec<String>,
    /// estimator: chaos-game points per cloud.
    #[arg(long, default_value_t = 200_000)]
    points: usize,
    /// estimator: write the sweep CSV here.
    #[arg(long)]
    sweep_out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum CheckName {
    Harnack,
    Sandwich,
    Diameter,
    Qsh,
    MeanValue,
    Estimator,
}

enum Failure {
    Domain(Error),
    CheckFailed,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Domain(Error::Io(e))
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("error: cannot size worker pool: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::CheckFailed) => ExitCode::from(1),
        Err(Failure::Domain(e)) => {
            eprintln!("error[{}]: {e}", e.name());
            ExitCode::from(3)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    let p = cli.digits;
    match &cli.command {
        Command::Simdim { ratios, c } => {
            println!("{:.p$}", similarity_dimension(ratios, *c)?);
        }
        Command::Motion(cmd) => motion_cmd(cmd, p)?,
        Command::Dim(DimCmd::Estimate { cloud, kmin, kmax, auto: _, packing, counts_out }) => {
            let cloud = read_cloud_csv(&read(cloud)?)?;
            let (k_lo, k_hi, window) = match (kmin, kmax) {
                (Some(a), Some(b)) => (*a, *b, Window::levels(*a, *b)),
                _ => (0, 40, Window::auto()),
            };
            let counts = dyadic_box_counts(&cloud, k_lo, k_hi)?;
            if let Some(path) = counts_out {
                write(path, &write_counts_csv(&counts))?;
            }
            print!("{}", estimate_block("box", &minkowski_estimate(&counts, window)?));
            if *packing {
                let pc = packing_counts(&cloud, &dyadic_diameters(k_lo, k_hi.min(30)))?;
                let window = match window {
                    Window::Range { .. } => Window::levels(k_lo, k_hi),
                    w => w,
                };
                print!("{}", estimate_block("packing", &packing_estimate(&pc, window)?));
            }
        }
        Command::Bounds(cmd) => bounds_cmd(cmd, p)?,
        Command::Verify(args) => verify_cmd(args)?,
        Command::Plot { cloud, out, size } => {
            let cloud = read_cloud_csv(&read(cloud)?)?;
            write(out, &cloud_svg(&cloud, *size))?;
        }
    }
    Ok(())
}

fn read(path: &Path) -> Result<String, Failure> {
    Ok(fs::read_to_string(path)?)
}

fn write(path: &Path, text: &str) -> CmdResult {
    Ok(fs::write(path, text)?)
}

fn load_motion(path: &Path) -> Result<BuiltMotion, Failure> {
    Ok(MotionConfig::parse(&read(path)?)?.build()?)
}

fn seed_or_default(seed: Option<u64>) -> Result<u64, Failure> {
    if let Some(s) = seed {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Domain(Error::InvalidInput(format!("{SEED_ENV}={v:?} is not an unsigned integer")))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn lambda_arg(text: &str) -> Result<ComplexPoint, Failure> {
    Ok(parse_complex(text)?)
}

fn motion_cmd(cmd: &MotionCmd, p: usize) -> CmdResult {
    match cmd {
        MotionCmd::Build { config, out } => {
            let m = load_motion(config)?;
            write(out, &m.to_config().emit())?;
        }
        MotionCmd::Dim { config, lambda, grid, out } => {
            let m = load_motion(config)?;
            if let Some(n) = grid {
                let pts = square_grid(*n, GRID_CLIP);
                let dims = pts.par_iter().map(|&l| m.dimension(l)).collect::<Result<Vec<_>, _>>()?;
                let mut csv = String::from("re,im,dim_theory\n");
                for (l, d) in pts.iter().zip(dims) {
                    csv.push_str(&format!("{},{},{}\n", fmt_f64(l.re), fmt_f64(l.im), fmt_f64(d)));
                }
                match out {
                    Some(path) => write(path, &csv)?,
                    None => print!("{csv}"),
                }
            } else {
                let l = lambda_arg(lambda.as_deref().unwrap_or("0"))?;
                println!("{:.p$}", m.dimension(l)?);
            }
        }
        MotionCmd::Render { config, lambda, method, points, depth, seed, out } => {
            let m = load_motion(config)?;
            let l = lambda_arg(lambda)?;
            let method = match method {
                Method::Chaos => RenderMethod::ChaosGame { count: *points, seed: seed_or_default(*seed)? },
                Method::Det => RenderMethod::Deterministic { depth: *depth },
            };
            let cloud = m.render(l, method)?;
            write(out, &write_cloud_csv(&cloud))?;
        }
    }
    Ok(())
}

fn k_sweep(n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n).map(|i| 0.95 * i as f64 / (n - 1) as f64).collect(),
    }
}

fn bounds_cmd(cmd: &BoundsCmd, p: usize) -> CmdResult {
    let sweep = |k: &KArg, header: &str, row: &dyn Fn(f64) -> Result<String, Error>| -> Result<bool, Failure> {
        let Some(n) = k.sweep else { return Ok(false) };
        let mut csv = format!("{header}\n");
        for k in k_sweep(n) {
            csv.push_str(&format!("{},{}\n", fmt_f64(k), row(k)?));
        }
        print!("{csv}");
        Ok(true)
    };
    match cmd {
        BoundsCmd::Dim { dim, k } => {
            let row = |k| dim_distortion_interval(*dim, k).map(|(a, b)| format!("{},{}", fmt_f64(a), fmt_f64(b)));
            if !sweep(k, "k,lower,upper", &row)? {
                let (lo, hi) = dim_distortion_interval(*dim, k.k)?;
                println!("{lo:.p$} {hi:.p$}");
            }
        }
        BoundsCmd::Area { area, case, k } => {
            let row = |k| area_distortion_bound(*area, k, (*case).into()).map(fmt_f64);
            if !sweep(k, "k,bound", &row)? {
                println!("{:.p$}", area_distortion_bound(*area, k.k, (*case).into())?);
            }
        }
        BoundsCmd::Smirnov { k } => {
            let row = |k| smirnov_quasicircle_bound(k).map(fmt_f64);
            if !sweep(k, "k,bound", &row)? {
                println!("{}", trim_fixed(smirnov_quasicircle_bound(k.k)?, p));
            }
        }
        BoundsCmd::Qs { delta, k } => {
            let row = |k| quasisymmetric_spectrum(*delta, k).map(|s| format!("{},{}", fmt_f64(s.lower), fmt_f64(s.upper)));
            if !sweep(k, "k,lower,upper", &row)? {
                let s = quasisymmetric_spectrum(*delta, k.k)?;
                let clamp = if s.clamped { " (clamped)" } else { "" };
                println!("Δ={} Δ*={}{clamp}", trim_fixed(s.lower, p), trim_fixed(s.upper, p));
            }
        }
    }
    Ok(())
}

/// Fixed-point with `p` decimals, trailing zeros removed.
fn trim_fixed(x: f64, p: usize) -> String {
    let s = format!("{x:.p$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

fn parse_address(text: &str) -> Result<Address, Failure> {
    let bad = || Failure::Domain(Error::InvalidInput(format!("bad address {text:?}")));
    let idx = |s: &str| s.trim().parse::<usize>().map_err(|_| bad());
    match text.split_once(':') {
        None => Ok(Address::fixed(idx(text)?)),
        Some((prefix, tail)) => {
            let prefix = prefix.split('.').map(idx).collect::<Result<Vec<_>, _>>()?;
            Ok(Address::new(prefix, idx(tail)?))
        }
    }
}

fn emit_report(report: &CheckReport, out: Option<&Path>) -> CmdResult {
    print!("{}", report.to_text());
    match out {
        Some(path) => write(path, &report.to_csv())?,
        None => {
            println!();
            print!("{}", report.to_csv());
        }
    }
    Ok(())
}

fn verify_cmd(a: &VerifyArgs) -> CmdResult {
    let m = load_motion(&a.config)?;
    let seed = seed_or_default(a.seed)?;
    let reports: Vec<CheckReport> = match a.check {
        CheckName::Harnack => {
            let u = |l: ComplexPoint| 1.0 / m.dimension(l).expect("sampled parameter lies in the disk");
            vec![check_harnack_pairs(&u, a.pairs, a.max_modulus, seed, a.tol.unwrap_or(1e-9))?]
        }
        CheckName::Sandwich => vec![check_distortion_sandwich(&m, &a.k_grid, a.tol.unwrap_or(1e-12))?],
        CheckName::Diameter => {
            let Some(motion) = m.as_astala() else {
                return Err(Error::InvalidInput("the diameter check needs an astala config".into()).into());
            };
            let addresses = a.address.iter().map(|s| parse_address(s)).collect::<Result<Vec<_>, _>>()?;
            let grid = square_grid(a.grid.unwrap_or(7), a.grid_radius);
            let mut cfg = DiameterCheck::new(a.rho);
            if let Some(b) = a.bound_rho {
                cfg.bound_rho = b;
            }
            if let Some(t) = a.tol {
                cfg.tol = t;
            }
            vec![check_diameter_harnack(motion, &addresses, &grid, cfg)?]
        }
        CheckName::Qsh => vec![run_qsh_experiment(&m, a.samples)?.report],
        CheckName::MeanValue => {
            let tol = a.tol.unwrap_or(1e-9);
            let centers = random_disk_points(a.centers, a.max_modulus, seed);
            let log_s = |l: ComplexPoint| m.dimension(l).expect("sampled parameter lies in the disk").ln();
            let mut reports = vec![check_mean_value_grid(&log_s, &centers, a.radius, 360, tol, MeanValueMode::Sub)?];
            let inv_s = |l: ComplexPoint| 1.0 / m.dimension(l).expect("sampled parameter lies in the disk");
            let mode = match &m {
                BuiltMotion::Astala(_) => MeanValueMode::Harmonic,
                BuiltMotion::Composite(_) => MeanValueMode::Super,
            };
            reports.push(check_mean_value_grid(&inv_s, &centers, a.radius, 360, tol, mode)?);
            reports
        }
        CheckName::Estimator => {
            let grid = match a.grid {
                Some(n) => square_grid(n, 0.5),
                None => a.lambda.iter().map(|s| lambda_arg(s)).collect::<Result<Vec<_>, _>>()?,
            };
            let render = RenderMethod::ChaosGame { count: a.points, seed };
            let (report, rows) =
                check_estimator_vs_theory(&m, &grid, render, EstimatorConfig::default(), a.tol.unwrap_or(0.07))?;
            if let Some(path) = &a.sweep_out {
                write(path, &sweep_csv(&rows))?;
            }
            vec![report]
        }
    };
    let mut passed = true;
    for (i, r) in reports.iter().enumerate() {
        let out = a.out.as_ref().map(|p| {
            if i == 0 {
                p.clone()
            } else {
                p.with_extension(format!("{i}.csv"))
            }
        });
        emit_report(r, out.as_deref())?;
        passed &= r.passed;
    }
    if passed {
        Ok(())
    } else {
        Err(Failure::CheckFailed)
    }
}
