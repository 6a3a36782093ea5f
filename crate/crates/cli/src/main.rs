//! `sphermean`: phantoms, transforms, inversion and verification suites for
//! the fixed-radius spherical mean transform.
//!
//! Exit codes: 0 success, 1 verification failure or runtime error, 2 usage
//! error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "sphermean", version, about = "Fixed-radius spherical mean transform toolkit")]
pub struct Cli {
    /// Log progress lines to stderr.
    #[arg(long, global = true)]
    pub verbose: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Bessel functions J_ν or normalized j_ν, and their zeros.
    Bessel(BesselArgs),
    /// Write a test field or mask.
    Phantom(PhantomArgs),
    /// h = f ∗ δ_R.
    Transform(TransformArgs),
    /// Regularized deconvolution of h = f ∗ δ_R.
    Invert(InvertArgs),
    /// Abel-type transforms between ridge profiles and radial profiles.
    Abel(AbelArgs),
    /// Run a verification suite and emit a JSON report.
    Verify(VerifyArgs),
}

fn positive(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be a positive number, got {v}"))
    }
}

fn non_negative(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if v >= 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(format!("must be ≥ 0, got {v}"))
    }
}

fn dimension(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(d @ (2 | 3)) => Ok(d),
        _ => Err(format!("dimension must be 2 or 3, got {s}")),
    }
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("what").required(true).args(["x", "zeros"])))]
pub struct BesselArgs {
    /// Order ν ≥ 0.
    #[arg(long, value_parser = non_negative)]
    pub order: f64,
    /// Arguments at which to evaluate (comma separated or repeated).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Vec<f64>,
    /// Print the first COUNT positive zeros instead.
    #[arg(long, value_name = "COUNT")]
    pub zeros: Option<usize>,
    /// Use j_ν(λ) = 2^ν Γ(ν+1) J_ν(λ)/λ^ν.
    #[arg(long)]
    pub normalized: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum PhantomKind {
    Gaussian,
    Bump,
    Zalcman,
    DiskMask,
    SquareMask,
    TwoDiskMask,
    LshapeMask,
}

#[derive(Args, Debug)]
pub struct PhantomArgs {
    #[arg(long, value_enum)]
    pub kind: PhantomKind,
    #[arg(long, default_value_t = 2, value_parser = dimension)]
    pub dim: usize,
    /// Points per axis.
    #[arg(long, default_value_t = 128)]
    pub shape: usize,
    /// Lattice spacing; defaults to 4/shape (a box of side 4), or
    /// 20/shape for zalcman.
    #[arg(long, value_parser = positive)]
    pub spacing: Option<f64>,
    /// Gaussian width.
    #[arg(long, default_value_t = 0.15, value_parser = positive)]
    pub sigma: f64,
    /// Bump or disk radius, square half side, or L-shape half side.
    #[arg(long, default_value_t = 1.0, value_parser = positive)]
    pub size: f64,
    /// Center coordinates, comma separated.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true, conflicts_with = "random_center")]
    pub center: Vec<f64>,
    /// Draw the center uniformly from the middle half of the box using --seed.
    #[arg(long)]
    pub random_center: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Which zero of J_{n/2−1} to use for zalcman.
    #[arg(long, default_value_t = 1)]
    pub zero_index: usize,
    /// Disk offset for two-disk-mask.
    #[arg(long, default_value_t = 1.25, value_parser = positive)]
    pub offset: f64,
    /// Fillet radius for lshape-mask.
    #[arg(long, default_value_t = 0.5, value_parser = positive)]
    pub fillet: f64,
    #[arg(long)]
    pub output: PathBuf,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Fft,
    #[value(name = "quad", alias = "quadrature")]
    Quadrature,
}

#[derive(Args, Debug)]
pub struct TransformArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = positive, allow_hyphen_values = true)]
    pub radius: f64,
    #[arg(long, value_enum, default_value_t = Method::Fft)]
    pub method: Method,
    /// Treat the field as zero outside the grid instead of rejecting fields
    /// that do not vanish within R of a face.
    #[arg(long)]
    pub truncate: bool,
    /// Sphere quadrature order for --method quad.
    #[arg(long, default_value_t = 256)]
    pub quadrature_order: usize,
    #[arg(long)]
    pub output: PathBuf,
    /// Also check the zero rings and compare against direct quadrature on a
    /// sparse subset, and emit a JSON report.
    #[arg(long)]
    pub verify: bool,
    /// Write the JSON report here instead of stdout (implies --verify).
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct InvertArgs {
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long, value_parser = positive, allow_hyphen_values = true)]
    pub radius: f64,
    /// `zero` or `tikhonov:EPS`.
    #[arg(long, default_value = "zero")]
    pub policy: String,
    /// Half width of the band treated around each zero ring, in |ξ| units.
    #[arg(long, value_parser = positive)]
    pub ring_width: Option<f64>,
    #[arg(long)]
    pub output: PathBuf,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum AbelDirection {
    Forward,
    Inverse,
}

#[derive(Args, Debug)]
pub struct AbelArgs {
    #[arg(value_enum)]
    pub direction: AbelDirection,
    /// Profile CSV with `r,value` rows on a uniform grid from 0.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 3, value_parser = dimension)]
    pub dim: usize,
    /// Required for --dim 2.
    #[arg(long)]
    pub singular_quadrature: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Specfun,
    Transform,
    Abel,
    Local,
    Zalcman,
    Support,
    Rconvex,
    RconvexWalk,
    All,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Specfun => "specfun",
            Suite::Transform => "transform",
            Suite::Abel => "abel",
            Suite::Local => "local",
            Suite::Zalcman => "zalcman",
            Suite::Support => "support",
            Suite::Rconvex => "rconvex",
            Suite::RconvexWalk => "rconvex-walk",
            Suite::All => "all",
        }
    }
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    #[arg(long, default_value_t = 7)]
    pub seed: u64,
    /// Dimension of the transform suite.
    #[arg(long, default_value_t = 2, value_parser = dimension)]
    pub dim: usize,
    /// Field to check (support, rconvex-walk); built-in phantoms otherwise.
    #[arg(long)]
    pub field: Option<PathBuf>,
    /// Mask K as a 0/1 field (support, rconvex, rconvex-walk).
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[arg(long, value_parser = positive, allow_hyphen_values = true)]
    pub radius: Option<f64>,
    /// Write the JSON report here instead of stdout.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("SPHERMEAN_THREADS") else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .map_err(|_| format!("SPHERMEAN_THREADS must be a positive integer, got `{value}`"))?;
    if n == 0 {
        return Err("SPHERMEAN_THREADS must be at least 1".into());
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    match commands::run(&cli) {
        Ok(outcome) => ExitCode::from(outcome as u8),
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(commands::Failure::Runtime(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
