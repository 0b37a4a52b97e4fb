//! Command-line flags.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::commands::FitKind;
use crate::config::{
    ConventionArg, DensityConfig, DensitySource, FamilyArg, FloorSetting, GeneratorArg, KernelConfig,
    LandmarkCount, MethodArg, PathArg, RunConfig, Scalar, Schedule,
};
use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "spectral-leverage", version, about = "Analytic leverage scores for kernel ridge regression")]
pub struct Cli {
    /// Worker threads for the parallel numeric kernels (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a synthetic dataset as CSV.
    Gen(GenArgs),
    /// Approximate (or exact/uniform) leverage scores and sampling probabilities as JSON.
    Leverage(LeverageArgs),
    /// Exact leverage scores from the dense kernel matrix as JSON.
    ExactLeverage(ExactLeverageArgs),
    /// Exact or Nyström KRR fit as JSON.
    Krr(KrrArgs),
    /// Timing and accuracy table over a grid of sample sizes as CSV.
    Bench(BenchArgs),
    /// One-dimensional equivalent kernel next to the exact weight function as CSV.
    EkCurve(EkCurveArgs),
}

#[derive(Debug, Clone, Args)]
pub struct KernelArgs {
    #[arg(long, value_enum, default_value_t = FamilyArg::Matern)]
    pub kernel: FamilyArg,
    /// Matérn smoothness (0.5, 1.5 or 2.5).
    #[arg(long, default_value_t = 1.5)]
    pub nu: f64,
    /// Gaussian bandwidth.
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long, value_enum, default_value_t = ConventionArg::Simplified)]
    pub convention: ConventionArg,
}

impl KernelArgs {
    pub fn config(&self) -> KernelConfig {
        KernelConfig { family: self.kernel, nu: self.nu, sigma: self.sigma, convention: self.convention }
    }
}

#[derive(Debug, Clone, Args)]
pub struct LambdaArgs {
    /// Fixed regularization parameter.
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Regularization `c * n^(-e)` given as `c,e`, e.g. `0.075,2/3`.
    #[arg(long, value_name = "C,E")]
    pub lambda_schedule: Option<Schedule>,
}

impl LambdaArgs {
    pub fn scalar(&self) -> CliResult<Scalar> {
        Scalar::from_pair("lambda", self.lambda, self.lambda_schedule)?
            .ok_or_else(|| CliError::Config("give --lambda or --lambda-schedule".into()))
    }
}

#[derive(Debug, Clone, Args)]
pub struct DensityArgs {
    #[arg(long, value_enum, default_value_t = DensitySource::Kde)]
    pub density: DensitySource,
    #[arg(long)]
    pub kde_bandwidth: Option<f64>,
    /// KDE bandwidth `c * n^(-e)` given as `c,e`.
    #[arg(long, value_name = "C,E")]
    pub kde_schedule: Option<Schedule>,
    /// Size of a uniformly subsampled KDE reference set.
    #[arg(long)]
    pub kde_subsample: Option<usize>,
    /// Low-density floor: `none`, `auto` (effective bandwidth), a value, or `c,e`.
    #[arg(long, default_value = "auto")]
    pub floor: FloorSetting,
}

impl DensityArgs {
    pub fn config(&self) -> CliResult<DensityConfig> {
        Ok(DensityConfig {
            source: self.density,
            bandwidth: Scalar::from_pair("kde-bandwidth", self.kde_bandwidth, self.kde_schedule)?,
            subsample: self.kde_subsample,
            floor: self.floor,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct SamplingArgs {
    /// Number of Nyström landmarks.
    #[arg(long)]
    pub d_sub: Option<usize>,
    /// Landmarks `ceil(c * n^e)` given as `c,e` (default `5,1/3`).
    #[arg(long, value_name = "C,E")]
    pub d_sub_schedule: Option<Schedule>,
}

impl SamplingArgs {
    pub fn count(&self) -> CliResult<LandmarkCount> {
        match (self.d_sub, self.d_sub_schedule) {
            (Some(_), Some(_)) => Err(CliError::Config("give either --d-sub or --d-sub-schedule".into())),
            (Some(0), None) => Err(CliError::Config("--d-sub must be at least 1".into())),
            (Some(k), None) => Ok(LandmarkCount::Fixed(k)),
            (None, Some(s)) => Ok(LandmarkCount::Growth { c: s.c, e: s.e }),
            (None, None) => Ok(LandmarkCount::default()),
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub generator: GeneratorArg,
    /// Dimension of the uniform generator.
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long)]
    pub n: usize,
    /// Mixing exponent of the bimodal generators (default 0.6 in 1-d, 0.4 in 3-d).
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Noise standard deviation of the `y` column.
    #[arg(long, default_value_t = 0.5)]
    pub noise: f64,
    /// Leave out the `y` column.
    #[arg(long)]
    pub no_y: bool,
    #[arg(long, short)]
    pub output: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct LeverageArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: PathBuf,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub lambda: LambdaArgs,
    #[command(flatten)]
    pub density: DensityArgs,
    #[arg(long, value_enum, default_value_t = MethodArg::Sa)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = PathArg::Closed)]
    pub path: PathArg,
    /// Drop the constant factors of the closed form.
    #[arg(long)]
    pub proportional_only: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Size limit of the dense exact oracle.
    #[arg(long, default_value_t = 20_000)]
    pub max_n: usize,
}

impl LeverageArgs {
    pub fn config(&self) -> CliResult<RunConfig> {
        Ok(RunConfig {
            density: self.density.config()?,
            path: self.path,
            proportional_only: self.proportional_only,
            method: self.method,
            seed: self.seed,
            max_n: self.max_n,
            ..RunConfig::new(self.kernel.config(), self.lambda.scalar()?)
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct ExactLeverageArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: PathBuf,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub lambda: LambdaArgs,
    #[arg(long, default_value_t = 20_000)]
    pub max_n: usize,
}

impl ExactLeverageArgs {
    pub fn config(&self) -> CliResult<RunConfig> {
        Ok(RunConfig {
            method: MethodArg::Exact,
            max_n: self.max_n,
            ..RunConfig::new(self.kernel.config(), self.lambda.scalar()?)
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct KrrArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = FitKind::Nystrom)]
    pub fit: FitKind,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub lambda: LambdaArgs,
    #[command(flatten)]
    pub density: DensityArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Landmark sampling distribution.
    #[arg(long, value_enum, default_value_t = MethodArg::Sa)]
    pub method: MethodArg,
    #[arg(long, value_enum, default_value_t = PathArg::Closed)]
    pub path: PathArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 20_000)]
    pub max_n: usize,
}

impl KrrArgs {
    pub fn config(&self) -> CliResult<RunConfig> {
        Ok(RunConfig {
            density: self.density.config()?,
            path: self.path,
            method: self.method,
            d_sub: self.sampling.count()?,
            seed: self.seed,
            max_n: self.max_n,
            ..RunConfig::new(self.kernel.config(), self.lambda.scalar()?)
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct BenchArgs {
    /// Benchmark a fixed dataset instead of generated designs.
    #[arg(long, short)]
    pub input: Option<PathBuf>,
    #[arg(long, short)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value_t = GeneratorArg::Uniform)]
    pub generator: GeneratorArg,
    #[arg(long, default_value_t = 1)]
    pub dim: usize,
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Comma-separated sample sizes.
    #[arg(long = "n", value_delimiter = ',', default_value = "200,2000")]
    pub n_grid: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    pub repeats: usize,
    /// Comma-separated methods.
    #[arg(long, value_enum, value_delimiter = ',', default_value = "sa,uniform")]
    pub methods: Vec<MethodArg>,
    #[arg(long, default_value_t = 0.5)]
    pub noise: f64,
    /// Only time the leverage step.
    #[arg(long)]
    pub no_fit: bool,
    /// Add a full-KRR row per replicate.
    #[arg(long)]
    pub with_krr: bool,
    #[arg(long, default_value_t = 5000)]
    pub exact_cap: usize,
    /// Repeat each leverage computation and report the fastest time.
    #[arg(long, default_value_t = 1)]
    pub timing_repeats: usize,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub lambda: LambdaArgs,
    #[command(flatten)]
    pub density: DensityArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long, value_enum, default_value_t = PathArg::Closed)]
    pub path: PathArg,
    #[arg(long)]
    pub proportional_only: bool,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl BenchArgs {
    pub fn config(&self) -> CliResult<crate::commands::BenchConfig> {
        let run = RunConfig {
            density: self.density.config()?,
            path: self.path,
            proportional_only: self.proportional_only,
            d_sub: self.sampling.count()?,
            seed: self.seed,
            max_n: self.exact_cap,
            ..RunConfig::new(self.kernel.config(), self.lambda.scalar()?)
        };
        Ok(crate::commands::BenchConfig {
            dim: self.dim,
            gamma: self.gamma,
            repeats: self.repeats,
            methods: self.methods.clone(),
            noise: self.noise,
            fit: !self.no_fit,
            with_krr: self.with_krr,
            exact_cap: self.exact_cap,
            timing_repeats: self.timing_repeats,
            ..crate::commands::BenchConfig::new(run, self.generator, self.n_grid.clone())
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct EkCurveArgs {
    #[arg(long, short)]
    pub input: PathBuf,
    #[arg(long, short)]
    pub output: PathBuf,
    /// Centre of the curve.
    #[arg(long)]
    pub t: f64,
    #[arg(long, default_value_t = 0.0)]
    pub grid_min: f64,
    #[arg(long, default_value_t = 1.0)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 201)]
    pub grid_points: usize,
    /// Density at `t` (default: the configured density at the nearest design point).
    #[arg(long)]
    pub p_t: Option<f64>,
    #[arg(long, default_value_t = 5000)]
    pub exact_cap: usize,
    #[command(flatten)]
    pub kernel: KernelArgs,
    #[command(flatten)]
    pub lambda: LambdaArgs,
    #[command(flatten)]
    pub density: DensityArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

impl EkCurveArgs {
    pub fn config(&self) -> CliResult<crate::commands::EkCurveConfig> {
        let run = RunConfig {
            density: self.density.config()?,
            seed: self.seed,
            ..RunConfig::new(self.kernel.config(), self.lambda.scalar()?)
        };
        Ok(crate::commands::EkCurveConfig {
            run,
            t: self.t,
            grid_min: self.grid_min,
            grid_max: self.grid_max,
            grid_points: self.grid_points,
            p_t: self.p_t,
            exact_cap: self.exact_cap,
        })
    }
}
