//! Subcommand implementations. Each returns its report so it can be driven from code;
//! `run` in the crate root handles writing.

mod bench;
mod ek_curve;
mod gen;
mod krr;
mod leverage;

pub use bench::{cmd_bench, BenchConfig, BenchReport, BenchRow, BENCH_COLUMNS};
pub use ek_curve::{cmd_ek_curve, EkCurve, EkCurveConfig};
pub use gen::{cmd_gen, GenConfig};
pub use krr::{cmd_krr, FitKind, KrrReport};
pub use leverage::{cmd_exact_leverage, cmd_leverage, ExactLeverageReport, LeverageReport};

use std::time::Instant;

use serde::Serialize;
use spectral_leverage::density::apply_floor;
use spectral_leverage::{
    approximate_leverages, exact_rescaled_leverage, kde_at_samples, kernel_matrix,
    to_sampling_distribution, DenseLimits, DesignSet, GeneratorKind, IntegrationPath, KdeConfig,
    KernelSpec, LeverageOptions, LeverageVector, SamplingDistribution,
};

use crate::config::{default_bandwidth, stream_seed, DensitySource, MethodArg, PathArg, RunConfig};
use crate::error::{CliError, CliResult};

pub(crate) const NOISE_STREAM: u64 = 1;
pub(crate) const LANDMARK_STREAM: u64 = 2;
pub(crate) const KDE_STREAM: u64 = 3;

/// Version string in `git describe` style.
pub fn version() -> String {
    format!("v{}", env!("CARGO_PKG_VERSION"))
}

pub(crate) fn elapsed_ms(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

#[derive(Debug, Clone, Serialize)]
pub struct Meta<C: Serialize> {
    pub version: String,
    pub command: &'static str,
    pub config: C,
    pub timing_ms: serde_json::Map<String, serde_json::Value>,
}

impl<C: Serialize> Meta<C> {
    pub(crate) fn new(command: &'static str, config: C) -> Self {
        Self { version: version(), command, config, timing_ms: Default::default() }
    }

    pub(crate) fn time(mut self, name: &str, ms: Option<f64>) -> Self {
        let v = ms.map(serde_json::Value::from).unwrap_or(serde_json::Value::Null);
        self.timing_ms.insert(name.to_string(), v);
        self
    }
}

/// Densities fed to the leverage formula, after the floor.
#[derive(Debug, Clone)]
pub struct DensityEstimate {
    pub values: Vec<f64>,
    /// KDE bandwidth, when the KDE ran.
    pub bandwidth: Option<f64>,
    pub floor: f64,
    pub kde_time_ms: Option<f64>,
}

pub fn estimate_densities(
    x: &DesignSet,
    cfg: &RunConfig,
    spec: &KernelSpec,
    lambda: f64,
    generator: Option<GeneratorKind>,
) -> CliResult<DensityEstimate> {
    let n = x.len();
    let floor = cfg.density.floor.threshold(spec, lambda, n);
    let (mut values, bandwidth, kde_time_ms) = match cfg.density.source {
        DensitySource::True => {
            let d = x.density.clone().ok_or_else(|| {
                CliError::Config("--density true needs a `density` column in the dataset".into())
            })?;
            (d, None, None)
        }
        DensitySource::Kde => {
            let bw = cfg.density.bandwidth.unwrap_or_else(|| default_bandwidth(generator, x.dim())).at(n);
            let kde = KdeConfig {
                reference_subsample: cfg.density.subsample,
                seed: stream_seed(cfg.seed, KDE_STREAM),
                ..KdeConfig::new(bw)
            };
            let start = Instant::now();
            let p = kde_at_samples(x, &kde)?;
            (p, Some(bw), Some(elapsed_ms(start)))
        }
    };
    if floor > 0.0 {
        apply_floor(&mut values, floor);
    }
    Ok(DensityEstimate { values, bandwidth, floor, kde_time_ms })
}

/// Leverage values for `method` and their timing.
#[derive(Debug, Clone)]
pub struct LeverageRun {
    pub vector: LeverageVector,
    pub q: SamplingDistribution,
    pub density: Option<DensityEstimate>,
    /// Fastest of the timed repetitions.
    pub leverage_time_ms: f64,
}

pub fn run_leverage(
    x: &DesignSet,
    cfg: &RunConfig,
    spec: &KernelSpec,
    lambda: f64,
    generator: Option<GeneratorKind>,
    timing_repeats: usize,
) -> CliResult<LeverageRun> {
    let repeats = timing_repeats.max(1);
    let mut best = f64::INFINITY;
    let (vector, density) = match cfg.method {
        MethodArg::Sa => {
            let dens = estimate_densities(x, cfg, spec, lambda, generator)?;
            let opts = LeverageOptions {
                path: match cfg.path {
                    PathArg::Closed => IntegrationPath::ClosedForm,
                    PathArg::Quad => IntegrationPath::Quadrature,
                },
                proportional_only: cfg.proportional_only,
                ..Default::default()
            };
            let mut out = None;
            for _ in 0..repeats {
                let start = Instant::now();
                let lv = approximate_leverages(x, &dens.values, spec, lambda, &opts)?;
                best = best.min(elapsed_ms(start));
                out = Some(lv);
            }
            (out.expect("at least one repetition"), Some(dens))
        }
        MethodArg::Exact => {
            let limits = DenseLimits { max_n: cfg.max_n };
            limits.check(x.len())?;
            let mut out = None;
            for _ in 0..repeats {
                let start = Instant::now();
                let k = kernel_matrix(spec, x, limits)?;
                let lv = exact_rescaled_leverage(&k, lambda)?;
                best = best.min(elapsed_ms(start));
                out = Some(lv);
            }
            (out.expect("at least one repetition"), None)
        }
        MethodArg::Uniform => {
            let start = Instant::now();
            let lv = LeverageVector::uniform(x.len())?;
            best = elapsed_ms(start);
            (lv, None)
        }
    };
    let q = to_sampling_distribution(&vector)?;
    Ok(LeverageRun { vector, q, density, leverage_time_ms: best })
}
