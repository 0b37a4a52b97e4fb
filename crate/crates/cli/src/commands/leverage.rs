use serde::Serialize;
use spectral_leverage::{DenseLimits, DesignSet};

use crate::config::{MethodArg, RunConfig};
use crate::error::CliResult;
use crate::io::{f17_opt, f17_vec, F17};

use super::{run_leverage, Meta};

#[derive(Debug, Clone, Serialize)]
pub struct LeverageResults {
    pub method: &'static str,
    pub n: usize,
    pub lambda: F17,
    pub kde_bandwidth: Option<F17>,
    pub density_floor: Option<F17>,
    pub values: Vec<F17>,
    pub q: Vec<F17>,
}

#[derive(Debug, Clone, Serialize)]
pub struct LeverageReport {
    pub meta: Meta<RunConfig>,
    pub results: LeverageResults,
    #[serde(skip)]
    pub q: Vec<f64>,
}

pub fn cmd_leverage(cfg: &RunConfig, x: &DesignSet) -> CliResult<LeverageReport> {
    let n = x.len();
    let lambda = cfg.lambda_at(n)?;
    let spec = cfg.kernel.spec(x.dim())?;
    let run = run_leverage(x, cfg, &spec, lambda, None, 1)?;
    let density = run.density.as_ref();
    let meta = Meta::new("leverage", *cfg)
        .time("kde", density.and_then(|d| d.kde_time_ms))
        .time("leverage", Some(run.leverage_time_ms));
    let results = LeverageResults {
        method: run.vector.method().as_str(),
        n,
        lambda: F17(lambda),
        kde_bandwidth: f17_opt(density.and_then(|d| d.bandwidth)),
        density_floor: f17_opt(density.map(|d| d.floor)),
        values: f17_vec(run.vector.values()),
        q: f17_vec(run.q.probabilities()),
    };
    Ok(LeverageReport { meta, results, q: run.q.probabilities().to_vec() })
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactLeverageResults {
    pub method: &'static str,
    pub n: usize,
    pub lambda: F17,
    pub statistical_dimension: F17,
    /// Rescaled scores `n * l_i`.
    pub values: Vec<F17>,
    pub q: Vec<F17>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExactLeverageReport {
    pub meta: Meta<RunConfig>,
    pub results: ExactLeverageResults,
}

pub fn cmd_exact_leverage(cfg: &RunConfig, x: &DesignSet) -> CliResult<ExactLeverageReport> {
    let n = x.len();
    DenseLimits { max_n: cfg.max_n }.check(n)?;
    let lambda = cfg.lambda_at(n)?;
    let spec = cfg.kernel.spec(x.dim())?;
    let cfg = RunConfig { method: MethodArg::Exact, ..*cfg };
    let run = run_leverage(x, &cfg, &spec, lambda, None, 1)?;
    // Σ l_i = Σ (n l_i) / n
    let d_stat = run.vector.values().iter().sum::<f64>() / n as f64;
    let meta = Meta::new("exact-leverage", cfg).time("leverage", Some(run.leverage_time_ms));
    let results = ExactLeverageResults {
        method: run.vector.method().as_str(),
        n,
        lambda: F17(lambda),
        statistical_dimension: F17(d_stat),
        values: f17_vec(run.vector.values()),
        q: f17_vec(run.q.probabilities()),
    };
    Ok(ExactLeverageReport { meta, results })
}
