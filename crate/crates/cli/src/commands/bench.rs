use std::time::Instant;

use serde::Serialize;
use spectral_leverage::{
    in_sample_risk, krr_fit, nystrom_fit, nystrom_sample, r_acc, DenseLimits, DesignSet, GeneratorKind,
    RaccSummary,
};

use crate::config::{stream_seed, GeneratorArg, MethodArg, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io::{cell, fmt17};

use super::{cmd_gen, elapsed_ms, run_leverage, GenConfig, LeverageRun, LANDMARK_STREAM};

pub const BENCH_COLUMNS: [&str; 13] = [
    "n",
    "method",
    "leverage_time_ms",
    "fit_time_ms",
    "risk",
    "r_acc_mean",
    "r_acc_q05",
    "r_acc_q95",
    "seed",
    "kde_time_ms",
    "r_acc_mad",
    "lambda",
    "d_sub",
];

#[derive(Debug, Clone, Serialize)]
pub struct BenchConfig {
    pub run: RunConfig,
    /// Draws a fresh design per `(n, replicate)`; ignored when a dataset is supplied.
    pub generator: GeneratorArg,
    pub dim: usize,
    pub gamma: Option<f64>,
    pub n_grid: Vec<usize>,
    /// Replicates per `n`; replicate `r` uses seed `seed + r`.
    pub repeats: usize,
    pub methods: Vec<MethodArg>,
    /// Standard deviation of the response noise for generated designs.
    pub noise: f64,
    pub fit: bool,
    /// Adds a full-KRR row per replicate.
    pub with_krr: bool,
    /// Largest `n` for which the exact oracle (and hence R-ACC, the `exact` rows and
    /// the `krr` rows) runs; larger designs skip those rows.
    pub exact_cap: usize,
    /// Each leverage computation is repeated this often and the fastest time kept.
    pub timing_repeats: usize,
}

impl BenchConfig {
    pub fn new(run: RunConfig, generator: GeneratorArg, n_grid: Vec<usize>) -> Self {
        Self {
            run,
            generator,
            dim: 1,
            gamma: None,
            n_grid,
            repeats: 1,
            methods: vec![MethodArg::Sa, MethodArg::Uniform],
            noise: 0.5,
            fit: true,
            with_krr: false,
            exact_cap: 5000,
            timing_repeats: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub seed: u64,
    /// `sa`, `exact`, `uniform` or `krr`.
    pub method: &'static str,
    pub lambda: f64,
    pub d_sub: Option<usize>,
    pub kde_time_ms: Option<f64>,
    pub leverage_time_ms: Option<f64>,
    pub fit_time_ms: Option<f64>,
    pub risk: Option<f64>,
    pub r_acc: Option<RaccSummary>,
}

impl BenchRow {
    pub fn cells(&self) -> Vec<String> {
        let r = self.r_acc.as_ref();
        vec![
            self.n.to_string(),
            self.method.to_string(),
            cell(self.leverage_time_ms),
            cell(self.fit_time_ms),
            cell(self.risk),
            cell(r.map(|r| r.mean)),
            cell(r.map(|r| r.q05)),
            cell(r.map(|r| r.q95)),
            self.seed.to_string(),
            cell(self.kde_time_ms),
            cell(r.map(|r| r.mean_abs_dev)),
            fmt17(self.lambda),
            self.d_sub.map(|d| d.to_string()).unwrap_or_default(),
        ]
    }
}

#[derive(Debug, Clone)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
}

impl BenchReport {
    pub fn table(&self) -> Vec<Vec<String>> {
        self.rows.iter().map(BenchRow::cells).collect()
    }

    pub fn rows_for<'a>(&'a self, method: &'a str, n: usize) -> impl Iterator<Item = &'a BenchRow> + 'a {
        self.rows.iter().filter(move |r| r.method == method && r.n == n)
    }
}

/// Runs every method on each `(n, replicate)` design. With `dataset` the same data is
/// reused for every replicate and only the random choices (subsample, landmarks) change.
pub fn cmd_bench(cfg: &BenchConfig, dataset: Option<&DesignSet>) -> CliResult<BenchReport> {
    if cfg.repeats == 0 {
        return Err(CliError::Config("--repeats must be at least 1".into()));
    }
    if cfg.methods.is_empty() {
        return Err(CliError::Config("no methods selected".into()));
    }
    let grid: Vec<Option<usize>> = match dataset {
        Some(_) => vec![None],
        None if cfg.n_grid.is_empty() => return Err(CliError::Config("empty --n grid".into())),
        None => cfg.n_grid.iter().map(|&n| Some(n)).collect(),
    };
    let generator: Option<GeneratorKind> = dataset.is_none().then(|| cfg.generator.kind(cfg.dim));
    let mut rows = Vec::new();
    for n in grid {
        for rep in 0..cfg.repeats {
            let seed = cfg.run.seed.wrapping_add(rep as u64);
            let x = match (dataset, n) {
                (Some(d), _) => d.clone(),
                (None, Some(n)) => cmd_gen(&GenConfig {
                    generator: cfg.generator,
                    dim: cfg.dim,
                    n,
                    gamma: cfg.gamma,
                    seed,
                    noise: Some(cfg.noise),
                })?,
                (None, None) => unreachable!("grid entries are set without a dataset"),
            };
            rows.extend(bench_one(cfg, &x, seed, generator)?);
        }
    }
    Ok(BenchReport { rows })
}

fn bench_one(cfg: &BenchConfig, x: &DesignSet, seed: u64, generator: Option<GeneratorKind>) -> CliResult<Vec<BenchRow>> {
    let n = x.len();
    let run_cfg = RunConfig { seed, ..cfg.run };
    let lambda = run_cfg.lambda_at(n)?;
    let spec = run_cfg.kernel.spec(x.dim())?;
    let limits = DenseLimits { max_n: cfg.exact_cap };
    let exact = if n <= cfg.exact_cap {
        let ecfg = RunConfig { method: MethodArg::Exact, max_n: cfg.exact_cap, ..run_cfg };
        Some(run_leverage(x, &ecfg, &spec, lambda, generator, cfg.timing_repeats)?)
    } else {
        None
    };
    let d_sub = cfg.fit.then(|| run_cfg.d_sub.at(n));
    let fit_data = if cfg.fit || cfg.with_krr {
        let y = x
            .responses
            .as_deref()
            .ok_or_else(|| CliError::Config("fitting needs a `y` column in the dataset".into()))?;
        Some(y)
    } else {
        None
    };
    let landmark_seed = stream_seed(seed, LANDMARK_STREAM);
    let mut rows = Vec::new();
    for &method in &cfg.methods {
        let owned;
        let run: &LeverageRun = match (method, &exact) {
            (MethodArg::Exact, Some(e)) => e,
            // the dense oracle only runs up to the cap
            (MethodArg::Exact, None) => continue,
            _ => {
                owned = run_leverage(x, &RunConfig { method, ..run_cfg }, &spec, lambda, generator, cfg.timing_repeats)?;
                &owned
            }
        };
        let racc = exact.as_ref().map(|e| r_acc(&run.q, &e.q)).transpose()?;
        let (fit_time_ms, risk) = match (d_sub, fit_data) {
            (Some(d), Some(y)) => {
                let idx = nystrom_sample(&run.q, d, landmark_seed);
                let start = Instant::now();
                let model = nystrom_fit(x, y, &spec, lambda, &idx)?;
                let pred = model.predict_many(x);
                let t = elapsed_ms(start);
                (Some(t), x.f_star.as_deref().map(|f| in_sample_risk(&pred, f)).transpose()?)
            }
            _ => (None, None),
        };
        rows.push(BenchRow {
            n,
            seed,
            method: method.as_str(),
            lambda,
            d_sub,
            kde_time_ms: run.density.as_ref().and_then(|d| d.kde_time_ms),
            leverage_time_ms: Some(run.leverage_time_ms),
            fit_time_ms,
            risk,
            r_acc: racc,
        });
    }
    if cfg.with_krr && n <= cfg.exact_cap {
        let y = fit_data.expect("checked above");
        let start = Instant::now();
        let model = krr_fit(x, y, &spec, lambda, limits)?;
        let pred = model.predict_in_sample();
        let t = elapsed_ms(start);
        rows.push(BenchRow {
            n,
            seed,
            method: "krr",
            lambda,
            d_sub: None,
            kde_time_ms: None,
            leverage_time_ms: None,
            fit_time_ms: Some(t),
            risk: x.f_star.as_deref().map(|f| in_sample_risk(&pred, f)).transpose()?,
            r_acc: None,
        });
    }
    Ok(rows)
}
