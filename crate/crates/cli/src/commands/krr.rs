use std::time::Instant;

use serde::Serialize;
use spectral_leverage::{in_sample_risk, krr_fit, nystrom_fit, nystrom_sample, DenseLimits, DesignSet};

use crate::config::{stream_seed, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io::{f17_opt, f17_vec, F17};

use super::{elapsed_ms, run_leverage, Meta, LANDMARK_STREAM};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum FitKind {
    /// Full KRR with the dense solve.
    Exact,
    /// Nyström KRR on landmarks drawn from the leverage distribution.
    Nystrom,
}

#[derive(Debug, Clone, Serialize)]
pub struct KrrConfigEcho {
    pub fit: FitKind,
    #[serde(flatten)]
    pub run: RunConfig,
}

#[derive(Debug, Clone, Serialize)]
pub struct KrrResults {
    pub fit: FitKind,
    /// Landmark sampling method; absent for the exact fit.
    pub method: Option<&'static str>,
    pub n: usize,
    pub lambda: F17,
    pub d_sub: Option<usize>,
    pub seed: u64,
    pub landmark_indices: Option<Vec<usize>>,
    /// Mean squared error against `f_star`, when the dataset has it.
    pub risk: Option<F17>,
    pub predictions: Vec<F17>,
}

#[derive(Debug, Clone, Serialize)]
pub struct KrrReport {
    pub meta: Meta<KrrConfigEcho>,
    pub results: KrrResults,
    #[serde(skip)]
    pub risk: Option<f64>,
}

pub fn cmd_krr(cfg: &RunConfig, fit: FitKind, x: &DesignSet) -> CliResult<KrrReport> {
    let n = x.len();
    let y = x
        .responses
        .as_deref()
        .ok_or_else(|| CliError::Config("krr needs a `y` column in the dataset".into()))?;
    let lambda = cfg.lambda_at(n)?;
    let spec = cfg.kernel.spec(x.dim())?;
    let mut leverage_ms = None;
    let (predictions, fit_ms, landmarks) = match fit {
        FitKind::Exact => {
            let start = Instant::now();
            let model = krr_fit(x, y, &spec, lambda, DenseLimits { max_n: cfg.max_n })?;
            let pred = model.predict_in_sample();
            (pred, elapsed_ms(start), None)
        }
        FitKind::Nystrom => {
            let run = run_leverage(x, cfg, &spec, lambda, None, 1)?;
            leverage_ms = Some(run.leverage_time_ms);
            let d_sub = cfg.d_sub.at(n);
            let idx = nystrom_sample(&run.q, d_sub, stream_seed(cfg.seed, LANDMARK_STREAM));
            let start = Instant::now();
            let model = nystrom_fit(x, y, &spec, lambda, &idx)?;
            let pred = model.predict_many(x);
            (pred, elapsed_ms(start), Some(idx))
        }
    };
    let risk = x.f_star.as_deref().map(|f| in_sample_risk(&predictions, f)).transpose()?;
    let meta = Meta::new("krr", KrrConfigEcho { fit, run: *cfg })
        .time("leverage", leverage_ms)
        .time("fit", Some(fit_ms));
    let results = KrrResults {
        fit,
        method: landmarks.as_ref().map(|_| cfg.method.as_str()),
        n,
        lambda: F17(lambda),
        d_sub: landmarks.as_ref().map(|l| l.len()),
        seed: cfg.seed,
        landmark_indices: landmarks,
        risk: f17_opt(risk),
        predictions: f17_vec(&predictions),
    };
    Ok(KrrReport { meta, results, risk })
}
