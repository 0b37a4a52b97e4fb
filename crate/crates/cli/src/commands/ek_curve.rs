use serde::Serialize;
use spectral_leverage::{equivalent_kernel_1d, krr_fit, DenseLimits, DesignSet, QuadConfig};

use crate::config::{MethodArg, RunConfig};
use crate::error::{CliError, CliResult};
use crate::io::{cell, fmt17};

use super::estimate_densities;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EkCurveConfig {
    pub run: RunConfig,
    pub t: f64,
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_points: usize,
    /// Density at `t`; defaults to the configured density at the design point nearest `t`.
    pub p_t: Option<f64>,
    /// Largest `n` for which the exact column is computed.
    pub exact_cap: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EkCurve {
    /// Design point nearest `t`; the exact column is the weight function of this point.
    pub t_nearest: f64,
    pub p_t: f64,
    pub x: Vec<f64>,
    pub equivalent_kernel: Vec<f64>,
    /// `n [K(x, X)(K + n lambda I)^{-1}]_j`, or `None` above the size cap.
    pub exact: Option<Vec<f64>>,
}

impl EkCurve {
    pub const COLUMNS: [&'static str; 3] = ["x", "equivalent_kernel", "exact_g"];

    pub fn table(&self) -> Vec<Vec<String>> {
        (0..self.x.len())
            .map(|i| {
                vec![
                    fmt17(self.x[i]),
                    fmt17(self.equivalent_kernel[i]),
                    cell(self.exact.as_ref().map(|g| g[i])),
                ]
            })
            .collect()
    }
}

pub fn cmd_ek_curve(cfg: &EkCurveConfig, x: &DesignSet) -> CliResult<EkCurve> {
    if x.dim() != 1 {
        return Err(CliError::Config(format!("ek-curve needs 1-d data, got d = {}", x.dim())));
    }
    if x.is_empty() {
        return Err(CliError::Config("ek-curve needs a nonempty dataset".into()));
    }
    if cfg.grid_points < 2 || !(cfg.grid_max > cfg.grid_min) {
        return Err(CliError::Config("grid needs at least 2 points and max > min".into()));
    }
    let n = x.len();
    let lambda = cfg.run.lambda_at(n)?;
    let spec = cfg.run.kernel.spec(1)?;
    let pts = x.as_slice();
    let j = (0..n)
        .min_by(|&a, &b| (pts[a] - cfg.t).abs().total_cmp(&(pts[b] - cfg.t).abs()))
        .expect("nonempty design");
    let p_t = match cfg.p_t {
        Some(p) if p > 0.0 && p.is_finite() => p,
        Some(p) => return Err(CliError::Config(format!("--p-t must be positive, got {p}"))),
        None => {
            let run = RunConfig { method: MethodArg::Sa, ..cfg.run };
            estimate_densities(x, &run, &spec, lambda, None)?.values[j]
        }
    };
    let step = (cfg.grid_max - cfg.grid_min) / (cfg.grid_points - 1) as f64;
    let grid: Vec<f64> = (0..cfg.grid_points).map(|i| cfg.grid_min + step * i as f64).collect();
    let quad = QuadConfig::default();
    let ek = grid
        .iter()
        .map(|&g| equivalent_kernel_1d(g, cfg.t, p_t, lambda, &spec, &quad))
        .collect::<Result<Vec<_>, _>>()?;
    let exact = if n <= cfg.exact_cap {
        // KRR on the unit response e_j has weights (K + n lambda I)^{-1} e_j
        let mut e = vec![0.0; n];
        e[j] = 1.0;
        let model = krr_fit(x, &e, &spec, lambda, DenseLimits { max_n: cfg.exact_cap })?;
        Some(grid.iter().map(|&g| n as f64 * model.predict(&[g])).collect())
    } else {
        None
    };
    Ok(EkCurve { t_nearest: pts[j], p_t, x: grid, equivalent_kernel: ek, exact })
}
