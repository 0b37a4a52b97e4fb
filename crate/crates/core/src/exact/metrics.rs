use crate::error::{Error, Result};
use crate::leverage::SamplingDistribution;

/// `n^{-1} Σ (f(x_i) - f*(x_i))^2`.
pub fn in_sample_risk(predictions: &[f64], f_star: &[f64]) -> Result<f64> {
    if predictions.len() != f_star.len() || predictions.is_empty() {
        return Err(Error::Config(format!(
            "risk needs equal nonempty vectors, got {} and {}",
            predictions.len(),
            f_star.len()
        )));
    }
    let s: f64 = predictions
        .iter()
        .zip(f_star)
        .map(|(p, t)| (p - t) * (p - t))
        .sum();
    Ok(s / predictions.len() as f64)
}

/// Summary of the ratios `r_i = q_approx_i / q_exact_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaccSummary {
    pub mean: f64,
    pub q05: f64,
    pub q95: f64,
    /// Mean of `|r_i - 1|`.
    pub mean_abs_dev: f64,
}

pub fn r_acc(q_approx: &SamplingDistribution, q_exact: &SamplingDistribution) -> Result<RaccSummary> {
    if q_approx.len() != q_exact.len() {
        return Err(Error::Config(format!(
            "distributions over {} and {} points",
            q_approx.len(),
            q_exact.len()
        )));
    }
    let mut ratios: Vec<f64> = q_approx
        .probabilities()
        .iter()
        .zip(q_exact.probabilities())
        .map(|(a, e)| a / e)
        .collect();
    let n = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / n;
    let mean_abs_dev = ratios.iter().map(|r| (r - 1.0).abs()).sum::<f64>() / n;
    ratios.sort_by(f64::total_cmp);
    Ok(RaccSummary {
        mean,
        q05: quantile_sorted(&ratios, 0.05),
        q95: quantile_sorted(&ratios, 0.95),
        mean_abs_dev,
    })
}

/// Linear interpolation between order statistics.
fn quantile_sorted(sorted: &[f64], prob: f64) -> f64 {
    let pos = prob * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}
