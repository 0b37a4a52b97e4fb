//! Gaussian kernel density estimates at the design points.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::design::{squared_distance, DesignSet};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum KdeKernel {
    #[default]
    Gaussian,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KdeConfig {
    pub bandwidth: f64,
    pub kernel: KdeKernel,
    /// Densities below this are pulled up by [`floor_adjust`]; `0` disables the floor.
    pub floor_threshold: f64,
    /// Evaluate against a uniformly subsampled reference set of this size.
    pub reference_subsample: Option<usize>,
    /// Seed for the reference subsample.
    pub seed: u64,
}

impl KdeConfig {
    pub fn new(bandwidth: f64) -> Self {
        Self {
            bandwidth,
            kernel: KdeKernel::Gaussian,
            floor_threshold: 0.0,
            reference_subsample: None,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.bandwidth > 0.0 && self.bandwidth.is_finite()) {
            return Err(Error::Config(format!(
                "KDE bandwidth must be positive, got {}",
                self.bandwidth
            )));
        }
        if !(self.floor_threshold >= 0.0) {
            return Err(Error::Config("floor threshold must be nonnegative".into()));
        }
        if self.reference_subsample == Some(0) {
            return Err(Error::Config("reference subsample size must be positive".into()));
        }
        Ok(())
    }
}

/// `p_hat(x_i) = (m (2π)^{d/2} bw^d)^{-1} Σ_{j ∈ ref} exp(-|x_i - x_j|^2 / (2 bw^2))`.
///
/// The reference set is every point (self term included) unless `reference_subsample`
/// is set, in which case `m` points are drawn without replacement. The floor is applied
/// when `floor_threshold > 0`.
pub fn kde_at_samples(x: &DesignSet, cfg: &KdeConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let n = x.len();
    if n < 2 {
        return Err(Error::Domain(format!("KDE needs at least 2 points, got {n}")));
    }
    let reference: Vec<usize> = match cfg.reference_subsample {
        Some(m) if m < n => {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            let mut idx = sample(&mut rng, n, m).into_vec();
            idx.sort_unstable();
            idx
        }
        _ => (0..n).collect(),
    };
    let m = reference.len() as f64;
    let d = x.dim() as f64;
    let bw = cfg.bandwidth;
    let norm = 1.0 / (m * (2.0 * std::f64::consts::PI).powf(d / 2.0) * bw.powf(d));
    let inv_two_bw2 = 1.0 / (2.0 * bw * bw);
    let mut dens: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let xi = x.row(i);
            let s: f64 = reference
                .iter()
                .map(|&j| (-squared_distance(xi, x.row(j)) * inv_two_bw2).exp())
                .sum();
            norm * s
        })
        .collect();
    if cfg.floor_threshold > 0.0 {
        apply_floor(&mut dens, cfg.floor_threshold);
    }
    Ok(dens)
}

/// `(0.5 h + p) / 1.5` when `p < h`, otherwise `p`. The result is at least `h / 3`.
#[inline]
pub fn floor_adjust(p: f64, h: f64) -> f64 {
    if p < h {
        (0.5 * h + p) / 1.5
    } else {
        p
    }
}

pub fn apply_floor(densities: &mut [f64], h: f64) {
    for p in densities.iter_mut() {
        *p = floor_adjust(*p, h);
    }
}

/// Bandwidth schedule `c * n^{-e}`.
pub fn scheduled_bandwidth(c: f64, e: f64, n: usize) -> f64 {
    c * (n as f64).powf(-e)
}
