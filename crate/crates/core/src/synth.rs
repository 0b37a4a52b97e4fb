//! Synthetic designs and target functions for the benchmark experiments.
//!
//! The bimodal mixtures put weight `n / (n + n^gamma)` on a uniform block and
//! `n^gamma / (n + n^gamma)` on a small triangular block, so the minor mode shrinks
//! relative to the sample size.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, Normal};

use crate::design::DesignSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorKind {
    /// `Unif[0,1]^dim`.
    Uniform { dim: usize },
    /// `Beta(15, 2)` on `[0, 1]`.
    Beta15_2,
    /// `Unif[0, 0.5]` mixed with density `4 (3 - 2x)` on `[1, 1.5]`.
    Bimodal1d,
    /// `Unif[0,1]^3` mixed with density `prod_j 4 (5 - 2 x_j)` on `[2, 2.5]^3`.
    Bimodal3d,
}

impl GeneratorKind {
    pub fn dim(&self) -> usize {
        match *self {
            Self::Uniform { dim } => dim,
            Self::Beta15_2 | Self::Bimodal1d => 1,
            Self::Bimodal3d => 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    /// Mixing exponent of the bimodal generators.
    pub gamma: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::Config("generator needs n >= 1".into()));
        }
        if !(self.gamma > 0.0 && self.gamma < 1.0) {
            return Err(Error::Config(format!("gamma must lie in (0, 1), got {}", self.gamma)));
        }
        if self.kind.dim() == 0 {
            return Err(Error::Config("uniform generator needs dim >= 1".into()));
        }
        Ok(())
    }

    /// Probability of the minor mode, `n^gamma / (n + n^gamma)`.
    pub fn minor_weight(&self) -> f64 {
        let n = self.n as f64;
        let ng = n.powf(self.gamma);
        ng / (n + ng)
    }

    /// Closed-form density of the generating distribution.
    pub fn density(&self, x: &[f64]) -> f64 {
        let inside = |v: f64, lo: f64, hi: f64| (lo..=hi).contains(&v);
        match self.kind {
            GeneratorKind::Uniform { .. } => {
                if x.iter().all(|&v| inside(v, 0.0, 1.0)) {
                    1.0
                } else {
                    0.0
                }
            }
            GeneratorKind::Beta15_2 => {
                let v = x[0];
                if inside(v, 0.0, 1.0) {
                    // 1 / B(15, 2) = 240
                    240.0 * v.powi(14) * (1.0 - v)
                } else {
                    0.0
                }
            }
            GeneratorKind::Bimodal1d => {
                let w = self.minor_weight();
                let v = x[0];
                if inside(v, 0.0, 0.5) {
                    (1.0 - w) * 2.0
                } else if inside(v, 1.0, 1.5) {
                    w * 4.0 * (3.0 - 2.0 * v)
                } else {
                    0.0
                }
            }
            GeneratorKind::Bimodal3d => {
                let w = self.minor_weight();
                if x.iter().all(|&v| inside(v, 0.0, 1.0)) {
                    1.0 - w
                } else if x.iter().all(|&v| inside(v, 2.0, 2.5)) {
                    w * x.iter().map(|&v| 4.0 * (5.0 - 2.0 * v)).product::<f64>()
                } else {
                    0.0
                }
            }
        }
    }
}

/// Inverse CDF of the density `4 (3 - 2x)` on `[1, 1.5]`.
fn triangular_minor(u: f64) -> f64 {
    0.5 * (3.0 - (1.0 - u).sqrt())
}

/// Draws the design with its true density and `f*` attached (responses are left empty).
pub fn generate(spec: &GeneratorSpec) -> Result<DesignSet> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let dim = spec.kind.dim();
    let mut points = Vec::with_capacity(spec.n * dim);
    let minor = spec.minor_weight();
    match spec.kind {
        GeneratorKind::Uniform { .. } => {
            points.extend((0..spec.n * dim).map(|_| rng.gen::<f64>()));
        }
        GeneratorKind::Beta15_2 => {
            let a = Gamma::new(15.0, 1.0).expect("valid shape");
            let b = Gamma::new(2.0, 1.0).expect("valid shape");
            for _ in 0..spec.n {
                let ga: f64 = a.sample(&mut rng);
                let gb: f64 = b.sample(&mut rng);
                points.push(ga / (ga + gb));
            }
        }
        GeneratorKind::Bimodal1d => {
            for _ in 0..spec.n {
                if rng.gen::<f64>() < minor {
                    points.push(triangular_minor(rng.gen()));
                } else {
                    points.push(0.5 * rng.gen::<f64>());
                }
            }
        }
        GeneratorKind::Bimodal3d => {
            for _ in 0..spec.n {
                if rng.gen::<f64>() < minor {
                    for _ in 0..3 {
                        points.push(triangular_minor(rng.gen()) + 1.0);
                    }
                } else {
                    for _ in 0..3 {
                        points.push(rng.gen::<f64>());
                    }
                }
            }
        }
    }
    let design = DesignSet::new(dim, points)?;
    let density: Vec<f64> = design.rows().map(|x| spec.density(x)).collect();
    let f_star: Vec<f64> = design.rows().map(target_f_star).collect();
    design.with_density(density)?.with_f_star(f_star)
}

/// `g(x) = 1.6 |(x - 0.4)(x - 0.6)| - x (x - 1)(x - 2) - 0.5`.
pub fn target_g(x: f64) -> f64 {
    1.6 * ((x - 0.4) * (x - 0.6)).abs() - x * (x - 1.0) * (x - 2.0) - 0.5
}

/// `f*(x) = g(|x|_2 / d)`.
pub fn target_f_star(x: &[f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    target_g(norm / x.len() as f64)
}

/// `values + N(0, sigma^2)` noise from a seeded stream.
pub fn add_noise(values: &[f64], sigma: f64, seed: u64) -> Result<Vec<f64>> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::Config(format!("noise level must be nonnegative, got {sigma}")));
    }
    let normal = Normal::new(0.0, sigma)
        .map_err(|e| Error::Config(format!("invalid noise level {sigma}: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(values.iter().map(|v| v + normal.sample(&mut rng)).collect())
}
