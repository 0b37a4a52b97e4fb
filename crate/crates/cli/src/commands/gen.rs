use serde::Serialize;
use spectral_leverage::synth::add_noise;
use spectral_leverage::{generate, DesignSet, GeneratorSpec};

use crate::config::{stream_seed, GeneratorArg};
use crate::error::CliResult;

use super::NOISE_STREAM;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GenConfig {
    pub generator: GeneratorArg,
    /// Only used by the uniform generator.
    pub dim: usize,
    pub n: usize,
    /// Defaults to the generator's experiment setting.
    pub gamma: Option<f64>,
    pub seed: u64,
    /// Standard deviation of the Gaussian noise on `y`; `None` leaves `y` out.
    pub noise: Option<f64>,
}

impl GenConfig {
    pub fn spec(&self) -> GeneratorSpec {
        GeneratorSpec {
            kind: self.generator.kind(self.dim),
            n: self.n,
            gamma: self.gamma.unwrap_or_else(|| self.generator.default_gamma()),
            seed: self.seed,
        }
    }
}

/// Draws the dataset with its true density, `f*` and (optionally) noisy responses.
pub fn cmd_gen(cfg: &GenConfig) -> CliResult<DesignSet> {
    let design = generate(&cfg.spec())?;
    match cfg.noise {
        Some(sigma) => {
            let f = design.f_star.clone().expect("generator attaches f_star");
            let y = add_noise(&f, sigma, stream_seed(cfg.seed, NOISE_STREAM))?;
            Ok(design.with_responses(y)?)
        }
        None => Ok(design),
    }
}
