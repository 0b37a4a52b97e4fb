//! Shared fixtures for the benchmarks.

use spectral_leverage::synth::add_noise;
use spectral_leverage::{generate, DesignSet, GeneratorKind, GeneratorSpec};

pub fn uniform_design(n: usize, dim: usize, seed: u64) -> DesignSet {
    generate(&GeneratorSpec { kind: GeneratorKind::Uniform { dim }, n, gamma: 0.5, seed })
        .expect("valid generator")
}

pub fn bimodal_3d(n: usize, seed: u64) -> (DesignSet, Vec<f64>) {
    let x = generate(&GeneratorSpec { kind: GeneratorKind::Bimodal3d, n, gamma: 0.4, seed })
        .expect("valid generator");
    let y = add_noise(x.f_star.as_ref().expect("f_star attached"), 0.5, seed + 1).expect("valid noise");
    (x, y)
}

/// `c * n^(-e)`.
pub fn schedule(c: f64, e: f64, n: usize) -> f64 {
    c * (n as f64).powf(-e)
}
