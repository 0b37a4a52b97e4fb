//! Analytic approximation of rescaled statistical leverage scores.
//!
//! For a design point with input density `p`, the rescaled leverage `n * l_i` is
//! approximated by the diagonal of the equivalent kernel,
//!
//! ```text
//! K~(x_i, x_i) = ∫_{R^d} ds / (p(x_i) + lambda / m(s)),
//! ```
//!
//! where `m` is the spectral density of the kernel. Isotropy reduces the integral to a
//! radial one. For Matérn kernels dropping the `1` in `(1 + s^2)^alpha` gives a closed
//! form with relative error `O(lambda^{1/alpha})`; for Gaussian kernels the radial integral
//! is exactly a polylogarithm.

mod equivalent;
mod polylog;

pub use equivalent::equivalent_kernel_1d;
pub use polylog::{polylog_neg, polylog_neg_default};

use std::f64::consts::PI;

use rayon::prelude::*;

use crate::design::DesignSet;
use crate::error::{Error, Result};
use crate::kernels::{check_dim, matern_fourier_constant, Convention, KernelFamily, KernelSpec};
use crate::quadrature::{power_law_identity, semi_infinite_quad_from, QuadConfig};

/// How a [`LeverageVector`] was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LeverageMethod {
    Exact,
    SpectralClosedForm,
    SpectralQuadrature,
    Uniform,
}

impl LeverageMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::SpectralClosedForm => "spectral-closed-form",
            Self::SpectralQuadrature => "spectral-quadrature",
            Self::Uniform => "uniform",
        }
    }
}

/// Per-point rescaled leverage values, all positive and finite.
#[derive(Debug, Clone, PartialEq)]
pub struct LeverageVector {
    values: Vec<f64>,
    method: LeverageMethod,
}

impl LeverageVector {
    pub fn new(values: Vec<f64>, method: LeverageMethod) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Domain("leverage vector is empty".into()));
        }
        if let Some((i, v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v > 0.0))
        {
            return Err(Error::Domain(format!(
                "leverage value {v} at index {i} is not positive and finite"
            )));
        }
        Ok(Self { values, method })
    }

    /// All-ones vector, i.e. uniform sampling.
    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0; n], LeverageMethod::Uniform)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn method(&self) -> LeverageMethod {
        self.method
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Discrete sampling distribution over the design points.
#[derive(Debug, Clone, PartialEq)]
pub struct SamplingDistribution {
    q: Vec<f64>,
}

impl SamplingDistribution {
    /// Normalizes strictly positive weights.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Domain("cannot normalize an empty weight vector".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::Domain(format!("sampling weight {w} is not positive")));
        }
        let total = compensated_sum(weights);
        Ok(Self {
            q: weights.iter().map(|w| w / total).collect(),
        })
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("cannot build a distribution over zero points".into()));
        }
        Ok(Self {
            q: vec![1.0 / n as f64; n],
        })
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.q
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }
}

pub(crate) fn compensated_sum(values: &[f64]) -> f64 {
    let mut sum = 0.0f64;
    let mut c = 0.0f64;
    for &v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

/// `q_i = values_i / sum(values)`.
pub fn to_sampling_distribution(lv: &LeverageVector) -> Result<SamplingDistribution> {
    SamplingDistribution::from_weights(lv.values())
}

/// Surface area of the unit sphere in `R^d`, `2 pi^{d/2} / Gamma(d/2)`.
pub fn unit_sphere_area(dim: usize) -> f64 {
    let d = dim as f64;
    2.0 * PI.powf(d / 2.0) / libm::tgamma(d / 2.0)
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(Error::Domain(format!("{name} must be positive and finite, got {v}")));
    }
    Ok(())
}

/// Reference radius at which `lambda / m(r)` reaches `p`; used to seed the radial panels.
fn radial_scale(p: f64, lambda: f64, spec: &KernelSpec) -> f64 {
    let mut lo = 0.0f64;
    let mut hi = 1.0f64;
    let excess = |r: f64| lambda - p * spec.spectral_density(r);
    if excess(0.0) >= 0.0 {
        return 1.0;
    }
    while excess(hi) < 0.0 && hi < 1e150 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if excess(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    hi.max(1e-300)
}

/// `∫_{R^d} ds / (p + lambda / m(s))` through the radial integral
/// `∫_0^∞ S_{d-1}(r) / (p + lambda / m(r)) dr`.
pub fn leverage_integral_quadrature(
    p: f64,
    lambda: f64,
    spec: &KernelSpec,
    cfg: &QuadConfig,
) -> Result<f64> {
    check_positive("density", p)?;
    check_positive("lambda", lambda)?;
    let dim = spec.dim();
    let area = unit_sphere_area(dim);
    let integrand = |r: f64| {
        let m = spec.spectral_density(r);
        // m / (p m + lambda) stays finite when m underflows
        area * r.powi(dim as i32 - 1) * m / (p * m + lambda)
    };
    // panel width a fraction of the knee radius keeps the first panels well resolved
    let width = (radial_scale(p, lambda, spec) / 8.0).max(1e-12);
    semi_infinite_quad_from(integrand, width, cfg)
}

/// Closed-form approximation of the simplified Matérn integral
/// `∫_{R^d} ds / (p + lambda (1 + |s|^2)^alpha)`:
///
/// `S_{d-1} p^{d/(2 alpha) - 1} lambda^{-d/(2 alpha)} (pi/(2 alpha)) / sin(pi d / (2 alpha))`.
pub fn matern_closed_form(p: f64, lambda: f64, alpha: f64, dim: usize) -> Result<f64> {
    check_positive("density", p)?;
    check_positive("lambda", lambda)?;
    if dim == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    let d = dim as f64;
    if !(2.0 * alpha > d) {
        return Err(Error::Domain(format!(
            "Matérn leverage integral diverges unless 2 alpha > d (alpha = {alpha}, d = {dim})"
        )));
    }
    let ratio = d / (2.0 * alpha);
    // ∫_0^∞ x^{d-1}/(p + x^{2 alpha}) dx = p^{ratio - 1} (1/d) (π/a)/sin(π/a) with a = 1/ratio
    let radial = power_law_identity(1.0 / ratio)? / d;
    Ok(unit_sphere_area(dim) * p.powf(ratio - 1.0) * lambda.powf(-ratio) * radial)
}

/// `lambda` and radial rescaling that map a full-constant Matérn integral onto the
/// simplified one: `I_full(p, lambda) = scale * I_simplified(p, lambda_eff)`.
fn matern_full_to_simplified(spec: &KernelSpec, lambda: f64) -> (f64, f64) {
    let KernelFamily::Matern { nu } = spec.family() else {
        unreachable!("only called for Matérn kernels")
    };
    let alpha = spec.alpha().expect("matern has alpha");
    let a = (2.0 * nu.value()).sqrt();
    let c = matern_fourier_constant(nu.value(), spec.dim());
    let lambda_eff = lambda * a.powf(2.0 * alpha) / c;
    let scale = (a / (2.0 * PI)).powi(spec.dim() as i32);
    (lambda_eff, scale)
}

/// Gaussian-kernel leverage integral in closed form, `-Li_{d/2}(-c/lambda) / c`.
///
/// With full constants `c = p (2 pi sigma^2)^{d/2}` and the result equals the `R^d`
/// integral directly. With the simplified density `sigma^d exp(-sigma^2 |s|^2)` one has
/// `c = p sigma^d` and the `R^d` integral carries an extra factor `pi^{d/2}`.
pub fn gaussian_polylog_form(
    p: f64,
    lambda: f64,
    sigma: f64,
    dim: usize,
    convention: Convention,
    cfg: &QuadConfig,
) -> Result<f64> {
    check_positive("density", p)?;
    check_positive("lambda", lambda)?;
    check_positive("sigma", sigma)?;
    if dim == 0 {
        return Err(Error::Domain("dimension must be positive".into()));
    }
    let d = dim as f64;
    let (c, normalization) = match convention {
        Convention::FullConstants => (p * (2.0 * PI * sigma * sigma).powf(d / 2.0), 1.0),
        Convention::Simplified => (p * sigma.powf(d), PI.powf(d / 2.0)),
    };
    let li = polylog_neg(d / 2.0, c / lambda, cfg)?;
    Ok(normalization * (-li) / c)
}

/// `min{1, (lambda/p)^{1 - d/(2 alpha)}}`; requires `2 alpha > d`.
pub fn rule_of_thumb(p: f64, lambda: f64, alpha: f64, dim: usize) -> f64 {
    let exponent = 1.0 - dim as f64 / (2.0 * alpha);
    (lambda / p).powf(exponent).min(1.0)
}

/// Evaluation route for [`approximate_leverages`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IntegrationPath {
    /// Matérn closed form or Gaussian polylogarithm.
    #[default]
    ClosedForm,
    /// Radial adaptive quadrature of the exact integrand.
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LeverageOptions {
    pub path: IntegrationPath,
    /// Matérn closed form only: return the bare `p^{d/(2 alpha) - 1}` factor.
    pub proportional_only: bool,
    pub quad: QuadConfig,
}

/// Rescaled leverage approximation at every design point given its (floored) density.
pub fn approximate_leverages(
    x: &DesignSet,
    densities: &[f64],
    spec: &KernelSpec,
    lambda: f64,
    opts: &LeverageOptions,
) -> Result<LeverageVector> {
    check_dim(spec, x)?;
    if densities.len() != x.len() {
        return Err(Error::Config(format!(
            "{} densities supplied for {} design points",
            densities.len(),
            x.len()
        )));
    }
    check_positive("lambda", lambda)?;
    if let Some(p) = densities.iter().find(|p| !(p.is_finite() && **p > 0.0)) {
        return Err(Error::Domain(format!(
            "density {p} is not positive; apply the density floor first"
        )));
    }
    let dim = spec.dim();
    let values: Vec<f64> = match (opts.path, spec.family()) {
        (IntegrationPath::ClosedForm, KernelFamily::Matern { .. }) => {
            let alpha = spec.alpha().expect("matern has alpha");
            let exponent = dim as f64 / (2.0 * alpha) - 1.0;
            if opts.proportional_only {
                densities.iter().map(|p| p.powf(exponent)).collect()
            } else {
                let (lambda_eff, scale) = match spec.convention() {
                    Convention::Simplified => (lambda, 1.0),
                    Convention::FullConstants => matern_full_to_simplified(spec, lambda),
                };
                // every point shares the factor; only p^{exponent} varies
                let factor = scale * matern_closed_form(1.0, lambda_eff, alpha, dim)?;
                densities.iter().map(|p| factor * p.powf(exponent)).collect()
            }
        }
        (IntegrationPath::ClosedForm, KernelFamily::Gaussian { sigma }) => densities
            .par_iter()
            .map(|&p| gaussian_polylog_form(p, lambda, sigma, dim, spec.convention(), &opts.quad))
            .collect::<Result<_>>()?,
        (IntegrationPath::Quadrature, _) => densities
            .par_iter()
            .map(|&p| leverage_integral_quadrature(p, lambda, spec, &opts.quad))
            .collect::<Result<_>>()?,
    };
    let method = match opts.path {
        IntegrationPath::ClosedForm => LeverageMethod::SpectralClosedForm,
        IntegrationPath::Quadrature => LeverageMethod::SpectralQuadrature,
    };
    LeverageVector::new(values, method)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_2;

    fn cfg() -> QuadConfig {
        QuadConfig::default()
    }

    #[test]
    fn sphere_areas() {
        assert!((unit_sphere_area(1) - 2.0).abs() < 1e-14);
        assert!((unit_sphere_area(2) - 2.0 * PI).abs() < 1e-13);
        assert!((unit_sphere_area(3) - 4.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn matern_alpha_one_arctan_oracle() {
        // d = 1, alpha = 1 is nu = 1/2; ∫_R ds/(p + λ(1+s^2)) = π / sqrt(λ(p+λ))
        let spec = KernelSpec::matern(0.5, 1).unwrap();
        let (p, lambda): (f64, f64) = (1.0, 0.01);
        let v = leverage_integral_quadrature(p, lambda, &spec, &cfg()).unwrap();
        let half_line = FRAC_PI_2 / (lambda * (p + lambda)).sqrt();
        assert!((half_line - 15.630_007_634_061_657).abs() < 1e-9);
        assert!((v - 2.0 * half_line).abs() / v < 1e-8, "{v}");
    }

    #[test]
    fn quadrature_decreases_with_lambda() {
        let spec = KernelSpec::matern(1.5, 2).unwrap();
        let mut last = f64::INFINITY;
        for lambda in [1e-4, 1e-2, 1.0, 1e2, 1e4] {
            let v = leverage_integral_quadrature(1.0, lambda, &spec, &cfg()).unwrap();
            assert!(v < last);
            last = v;
        }
        assert!(last < 1e-3);
    }

    #[test]
    fn closed_form_examples() {
        let spec = KernelSpec::matern(1.5, 1).unwrap(); // alpha = 2
        let lambda = 1e-6;
        let cf = matern_closed_form(1.0, lambda, 2.0, 1).unwrap();
        let q = leverage_integral_quadrature(1.0, lambda, &spec, &cfg()).unwrap();
        assert!((cf - q).abs() / q < 0.01, "{cf} vs {q}");
        let r = matern_closed_form(2.0, 1e-3, 2.0, 1).unwrap() / matern_closed_form(1.0, 1e-3, 2.0, 1).unwrap();
        assert!((r - 2f64.powf(-0.75)).abs() < 1e-14);
        assert!(matches!(matern_closed_form(1.0, 1e-3, 0.5, 1), Err(Error::Domain(_))));
        assert!(matches!(matern_closed_form(1.0, 1e-3, 1.5, 3), Err(Error::Domain(_))));
    }

    #[test]
    fn gaussian_forms() {
        let c = cfg();
        // d = 2: Li_1(-x) = -ln(1 + x)
        let v = gaussian_polylog_form(1.0, 0.1, 1.0, 2, Convention::FullConstants, &c).unwrap();
        let expected = (1.0 + 2.0 * PI / 0.1).ln() / (2.0 * PI);
        assert!((v - expected).abs() / expected < 1e-9);
        for d in 1..=3 {
            let big = gaussian_polylog_form(1.0, 1e8, 0.7, d, Convention::Simplified, &c).unwrap();
            assert!(big < 1e-7);
        }
        let spec = KernelSpec::gaussian(1.0, 1).unwrap();
        for conv in [Convention::Simplified, Convention::FullConstants] {
            let s = spec.with_convention(conv);
            let q = leverage_integral_quadrature(1.0, 0.05, &s, &c).unwrap();
            let g = gaussian_polylog_form(1.0, 0.05, 1.0, 1, conv, &c).unwrap();
            assert!((q - g).abs() / q < 1e-6, "{conv:?}: {q} vs {g}");
        }
    }

    #[test]
    fn rule_of_thumb_examples() {
        assert_eq!(rule_of_thumb(0.5, 1.0, 2.0, 1), 1.0);
        assert_eq!(rule_of_thumb(1.0, 1.0, 2.0, 1), 1.0);
        assert!((rule_of_thumb(1.0, 0.01, 2.0, 1) - 0.031_622_776_601_683_79).abs() < 1e-12);
        assert!(rule_of_thumb(1e12, 0.01, 2.0, 1) < 1e-9);
    }

    #[test]
    fn sampling_distribution_examples() {
        let lv = LeverageVector::new(vec![1.0; 4], LeverageMethod::Uniform).unwrap();
        assert_eq!(to_sampling_distribution(&lv).unwrap().probabilities(), &[0.25; 4]);
        let lv = LeverageVector::new(vec![3.0, 1.0], LeverageMethod::Exact).unwrap();
        assert_eq!(to_sampling_distribution(&lv).unwrap().probabilities(), &[0.75, 0.25]);
        assert!(LeverageVector::new(vec![1.0, 0.0], LeverageMethod::Exact).is_err());
        assert!(LeverageVector::new(vec![], LeverageMethod::Exact).is_err());
        assert!(SamplingDistribution::from_weights(&[1.0, -1.0]).is_err());
    }

    #[test]
    fn approximate_leverages_examples() {
        let spec = KernelSpec::matern(1.5, 1).unwrap();
        let x = DesignSet::from_rows(&[[0.1], [0.4], [0.9]]).unwrap();
        let opts = LeverageOptions::default();
        let lv = approximate_leverages(&x, &[1.0; 3], &spec, 1e-3, &opts).unwrap();
        assert_eq!(lv.method(), LeverageMethod::SpectralClosedForm);
        assert!(lv.values().windows(2).all(|w| w[0] == w[1]));

        let one = DesignSet::from_rows(&[[0.3]]).unwrap();
        assert_eq!(approximate_leverages(&one, &[2.0], &spec, 1e-3, &opts).unwrap().len(), 1);

        let two = DesignSet::from_rows(&[[0.0], [1.0]]).unwrap();
        let lv = approximate_leverages(&two, &[1.0, 2.0], &spec, 1e-3, &opts).unwrap();
        assert!((lv.values()[1] / lv.values()[0] - 2f64.powf(-0.75)).abs() < 1e-14);

        assert!(approximate_leverages(&two, &[1.0], &spec, 1e-3, &opts).is_err());
        assert!(approximate_leverages(&two, &[1.0, 0.0], &spec, 1e-3, &opts).is_err());
    }

    #[test]
    fn full_constant_closed_form_matches_quadrature() {
        let spec = KernelSpec::matern(1.5, 1)
            .unwrap()
            .with_convention(Convention::FullConstants);
        let x = DesignSet::from_rows(&[[0.0], [1.0]]).unwrap();
        let dens = [0.8, 3.0];
        let lambda = 1e-7;
        let cf = approximate_leverages(&x, &dens, &spec, lambda, &LeverageOptions::default()).unwrap();
        let quad_opts = LeverageOptions { path: IntegrationPath::Quadrature, ..Default::default() };
        let q = approximate_leverages(&x, &dens, &spec, lambda, &quad_opts).unwrap();
        assert_eq!(q.method(), LeverageMethod::SpectralQuadrature);
        for (a, b) in cf.values().iter().zip(q.values()) {
            assert!((a - b).abs() / b < 0.01, "{a} vs {b}");
        }
    }
}
