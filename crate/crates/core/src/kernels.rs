//! Stationary isotropic kernels: evaluation, spectral densities and dense Gram matrices.
//!
//! Two normalizations of the spectral density are available. [`Convention::Simplified`]
//! drops every multiplicative constant (Matérn `(1 + s^2)^{-alpha}`, Gaussian
//! `sigma^d exp(-sigma^2 s^2)`); sampling probabilities are normalized downstream, so
//! this is enough for leverage-based sampling. [`Convention::FullConstants`] is the exact
//! Fourier transform of the kernel under `K(x) = ∫ m(s) exp(2πi<s, x>) ds`, so that
//! leverage integrals are on the same absolute scale as `n * l_i`.

use rayon::prelude::*;

use crate::design::{distance, DesignSet};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Supported Matérn smoothness values; each has an elementary closed form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaternNu {
    Half,
    ThreeHalves,
    FiveHalves,
}

impl MaternNu {
    pub fn from_f64(nu: f64) -> Result<Self> {
        if nu == 0.5 {
            Ok(Self::Half)
        } else if nu == 1.5 {
            Ok(Self::ThreeHalves)
        } else if nu == 2.5 {
            Ok(Self::FiveHalves)
        } else {
            Err(Error::Config(format!(
                "unsupported Matérn smoothness nu = {nu}; expected 0.5, 1.5 or 2.5"
            )))
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Self::Half => 0.5,
            Self::ThreeHalves => 1.5,
            Self::FiveHalves => 2.5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum KernelFamily {
    Matern { nu: MaternNu },
    Gaussian { sigma: f64 },
}

/// Normalization of [`KernelSpec::spectral_density`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    #[default]
    Simplified,
    FullConstants,
}

/// An isotropic stationary kernel on `R^dim`. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelSpec {
    family: KernelFamily,
    dim: usize,
    convention: Convention,
}

impl KernelSpec {
    pub fn matern(nu: f64, dim: usize) -> Result<Self> {
        let nu = MaternNu::from_f64(nu)?;
        Self::new(KernelFamily::Matern { nu }, dim)
    }

    pub fn gaussian(sigma: f64, dim: usize) -> Result<Self> {
        Self::new(KernelFamily::Gaussian { sigma }, dim)
    }

    pub fn new(family: KernelFamily, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Config("kernel dimension must be positive".into()));
        }
        if let KernelFamily::Gaussian { sigma } = family {
            if !(sigma > 0.0 && sigma.is_finite()) {
                return Err(Error::Config(format!(
                    "Gaussian bandwidth must be positive and finite, got {sigma}"
                )));
            }
        }
        Ok(Self {
            family,
            dim,
            convention: Convention::Simplified,
        })
    }

    pub fn with_convention(mut self, convention: Convention) -> Self {
        self.convention = convention;
        self
    }

    pub fn family(&self) -> KernelFamily {
        self.family
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    /// Sobolev smoothness `alpha = nu + d/2` of a Matérn kernel; `None` for the Gaussian.
    pub fn alpha(&self) -> Option<f64> {
        match self.family {
            KernelFamily::Matern { nu } => Some(nu.value() + self.dim as f64 / 2.0),
            KernelFamily::Gaussian { .. } => None,
        }
    }

    /// Matérn inverse length scale `a = sqrt(2 nu)`.
    pub fn matern_scale(&self) -> Option<f64> {
        match self.family {
            KernelFamily::Matern { nu } => Some((2.0 * nu.value()).sqrt()),
            KernelFamily::Gaussian { .. } => None,
        }
    }

    /// Length scale of the equivalent kernel: `lambda^{1/(2 alpha)}` for Matérn, `sigma` for Gaussian.
    pub fn effective_bandwidth(&self, lambda: f64) -> f64 {
        match self.family {
            KernelFamily::Matern { .. } => {
                lambda.powf(1.0 / (2.0 * self.alpha().expect("matern has alpha")))
            }
            KernelFamily::Gaussian { sigma } => sigma,
        }
    }

    /// `K(r)` at Euclidean distance `r >= 0`; equals 1 at the origin.
    pub fn kernel_eval(&self, r: f64) -> f64 {
        debug_assert!(r >= 0.0, "negative distance {r}");
        match self.family {
            KernelFamily::Matern { nu } => {
                let ar = (2.0 * nu.value()).sqrt() * r;
                match nu {
                    MaternNu::Half => (-ar).exp(),
                    MaternNu::ThreeHalves => (1.0 + ar) * (-ar).exp(),
                    MaternNu::FiveHalves => (1.0 + ar + ar * ar / 3.0) * (-ar).exp(),
                }
            }
            KernelFamily::Gaussian { sigma } => (-r * r / (2.0 * sigma * sigma)).exp(),
        }
    }

    /// Spectral density at frequency radius `s = ||s||`.
    pub fn spectral_density(&self, s: f64) -> f64 {
        let d = self.dim as f64;
        let s2 = s * s;
        match (self.family, self.convention) {
            (KernelFamily::Matern { .. }, Convention::Simplified) => {
                (1.0 + s2).powf(-self.alpha().expect("matern has alpha"))
            }
            (KernelFamily::Matern { nu }, Convention::FullConstants) => {
                let alpha = self.alpha().expect("matern has alpha");
                let a2 = 2.0 * nu.value();
                matern_fourier_constant(nu.value(), self.dim)
                    * (a2 + 4.0 * std::f64::consts::PI.powi(2) * s2).powf(-alpha)
            }
            (KernelFamily::Gaussian { sigma }, Convention::Simplified) => {
                sigma.powf(d) * (-(sigma * sigma) * s2).exp()
            }
            (KernelFamily::Gaussian { sigma }, Convention::FullConstants) => {
                use std::f64::consts::PI;
                (2.0 * PI * sigma * sigma).powf(d / 2.0) * (-2.0 * PI * PI * sigma * sigma * s2).exp()
            }
        }
    }
}

/// `2^d pi^{d/2} Gamma(nu + d/2) (2 nu)^nu / Gamma(nu)`, the Matérn spectral prefactor
/// for unit length scale in ordinary-frequency convention.
pub(crate) fn matern_fourier_constant(nu: f64, dim: usize) -> f64 {
    use std::f64::consts::PI;
    let d = dim as f64;
    2f64.powf(d) * PI.powf(d / 2.0) * libm::tgamma(nu + d / 2.0) * (2.0 * nu).powf(nu)
        / libm::tgamma(nu)
}

/// Upper bound on the number of rows of a dense `n x n` matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DenseLimits {
    pub max_n: usize,
}

impl Default for DenseLimits {
    fn default() -> Self {
        Self { max_n: 20_000 }
    }
}

impl DenseLimits {
    pub fn check(&self, n: usize) -> Result<()> {
        if n > self.max_n {
            return Err(Error::Capacity {
                n,
                limit: self.max_n,
                bytes: (n as u128) * (n as u128) * 8,
            });
        }
        Ok(())
    }
}

/// Dense kernel matrix `K(X, X)`. Built from the upper triangle and mirrored, so it is
/// exactly symmetric.
pub fn kernel_matrix(spec: &KernelSpec, x: &DesignSet, limits: DenseLimits) -> Result<Matrix> {
    check_dim(spec, x)?;
    let n = x.len();
    limits.check(n)?;
    let mut k = Matrix::zeros(n, n);
    k.as_mut_slice()
        .par_chunks_mut(n)
        .enumerate()
        .for_each(|(i, row)| {
            let xi = x.row(i);
            row[i] = 1.0;
            for (j, slot) in row.iter_mut().enumerate().skip(i + 1) {
                *slot = spec.kernel_eval(distance(xi, x.row(j)));
            }
        });
    for i in 0..n {
        for j in 0..i {
            k[(i, j)] = k[(j, i)];
        }
    }
    Ok(k)
}

/// Rectangular kernel matrix `K(X, Z)` with one row per point of `x`.
pub fn cross_kernel_matrix(spec: &KernelSpec, x: &DesignSet, z: &DesignSet) -> Result<Matrix> {
    check_dim(spec, x)?;
    check_dim(spec, z)?;
    let m = z.len();
    let mut c = Matrix::zeros(x.len(), m);
    c.as_mut_slice()
        .par_chunks_mut(m)
        .enumerate()
        .for_each(|(i, row)| {
            let xi = x.row(i);
            for (j, v) in row.iter_mut().enumerate() {
                *v = spec.kernel_eval(distance(xi, z.row(j)));
            }
        });
    Ok(c)
}

/// `K(x, Z)` for a single query point.
pub fn kernel_row(spec: &KernelSpec, x: &[f64], z: &DesignSet) -> Vec<f64> {
    z.rows().map(|zj| spec.kernel_eval(distance(x, zj))).collect()
}

pub(crate) fn check_dim(spec: &KernelSpec, x: &DesignSet) -> Result<()> {
    if spec.dim() != x.dim() {
        return Err(Error::Config(format!(
            "kernel is defined on R^{} but the design has dimension {}",
            spec.dim(),
            x.dim()
        )));
    }
    Ok(())
}
