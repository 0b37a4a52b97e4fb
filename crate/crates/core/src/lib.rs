//! Analytic statistical leverage scores for kernel ridge regression with stationary kernels.
//!
//! The leverage of design point `x_i` is approximated from the input density `p(x_i)` and the
//! spectral density `m` of the kernel alone, in `O(n)` time once densities are known:
//!
//! 1. estimate `p(x_i)` ([`density::kde_at_samples`]) and floor small values,
//! 2. evaluate `∫ ds / (p(x_i) + lambda / m(s))` ([`leverage::approximate_leverages`]),
//! 3. normalize into a sampling distribution ([`leverage::to_sampling_distribution`]),
//! 4. draw Nyström landmarks from it ([`exact::nystrom_sample`], [`exact::nystrom_fit`]).
//!
//! The [`exact`] module holds the dense `O(n^3)` ground truth used for verification.

// `!(x > 0.0)` checks also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod density;
pub mod design;
pub mod error;
pub mod exact;
pub mod kernels;
pub mod leverage;
pub mod linalg;
pub mod quadrature;
pub mod synth;

pub use density::{floor_adjust, kde_at_samples, KdeConfig, KdeKernel};
pub use design::DesignSet;
pub use error::{Error, Result};
pub use exact::{
    exact_leverage_for_design, exact_rescaled_leverage, in_sample_risk, krr_fit, krr_predict,
    nystrom_fit, nystrom_predict, nystrom_sample, r_acc, statistical_dimension, KrrModel,
    NystromModel, RaccSummary,
};
pub use kernels::{kernel_matrix, Convention, DenseLimits, KernelFamily, KernelSpec, MaternNu};
pub use leverage::{
    approximate_leverages, equivalent_kernel_1d, gaussian_polylog_form,
    leverage_integral_quadrature, matern_closed_form, polylog_neg, rule_of_thumb,
    to_sampling_distribution, IntegrationPath, LeverageMethod, LeverageOptions, LeverageVector,
    SamplingDistribution,
};
pub use linalg::Matrix;
pub use quadrature::{adaptive_quad, power_law_identity, semi_infinite_quad, QuadConfig};
pub use synth::{generate, GeneratorKind, GeneratorSpec};
