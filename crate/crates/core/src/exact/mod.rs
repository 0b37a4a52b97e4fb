//! Dense ground truth: exact leverage scores, statistical dimension, exact and Nyström KRR.

mod krr;
mod metrics;
mod nystrom;
mod sampling;

pub use krr::{krr_fit, krr_predict, KrrModel};
pub use metrics::{in_sample_risk, r_acc, RaccSummary};
pub use nystrom::{nystrom_fit, nystrom_predict, NystromModel, LANDMARK_JITTER};
pub use sampling::nystrom_sample;

use crate::design::DesignSet;
use crate::error::{Error, Result};
use crate::kernels::{kernel_matrix, DenseLimits, KernelSpec};
use crate::leverage::{LeverageMethod, LeverageVector};
use crate::linalg::{Cholesky, Matrix};

fn check_lambda(lambda: f64) -> Result<()> {
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::Domain(format!("lambda must be positive and finite, got {lambda}")));
    }
    Ok(())
}

/// Per-point leverage `l_i = [K (K + n lambda I)^{-1}]_{ii}`, each in `(0, 1)`.
///
/// Uses `K (K + n lambda I)^{-1} = I - n lambda (K + n lambda I)^{-1}` and the diagonal of
/// the inverse from the Cholesky factor.
pub fn exact_leverage_scores(k: &Matrix, lambda: f64) -> Result<Vec<f64>> {
    check_lambda(lambda)?;
    if !k.is_square() || k.rows() == 0 {
        return Err(Error::LinAlg(format!(
            "kernel matrix must be square and nonempty, got {}x{}",
            k.rows(),
            k.cols()
        )));
    }
    let n = k.rows();
    let shift = n as f64 * lambda;
    let mut a = k.clone();
    a.shift_diagonal(shift);
    let chol = Cholesky::new(&a)?;
    Ok(chol
        .inverse_diagonal()
        .into_iter()
        .map(|inv| 1.0 - shift * inv)
        .collect())
}

/// Rescaled leverage `G_lambda(x_i, x_i) = n l_i`, tagged [`LeverageMethod::Exact`].
pub fn exact_rescaled_leverage(k: &Matrix, lambda: f64) -> Result<LeverageVector> {
    let n = k.rows() as f64;
    let scores = exact_leverage_scores(k, lambda)?;
    LeverageVector::new(scores.into_iter().map(|l| n * l).collect(), LeverageMethod::Exact)
        .map_err(|e| Error::LinAlg(format!("exact leverage lost positivity: {e}")))
}

/// `Tr(K (K + n lambda I)^{-1}) = Σ l_i`.
pub fn statistical_dimension(k: &Matrix, lambda: f64) -> Result<f64> {
    Ok(exact_leverage_scores(k, lambda)?.iter().sum())
}

/// Builds `K(X, X)` under the dense cap and returns the exact rescaled leverages.
pub fn exact_leverage_for_design(
    spec: &KernelSpec,
    x: &DesignSet,
    lambda: f64,
    limits: DenseLimits,
) -> Result<LeverageVector> {
    let k = kernel_matrix(spec, x, limits)?;
    exact_rescaled_leverage(&k, lambda)
}
