use crate::design::DesignSet;
use crate::error::{Error, Result};
use crate::kernels::{kernel_matrix, kernel_row, DenseLimits, KernelSpec};
use crate::linalg::{dot, Cholesky};

use super::check_lambda;

/// Exact kernel ridge regression fit, `omega = (K_n + n lambda I)^{-1} Y`.
#[derive(Debug, Clone)]
pub struct KrrModel {
    pub weights: Vec<f64>,
    pub design: DesignSet,
    pub spec: KernelSpec,
    pub lambda: f64,
}

impl KrrModel {
    pub fn predict(&self, x: &[f64]) -> f64 {
        dot(&kernel_row(&self.spec, x, &self.design), &self.weights)
    }

    pub fn predict_in_sample(&self) -> Vec<f64> {
        self.design.rows().map(|xi| self.predict(xi)).collect()
    }
}

pub fn krr_fit(
    x: &DesignSet,
    y: &[f64],
    spec: &KernelSpec,
    lambda: f64,
    limits: DenseLimits,
) -> Result<KrrModel> {
    check_lambda(lambda)?;
    if y.len() != x.len() {
        return Err(Error::Config(format!(
            "{} responses for {} design points",
            y.len(),
            x.len()
        )));
    }
    let mut a = kernel_matrix(spec, x, limits)?;
    a.shift_diagonal(x.len() as f64 * lambda);
    let weights = Cholesky::new(&a)?.solve(y);
    Ok(KrrModel {
        weights,
        design: x.clone(),
        spec: *spec,
        lambda,
    })
}

/// `f_hat(x) = K(x, X_n) omega`.
pub fn krr_predict(model: &KrrModel, x: &[f64]) -> f64 {
    model.predict(x)
}
