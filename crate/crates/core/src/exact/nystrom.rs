use crate::design::DesignSet;
use crate::error::{Error, Result};
use crate::kernels::{cross_kernel_matrix, kernel_matrix, kernel_row, DenseLimits, KernelSpec};
use crate::linalg::{dot, Cholesky};

use super::check_lambda;

/// Jitter added to the landmark Gram block; absorbs duplicate landmarks.
pub const LANDMARK_JITTER: f64 = 1e-10;

/// KRR with `K_n` replaced by its Nyström approximation on the sampled landmarks.
#[derive(Debug, Clone)]
pub struct NystromModel {
    pub landmark_indices: Vec<usize>,
    pub landmarks: DesignSet,
    pub weights: Vec<f64>,
    pub spec: KernelSpec,
    pub lambda: f64,
}

impl NystromModel {
    pub fn predict(&self, x: &[f64]) -> f64 {
        dot(&kernel_row(&self.spec, x, &self.landmarks), &self.weights)
    }

    pub fn predict_many(&self, x: &DesignSet) -> Vec<f64> {
        x.rows().map(|xi| self.predict(xi)).collect()
    }
}

/// Solves `(C^T C + n lambda (W + eps I)) beta = C^T Y` with `C = K(X, X_m)` and
/// `W = K(X_m, X_m)`; the `n x n` Nyström matrix is never formed.
pub fn nystrom_fit(
    x: &DesignSet,
    y: &[f64],
    spec: &KernelSpec,
    lambda: f64,
    landmark_indices: &[usize],
) -> Result<NystromModel> {
    check_lambda(lambda)?;
    if y.len() != x.len() {
        return Err(Error::Config(format!(
            "{} responses for {} design points",
            y.len(),
            x.len()
        )));
    }
    if landmark_indices.is_empty() {
        return Err(Error::Config("at least one landmark is required".into()));
    }
    let landmarks = x.select(landmark_indices)?;
    let c = cross_kernel_matrix(spec, x, &landmarks)?;
    let w = kernel_matrix(
        spec,
        &landmarks,
        DenseLimits {
            max_n: landmark_indices.len(),
        },
    )?;
    let n_lambda = x.len() as f64 * lambda;
    let mut system = c.gram();
    for (s, wv) in system.as_mut_slice().iter_mut().zip(w.as_slice()) {
        *s += n_lambda * wv;
    }
    system.shift_diagonal(n_lambda * LANDMARK_JITTER);
    let rhs = c.tr_mul_vec(y);
    let chol = Cholesky::new(&system).map_err(|e| {
        Error::LinAlg(format!("reduced Nyström system is singular after jitter: {e}"))
    })?;
    Ok(NystromModel {
        landmark_indices: landmark_indices.to_vec(),
        landmarks,
        weights: chol.solve(&rhs),
        spec: *spec,
        lambda,
    })
}

pub fn nystrom_predict(model: &NystromModel, x: &[f64]) -> f64 {
    model.predict(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize) -> DesignSet {
        let rows: Vec<[f64; 1]> = (0..n).map(|i| [i as f64 / n as f64]).collect();
        DesignSet::from_rows(&rows).unwrap()
    }

    #[test]
    fn single_landmark_is_rank_one() {
        let spec = KernelSpec::matern(1.5, 1).unwrap();
        let x = grid(20);
        let y: Vec<f64> = (0..20).map(|i| (i as f64 * 0.3).cos()).collect();
        let m = nystrom_fit(&x, &y, &spec, 1e-3, &[7]).unwrap();
        assert_eq!(m.weights.len(), 1);
        for q in [0.05, 0.5, 2.0] {
            let expected = m.weights[0] * spec.kernel_eval((q - x.row(7)[0]).abs());
            assert!((m.predict(&[q]) - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let spec = KernelSpec::matern(1.5, 1).unwrap();
        let x = grid(5);
        let y = vec![0.0; 5];
        assert!(nystrom_fit(&x, &y, &spec, 1e-3, &[]).is_err());
        assert!(nystrom_fit(&x, &y, &spec, 1e-3, &[5]).is_err());
        assert!(nystrom_fit(&x, &y[..4], &spec, 1e-3, &[0]).is_err());
    }
}
