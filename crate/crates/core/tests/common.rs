#![allow(dead_code)]

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_leverage::Matrix;

/// Random PSD matrix `B B^T / k` with `k < n` for some cases (rank deficient).
pub fn random_psd(n: usize, seed: u64) -> Matrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = if seed % 3 == 0 { (n / 2).max(1) } else { n + 3 };
    let b: Vec<f64> = (0..n * k).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let s: f64 = (0..k).map(|t| b[i * k + t] * b[j * k + t]).sum();
            out[(i, j)] = s / k as f64;
        }
    }
    // add a small ridge so the diagonal is strictly positive
    out.shift_diagonal(1e-3);
    out
}

pub fn to_nalgebra(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice())
}

/// `l_i = sum_k mu_k / (mu_k + n lambda) u_{ki}^2` from a symmetric eigendecomposition.
pub fn eigen_leverage_oracle(k: &Matrix, lambda: f64) -> Vec<f64> {
    let n = k.rows();
    let eig = nalgebra::SymmetricEigen::new(to_nalgebra(k));
    let shift = n as f64 * lambda;
    (0..n)
        .map(|i| {
            (0..n)
                .map(|c| {
                    let mu = eig.eigenvalues[c].max(0.0);
                    mu / (mu + shift) * eig.eigenvectors[(i, c)].powi(2)
                })
                .sum()
        })
        .collect()
}
