use thiserror::Error;

/// Errors produced by the numeric routines in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Invalid or unsupported configuration (unsupported smoothness, bad bandwidth, ...).
    #[error("configuration error: {0}")]
    Config(String),

    /// Argument outside the domain where the quantity is defined or finite.
    #[error("domain error: {0}")]
    Domain(String),

    /// A dense computation was refused because the problem is too large.
    #[error("capacity error: n = {n} exceeds the dense limit of {limit} ({bytes} bytes required)")]
    Capacity { n: usize, limit: usize, bytes: u128 },

    /// Adaptive quadrature ran out of subdivisions before meeting its tolerance.
    #[error("quadrature failed to converge: estimate {estimate:e}, error bound {error:e}")]
    Quadrature { estimate: f64, error: f64 },

    /// A semi-infinite integral does not appear to converge.
    #[error("integral appears to diverge after {panels} panels (partial sum {partial:e})")]
    Divergence { panels: usize, partial: f64 },

    /// Factorization or solve failure in the dense linear algebra.
    #[error("linear algebra error: {0}")]
    LinAlg(String),
}

pub type Result<T> = std::result::Result<T, Error>;
