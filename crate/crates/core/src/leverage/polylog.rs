use crate::error::{Error, Result};
use crate::quadrature::{semi_infinite_quad_from, QuadConfig};

/// `Li_s(-x)` for `s > 0`, `x > 0`, via the Fermi–Dirac integral
/// `Li_s(-x) = -(1/Γ(s)) ∫_0^∞ t^{s-1} / (e^t / x + 1) dt`.
///
/// The substitution `t = u^2` removes the endpoint singularity for `s >= 1/2`.
pub fn polylog_neg(s: f64, x: f64, cfg: &QuadConfig) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(Error::Domain(format!("polylog order must be positive, got {s}")));
    }
    if !(x > 0.0 && x.is_finite()) {
        return Err(Error::Domain(format!("polylog argument -x needs x > 0, got {x}")));
    }
    let ln_x = x.ln();
    let integrand = |u: f64| {
        let z = u * u - ln_x;
        let fermi = if z > 0.0 {
            let e = (-z).exp();
            e / (1.0 + e)
        } else {
            1.0 / (z.exp() + 1.0)
        };
        2.0 * u.powf(2.0 * s - 1.0) * fermi
    };
    // start the panels near the Fermi edge u = sqrt(ln x) so they resolve it
    let width = if ln_x > 1.0 { ln_x.sqrt() } else { 1.0 };
    let integral = semi_infinite_quad_from(integrand, width, cfg)?;
    let value = -integral / libm::tgamma(s);
    debug_assert!(value < 0.0);
    Ok(value)
}

/// Convenience wrapper with the default quadrature configuration.
pub fn polylog_neg_default(s: f64, x: f64) -> Result<f64> {
    polylog_neg(s, x, &QuadConfig::default())
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Euler-transformed alternating series `sum_{k>=1} (-1)^k k^{-s} = Li_s(-1)`.
    fn alternating_series_oracle(s: f64) -> f64 {
        // repeated averaging of partial sums (Euler transform of an alternating series)
        let terms = 60;
        let mut partial = Vec::with_capacity(terms);
        let mut acc = 0.0;
        for k in 1..=terms {
            acc += (-1f64).powi(k as i32) / (k as f64).powf(s);
            partial.push(acc);
        }
        while partial.len() > 1 {
            partial = partial.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
        }
        partial[0]
    }

    #[test]
    fn order_one_is_log() {
        let v = polylog_neg_default(1.0, 1.0).unwrap();
        assert!((v + std::f64::consts::LN_2).abs() < 1e-9);
        for x in [1e-3, 0.5, 7.0, 1e4, 1e9] {
            let v = polylog_neg_default(1.0, x).unwrap();
            let expected = -(x.ln_1p());
            assert!((v - expected).abs() <= 1e-8 * expected.abs(), "x = {x}");
        }
    }

    #[test]
    fn small_argument_series() {
        let v = polylog_neg_default(2.0, 1e-6).unwrap();
        assert!((v + 1e-6).abs() <= 1e-9);
    }

    #[test]
    fn half_order_matches_series_oracle() {
        let v = polylog_neg_default(0.5, 1.0).unwrap();
        let oracle = alternating_series_oracle(0.5);
        assert!((oracle + 0.604_898_643_421_630_4).abs() < 1e-9, "oracle {oracle}");
        assert!((v - oracle).abs() < 1e-6, "{v} vs {oracle}");
        let v = polylog_neg_default(1.5, 1.0).unwrap();
        assert!((v - alternating_series_oracle(1.5)).abs() < 1e-6);
    }

    #[test]
    fn domain_errors() {
        assert!(polylog_neg_default(0.0, 1.0).is_err());
        assert!(polylog_neg_default(1.0, 0.0).is_err());
        assert!(polylog_neg_default(1.0, -2.0).is_err());
    }
}
