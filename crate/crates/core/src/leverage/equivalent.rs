use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::kernels::KernelSpec;
use crate::quadrature::{adaptive_quad, QuadConfig};

use super::leverage_integral_quadrature;

const MAX_HALF_PERIODS: usize = 200_000;
/// Partial sums fed to the averaging (Euler) acceleration.
const ACCEL_WINDOW: usize = 16;

/// One-dimensional equivalent kernel
/// `K~(x, t) = 2 ∫_0^∞ cos(2π s (x - t)) / (p_t + lambda / m(s)) ds`.
///
/// The oscillatory integral is split at the zeros of the cosine; the resulting alternating
/// series of panel integrals is summed with repeated averaging of partial sums.
pub fn equivalent_kernel_1d(
    x: f64,
    t: f64,
    p_t: f64,
    lambda: f64,
    spec: &KernelSpec,
    cfg: &QuadConfig,
) -> Result<f64> {
    if spec.dim() != 1 {
        return Err(Error::Config(format!(
            "the equivalent-kernel curve is implemented for d = 1 only, got d = {}",
            spec.dim()
        )));
    }
    let diag = leverage_integral_quadrature(p_t, lambda, spec, cfg)?;
    let delta = (x - t).abs();
    if delta == 0.0 {
        return Ok(diag);
    }
    // ∫_0^∞ f(s) ds = diag / 2 bounds every panel; use it as the absolute scale
    let scale = 0.5 * diag;
    let tol = cfg.rel_tol * scale;
    let f = |s: f64| {
        let m = spec.spectral_density(s);
        m / (p_t * m + lambda)
    };
    let omega = 2.0 * PI * delta;
    let g = |s: f64| (omega * s).cos() * f(s);
    let panel_cfg = QuadConfig {
        abs_tol: cfg.abs_tol.max(1e-3 * tol),
        ..*cfg
    };

    // [0, first zero] in geometric sub-panels so a narrow peak at the origin is resolved
    let first_zero = 0.25 / delta;
    let mut head = 0.0;
    let mut lo = 0.0;
    let mut hi = first_zero.min(1e-3 * first_zero.max(1.0));
    loop {
        let hi_c = hi.min(first_zero);
        let c = adaptive_quad(g, lo, hi_c, &panel_cfg)?;
        head += c;
        if hi_c >= first_zero {
            break;
        }
        if f(hi_c) * (first_zero - hi_c) <= 1e-3 * tol {
            return Ok(2.0 * head);
        }
        lo = hi_c;
        hi = hi_c * 2.0;
    }

    let half_period = 0.5 / delta;
    let mut partial = Vec::with_capacity(ACCEL_WINDOW);
    let mut sum = head;
    let mut last_accel: Option<f64> = None;
    for k in 0..MAX_HALF_PERIODS {
        let a = first_zero + k as f64 * half_period;
        let b = a + half_period;
        let c = adaptive_quad(g, a, b, &panel_cfg)?;
        sum += c;
        if c.abs() <= 1e-3 * tol {
            return Ok(2.0 * sum);
        }
        if partial.len() == ACCEL_WINDOW {
            partial.remove(0);
        }
        partial.push(sum);
        if partial.len() == ACCEL_WINDOW {
            let accel = averaged(&partial);
            if let Some(prev) = last_accel {
                if (accel - prev).abs() <= 1e-2 * tol {
                    return Ok(2.0 * accel);
                }
            }
            last_accel = Some(accel);
        }
    }
    Err(Error::Quadrature {
        estimate: 2.0 * last_accel.unwrap_or(sum),
        error: f64::NAN,
    })
}

fn averaged(partial: &[f64]) -> f64 {
    let mut level = partial.to_vec();
    while level.len() > 1 {
        for i in 0..level.len() - 1 {
            level[i] = 0.5 * (level[i] + level[i + 1]);
        }
        level.pop();
    }
    level[0]
}
