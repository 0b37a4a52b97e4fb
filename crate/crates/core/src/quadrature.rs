//! Univariate adaptive quadrature (Gauss–Kronrod 7/15) with geometric tail panels.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    /// Maximum bisection depth of any subinterval.
    pub max_depth: u32,
    /// A semi-infinite integral stops once a panel adds less than this fraction of the total.
    pub tail_cutoff_ratio: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-8,
            abs_tol: 1e-12,
            max_depth: 50,
            tail_cutoff_ratio: 1e-12,
        }
    }
}

impl QuadConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.abs_tol > 0.0) {
            return Err(Error::Config("quadrature tolerances must be positive".into()));
        }
        if self.max_depth == 0 {
            return Err(Error::Config("quadrature max_depth must be at least 1".into()));
        }
        if !(self.tail_cutoff_ratio > 0.0) {
            return Err(Error::Config("tail_cutoff_ratio must be positive".into()));
        }
        Ok(())
    }
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_41,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One 15-point Kronrod estimate with the QUADPACK error heuristic.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    res_abs *= half.abs();
    res_asc *= half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (value, err)
}

/// Globally adaptive integral of `f` over `[a, b]`.
///
/// Bisects the subinterval with the largest error estimate until the summed estimate is
/// below `max(abs_tol, rel_tol * |result|)`. Fails with [`Error::Quadrature`] if the worst
/// subinterval would exceed `max_depth` bisections.
pub fn adaptive_quad<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<f64> {
    if !(a < b) {
        return Err(Error::Domain(format!("integration bounds must satisfy a < b, got [{a}, {b}]")));
    }
    let (value, error) = gk15(&f, a, b);
    if !value.is_finite() {
        return Err(Error::Domain(format!("integrand is not finite on [{a}, {b}]")));
    }
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error, depth: 0 });
    let mut total = value;
    let mut total_err = error;
    loop {
        if total_err <= cfg.abs_tol.max(cfg.rel_tol * total.abs()) {
            return Ok(total);
        }
        let worst = heap.pop().expect("heap is never empty");
        if worst.depth >= cfg.max_depth {
            return Err(Error::Quadrature { estimate: total, error: total_err });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(&f, worst.a, mid);
        let (v2, e2) = gk15(&f, mid, worst.b);
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(Error::Domain(format!(
                "integrand is not finite on [{}, {}]",
                worst.a, worst.b
            )));
        }
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        let depth = worst.depth + 1;
        heap.push(Segment { a: worst.a, b: mid, value: v1, error: e1, depth });
        heap.push(Segment { a: mid, b: worst.b, value: v2, error: e2, depth });
        // keep the running error honest against cancellation drift
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|s| s.value).sum();
            total_err = heap.iter().map(|s| s.error).sum();
        }
    }
}

/// Panels after which a non-shrinking sequence of contributions is reported as divergent.
const DIVERGENCE_PANELS: usize = 60;
/// Hard cap on the number of doubling panels.
const MAX_PANELS: usize = 400;

/// `∫_0^∞ f` over panels `[0,1], [1,2], [2,4], ...`.
pub fn semi_infinite_quad<F: Fn(f64) -> f64>(f: F, cfg: &QuadConfig) -> Result<f64> {
    semi_infinite_quad_from(f, 1.0, cfg)
}

/// `∫_0^∞ f` over panels `[0,w], [w,2w], [2w,4w], ...`.
///
/// Stops when a panel adds less than `tail_cutoff_ratio` of the running total. Once the
/// panel contributions decay with a stable geometric ratio (algebraic tails), the remaining
/// tail is extrapolated and added as soon as it falls below `rel_tol` of the total.
pub fn semi_infinite_quad_from<F: Fn(f64) -> f64>(
    f: F,
    first_width: f64,
    cfg: &QuadConfig,
) -> Result<f64> {
    if !(first_width > 0.0 && first_width.is_finite()) {
        return Err(Error::Config(format!("first panel width must be positive, got {first_width}")));
    }
    let mut total = 0.0;
    let mut lo = 0.0;
    let mut hi = first_width;
    let mut prev: Option<f64> = None;
    let mut prev_ratio: Option<f64> = None;
    for panel in 0..MAX_PANELS {
        let c = adaptive_quad(&f, lo, hi, cfg)?;
        total += c;
        if panel > 0 && c.abs() <= cfg.tail_cutoff_ratio * total.abs() {
            return Ok(total);
        }
        if total == 0.0 && panel >= DIVERGENCE_PANELS {
            // identically zero integrand far beyond any plausible scale
            return Ok(0.0);
        }
        if let Some(p) = prev {
            if p != 0.0 {
                let ratio = c / p;
                if let Some(pr) = prev_ratio {
                    let stable = (ratio - pr).abs() <= 1e-3 * ratio.abs().max(1e-300);
                    if panel >= 4 && stable && ratio > 0.0 && ratio < 0.999 {
                        let tail = c * ratio / (1.0 - ratio);
                        if tail.abs() <= cfg.rel_tol * 1e-2 * total.abs() {
                            return Ok(total + tail);
                        }
                    }
                }
                if panel >= DIVERGENCE_PANELS && ratio >= 0.999 {
                    return Err(Error::Divergence { panels: panel + 1, partial: total });
                }
                prev_ratio = Some(ratio);
            }
        }
        prev = Some(c);
        lo = hi;
        hi *= 2.0;
    }
    Err(Error::Divergence { panels: MAX_PANELS, partial: total })
}

/// `∫_0^∞ dx / (1 + x^a) = (π/a) / sin(π/a)` for `a > 1`.
pub fn power_law_identity(a: f64) -> Result<f64> {
    if !(a > 1.0) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "∫ dx/(1+x^a) diverges unless a > 1, got a = {a}"
        )));
    }
    let t = std::f64::consts::PI / a;
    Ok(t / t.sin())
}
