//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.
//!
//! Run with `cargo test -p spectral-leverage-cli --test acceptance`.

use std::f64::consts::{FRAC_PI_2, PI};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_leverage::exact::exact_leverage_scores;
use spectral_leverage::leverage::polylog_neg;
use spectral_leverage::quadrature::semi_infinite_quad;
use spectral_leverage::*;
use spectral_leverage_cli::commands::{cmd_bench, BenchConfig, BenchReport};
use spectral_leverage_cli::config::{
    DensityConfig, DensitySource, FloorSetting, GeneratorArg, KernelConfig, LandmarkCount, MethodArg,
    RunConfig, Scalar, Schedule,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

type Check = fn() -> Outcome;

fn main() -> ExitCode {
    let criteria: [(&str, Check, Duration); 9] = [
        ("exact leverage matches the eigendecomposition oracle", c1_exact_oracle, secs(5)),
        ("analytic integrals", c2_analytic_integrals, secs(60)),
        ("Matérn closed-form error is O(lambda^(1/alpha))", c3_closed_form_bound, secs(10)),
        ("Gaussian polylogarithm identity", c4_gaussian_polylog, secs(5)),
        ("uniform design R-ACC at n = 200 and 2000", c5_uniform_racc, secs(120)),
        ("bimodal 1-d: SA beats uniform sampling in R-ACC", c6_bimodal_racc, secs(120)),
        ("bimodal 3-d Nyström risk", c7_nystrom_risk, secs(300)),
        ("closed-form leverage time is linear in n", c8_linear_time, secs(120)),
        ("invariance suite", c9_invariants, secs(120)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut out = check();
        let took = start.elapsed();
        if took > *budget {
            out.pass = false;
            out.detail.push_str(&format!("; over the {budget:?} budget"));
        }
        let tag = if out.pass { "PASS" } else { "FAIL" };
        println!("{tag} criterion {}: {name} ({}) [{:.2}s]", i + 1, out.detail, took.as_secs_f64());
        if !out.pass {
            failed += 1;
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn secs(s: u64) -> Duration {
    Duration::from_secs(s)
}

fn random_psd(n: usize, rng: &mut ChaCha8Rng) -> Matrix {
    // rank n/2 for some draws so the oracle also sees singular matrices
    let k = if rng.gen_bool(0.3) { (n / 2).max(1) } else { n + 2 };
    let b: Vec<f64> = (0..n * k).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let mut m = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m[(i, j)] = (0..k).map(|t| b[i * k + t] * b[j * k + t]).sum::<f64>() / k as f64;
        }
    }
    m
}

fn eigen_oracle(k: &Matrix, lambda: f64) -> Vec<f64> {
    let n = k.rows();
    let eig = nalgebra::SymmetricEigen::new(DMatrix::from_row_slice(n, n, k.as_slice()));
    (0..n)
        .map(|i| {
            (0..n)
                .map(|c| {
                    let mu = eig.eigenvalues[c].max(0.0);
                    n as f64 * mu / (mu + n as f64 * lambda) * eig.eigenvectors[(i, c)].powi(2)
                })
                .sum()
        })
        .collect()
}

fn c1_exact_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut worst, mut worst_dstat) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let n = rng.gen_range(2..=50);
        let lambda = 10f64.powf(rng.gen_range(-5.0..0.0));
        let k = random_psd(n, &mut rng);
        let fast = match exact_rescaled_leverage(&k, lambda) {
            Ok(v) => v,
            Err(e) => return outcome(false, format!("exact leverage failed: {e}")),
        };
        for (a, b) in fast.values().iter().zip(eigen_oracle(&k, lambda)) {
            worst = worst.max((a - b).abs());
        }
        let l = exact_leverage_scores(&k, lambda).unwrap();
        let dstat = statistical_dimension(&k, lambda).unwrap();
        worst_dstat = worst_dstat.max((l.iter().sum::<f64>() - dstat).abs());
    }
    outcome(
        worst <= 1e-9 && worst_dstat <= 1e-10,
        format!("max |n l - oracle| = {worst:.2e} <= 1e-9, max |sum l - d_stat| = {worst_dstat:.2e} <= 1e-10"),
    )
}

fn c2_analytic_integrals() -> Outcome {
    let cfg = QuadConfig::default();
    let mut worst_a = 0.0f64;
    for a in [1.5, 2.0, 3.0, 4.0, 8.0] {
        let q = semi_infinite_quad(|x: f64| 1.0 / (1.0 + x.powf(a)), &cfg).unwrap();
        let exact = (PI / a) / (PI / a).sin();
        worst_a = worst_a.max((q - exact).abs() / exact);
    }
    let spec = KernelSpec::matern(0.5, 1).unwrap();
    let mut worst_b = 0.0f64;
    for p in [0.5, 1.0, 5.0] {
        for lambda in [1e-2, 1e-4] {
            let v = leverage_integral_quadrature(p, lambda, &spec, &cfg).unwrap();
            // surface constant of the real line is 2
            let exact = FRAC_PI_2 / (lambda * (p + lambda)).sqrt() * 2.0;
            worst_b = worst_b.max((v - exact).abs() / exact);
        }
    }
    outcome(
        worst_a <= 1e-7 && worst_b <= 1e-8,
        format!("power law rel err {worst_a:.2e} <= 1e-7, arctan rel err {worst_b:.2e} <= 1e-8"),
    )
}

fn closed_form_rel_err(alpha: f64, dim: usize, p: f64, lambda: f64) -> f64 {
    let spec = KernelSpec::matern(alpha - dim as f64 / 2.0, dim).unwrap();
    let cf = matern_closed_form(p, lambda, alpha, dim).unwrap();
    let q = leverage_integral_quadrature(p, lambda, &spec, &QuadConfig::default()).unwrap();
    (cf - q).abs() / q
}

fn c3_closed_form_bound() -> Outcome {
    // alpha = 1 with d = 3 has 2 alpha <= d (divergent integral) and is not part of the grid
    let mut worst_ratio = 0.0f64;
    for (alpha, dim) in [(1.0, 1usize), (2.0, 1), (2.0, 3)] {
        for p in [0.5, 1.0, 5.0] {
            for lambda in [1e-2f64, 1e-4] {
                let err = closed_form_rel_err(alpha, dim, p, lambda);
                worst_ratio = worst_ratio.max(err / lambda.powf(1.0 / alpha));
            }
        }
    }
    let shrink = closed_form_rel_err(1.0, 1, 1.0, 1e-2) / closed_form_rel_err(1.0, 1, 1.0, 1e-4);
    outcome(
        worst_ratio <= 5.0 && shrink >= 5.0,
        format!("max err / lambda^(1/alpha) = {worst_ratio:.3} <= 5, shrink 1e-2 -> 1e-4 = {shrink:.1}x >= 5x"),
    )
}

fn c4_gaussian_polylog() -> Outcome {
    let cfg = QuadConfig::default();
    let mut worst = 0.0f64;
    for dim in 1..=3 {
        for (p, lambda, sigma) in [(1.0, 0.05, 1.0), (0.5, 1e-3, 0.3), (5.0, 1e-6, 0.1)] {
            let g = gaussian_polylog_form(p, lambda, sigma, dim, Convention::Simplified, &cfg).unwrap();
            let spec = KernelSpec::gaussian(sigma, dim).unwrap();
            let q = leverage_integral_quadrature(p, lambda, &spec, &cfg).unwrap();
            worst = worst.max((g - q).abs() / q);
        }
    }
    let mut worst_li1 = 0.0f64;
    for (p, lambda, sigma) in [(1.0f64, 0.05, 1.0f64), (2.0, 1e-4, 0.2)] {
        let c = p * sigma * sigma;
        let log_form = PI * (c / lambda).ln_1p() / c;
        let g = gaussian_polylog_form(p, lambda, sigma, 2, Convention::Simplified, &cfg).unwrap();
        let li1 = polylog_neg(1.0, c / lambda, &cfg).unwrap();
        worst_li1 = worst_li1
            .max((g - log_form).abs() / log_form)
            .max((li1 + (c / lambda).ln_1p()).abs() / (c / lambda).ln_1p());
    }
    outcome(
        worst <= 1e-6 && worst_li1 <= 1e-6,
        format!("max rel err vs quadrature {worst:.2e} <= 1e-6, d = 2 vs -ln(1+x) {worst_li1:.2e}"),
    )
}

fn base_run(lambda: Schedule, seed: u64) -> RunConfig {
    RunConfig { seed, ..RunConfig::new(KernelConfig::matern(1.5), Scalar::Schedule(lambda)) }
}

/// Per-replicate averages of `(mean R-ACC, mean |r - 1|)` for `method` at `n`.
fn racc_means(report: &BenchReport, method: &str, n: usize) -> (f64, f64) {
    let rows: Vec<_> = report.rows_for(method, n).filter_map(|r| r.r_acc).collect();
    let k = rows.len() as f64;
    (rows.iter().map(|r| r.mean).sum::<f64>() / k, rows.iter().map(|r| r.mean_abs_dev).sum::<f64>() / k)
}

fn c5_uniform_racc() -> Outcome {
    let run = RunConfig {
        density: DensityConfig { source: DensitySource::True, floor: FloorSetting::None, ..Default::default() },
        ..base_run(Schedule::new(0.45, 0.8), 0)
    };
    let cfg = BenchConfig {
        methods: vec![MethodArg::Sa],
        fit: false,
        exact_cap: 2000,
        repeats: 5,
        ..BenchConfig::new(run, GeneratorArg::Uniform, vec![200, 2000])
    };
    let report = match cmd_bench(&cfg, None) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let (m200, d200) = racc_means(&report, "sa", 200);
    let (m2000, d2000) = racc_means(&report, "sa", 2000);
    let pass = (0.85..=1.15).contains(&m200) && (0.92..=1.08).contains(&m2000) && d2000 < d200;
    outcome(
        pass,
        format!(
            "mean R-ACC {m200:.4} in [0.85, 1.15] at n = 200, {m2000:.4} in [0.92, 1.08] at n = 2000; \
             mean |r-1| {d200:.4} -> {d2000:.4} (5 replicates)"
        ),
    )
}

fn c6_bimodal_racc() -> Outcome {
    let run = RunConfig {
        density: DensityConfig {
            source: DensitySource::Kde,
            bandwidth: Some(Scalar::Schedule(Schedule::new(0.3, 1.0 / 3.0))),
            subsample: None,
            floor: FloorSetting::None,
        },
        ..base_run(Schedule::new(0.45, 0.8), 0)
    };
    let cfg = BenchConfig {
        methods: vec![MethodArg::Sa, MethodArg::Uniform],
        fit: false,
        exact_cap: 2000,
        repeats: 3,
        gamma: Some(0.6),
        ..BenchConfig::new(run, GeneratorArg::Bimodal1d, vec![2000])
    };
    let report = match cmd_bench(&cfg, None) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let (sa_mean, sa_dev) = racc_means(&report, "sa", 2000);
    let (uni_mean, uni_dev) = racc_means(&report, "uniform", 2000);
    outcome(
        sa_dev < uni_dev,
        format!(
            "mean |r-1|: SA {sa_dev:.4} < uniform {uni_dev:.4} (mean R-ACC {sa_mean:.4} vs {uni_mean:.4}, 3 replicates)"
        ),
    )
}

fn c7_nystrom_risk() -> Outcome {
    let n = 2000;
    let run = RunConfig {
        density: DensityConfig {
            source: DensitySource::Kde,
            bandwidth: Some(Scalar::Schedule(Schedule::new(0.15, 1.0 / 7.0))),
            subsample: None,
            floor: FloorSetting::None,
        },
        d_sub: LandmarkCount::Growth { c: 5.0, e: 1.0 / 3.0 },
        ..base_run(Schedule::new(0.075, 2.0 / 3.0), 0)
    };
    let cfg = BenchConfig {
        methods: vec![MethodArg::Sa, MethodArg::Uniform],
        with_krr: true,
        exact_cap: n,
        repeats: 10,
        gamma: Some(0.4),
        noise: 0.5,
        ..BenchConfig::new(run, GeneratorArg::Bimodal3d, vec![n])
    };
    let report = match cmd_bench(&cfg, None) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let risks = |m: &str| -> Vec<f64> { report.rows_for(m, n).map(|r| r.risk.expect("f_star present")).collect() };
    let (sa, uni, krr) = (risks("sa"), risks("uniform"), risks("krr"));
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let ratio = mean(&sa) / mean(&krr);
    let wins = sa.iter().zip(&uni).filter(|(s, u)| s <= u).count();
    let d_sub = report.rows_for("sa", n).next().and_then(|r| r.d_sub).unwrap_or(0);
    outcome(
        ratio <= 3.0 && wins >= 7,
        format!(
            "SA risk / KRR risk = {ratio:.3} <= 3 (SA {:.5}, uniform {:.5}, KRR {:.5}); \
             SA <= uniform in {wins}/10 runs, need >= 7; d_sub = {d_sub}",
            mean(&sa),
            mean(&uni),
            mean(&krr)
        ),
    )
}

fn c8_linear_time() -> Outcome {
    let run = RunConfig {
        density: DensityConfig { source: DensitySource::True, floor: FloorSetting::None, ..Default::default() },
        ..base_run(Schedule::new(0.45, 0.8), 0)
    };
    let cfg = BenchConfig {
        methods: vec![MethodArg::Sa],
        fit: false,
        exact_cap: 0,
        timing_repeats: 30,
        ..BenchConfig::new(run, GeneratorArg::Uniform, vec![10_000, 100_000])
    };
    let report = match cmd_bench(&cfg, None) {
        Ok(r) => r,
        Err(e) => return outcome(false, e.to_string()),
    };
    let time = |n: usize| report.rows_for("sa", n).next().and_then(|r| r.leverage_time_ms).unwrap_or(f64::NAN);
    let (small, large) = (time(10_000), time(100_000));
    let ratio = large / small;
    outcome(
        (5.0..=20.0).contains(&ratio) && large < 2000.0,
        format!("t(1e5) / t(1e4) = {large:.3} ms / {small:.4} ms = {ratio:.2} in [5, 20]; t(1e5) < 2000 ms"),
    )
}

fn c9_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut failures = Vec::new();
    let cfg = QuadConfig::default();

    // normalization
    let mut worst_sum = 0.0f64;
    for _ in 0..200 {
        let n = rng.gen_range(1..500);
        let v: Vec<f64> = (0..n).map(|_| 10f64.powf(rng.gen_range(-6.0..6.0))).collect();
        let q = to_sampling_distribution(&LeverageVector::new(v, LeverageMethod::SpectralClosedForm).unwrap()).unwrap();
        if q.probabilities().iter().any(|&p| !(p > 0.0 && p <= 1.0)) {
            failures.push("probability outside (0, 1]".to_string());
        }
        worst_sum = worst_sum.max((q.probabilities().iter().sum::<f64>() - 1.0).abs());
    }
    if worst_sum > 1e-12 {
        failures.push(format!("sum of q off by {worst_sum:.2e}"));
    }

    // density scaling leaves q unchanged for the Matérn closed form
    let mut worst_scale = 0.0f64;
    for (nu, dim) in [(0.5, 1usize), (1.5, 1), (2.5, 2), (1.5, 3)] {
        let spec = KernelSpec::matern(nu, dim).unwrap();
        let n = 300;
        let x = DesignSet::new(dim, (0..n * dim).map(|_| rng.gen::<f64>()).collect()).unwrap();
        let dens: Vec<f64> = (0..n).map(|_| rng.gen_range(0.01..20.0)).collect();
        let q0 = to_sampling_distribution(
            &approximate_leverages(&x, &dens, &spec, 1e-3, &LeverageOptions::default()).unwrap(),
        )
        .unwrap();
        for c in [1e-3, 0.37, 8.0, 1e4] {
            let scaled: Vec<f64> = dens.iter().map(|p| c * p).collect();
            let q = to_sampling_distribution(
                &approximate_leverages(&x, &scaled, &spec, 1e-3, &LeverageOptions::default()).unwrap(),
            )
            .unwrap();
            for (a, b) in q.probabilities().iter().zip(q0.probabilities()) {
                worst_scale = worst_scale.max((a - b).abs());
            }
        }
    }
    if worst_scale > 1e-12 {
        failures.push(format!("density scaling moved q by {worst_scale:.2e}"));
    }

    // |K~(x, t)| <= K~(t, t)
    let mut ek_violations = 0;
    for nu in [0.5, 1.5, 2.5] {
        let spec = KernelSpec::matern(nu, 1).unwrap();
        for &(t, p, lambda) in &[(0.3, 1.0, 1e-3), (0.0, 0.2, 1e-4), (0.7, 5.0, 1e-2)] {
            let diag = equivalent_kernel_1d(t, t, p, lambda, &spec, &cfg).unwrap();
            for i in 0..=40 {
                let x = -1.0 + i as f64 * 0.05;
                let v = equivalent_kernel_1d(x, t, p, lambda, &spec, &cfg).unwrap();
                if v.abs() > diag * (1.0 + 1e-9) {
                    ek_violations += 1;
                }
            }
        }
    }
    if ek_violations > 0 {
        failures.push(format!("{ek_violations} equivalent-kernel values above the diagonal"));
    }

    // leverage strictly decreasing in p, on every path
    let ps = [0.01, 0.1, 0.5, 1.0, 3.0, 10.0, 100.0];
    let x = DesignSet::new(1, (0..ps.len()).map(|i| i as f64).collect()).unwrap();
    let quad = LeverageOptions { path: IntegrationPath::Quadrature, ..Default::default() };
    for spec in [KernelSpec::matern(0.5, 1).unwrap(), KernelSpec::matern(2.5, 1).unwrap(), KernelSpec::gaussian(0.2, 1).unwrap()] {
        for opts in [LeverageOptions::default(), quad] {
            let v = approximate_leverages(&x, &ps, &spec, 1e-3, &opts).unwrap();
            if !v.values().windows(2).all(|w| w[1] < w[0]) {
                failures.push(format!("leverage not decreasing in p for {spec:?} on {:?}", opts.path));
            }
        }
    }

    // d_stat strictly decreasing in lambda
    for seed in 0..5 {
        let x = generate(&GeneratorSpec { kind: GeneratorKind::Uniform { dim: 2 }, n: 200, gamma: 0.5, seed }).unwrap();
        let k = kernel_matrix(&KernelSpec::matern(1.5, 2).unwrap(), &x, DenseLimits::default()).unwrap();
        let d: Vec<f64> = [1e-6, 1e-4, 1e-2, 1.0, 100.0].iter().map(|&l| statistical_dimension(&k, l).unwrap()).collect();
        if !d.windows(2).all(|w| w[1] < w[0]) {
            failures.push(format!("d_stat not decreasing in lambda: {d:?}"));
        }
    }

    if failures.is_empty() {
        outcome(
            true,
            format!(
                "q sums to 1 within {worst_sum:.1e}; scaling invariance {worst_scale:.1e}; |K~(x,t)| <= K~(t,t); \
                 monotone in p and lambda"
            ),
        )
    } else {
        outcome(false, failures.join("; "))
    }
}
