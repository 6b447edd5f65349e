//! The full verification suite behind `toruslab verify`: ten numbered checks
//! covering derivative growth, order, coefficient recovery, level-set bounds,
//! characteristic consistency, stability, and negative controls. Deterministic
//! for a fixed seed; every randomized check draws from its own seeded stream
//! so running a subset never changes the numbers.

use crate::asymptotics::{
    characteristic_direct, characteristic_jensen, characteristic_profile, circle_max_norm,
    growth_exponent, order_estimate, polynomial_bound_constant,
};
use crate::curve::{ExpPolyCurve, Polynomial};
use crate::fs::{
    decomposition_check, fs_density, fs_density_laplacian_oracle, fs_norm, lambda, log_fs_density,
};
use crate::level_sets::{cos_level_measure, level_set_report, tail_integral, QuadConfig};
use crate::recovery::{poly_circle_samples, recover_polynomial, theorem1_verify};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::f64::consts::{PI, TAU};
use std::time::Instant;

pub const DEFAULT_SEED: u64 = 20240;

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub seed: u64,
    /// reduced radius grids and sample counts; same checks, faster
    pub quick: bool,
    /// test hook: corrupts the level-set bound constant so check 4 must fail
    pub corrupt_bound: bool,
    /// run only these check ids (1-10); `None` runs everything
    pub only: Option<Vec<u32>>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            seed: DEFAULT_SEED,
            quick: false,
            corrupt_bound: false,
            only: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

pub fn all_passed(results: &[CheckResult]) -> bool {
    !results.is_empty() && results.iter().all(|c| c.passed)
}

fn rng_for(cfg: &VerifyConfig, stream: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(stream))
}

fn poly(coeffs: &[(f64, f64)]) -> Polynomial {
    Polynomial::from_pairs(coeffs).expect("finite literal coefficients")
}

struct SuiteEntry {
    label: String,
    curve: ExpPolyCurve,
    m: i64,
}

/// The named curve suite plus 20 seeded random curves (n <= 4, deg <= 5).
fn build_suite(cfg: &VerifyConfig) -> Vec<SuiteEntry> {
    let z = &[(0.0, 0.0), (1.0, 0.0)][..];
    let mz = &[(0.0, 0.0), (-1.0, 0.0)][..];
    let z2 = &[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)][..];
    let z3 = &[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)][..];
    let iz3 = &[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (0.0, 1.0)][..];
    let named: Vec<(&str, Vec<&[(f64, f64)]>)> = vec![
        ("z", vec![z]),
        ("z^2", vec![z2]),
        ("(z^3,z)", vec![z3, z]),
        ("(z,-z)", vec![z, mz]),
        ("(z^3,iz^3)", vec![z3, iz3]),
    ];
    let mut suite: Vec<SuiteEntry> = named
        .into_iter()
        .map(|(label, polys)| {
            let curve =
                ExpPolyCurve::new(polys.iter().map(|p| poly(p)).collect()).expect("nonempty");
            let m = curve.growth_degree();
            SuiteEntry {
                label: label.to_string(),
                curve,
                m,
            }
        })
        .collect();

    let mut rng = rng_for(cfg, 0);
    for idx in 0..20 {
        let curve = random_curve(&mut rng, 4, 5);
        let m = curve.growth_degree();
        suite.push(SuiteEntry {
            label: format!("rand-{idx:02}"),
            curve,
            m,
        });
    }
    suite
}

/// Random curve with n <= max_n components, degrees <= max_deg, coefficients
/// in the unit square with |leading| >= 0.1, and a shared per-polynomial scale
/// 10^{+-2}. At least one component is non-constant.
fn random_curve(rng: &mut ChaCha8Rng, max_n: usize, max_deg: usize) -> ExpPolyCurve {
    let n = rng.random_range(1..=max_n);
    let mut degs: Vec<usize> = (0..n).map(|_| rng.random_range(0..=max_deg)).collect();
    if degs.iter().all(|&d| d == 0) {
        degs[n - 1] = rng.random_range(1..=max_deg);
    }
    let polys = degs
        .iter()
        .map(|&deg| {
            let scale = 10f64.powf(rng.random_range(-2.0..2.0));
            let mut coeffs: Vec<(f64, f64)> = (0..=deg)
                .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            if deg > 0 {
                loop {
                    let (re, im) = coeffs[deg];
                    if Complex64::new(re, im).norm() >= 0.1 {
                        break;
                    }
                    coeffs[deg] = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                }
            }
            let scaled: Vec<(f64, f64)> =
                coeffs.iter().map(|&(re, im)| (re * scale, im * scale)).collect();
            poly(&scaled)
        })
        .collect();
    ExpPolyCurve::new(polys).expect("nonempty")
}

/// Random polynomial with prescribed degree, |leading| in [0.5, 4], other
/// coefficients in the unit square.
fn random_level_poly(rng: &mut ChaCha8Rng, deg: usize) -> Polynomial {
    let mut coeffs: Vec<(f64, f64)> = (0..deg)
        .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
        .collect();
    let mag = rng.random_range(0.5..4.0);
    let phase = rng.random_range(0.0..TAU);
    coeffs.push((mag * phase.cos(), mag * phase.sin()));
    poly(&coeffs)
}

pub fn run_verification(cfg: &VerifyConfig) -> Vec<CheckResult> {
    let want = |id: u32| cfg.only.as_ref().is_none_or(|v| v.contains(&id));
    let mut results = Vec::new();

    let suite = if want(1) || want(2) || want(3) {
        build_suite(cfg)
    } else {
        Vec::new()
    };
    // growth slopes are shared by checks 1 and 2
    let slopes: Vec<Option<f64>> = if want(1) || want(2) {
        let r_max = if cfg.quick { 1e4 } else { 1e6 };
        suite
            .iter()
            .map(|e| growth_exponent(&e.curve, 1.0, r_max, 13).ok().map(|est| est.slope))
            .collect()
    } else {
        Vec::new()
    };

    if want(1) {
        results.push(check1_growth_exponent(cfg, &suite, &slopes));
    }
    if want(2) {
        results.push(check2_order(cfg, &suite, &slopes));
    }
    if want(3) {
        results.push(check3_theorem1(cfg, &suite));
    }
    if want(4) {
        results.push(check4_level_set_bounds(cfg));
    }
    if want(5) {
        results.push(check5_cos_levels(cfg));
    }
    if want(6) {
        results.push(check6_tail_integrals(cfg));
    }
    if want(7) {
        results.push(check7_density_oracles(cfg));
    }
    if want(8) {
        results.push(check8_jensen_consistency(cfg));
    }
    if want(9) {
        results.push(check9_stability());
    }
    if want(10) {
        results.push(check10_negative_controls());
    }
    results
}

fn check1_growth_exponent(
    cfg: &VerifyConfig,
    suite: &[SuiteEntry],
    slopes: &[Option<f64>],
) -> CheckResult {
    let mut worst_dev = 0.0f64;
    let mut worst_label = String::new();
    let mut failures = Vec::new();
    for (entry, slope) in suite.iter().zip(slopes) {
        let slope = match slope {
            Some(s) => *s,
            None => {
                failures.push(format!("{}: growth estimate failed", entry.label));
                continue;
            }
        };
        let dev = (slope - entry.m as f64).abs();
        if dev > worst_dev {
            worst_dev = dev;
            worst_label = entry.label.clone();
        }
        if dev > 0.05 {
            failures.push(format!("{}: |slope - m| = {dev:.4}", entry.label));
        }
    }
    // per-curve runtime bound, measured on the most expensive curve
    let timing_ok = {
        let heaviest = suite
            .iter()
            .max_by_key(|e| (e.m, e.curve.n()))
            .expect("nonempty suite");
        let r_max = if cfg.quick { 1e4 } else { 1e6 };
        let t0 = Instant::now();
        let _ = growth_exponent(&heaviest.curve, 1.0, r_max, 13);
        t0.elapsed().as_secs_f64() <= 10.0
    };
    let passed = failures.is_empty() && timing_ok;
    CheckResult {
        id: 1,
        name: "growth exponent matches m on the curve suite",
        passed,
        detail: if passed {
            format!(
                "{} curves, worst |slope - m| = {worst_dev:.2e} ({worst_label}); <= 10 s/curve",
                suite.len()
            )
        } else if !timing_ok {
            "heaviest curve exceeded the 10 s budget".to_string()
        } else {
            failures.join("; ")
        },
    }
}

fn check2_order(cfg: &VerifyConfig, suite: &[SuiteEntry], slopes: &[Option<f64>]) -> CheckResult {
    // the fit decade must clear the slowest dominance crossover the coefficient
    // scales (10^{+-2}, degree gaps >= 1) can produce, which is r ~ 1e4
    let r_max = if cfg.quick { 1e3 } else { 1e5 };
    let mut worst_dev = 0.0f64;
    let mut failures = Vec::new();
    for (entry, slope) in suite.iter().zip(slopes) {
        let order = match order_estimate(&entry.curve, r_max) {
            Ok(est) => est.slope,
            Err(e) => {
                failures.push(format!("{}: {e}", entry.label));
                continue;
            }
        };
        let dev = (order - (entry.m + 1) as f64).abs();
        worst_dev = worst_dev.max(dev);
        if dev > 0.05 {
            failures.push(format!("{}: |order - (m+1)| = {dev:.4}", entry.label));
        }
        if let Some(s) = slope {
            if (order - s - 1.0).abs() > 0.1 {
                failures.push(format!(
                    "{}: order {order:.4} vs growth slope {s:.4} differ by more than 1 +- 0.1",
                    entry.label
                ));
            }
        }
    }
    let passed = failures.is_empty();
    CheckResult {
        id: 2,
        name: "characteristic order matches m + 1 on the curve suite",
        passed,
        detail: if passed {
            format!("{} curves, worst |order - (m+1)| = {worst_dev:.2e}", suite.len())
        } else {
            failures.join("; ")
        },
    }
}

fn check3_theorem1(cfg: &VerifyConfig, suite: &[SuiteEntry]) -> CheckResult {
    let r_max = if cfg.quick { 1e4 } else { 1e5 };
    let mut failures = Vec::new();
    for entry in suite {
        match theorem1_verify(&entry.curve, r_max) {
            Ok(rep) if rep.pass => {}
            Ok(rep) => failures.push(format!(
                "{}: m_hat = {}, detected degrees bounded = {}, max attained = {}",
                entry.label, rep.m_hat, rep.degrees_bounded, rep.max_attained
            )),
            Err(e) => failures.push(format!("{}: {e}", entry.label)),
        }
    }

    // coefficient recovery accuracy on 10 random polynomials of degree <= 8
    let mut rng = rng_for(cfg, 3);
    let mut worst_rel = 0.0f64;
    for idx in 0..10 {
        let deg = rng.random_range(1..=8usize);
        let coeffs: Vec<(f64, f64)> = (0..=deg)
            .map(|k| {
                if k == deg {
                    loop {
                        let c = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                        if Complex64::new(c.0, c.1).norm() >= 0.1 {
                            break c;
                        }
                    }
                } else {
                    (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                }
            })
            .collect();
        let g = poly(&coeffs);
        let mut run = || -> crate::error::Result<()> {
            let s1 = poly_circle_samples(&g, 2.0, 4096)?;
            let s2 = poly_circle_samples(&g, 5.0, 4096)?;
            let rec = recover_polynomial(&s1, &s2, 12, 1e-12)?;
            let scale = coeffs
                .iter()
                .map(|&(re, im)| Complex64::new(re, im).norm())
                .fold(1.0f64, f64::max);
            for k in 0..=12usize {
                let truth = if k < coeffs.len() {
                    Complex64::new(coeffs[k].0, if k == 0 { 0.0 } else { coeffs[k].1 })
                } else {
                    Complex64::ZERO
                };
                let got = Complex64::new(rec.coefficients[k].0, rec.coefficients[k].1);
                let rel = (got - truth).norm() / scale;
                worst_rel = worst_rel.max(rel);
                if rel > 1e-9 {
                    return Err(crate::error::Error::numerical(
                        "recovery",
                        format!("poly {idx}, a_{k}: relative error {rel:.2e}"),
                    ));
                }
            }
            Ok(())
        };
        if let Err(e) = run() {
            failures.push(e.to_string());
        }
    }

    let passed = failures.is_empty();
    CheckResult {
        id: 3,
        name: "degree/growth round trip and Schwarz recovery accuracy",
        passed,
        detail: if passed {
            format!(
                "{} curves pass the round trip; worst coefficient error {worst_rel:.2e} (rel)",
                suite.len()
            )
        } else {
            failures.join("; ")
        },
    }
}

fn check4_level_set_bounds(cfg: &VerifyConfig) -> CheckResult {
    let bound_constant = if cfg.corrupt_bound { 0.5 } else { 8.0 };
    let radii = crate::numerics::radius_grid(10.0, 1e4, 3);
    let mut rng = rng_for(cfg, 4);
    let mut failures = Vec::new();
    let mut ratio_lo = f64::INFINITY;
    let mut ratio_hi = f64::NEG_INFINITY;
    for idx in 0..10 {
        let deg = rng.random_range(2..=6usize);
        let g = random_level_poly(&mut rng, deg);
        for &delta in &[1.0, 0.5] {
            match level_set_report(&g, delta, &radii, 4096, bound_constant) {
                Ok(reports) => {
                    let last = reports.last().expect("nonempty radius grid");
                    if last.r0_empirical.is_none() {
                        failures.push(format!(
                            "poly {idx} (deg {deg}, delta {delta}): bound never holds"
                        ));
                        continue;
                    }
                    ratio_lo = ratio_lo.min(last.ratio);
                    ratio_hi = ratio_hi.max(last.ratio);
                    if !(3.8..=4.2).contains(&last.ratio) {
                        failures.push(format!(
                            "poly {idx} (deg {deg}, delta {delta}): ratio {:.4} at r = 1e4",
                            last.ratio
                        ));
                    }
                }
                Err(e) => failures.push(format!("poly {idx}: {e}")),
            }
        }
    }
    let passed = failures.is_empty();
    CheckResult {
        id: 4,
        name: "level-set measures obey the 8/(|a0| r^{k-delta}) bound",
        passed,
        detail: if passed {
            format!(
                "10 polynomials x delta in {{1, 0.5}}; ratios at r = 1e4 in [{ratio_lo:.3}, {ratio_hi:.3}]"
            )
        } else {
            failures.join("; ")
        },
    }
}

fn check5_cos_levels(cfg: &VerifyConfig) -> CheckResult {
    let n_grid = if cfg.quick { 200_000 } else { 1_000_000 };
    // C^1 norm of the perturbation is <= 0.004 + 0.006 = 0.01
    let pert = |x: f64| 0.004 * x.sin() + 0.003 * (2.0 * x).cos();
    let zero = |_: f64| 0.0;
    let variants: [(&dyn Fn(f64) -> f64, bool); 2] = [(&zero, false), (&pert, true)];
    let mut failures = Vec::new();
    let mut worst_gap = 0.0f64;
    for &t in &[0.01, 0.05] {
        for &(p, with_pert) in &variants {
            // k = 1 on [0, pi]: bound 4t
            let m = cos_level_measure(1, p, t, n_grid, 0.0, PI);
            if m > 4.0 * t {
                failures.push(format!("k=1, t={t}, pert={with_pert}: measure {m:.2e} > 4t"));
            }
            if !with_pert {
                let gap = (m - 2.0 * t.asin()).abs();
                worst_gap = worst_gap.max(gap);
                if gap > TAU * 1e-5 {
                    failures.push(format!("k=1, t={t}: |measure - 2 asin t| = {gap:.2e}"));
                }
            }
            // k <= 6 on [0, 2pi]: bound 8t
            for k in 1..=6u32 {
                let m = cos_level_measure(k, p, t, n_grid, 0.0, TAU);
                if m > 8.0 * t {
                    failures.push(format!(
                        "k={k}, t={t}, pert={with_pert}: measure {m:.2e} > 8t"
                    ));
                }
                if !with_pert {
                    let gap = (m - 4.0 * t.asin()).abs();
                    worst_gap = worst_gap.max(gap);
                    if gap > TAU * 1e-5 {
                        failures.push(format!("k={k}, t={t}: |measure - 4 asin t| = {gap:.2e}"));
                    }
                }
            }
        }
    }
    let passed = failures.is_empty();
    CheckResult {
        id: 5,
        name: "cosine level sets respect the 4t / 8t measure bounds",
        passed,
        detail: if passed {
            format!("grid {n_grid}; worst closed-form gap {worst_gap:.2e}")
        } else {
            failures.join("; ")
        },
    }
}

fn check6_tail_integrals(cfg: &VerifyConfig) -> CheckResult {
    let quad = QuadConfig {
        radial_points: if cfg.quick { 64 } else { 256 },
        angular_scan: 4096,
    };
    let cases = [
        ("z^2", poly(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)])),
        ("2z^3", poly(&[(0.0, 0.0), (0.0, 0.0), (0.0, 0.0), (2.0, 0.0)])),
    ];
    let mut failures = Vec::new();
    let mut totals = Vec::new();
    for (label, g) in &cases {
        let mut prev = f64::INFINITY;
        for j in 3..=7i32 {
            match tail_integral(g, 1.0, 2f64.powi(j), 2f64.powi(j + 1), &quad) {
                Ok(v) => {
                    if v >= prev {
                        failures.push(format!(
                            "{label}: annulus [2^{j}, 2^{}] not decreasing ({v:.2e} >= {prev:.2e})",
                            j + 1
                        ));
                    }
                    prev = v;
                }
                Err(e) => failures.push(format!("{label}: {e}")),
            }
        }
        match tail_integral(g, 1.0, 50.0, 400.0, &quad) {
            Ok(total) => {
                totals.push(format!("{label}: {total:.2e}"));
                if total >= 1e-15 {
                    failures.push(format!("{label}: tail beyond r = 50 is {total:.2e}"));
                }
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    let passed = failures.is_empty();
    CheckResult {
        id: 6,
        name: "off-level-set tail integrals decay and vanish",
        passed,
        detail: if passed {
            format!("annuli decreasing for j = 3..7; tails beyond 50: {}", totals.join(", "))
        } else {
            failures.join("; ")
        },
    }
}

fn check7_density_oracles(cfg: &VerifyConfig) -> CheckResult {
    let total_points = if cfg.quick { 10_000 } else { 100_000 };
    let points_per_curve = 400;
    let n_curves = total_points / points_per_curve;
    let mut rng = rng_for(cfg, 7);
    // step ladder for the finite-difference oracle: truncation error shrinks
    // with h, roundoff grows as 1/h^2, so a correct density matches on at
    // least one rung while a wrong one matches on none; the double-double
    // potential keeps roundoff harmless down to the sub-1e-6 rungs needed
    // where the density varies on a ~1e-4 spatial scale
    let ladder = [1.25e-3, 3.125e-4, 5e-3, 7.8125e-5, 2e-2, 2e-5, 4e-6, 8e-7];
    let mut bound_failures = 0usize;
    let mut oracle_failures = 0usize;
    let mut oracle_checked = 0usize;
    let mut worst_oracle_rel = 0.0f64;
    let mut first_failure = String::new();
    for _ in 0..n_curves {
        let curve = random_curve(&mut rng, 4, 4);
        for _ in 0..points_per_curve {
            let z = Complex64::new(rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0));
            let b = match decomposition_check(&curve, z) {
                Ok(b) => b,
                Err(_) => {
                    bound_failures += 1;
                    continue;
                }
            };
            if b.total > b.bound * (1.0 + 1e-12) + 1e-300 {
                bound_failures += 1;
                if first_failure.is_empty() {
                    first_failure = format!("decomposition violated at z = {z}");
                }
            }
            let d = b.total;
            if d >= 1e-12 {
                oracle_checked += 1;
                let scale = z.norm().max(1.0);
                let mut best = f64::INFINITY;
                for &h in &ladder {
                    if let Ok(o) = fs_density_laplacian_oracle(&curve, z, h * scale) {
                        best = best.min((o - d).abs() / d);
                        if best <= 1e-4 {
                            break;
                        }
                    }
                }
                worst_oracle_rel = worst_oracle_rel.max(best);
                if best > 1e-4 {
                    oracle_failures += 1;
                    if first_failure.is_empty() {
                        first_failure =
                            format!("oracle mismatch {best:.2e} at z = {z}, density {d:.3e}");
                    }
                }
            }
        }
    }
    let passed = bound_failures == 0 && oracle_failures == 0;
    CheckResult {
        id: 7,
        name: "density decomposition bound and Laplacian oracle",
        passed,
        detail: if passed {
            format!(
                "{total_points} points: bound holds everywhere; oracle agrees at {oracle_checked} dense points (worst rel {worst_oracle_rel:.2e})"
            )
        } else {
            format!(
                "{bound_failures} bound violations, {oracle_failures} oracle mismatches; first: {first_failure}"
            )
        },
    }
}

fn check8_jensen_consistency(cfg: &VerifyConfig) -> CheckResult {
    let z1 = poly(&[(0.0, 0.0), (1.0, 0.0)]);
    let mz = poly(&[(0.0, 0.0), (-1.0, 0.0)]);
    let mut curves = vec![
        ("z".to_string(), ExpPolyCurve::new(vec![z1.clone()]).expect("nonempty")),
        ("(z,-z)".to_string(), ExpPolyCurve::new(vec![z1, mz]).expect("nonempty")),
    ];
    let mut rng = rng_for(cfg, 8);
    for idx in 0..5 {
        curves.push((format!("rand-{idx}"), random_small_curve(&mut rng)));
    }
    let mut failures = Vec::new();
    let mut worst_rel = 0.0f64;
    for (label, curve) in &curves {
        for &r in &[2.0, 3.0, 4.0] {
            let jensen = characteristic_jensen(curve, r, 256);
            let direct = characteristic_direct(curve, r, 256, 256);
            match (jensen, direct) {
                (Ok(a), Ok(b)) => {
                    let rel = (a - b).abs() / b.abs().max(1e-12);
                    worst_rel = worst_rel.max(rel);
                    if rel > 1e-6 {
                        failures.push(format!("{label}, r = {r}: discrepancy {rel:.2e}"));
                    }
                }
                (Err(e), _) | (_, Err(e)) => failures.push(format!("{label}, r = {r}: {e}")),
            }
        }
        // monotonicity and the exact zero at r = 1
        match characteristic_profile(curve, 100.0, 13, 256) {
            Ok(profile) => {
                if profile.values[0] != 0.0 {
                    failures.push(format!("{label}: T(1) = {} != 0", profile.values[0]));
                }
                for w in profile.values.windows(2) {
                    if w[1] < w[0] - 1e-9 * w[0].abs().max(1.0) {
                        failures.push(format!("{label}: T(r) decreased ({} -> {})", w[0], w[1]));
                        break;
                    }
                }
            }
            Err(e) => failures.push(format!("{label}: {e}")),
        }
    }
    let passed = failures.is_empty();
    CheckResult {
        id: 8,
        name: "Jensen and direct characteristics agree; T nondecreasing, T(1) = 0",
        passed,
        detail: if passed {
            format!("{} curves, worst relative discrepancy {worst_rel:.2e}", curves.len())
        } else {
            failures.join("; ")
        },
    }
}

/// Random curve with n <= 2, deg <= 2, coefficients in the unit square,
/// |leading| >= 0.1 (desk-scale inputs for the direct-integral oracle).
fn random_small_curve(rng: &mut ChaCha8Rng) -> ExpPolyCurve {
    let n = rng.random_range(1..=2usize);
    let polys = (0..n)
        .map(|_| {
            let deg = rng.random_range(1..=2usize);
            let mut coeffs: Vec<(f64, f64)> = (0..=deg)
                .map(|_| (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            loop {
                let (re, im) = coeffs[deg];
                if Complex64::new(re, im).norm() >= 0.1 {
                    break;
                }
                coeffs[deg] = (rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            }
            poly(&coeffs)
        })
        .collect();
    ExpPolyCurve::new(polys).expect("nonempty")
}

fn check9_stability() -> CheckResult {
    // g = z^10 at |z| = 1e4: Re g reaches ~1e40
    let mut coeffs = vec![(0.0, 0.0); 10];
    coeffs.push((1.0, 0.0));
    let curve = ExpPolyCurve::new(vec![poly(&coeffs)]).expect("nonempty");
    let r = 1e4;
    let mut failures = Vec::new();
    for j in 0..64 {
        let z = Complex64::from_polar(r, j as f64 * TAU / 64.0);
        let checks = [
            ("fs_density", fs_density(&curve, z).unwrap_or(f64::NAN)),
            ("fs_norm", fs_norm(&curve, z).unwrap_or(f64::NAN)),
            ("log_fs_density", log_fs_density(&curve, z)),
            ("lambda", lambda(&curve, z)),
        ];
        for (name, v) in checks {
            if !v.is_finite() {
                failures.push(format!("{name} not finite at angle index {j}: {v}"));
            }
        }
    }
    match circle_max_norm(&curve, r, 4096) {
        Ok(v) if v.is_finite() && v > 0.0 => {}
        Ok(v) => failures.push(format!("circle max degenerate: {v}")),
        Err(e) => failures.push(e.to_string()),
    }
    let passed = failures.is_empty();
    CheckResult {
        id: 9,
        name: "log-domain stability at extreme exponents (z^10, |z| = 1e4)",
        passed,
        detail: if passed {
            "all pointwise evaluations and the circle maximum are finite".to_string()
        } else {
            failures.join("; ")
        },
    }
}

fn check10_negative_controls() -> CheckResult {
    let mut failures = Vec::new();
    // planted exponent violation: z^2 grows like r, claimed exponent 0
    let z2 = poly(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
    let curve = ExpPolyCurve::new(vec![z2]).expect("nonempty");
    match polynomial_bound_constant(&curve, 0.0, 1.0, 1e4) {
        Ok(b) if !b.monotone_ok => {}
        Ok(_) => failures.push("planted exponent violation was not flagged".to_string()),
        Err(e) => failures.push(e.to_string()),
    }
    // corrupted bound constant: the 8 -> 0.5 corruption must be caught
    let g = poly(&[(0.0, 0.0), (1.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
    match level_set_report(&g, 1.0, &[100.0, 1e3, 1e4], 4096, 0.5) {
        Ok(reports) => {
            let caught = reports.last().expect("nonempty").r0_empirical.is_none()
                && reports.iter().any(|r| r.measure > r.bound);
            if !caught {
                failures.push("corrupted bound constant went undetected".to_string());
            }
        }
        Err(e) => failures.push(e.to_string()),
    }
    let passed = failures.is_empty();
    CheckResult {
        id: 10,
        name: "negative controls flag planted violations",
        passed,
        detail: if passed {
            "exponent violation and corrupted bound both detected".to_string()
        } else {
            failures.join("; ")
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_cfg(only: &[u32]) -> VerifyConfig {
        VerifyConfig {
            seed: DEFAULT_SEED,
            quick: true,
            corrupt_bound: false,
            only: Some(only.to_vec()),
        }
    }

    #[test]
    fn cheap_checks_pass_quickly() {
        let results = run_verification(&quick_cfg(&[5, 6, 9, 10]));
        assert_eq!(results.len(), 4);
        for r in &results {
            assert!(r.passed, "check {} failed: {}", r.id, r.detail);
        }
    }

    #[test]
    fn corrupt_bound_fails_check4() {
        let mut cfg = quick_cfg(&[4]);
        cfg.corrupt_bound = true;
        let results = run_verification(&cfg);
        assert_eq!(results.len(), 1);
        assert!(!results[0].passed);
        assert!(!all_passed(&results));
    }

    #[test]
    fn subset_selection_is_deterministic() {
        let a = run_verification(&quick_cfg(&[10]));
        let b = run_verification(&quick_cfg(&[10]));
        assert_eq!(a[0].detail, b[0].detail);
        assert_eq!(a[0].passed, b[0].passed);
    }

    #[test]
    fn all_passed_rejects_empty() {
        assert!(!all_passed(&[]));
    }
}
