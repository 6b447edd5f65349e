//! Angular level sets E(r) = { theta : |Re g(r e^{i theta})| <= threshold }
//! of an exponent polynomial, their Lebesgue measures against the 8/(|a_0|
//! r^{k - delta}) bound, the cos-level brute-force measures, and the E / E^c
//! split of the characteristic integral.

use crate::curve::{ExpPolyCurve, Polynomial};
use crate::error::{Error, Result};
use crate::fs::{component_norm, fs_density};
use crate::numerics::{adaptive_simpson, pairwise_sum};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

/// Quadrature configuration for the annulus and split integrals.
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig {
    /// radial subdivisions
    pub radial_points: usize,
    /// uniform angular scan density used to locate level-set boundaries
    pub angular_scan: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            radial_points: 256,
            angular_scan: 4096,
        }
    }
}

/// Per-radius record of a level-set measurement against its bound.
#[derive(Debug, Clone, Serialize)]
pub struct LevelSetReport {
    pub r: f64,
    pub measure: f64,
    pub bound: f64,
    /// dimensionless: measure * |a_0| * r^{k - delta} (asymptote 4, bound 8)
    pub ratio: f64,
    /// smallest grid radius from which the bound holds for all larger grid
    /// radii; shared across the report list
    pub r0_empirical: Option<f64>,
}

/// Bisection between a and b (in either order); f(a) and f(b) must have
/// opposite signs. Runs down to floating-point resolution or `tol`.
fn bisect(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut fa = f(a);
    if fa == 0.0 {
        return a;
    }
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m == a || m == b || (b - a).abs() < tol {
            break;
        }
        let fm = f(m);
        if fm == 0.0 {
            return m;
        }
        if (fm > 0.0) == (fa > 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// The set { theta in [0, 2pi) : |Re g(r e^{i theta})| <= tau }: resolvable
/// intervals as sorted disjoint endpoint pairs, plus sub-resolution intervals
/// as (center, width) records. The latter cannot be stored as endpoint pairs
/// at all: at large radii the widths shrink like tau / r^k far below
/// ulp(theta), so center - width/2 == center + width/2 in double precision and
/// the interval would silently vanish.
#[derive(Debug, Clone)]
pub struct AngularLevelSet {
    /// merged, clipped to [0, 2pi)
    pub spans: Vec<(f64, f64)>,
    /// (center, width) with width below endpoint resolution
    pub narrow: Vec<(f64, f64)>,
}

impl AngularLevelSet {
    /// Total Lebesgue measure, capped at 2 pi.
    pub fn measure(&self) -> f64 {
        let wide: f64 = self.spans.iter().map(|(a, b)| b - a).sum();
        let thin: f64 = self.narrow.iter().map(|(_, w)| w).sum();
        (wide + thin).min(TAU)
    }

    /// Complement of the resolvable spans within [0, 2pi); the narrow records
    /// are measure-zero holes for any quadrature purpose.
    pub fn complement(&self) -> Vec<(f64, f64)> {
        complement_intervals(&self.spans)
    }
}

/// Angular level set of { |Re g(r e^{i theta})| <= tau }.
///
/// Boundaries are located by bisecting |phi| - tau between sign changes of a
/// uniform scan. Intervals narrower than double precision can resolve (they
/// shrink like tau / r^k) are instead recorded from the enclosed root of phi
/// with the local linearization width 2 tau / |phi'|; without that step every
/// sub-ulp interval would collapse to zero measure.
pub fn sub_threshold_intervals(
    g: &Polynomial,
    r: f64,
    tau: f64,
    n_scan: usize,
) -> Result<AngularLevelSet> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::invalid("level-set radius must be positive"));
    }
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(Error::invalid("level-set threshold must be positive"));
    }
    if n_scan < 4096 {
        return Err(Error::invalid("level-set scan needs n_scan >= 4096"));
    }
    let phi = |theta: f64| g.real_part_on_circle(r, theta);
    // d/dtheta Re g(re^{i theta}) = Re( i r e^{i theta} g'(r e^{i theta}) )
    let dg = g.derivative();
    let dphi = |theta: f64| {
        let z = Complex64::from_polar(r, theta);
        (Complex64::i() * z * dg.eval(z)).re
    };
    let psi = |theta: f64| phi(theta).abs() - tau;

    let n = n_scan;
    let h = TAU / n as f64;
    let phis: Vec<f64> = (0..n).map(|j| phi(j as f64 * h)).collect();
    let psis: Vec<f64> = phis.iter().map(|&p| p.abs() - tau).collect();

    let all_below = psis.iter().all(|&v| v < 0.0);
    if all_below {
        return Ok(AngularLevelSet {
            spans: vec![(0.0, TAU)],
            narrow: Vec::new(),
        });
    }

    let mut intervals: Vec<(f64, f64)> = Vec::new();
    let mut narrow: Vec<(f64, f64)> = Vec::new();
    const NARROW: f64 = 1e-10;

    let linearized = |theta0: f64| -> Option<(f64, f64)> {
        let slope = dphi(theta0).abs();
        let w = 2.0 * tau / slope;
        if slope > 0.0 && w.is_finite() {
            Some((theta0, w))
        } else {
            None
        }
    };

    // grid-visible negative runs of psi (circular)
    let mut j = 0;
    while j < n {
        if psis[j] < 0.0 && psis[(j + n - 1) % n] >= 0.0 {
            // run starts in cell (j-1, j); find its end (may wrap past n)
            let mut end = j;
            while psis[(end + 1) % n] < 0.0 {
                end += 1;
            }
            let lo = bisect(&psi, j as f64 * h, (j as f64 - 1.0) * h, 1e-13);
            let hi = bisect(&psi, end as f64 * h, (end + 1) as f64 * h, 1e-13);
            if hi - lo < NARROW {
                // interval too narrow for the bisected endpoints to separate:
                // relocate from the enclosed root of phi if there is one
                let (pa, pb) = (phi(lo - NARROW), phi(hi + NARROW));
                if pa * pb < 0.0 {
                    let theta0 = bisect(&phi, lo - NARROW, hi + NARROW, 0.0);
                    if let Some(cw) = linearized(theta0) {
                        narrow.push(cw);
                        j = end + 1;
                        continue;
                    }
                }
            }
            intervals.push((lo, hi));
            j = end + 1;
        } else {
            j += 1;
        }
    }

    // hidden dips: phi changes sign inside a cell whose sampled endpoints are
    // both above threshold
    for j in 0..n {
        let jn = (j + 1) % n;
        if phis[j] * phis[jn] < 0.0 && psis[j] >= 0.0 && psis[jn] >= 0.0 {
            let a = j as f64 * h;
            let b = (j + 1) as f64 * h;
            let theta0 = bisect(&phi, a, b, 0.0);
            if psi(theta0) < 0.0 {
                let lo = bisect(&psi, theta0, a, 1e-13);
                let hi = bisect(&psi, theta0, b, 1e-13);
                if hi - lo >= NARROW {
                    intervals.push((lo, hi));
                    continue;
                }
            }
            // sub-resolution dip: |phi| at the representable root already
            // exceeds tau, or the endpoints collapsed; use the linearization
            if let Some(cw) = linearized(theta0) {
                narrow.push(cw);
            }
        }
    }

    Ok(AngularLevelSet {
        spans: merge_circular(intervals),
        narrow,
    })
}

/// Merge possibly overlapping intervals on the circle and clip to [0, 2pi).
fn merge_circular(intervals: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    // normalize into [0, 2pi), splitting wrap-around intervals
    let mut parts: Vec<(f64, f64)> = Vec::new();
    for (mut a, mut b) in intervals {
        if b <= a {
            continue;
        }
        if b - a >= TAU {
            return vec![(0.0, TAU)];
        }
        while a < 0.0 {
            a += TAU;
            b += TAU;
        }
        while a >= TAU {
            a -= TAU;
            b -= TAU;
        }
        if b > TAU {
            parts.push((a, TAU));
            parts.push((0.0, b - TAU));
        } else {
            parts.push((a, b));
        }
    }
    parts.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for (a, b) in parts {
        match merged.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => merged.push((a, b)),
        }
    }
    // wrap join: last touching first across 0
    if merged.len() >= 2 {
        let first = merged[0];
        let last = *merged.last().unwrap();
        if (last.1 - TAU) >= first.0 && last.1 >= TAU {
            merged[0].0 = 0.0;
            merged.last_mut().unwrap().1 = TAU;
        }
    }
    merged
}

/// Complement of sorted disjoint intervals within [0, 2pi).
pub fn complement_intervals(intervals: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut cursor = 0.0;
    for &(a, b) in intervals {
        if a > cursor {
            out.push((cursor, a));
        }
        cursor = cursor.max(b);
    }
    if cursor < TAU {
        out.push((cursor, TAU));
    }
    out
}

/// Lebesgue measure of { theta : |Re g(r e^{i theta})| <= r^delta }.
pub fn level_set_measure(g: &Polynomial, r: f64, delta: f64, n_scan: usize) -> Result<f64> {
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid("delta must lie in (0, 1]"));
    }
    Ok(sub_threshold_intervals(g, r, r.powf(delta), n_scan)?.measure())
}

fn require_degree_at_least_2(g: &Polynomial) -> Result<usize> {
    match g.degree() {
        Some(k) if k >= 2 => Ok(k),
        _ => Err(Error::invalid(
            "level-set bounds assume a polynomial of degree >= 2",
        )),
    }
}

/// Per-radius measures of { |Re g| <= |z|^delta } against the bound
/// bound_constant / (|a_0| r^{k - delta}); the nominal constant is 8.
pub fn level_set_report(
    g: &Polynomial,
    delta: f64,
    radii: &[f64],
    n_scan: usize,
    bound_constant: f64,
) -> Result<Vec<LevelSetReport>> {
    let k = require_degree_at_least_2(g)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid("delta must lie in (0, 1]"));
    }
    let a0 = g.leading_coefficient().expect("degree >= 2").norm();
    let mut reports: Vec<LevelSetReport> = radii
        .iter()
        .map(|&r| {
            let measure = level_set_measure(g, r, delta, n_scan)?;
            let scale = a0 * r.powf(k as f64 - delta);
            Ok(LevelSetReport {
                r,
                measure,
                bound: bound_constant / scale,
                ratio: measure * scale,
                r0_empirical: None,
            })
        })
        .collect::<Result<_>>()?;
    fill_r0(&mut reports);
    Ok(reports)
}

/// Per-radius measures of { |Re g| <= C |z| } for a monic g, against the
/// bound 8 C / r^{k-1}. The ratio column is measure * r^{k-1} (asymptote 4C).
pub fn monic_bound_check(g: &Polynomial, c: f64, radii: &[f64]) -> Result<Vec<LevelSetReport>> {
    let k = require_degree_at_least_2(g)?;
    let lead = g.leading_coefficient().expect("degree >= 2");
    if lead != Complex64::new(1.0, 0.0) {
        return Err(Error::invalid(
            "polynomial is not monic; rotate and rescale it first",
        ));
    }
    if !(c > 0.0) {
        return Err(Error::invalid("level constant C must be positive"));
    }
    let mut reports: Vec<LevelSetReport> = radii
        .iter()
        .map(|&r| {
            let measure = sub_threshold_intervals(g, r, c * r, 4096)?.measure();
            Ok(LevelSetReport {
                r,
                measure,
                bound: 8.0 * c / r.powi(k as i32 - 1),
                ratio: measure * r.powi(k as i32 - 1),
                r0_empirical: None,
            })
        })
        .collect::<Result<_>>()?;
    fill_r0(&mut reports);
    Ok(reports)
}

fn fill_r0(reports: &mut [LevelSetReport]) {
    let mut r0 = None;
    // smallest grid radius from which the bound holds onward
    for rep in reports.iter().rev() {
        if rep.measure <= rep.bound {
            r0 = Some(rep.r);
        } else {
            break;
        }
    }
    for rep in reports.iter_mut() {
        rep.r0_empirical = r0;
    }
}

/// Brute-force measure of { x in [lo, hi] : |cos(k x) + perturbation(x)| <= t }
/// by uniform-grid counting with `n_grid` cells; boundary cells contribute a
/// linearly interpolated fraction.
pub fn cos_level_measure(
    k: u32,
    perturbation: impl Fn(f64) -> f64,
    t: f64,
    n_grid: usize,
    lo: f64,
    hi: f64,
) -> f64 {
    assert!(t >= 0.0 && n_grid >= 2 && hi > lo);
    let h = (hi - lo) / n_grid as f64;
    let psi = |x: f64| ((k as f64 * x).cos() + perturbation(x)).abs() - t;
    let mut acc = 0.0;
    let mut prev = psi(lo);
    for j in 1..=n_grid {
        let cur = psi(lo + j as f64 * h);
        if prev <= 0.0 && cur <= 0.0 {
            acc += h;
        } else if prev <= 0.0 || cur <= 0.0 {
            let inside = prev.min(cur).abs();
            let outside = prev.max(cur);
            acc += h * inside / (inside + outside);
        }
        prev = cur;
    }
    acc
}

/// Integral of f over [a, b] with panels graded geometrically toward both
/// endpoints, for integrands that decay exponentially away from the ends
/// (the off-E component density near the level-set boundary).
fn integrate_graded(f: &impl Fn(f64) -> f64, a: f64, b: f64, levels: usize) -> f64 {
    if b <= a {
        return 0.0;
    }
    let half = 0.5 * (b - a);
    let mut vals = Vec::with_capacity(2 * levels * 4);
    for (end, sign) in [(a, 1.0), (b, -1.0)] {
        let mut outer = half;
        for _ in 0..levels {
            let inner = 0.5 * outer;
            // 4-point midpoint rule on [inner, outer] offset from the endpoint
            let w = (outer - inner) / 4.0;
            for q in 0..4 {
                let off = inner + (q as f64 + 0.5) * w;
                vals.push(w * f(end + sign * off));
            }
            outer = inner;
        }
        // innermost sliver [0, outer]
        let w = outer / 2.0;
        for q in 0..2 {
            let off = (q as f64 + 0.5) * w;
            vals.push(w * f(end + sign * off));
        }
    }
    pairwise_sum(&vals)
}

/// Integral of |dh|^2 (h = e^g) over the annulus r_lo <= |z| <= r_hi with the
/// level set E = { |Re g| <= |z|^delta } excised per radius.
pub fn tail_integral(
    g: &Polynomial,
    delta: f64,
    r_lo: f64,
    r_hi: f64,
    quad: &QuadConfig,
) -> Result<f64> {
    require_degree_at_least_2(g)?;
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid("delta must lie in (0, 1]"));
    }
    if !(r_lo >= 1.0 && r_lo < r_hi) {
        return Err(Error::invalid("need 1 <= r_lo < r_hi"));
    }
    let n_r = quad.radial_points.max(16);
    let dr = (r_hi - r_lo) / n_r as f64;
    let mut per_radius = Vec::with_capacity(n_r);
    for i in 0..n_r {
        let r = r_lo + (i as f64 + 0.5) * dr;
        let inside = sub_threshold_intervals(g, r, r.powf(delta), quad.angular_scan)?;
        let outside = inside.complement();
        let f = |theta: f64| {
            let v = component_norm(g, Complex64::from_polar(r, theta)).unwrap_or(0.0);
            v * v
        };
        let mut ring = 0.0;
        for &(a, b) in &outside {
            ring += integrate_graded(&f, a, b, 48);
        }
        per_radius.push(ring * r * dr);
    }
    Ok(pairwise_sum(&per_radius))
}

/// The E / E^c split of T(r, f) = int_1^r dt/t int_{|z|<=t} |df|^2.
///
/// E is the union, over components with deg g_i >= threshold + 2 and pairwise
/// differences with deg >= threshold + 2, of { |Re (.)| <= |z|^delta }. The
/// threshold defaults to the curve's own m, in which case E is empty by
/// construction; a synthetic threshold exercises the non-empty branch.
pub fn split_integral_profile(
    curve: &ExpPolyCurve,
    r: f64,
    delta: f64,
    quad: &QuadConfig,
    synthetic_threshold: Option<i64>,
) -> Result<(f64, f64)> {
    if !(r >= 1.0) {
        return Err(Error::invalid("split integral needs r >= 1"));
    }
    if !(delta > 0.0 && delta <= 1.0) {
        return Err(Error::invalid("delta must lie in (0, 1]"));
    }
    if curve.is_constant() {
        return Ok((0.0, 0.0));
    }
    let m_thr = synthetic_threshold.unwrap_or_else(|| curve.growth_degree());
    let mut excess: Vec<Polynomial> = Vec::new();
    for g in curve.exponents() {
        if (g.growth_degree() as i64) >= m_thr + 2 {
            excess.push(g.clone());
        }
    }
    for (i, j) in curve.pairs() {
        let d = curve.pairwise_difference(i, j)?;
        if (d.growth_degree() as i64) >= m_thr + 2 {
            excess.push(d);
        }
    }

    let density = |s: f64, theta: f64| {
        fs_density(curve, Complex64::from_polar(s, theta)).unwrap_or(0.0)
    };
    let split_circle = |s: f64| -> Result<(f64, f64)> {
        if s <= 0.0 {
            return Ok((0.0, 0.0));
        }
        let mut union: Vec<(f64, f64)> = Vec::new();
        for g in &excess {
            // narrow sub-ulp records are measure-zero holes for quadrature
            union.extend(sub_threshold_intervals(g, s, s.powf(delta), quad.angular_scan)?.spans);
        }
        let inside = merge_circular(union);
        let outside = complement_intervals(&inside);
        let integrate = |segments: &[(f64, f64)]| -> f64 {
            segments
                .iter()
                .map(|&(a, b)| {
                    let f = |theta: f64| density(s, theta);
                    // scale-aware absolute tolerance
                    let probe = (0..9)
                        .map(|q| f(a + (b - a) * q as f64 / 8.0))
                        .fold(0.0f64, f64::max);
                    let tol = 1e-11 * probe.max(1e-30) * (b - a);
                    adaptive_simpson(&f, a, b, tol)
                })
                .sum()
        };
        Ok((integrate(&inside), integrate(&outside)))
    };

    // T(r) = int_0^r s C(s) log(r / max(s,1)) ds, split into the two parts
    let n = quad.radial_points.max(16);
    let mut on_e = 0.0;
    let mut off_e = 0.0;
    for (a, b) in [(0.0, 1.0), (1.0, r)] {
        if b <= a {
            continue;
        }
        let nn = n + n % 2;
        let h = (b - a) / nn as f64;
        let mut acc_on = Vec::with_capacity(nn + 1);
        let mut acc_off = Vec::with_capacity(nn + 1);
        for j in 0..=nn {
            let s = a + j as f64 * h;
            let w = if j == 0 || j == nn {
                1.0
            } else if j % 2 == 1 {
                4.0
            } else {
                2.0
            };
            let (ci, co) = split_circle(s)?;
            let weight = s * (r / s.max(1.0)).ln();
            acc_on.push(w * ci * weight);
            acc_off.push(w * co * weight);
        }
        on_e += pairwise_sum(&acc_on) * h / 3.0;
        off_e += pairwise_sum(&acc_off) * h / 3.0;
    }
    Ok((on_e, off_e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::Polynomial;

    fn poly(coeffs: &[(f64, f64)]) -> Polynomial {
        Polynomial::from_pairs(coeffs).unwrap()
    }

    fn z_pow(k: usize, scale: f64) -> Polynomial {
        let mut coeffs = vec![(0.0, 0.0); k];
        coeffs.push((scale, 0.0));
        poly(&coeffs)
    }

    #[test]
    fn measure_examples() {
        // g = z^2, r = 100, delta = 1: measure = 4 arcsin(1/r) ~ 0.04
        let g = z_pow(2, 1.0);
        let m = level_set_measure(&g, 100.0, 1.0, 4096).unwrap();
        let exact = 2.0 * (1.0f64 / 100.0).asin() * 2.0;
        assert!((m - exact).abs() < 1e-9 * exact, "{m} vs {exact}");
        assert!(m <= 8.0 / 100.0);

        // g = 2 z^3, r = 100: measure ~ 2e-4, bound 4e-4
        let g = z_pow(3, 2.0);
        let m = level_set_measure(&g, 100.0, 1.0, 4096).unwrap();
        assert!((m - 2e-4).abs() < 3e-6, "{m}");
        assert!(m <= 8.0 / (2.0 * 100.0 * 100.0));

        // threshold exceeding the function's range: whole circle
        let g = z_pow(2, 1.0);
        let m = level_set_measure(&g, 0.5, 1.0, 4096).unwrap();
        assert_eq!(m, TAU);

        assert!(level_set_measure(&g, -1.0, 1.0, 4096).is_err());
        assert!(level_set_measure(&g, 2.0, 1.5, 4096).is_err());
        assert!(level_set_measure(&g, 2.0, 1.0, 100).is_err());
    }

    #[test]
    fn measure_resolves_sub_ulp_intervals() {
        // g = z^6 at r = 1e4: per-interval width ~ 2e-20, measure 4/r^5
        let g = z_pow(6, 1.0);
        let r = 1e4;
        let m = level_set_measure(&g, r, 1.0, 4096).unwrap();
        let expected = 4.0 / r.powi(5);
        assert!(
            (m - expected).abs() < 1e-3 * expected,
            "{m} vs {expected}"
        );
    }

    #[test]
    fn delta_variant_scaling() {
        let g = z_pow(3, 2.0);
        let r = 1e3;
        let m = level_set_measure(&g, r, 0.5, 4096).unwrap();
        let expected = 4.0 / (2.0 * r.powf(2.5));
        assert!((m - expected).abs() < 1e-2 * expected, "{m} vs {expected}");
    }

    #[test]
    fn report_ratio_converges_to_four() {
        let g = z_pow(2, 1.0);
        let radii = [10.0, 100.0, 1e3, 1e4];
        let reps = level_set_report(&g, 1.0, &radii, 4096, 8.0).unwrap();
        let last = reps.last().unwrap();
        assert!(last.ratio > 3.8 && last.ratio < 4.2, "{}", last.ratio);
        assert!(reps.iter().all(|r| r.measure <= r.bound));
        assert_eq!(last.r0_empirical, Some(10.0));
    }

    #[test]
    fn monic_examples() {
        // g = z^2 + z, C = 1, r = 1e3
        let g = poly(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0)]);
        let reps = monic_bound_check(&g, 1.0, &[1e3]).unwrap();
        assert!(reps[0].measure <= 8e-3);
        assert!((reps[0].ratio - 4.0).abs() < 0.05, "{}", reps[0].ratio);

        // g = z^2, C = 2, r = 1e3
        let g = z_pow(2, 1.0);
        let reps = monic_bound_check(&g, 2.0, &[1e3]).unwrap();
        assert!((reps[0].bound - 16e-3).abs() < 1e-15);
        assert!((reps[0].measure - 8e-3).abs() < 1e-4);

        // threshold above the whole range: full circle
        let reps = monic_bound_check(&g, 1.0, &[0.5]).unwrap();
        assert_eq!(reps[0].measure, TAU);

        // g = z^2 + 20z at r = 20: Re g has a degenerate double root at
        // theta = pi (~ -1.5 s^2 after rescaling), so the measure scales like
        // sqrt(C/r) there and exceeds the 8C/r bound -- this is the below-r0
        // regime the bound explicitly does not cover
        let g = poly(&[(0.0, 0.0), (20.0, 0.0), (1.0, 0.0)]);
        let reps = monic_bound_check(&g, 1.0, &[20.0]).unwrap();
        assert!(
            reps[0].measure > reps[0].bound,
            "{} !> {}",
            reps[0].measure,
            reps[0].bound
        );
        assert_eq!(reps[0].r0_empirical, None);

        // not monic
        let g = z_pow(2, 2.0);
        assert!(monic_bound_check(&g, 1.0, &[10.0]).is_err());
        // degree < 2
        assert!(monic_bound_check(&poly(&[(0.0, 0.0), (1.0, 0.0)]), 1.0, &[10.0]).is_err());
    }

    #[test]
    fn cos_level_examples() {
        use std::f64::consts::PI;
        // k = 1 on [0, pi]: 2 arcsin t <= 4t
        let m = cos_level_measure(1, |_| 0.0, 0.1, 1_000_000, 0.0, PI);
        let exact = 2.0 * 0.1f64.asin();
        assert!((m - exact).abs() < 1e-5, "{m} vs {exact}");
        assert!(m <= 0.4);

        // k = 3 on [0, 2pi]: 4 arcsin t <= 8t
        let m = cos_level_measure(3, |_| 0.0, 0.05, 1_000_000, 0.0, TAU);
        let exact = 4.0 * 0.05f64.asin();
        assert!((m - exact).abs() < 1e-5, "{m} vs {exact}");
        assert!(m <= 0.4);

        // t = 0: measure 0 up to grid resolution
        let m = cos_level_measure(4, |_| 0.0, 0.0, 1_000_000, 0.0, TAU);
        assert!(m < 1e-4);
    }

    #[test]
    fn tail_integral_examples() {
        let g = z_pow(2, 1.0);
        let quad = QuadConfig::default();
        let v = tail_integral(&g, 1.0, 50.0, 100.0, &quad).unwrap();
        assert!(v >= 0.0 && v < 1e-15, "{v}");

        // successive annuli strictly decreasing
        let mut prev = f64::INFINITY;
        for j in 3..=8u32 {
            let v = tail_integral(&g, 1.0, 2f64.powi(j as i32), 2f64.powi(j as i32 + 1), &quad)
                .unwrap();
            assert!(v < prev, "annulus j={j}: {v} !< {prev}");
            prev = v;
        }
    }

    #[test]
    fn split_integral_examples() {
        let quad = QuadConfig {
            radial_points: 64,
            angular_scan: 4096,
        };
        // exp-poly input: E empty, everything lands off E
        let z2 = z_pow(2, 1.0);
        let curve = ExpPolyCurve::new(vec![z2]).unwrap();
        let (on, off) = split_integral_profile(&curve, 3.0, 1.0, &quad, None).unwrap();
        assert_eq!(on, 0.0);
        assert!(off > 0.0);

        // synthetic threshold m = 0 against g = z^3: both parts positive
        let z3 = z_pow(3, 1.0);
        let curve = ExpPolyCurve::new(vec![z3]).unwrap();
        let (on, off) = split_integral_profile(&curve, 3.0, 1.0, &quad, Some(0)).unwrap();
        assert!(on > 0.0 && off > 0.0);

        // constant curve
        let constant = ExpPolyCurve::new(vec![poly(&[(5.0, 0.0)])]).unwrap();
        assert_eq!(
            split_integral_profile(&constant, 4.0, 1.0, &quad, None).unwrap(),
            (0.0, 0.0)
        );
    }
}
