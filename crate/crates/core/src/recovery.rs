//! Schwarz-formula reconstruction: recover the Taylor coefficients of an
//! exponent polynomial g from circle samples of log|e^g| = Re g, detect
//! degrees, and run the end-to-end growth/degree consistency check.
//!
//! Only Re g is ever sampled, so g is determined up to an additive purely
//! imaginary constant; reconstruction fixes Im g(0) = 0.

use crate::asymptotics::growth_exponent;
use crate::curve::{ExpPolyCurve, Polynomial};
use crate::error::{Error, Result};
use crate::numerics::pairwise_sum;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::TAU;

/// Uniform angular samples of a real function on the circle |z| = r.
///
/// For recovery the values are log|f(r e^{2 pi i j / N})| of a zero-free
/// entire f; black-box callers may fill them from any external source.
#[derive(Debug, Clone)]
pub struct CircleSamples {
    r: f64,
    values: Vec<f64>,
}

impl CircleSamples {
    pub fn new(r: f64, values: Vec<f64>) -> Result<Self> {
        if !(r > 0.0) || !r.is_finite() {
            return Err(Error::invalid("sample radius must be positive and finite"));
        }
        if values.len() < 64 || !values.len().is_power_of_two() {
            return Err(Error::invalid(
                "sample count must be a power of two >= 64",
            ));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite circle sample"));
        }
        Ok(CircleSamples { r, values })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        pairwise_sum(&self.values) / self.len() as f64
    }
}

/// Exact Re g on N uniform angles of |z| = r; stays in the log domain, no
/// exponentiation anywhere.
pub fn poly_circle_samples(g: &Polynomial, r: f64, n: usize) -> Result<CircleSamples> {
    let values = (0..n)
        .map(|j| g.real_part_on_circle(r, j as f64 * TAU / n as f64))
        .collect();
    CircleSamples::new(r, values)
}

/// Samples of log|f_i| = Re g_i for component i of a curve.
pub fn circle_log_samples(
    curve: &ExpPolyCurve,
    i: usize,
    r: f64,
    n: usize,
) -> Result<CircleSamples> {
    poly_circle_samples(curve.exponent(i)?, r, n)
}

/// Schwarz coefficient a_k = g^{(k)}(0) / k! from circle samples of Re g:
///
///   a_k = (1 / (pi r^k)) * (2 pi / N) * sum_j values[j] e^{-i k theta_j}
///
/// Exact to roundoff whenever N > 2 deg g.
pub fn schwarz_coefficient(samples: &CircleSamples, k: usize) -> Result<Complex64> {
    let n = samples.len();
    if k == 0 || k > n / 2 - 1 {
        return Err(Error::invalid(format!(
            "harmonic index k = {k} outside the Nyquist-safe range 1..={}",
            n / 2 - 1
        )));
    }
    let mut re = Vec::with_capacity(n);
    let mut im = Vec::with_capacity(n);
    for (j, &v) in samples.values().iter().enumerate() {
        let phase = -(k as f64) * (j as f64) * TAU / n as f64;
        re.push(v * phase.cos());
        im.push(v * phase.sin());
    }
    let scale = 2.0 / (n as f64 * samples.r().powi(k as i32));
    Ok(Complex64::new(
        pairwise_sum(&re) * scale,
        pairwise_sum(&im) * scale,
    ))
}

#[derive(Debug, Clone, Serialize)]
pub struct RecoveredPolynomial {
    /// a_0 ... a_{k_max}, with Im a_0 fixed to 0 (gauge) and coefficients
    /// below the noise threshold zeroed
    pub coefficients: Vec<(f64, f64)>,
    /// |a_k(r_1) - a_k(r_2)| per coefficient
    pub discrepancies: Vec<f64>,
    /// the detected degree: largest surviving k, 0 for constants
    pub degree: usize,
}

impl RecoveredPolynomial {
    pub fn polynomial(&self) -> Polynomial {
        Polynomial::new(
            self.coefficients
                .iter()
                .map(|&(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }
}

/// Two-radius Schwarz recovery. A true coefficient is radius-independent;
/// quadrature and noise artifacts are not, so a coefficient only survives if
/// it is above the tolerance at both radii and the two radii agree.
pub fn recover_polynomial(
    s1: &CircleSamples,
    s2: &CircleSamples,
    k_max: usize,
    tol: f64,
) -> Result<RecoveredPolynomial> {
    if s1.r() == s2.r() {
        return Err(Error::invalid("recovery needs two distinct radii"));
    }
    if k_max < 1 {
        return Err(Error::invalid("k_max must be >= 1"));
    }
    let nyquist = s1.len().min(s2.len()) / 2 - 1;
    if k_max > nyquist {
        return Err(Error::invalid(format!(
            "k_max = {k_max} beyond the Nyquist-safe range (max {nyquist})"
        )));
    }
    let (outer, inner) = if s1.r() > s2.r() { (s1, s2) } else { (s2, s1) };

    let mut a_outer = vec![Complex64::new(outer.mean(), 0.0)];
    let mut a_inner = vec![Complex64::new(inner.mean(), 0.0)];
    for k in 1..=k_max {
        a_outer.push(schwarz_coefficient(outer, k)?);
        a_inner.push(schwarz_coefficient(inner, k)?);
    }
    let scale = a_outer
        .iter()
        .chain(&a_inner)
        .map(|c| c.norm())
        .fold(1.0f64, f64::max);

    let mut coefficients = Vec::with_capacity(k_max + 1);
    let mut discrepancies = Vec::with_capacity(k_max + 1);
    let mut degree = 0;
    for k in 0..=k_max {
        let d = (a_outer[k] - a_inner[k]).norm();
        discrepancies.push(d);
        let survives =
            k == 0 || (a_outer[k].norm() >= tol * scale && a_inner[k].norm() >= tol * scale);
        if survives {
            coefficients.push((a_outer[k].re, a_outer[k].im));
            if k > 0 && d < tol * scale {
                degree = k;
            }
        } else {
            coefficients.push((0.0, 0.0));
        }
    }
    Ok(RecoveredPolynomial {
        coefficients,
        discrepancies,
        degree,
    })
}

/// Largest k with a surviving, cross-radius-consistent coefficient
/// (0 for constants).
pub fn detect_degree(
    s1: &CircleSamples,
    s2: &CircleSamples,
    k_max: usize,
    tol: f64,
) -> Result<usize> {
    Ok(recover_polynomial(s1, s2, k_max, tol)?.degree)
}

/// Default sample count for recovery circles.
pub const DEFAULT_SAMPLES: usize = 4096;
/// Default coefficient noise threshold.
pub const DEFAULT_TOL: f64 = 1e-8;
/// Radii used when the curve itself is sampled.
pub const RECOVERY_RADII: (f64, f64) = (2.0, 5.0);

#[derive(Debug, Clone, Serialize)]
pub struct Theorem1Report {
    /// m from the exponent degrees (ground truth for exp-poly input)
    pub m: i64,
    /// m from the measured growth-exponent slope
    pub m_hat: i64,
    pub slope: f64,
    pub component_degrees: Vec<usize>,
    /// (i, j, detected degree) for each non-trivial pairwise difference
    pub difference_degrees: Vec<(usize, usize, usize)>,
    pub max_detected: usize,
    /// all detected degrees <= m_hat + 1
    pub degrees_bounded: bool,
    /// max detected degree == m_hat + 1
    pub max_attained: bool,
    pub pass: bool,
    pub constant: bool,
}

/// End-to-end consistency check of the growth/degree characterization:
/// estimate m from the derivative growth, Schwarz-detect the degree of every
/// component and pairwise difference, and require every degree <= m_hat + 1
/// with the maximum attained.
pub fn theorem1_verify(curve: &ExpPolyCurve, r_max: f64) -> Result<Theorem1Report> {
    let m = curve.growth_degree();
    if curve.is_constant() {
        return Ok(Theorem1Report {
            m,
            m_hat: -1,
            slope: f64::NEG_INFINITY,
            component_degrees: vec![0; curve.n()],
            difference_degrees: Vec::new(),
            max_detected: 0,
            degrees_bounded: true,
            max_attained: true,
            pass: true,
            constant: true,
        });
    }
    let est = growth_exponent(curve, 1.0, r_max, 13)?;
    let m_hat = est.slope.round() as i64;

    let detect = |g: &Polynomial| -> Result<usize> {
        let s1 = poly_circle_samples(g, RECOVERY_RADII.0, DEFAULT_SAMPLES)?;
        let s2 = poly_circle_samples(g, RECOVERY_RADII.1, DEFAULT_SAMPLES)?;
        detect_degree(&s1, &s2, 16, DEFAULT_TOL)
    };

    let mut component_degrees = Vec::with_capacity(curve.n());
    for g in curve.exponents() {
        component_degrees.push(detect(g)?);
    }
    let mut difference_degrees = Vec::new();
    for (i, j) in curve.pairs() {
        let d = curve.pairwise_difference(i, j)?;
        difference_degrees.push((i, j, detect(&d)?));
    }

    let max_detected = component_degrees
        .iter()
        .copied()
        .chain(difference_degrees.iter().map(|&(_, _, d)| d))
        .max()
        .unwrap_or(0);
    let bound = (m_hat + 1).max(0) as usize;
    let degrees_bounded = component_degrees
        .iter()
        .all(|&d| d <= bound)
        && difference_degrees.iter().all(|&(_, _, d)| d <= bound);
    let max_attained = max_detected == bound;
    Ok(Theorem1Report {
        m,
        m_hat,
        slope: est.slope,
        component_degrees,
        difference_degrees,
        max_detected,
        degrees_bounded,
        max_attained,
        pass: degrees_bounded && max_attained,
        constant: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(coeffs: &[(f64, f64)]) -> Polynomial {
        Polynomial::from_pairs(coeffs).unwrap()
    }

    #[test]
    fn sample_examples() {
        let constant = poly(&[(5.0, 0.0)]);
        let s = poly_circle_samples(&constant, 3.0, 64).unwrap();
        assert!(s.values().iter().all(|&v| v == 5.0));

        let z = poly(&[(0.0, 0.0), (1.0, 0.0)]);
        let s = poly_circle_samples(&z, 2.0, 128).unwrap();
        for (j, &v) in s.values().iter().enumerate() {
            let expected = 2.0 * (TAU * j as f64 / 128.0).cos();
            assert!((v - expected).abs() < 1e-14);
        }

        let iz = poly(&[(0.0, 0.0), (0.0, 1.0)]);
        let s = poly_circle_samples(&iz, 1.0, 128).unwrap();
        for (j, &v) in s.values().iter().enumerate() {
            let expected = -(TAU * j as f64 / 128.0).sin();
            assert!((v - expected).abs() < 1e-14);
        }

        assert!(poly_circle_samples(&z, 2.0, 100).is_err());
        let curve = ExpPolyCurve::new(vec![z]).unwrap();
        assert!(circle_log_samples(&curve, 3, 2.0, 128).is_err());
    }

    #[test]
    fn schwarz_examples() {
        let g = poly(&[(5.0, 0.0), (1.0, 2.0), (3.0, 0.0)]);
        let s = poly_circle_samples(&g, 2.0, 1024).unwrap();
        let a2 = schwarz_coefficient(&s, 2).unwrap();
        assert!((a2 - Complex64::new(3.0, 0.0)).norm() < 1e-10 * 3.0);
        let a1 = schwarz_coefficient(&s, 1).unwrap();
        assert!((a1 - Complex64::new(1.0, 2.0)).norm() < 1e-10 * 5f64.sqrt());
        let a5 = schwarz_coefficient(&s, 5).unwrap();
        assert!(a5.norm() < 1e-12);

        // r-independence for exact samples
        let z = poly(&[(0.0, 0.0), (1.0, 0.0)]);
        for r in [0.5, 2.0, 17.0] {
            let s = poly_circle_samples(&z, r, 256).unwrap();
            let a1 = schwarz_coefficient(&s, 1).unwrap();
            assert!((a1 - Complex64::ONE).norm() < 1e-13, "r = {r}");
        }

        let s = poly_circle_samples(&z, 1.0, 64).unwrap();
        assert!(schwarz_coefficient(&s, 0).is_err());
        assert!(schwarz_coefficient(&s, 32).is_err());
    }

    #[test]
    fn recover_examples() {
        // z^3 + 2
        let g = poly(&[(2.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]);
        let s1 = poly_circle_samples(&g, 2.0, 4096).unwrap();
        let s2 = poly_circle_samples(&g, 5.0, 4096).unwrap();
        let rec = recover_polynomial(&s1, &s2, 8, 1e-8).unwrap();
        assert_eq!(rec.degree, 3);
        let expected = [(2.0, 0.0), (0.0, 0.0), (0.0, 0.0), (1.0, 0.0)];
        for (k, &(re, im)) in expected.iter().enumerate() {
            let (gre, gim) = rec.coefficients[k];
            assert!((gre - re).abs() < 1e-10 && (gim - im).abs() < 1e-10, "k={k}");
        }
        assert!(rec.discrepancies.iter().all(|&d| d < 1e-10));

        // gauge: imaginary part of the constant term is lost
        let g = poly(&[(5.0, 7.0)]);
        let s1 = poly_circle_samples(&g, 2.0, 128).unwrap();
        let s2 = poly_circle_samples(&g, 3.0, 128).unwrap();
        let rec = recover_polynomial(&s1, &s2, 4, 1e-8).unwrap();
        assert_eq!(rec.degree, 0);
        assert!((rec.coefficients[0].0 - 5.0).abs() < 1e-12);
        assert_eq!(rec.coefficients[0].1, 0.0);

        // same radius rejected
        assert!(recover_polynomial(&s1, &s1, 4, 1e-8).is_err());
    }

    #[test]
    fn recovery_with_noise() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let g = poly(&[(0.0, 0.0), (1.0, 2.0)]);
        let mut make = |r: f64| {
            let clean = poly_circle_samples(&g, r, 4096).unwrap();
            let noisy: Vec<f64> = clean
                .values()
                .iter()
                .map(|&v| v + 1e-8 * (rng.random::<f64>() - 0.5))
                .collect();
            CircleSamples::new(r, noisy).unwrap()
        };
        let rec = recover_polynomial(&make(2.0), &make(5.0), 8, 1e-6).unwrap();
        assert_eq!(rec.degree, 1);
        let a1 = Complex64::new(rec.coefficients[1].0, rec.coefficients[1].1);
        assert!((a1 - Complex64::new(1.0, 2.0)).norm() < 1e-7);
        for k in 2..=8 {
            assert_eq!(rec.coefficients[k], (0.0, 0.0), "k={k} not zeroed");
        }
    }

    #[test]
    fn detect_degree_examples() {
        let z5 = poly(&[(0.0, 0.0); 5].iter().copied().chain([(1.0, 0.0)]).collect::<Vec<_>>().as_slice());
        let s1 = poly_circle_samples(&z5, 2.0, 4096).unwrap();
        let s2 = poly_circle_samples(&z5, 5.0, 4096).unwrap();
        assert_eq!(detect_degree(&s1, &s2, 16, 1e-8).unwrap(), 5);

        let c = poly(&[(3.0, -1.0)]);
        let s1 = poly_circle_samples(&c, 2.0, 256).unwrap();
        let s2 = poly_circle_samples(&c, 5.0, 256).unwrap();
        assert_eq!(detect_degree(&s1, &s2, 8, 1e-8).unwrap(), 0);
    }

    #[test]
    fn theorem1_examples() {
        // g = (z^2, z): m = 1, degrees {2, 1}, difference degree 2
        let curve = ExpPolyCurve::new(vec![
            poly(&[(0.0, 0.0), (0.0, 0.0), (1.0, 0.0)]),
            poly(&[(0.0, 0.0), (1.0, 0.0)]),
        ])
        .unwrap();
        let rep = theorem1_verify(&curve, 1e5).unwrap();
        assert_eq!(rep.m_hat, 1);
        assert_eq!(rep.component_degrees, vec![2, 1]);
        assert!(rep.pass, "{rep:?}");

        // constant curve: trivial pass
        let constant = ExpPolyCurve::new(vec![poly(&[(1.0, 2.0)])]).unwrap();
        let rep = theorem1_verify(&constant, 1e5).unwrap();
        assert!(rep.pass && rep.constant && rep.m == -1);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn round_trip_on_random_polynomials(
            coeffs in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1..9)
        ) {
            let g = Polynomial::from_pairs(&coeffs).unwrap();
            let s1 = poly_circle_samples(&g, 2.0, 4096).unwrap();
            let s2 = poly_circle_samples(&g, 5.0, 4096).unwrap();
            let rec = recover_polynomial(&s1, &s2, 12, 1e-9).unwrap();
            let scale = coeffs
                .iter()
                .map(|&(re, im)| Complex64::new(re, im).norm())
                .fold(1.0f64, f64::max);
            for k in 0..=12 {
                let truth = if k < coeffs.len() {
                    Complex64::new(coeffs[k].0, if k == 0 { 0.0 } else { coeffs[k].1 })
                } else {
                    Complex64::ZERO
                };
                let got = Complex64::new(rec.coefficients[k].0, rec.coefficients[k].1);
                // zeroing may null out genuinely tiny coefficients; allow either
                let err = (got - truth).norm();
                prop_assert!(
                    err <= 2e-9 * scale,
                    "k={} err={} truth={} got={}", k, err, truth, got
                );
            }
        }

        #[test]
        fn gauge_shift_changes_nothing(beta in -10.0..10.0f64) {
            let g = poly(&[(1.0, 0.0), (0.5, -0.25), (0.0, 0.0), (2.0, 1.0)]);
            let shifted = poly(&[(1.0, beta), (0.5, -0.25), (0.0, 0.0), (2.0, 1.0)]);
            let rec = |p: &Polynomial| {
                let s1 = poly_circle_samples(p, 2.0, 1024).unwrap();
                let s2 = poly_circle_samples(p, 5.0, 1024).unwrap();
                recover_polynomial(&s1, &s2, 8, 1e-8).unwrap()
            };
            let a = rec(&g);
            let b = rec(&shifted);
            for k in 0..=8 {
                let (ar, ai) = a.coefficients[k];
                let (br, bi) = b.coefficients[k];
                prop_assert!((ar - br).abs() < 1e-11 && (ai - bi).abs() < 1e-11);
            }
        }
    }
}
