//! Exact representation of exponent polynomials and exponential-polynomial
//! curves [1 : e^{g_1} : ... : e^{g_n}] in the torus embedding of CP^n,
//! including the degree bookkeeping that defines the growth degree m.

use crate::error::{Error, Result};
use num_complex::Complex64;

/// A complex polynomial in one variable, stored by ascending power.
///
/// Trailing coefficients that are exactly zero are trimmed at construction;
/// no epsilon trimming is ever applied, since the degree is a discrete
/// quantity that the growth theory depends on. The zero polynomial is the
/// empty coefficient list and has no degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<Complex64>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| c.re == 0.0 && c.im == 0.0) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Polynomial::new(vec![c])
    }

    /// Convenience constructor from (re, im) pairs, ascending powers.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        for &(re, im) in pairs {
            if !re.is_finite() || !im.is_finite() {
                return Err(Error::invalid("non-finite polynomial coefficient"));
            }
        }
        Ok(Polynomial::new(
            pairs.iter().map(|&(re, im)| Complex64::new(re, im)).collect(),
        ))
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs.get(k).copied().unwrap_or(Complex64::ZERO)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree of the polynomial; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with constants (including the zero polynomial) counted as 0.
    /// This is the convention entering the definition of m.
    pub fn growth_degree(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading_coefficient(&self) -> Option<Complex64> {
        self.coeffs.last().copied()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::ZERO;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Re g(r e^{i theta}), the quantity every circle routine samples.
    pub fn real_part_on_circle(&self, r: f64, theta: f64) -> f64 {
        self.eval(Complex64::from_polar(r, theta)).re
    }

    /// Formal derivative, trimmed.
    pub fn derivative(&self) -> Polynomial {
        if self.coeffs.len() <= 1 {
            return Polynomial::zero();
        }
        Polynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, &c)| c * (k as f64 + 1.0))
                .collect(),
        )
    }

    /// self - other, trimmed (the degree may drop below both inputs).
    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        Polynomial::new((0..len).map(|k| self.coeff(k) - other.coeff(k)).collect())
    }
}

/// The curve f = [1 : e^{g_1} : ... : e^{g_n}] determined by its exponent
/// polynomials. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpPolyCurve {
    exponents: Vec<Polynomial>,
}

impl ExpPolyCurve {
    pub fn new(exponents: Vec<Polynomial>) -> Result<Self> {
        if exponents.is_empty() {
            return Err(Error::invalid("a curve needs at least one exponent polynomial"));
        }
        Ok(ExpPolyCurve { exponents })
    }

    pub fn exponents(&self) -> &[Polynomial] {
        &self.exponents
    }

    pub fn exponent(&self, i: usize) -> Result<&Polynomial> {
        self.exponents
            .get(i)
            .ok_or_else(|| Error::invalid(format!("component index {i} out of range")))
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    /// The integer m >= -1 with m + 1 = max_i deg g_i, constants counted as
    /// degree 0. m = -1 exactly when the curve is constant.
    pub fn growth_degree(&self) -> i64 {
        let max_deg = self
            .exponents
            .iter()
            .map(|g| g.growth_degree())
            .max()
            .unwrap_or(0);
        max_deg as i64 - 1
    }

    pub fn is_constant(&self) -> bool {
        self.growth_degree() == -1
    }

    /// g_i - g_j for 0 <= i < j < n, trimmed.
    pub fn pairwise_difference(&self, i: usize, j: usize) -> Result<Polynomial> {
        if i >= j || j >= self.n() {
            return Err(Error::invalid(format!(
                "pair indices ({i}, {j}) out of range for n = {}",
                self.n()
            )));
        }
        Ok(self.exponents[i].sub(&self.exponents[j]))
    }

    /// All component index pairs (i, j), i < j.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let n = self.n();
        (0..n).flat_map(move |i| (i + 1..n).map(move |j| (i, j)))
    }
}
