//! Exact dyadic and double-double arithmetic for resolving angular peaks that
//! fall between representable angles.
//!
//! For an exponent polynomial of degree k the real part u(theta) on |z| = r
//! moves by roughly k |a_k| r^k per radian. Once that slope exceeds 1/ulp(theta)
//! no representable angle lands anywhere near the zero of u, and the circle
//! maximum of the Fubini-Study density (attained where the dominant exponent
//! crosses zero) is unreachable by pointwise double-precision sampling: every
//! sample of u is off by at least slope * ulp(theta), which can be 1e8 or more.
//!
//! The cure implemented here: parametrize the circle locally as
//! z(t) = z0 * q(t) with q a degree-5 Taylor polynomial of e^{it}, let the
//! offset t be an exact sum of several doubles (so sub-ulp offsets are
//! representable), and evaluate the exponent polynomials at z(t) in exact
//! dyadic (big-integer mantissa) arithmetic, compressed to ~320 bits between
//! operations. Doubles in, dyadic rationals throughout, so the catastrophic
//! cancellation near the zero of u costs nothing. The hot refinement loop uses
//! a Taylor expansion around an exactly-evaluated base point in double-double
//! arithmetic instead, which is ~100x faster and accurate to the base point's
//! compression error.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};

/// Mantissa width kept after each dyadic operation. Relative error per
/// operation is 2^-320 ~ 5e-97, far below anything the density assembly needs.
const COMPRESS_BITS: u64 = 320;

/// x * 2^e without intermediate overflow.
fn ldexp(x: f64, e: i64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    let mut x = x;
    let mut e = e;
    while e > 900 {
        x *= 2f64.powi(900);
        e -= 900;
        if !x.is_finite() {
            return x;
        }
    }
    while e < -900 {
        x *= 2f64.powi(-900);
        e += 900;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// A dyadic rational mant * 2^exp with an arbitrary-precision mantissa.
#[derive(Debug, Clone)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic {
            mant: BigInt::zero(),
            exp: 0,
        }
    }

    /// Exact conversion; panics on non-finite input.
    pub fn from_f64(x: f64) -> Dyadic {
        assert!(x.is_finite(), "dyadic conversion of non-finite {x}");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let biased = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & 0x000f_ffff_ffff_ffff;
        let (m, e) = if biased == 0 {
            (frac, -1074)
        } else {
            (frac | (1 << 52), biased - 1075)
        };
        Dyadic {
            mant: BigInt::from(sign) * BigInt::from(m),
            exp: e,
        }
    }

    /// Exact sum of a list of doubles (e.g. a multi-limb angular offset).
    pub fn from_parts(parts: &[f64]) -> Dyadic {
        let mut acc = Dyadic::zero();
        for &p in parts {
            acc = acc.add(&Dyadic::from_f64(p));
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    fn compress(mut self) -> Dyadic {
        let bits = self.mant.magnitude().bits();
        if bits > COMPRESS_BITS {
            let shift = bits - COMPRESS_BITS;
            self.mant >>= shift; // arithmetic shift: floor, error < 1 ulp
            self.exp += shift as i64;
        }
        self
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.exp <= other.exp {
            (self, other)
        } else {
            (other, self)
        };
        let shift = (hi.exp - lo.exp) as u64;
        // beyond ~2 * COMPRESS_BITS of separation the small addend only
        // matters as a sticky bit for the final rounding; cap the shift so a
        // pathological exponent gap cannot allocate a gigantic mantissa
        let cap = 4 * COMPRESS_BITS + 64;
        if shift > cap && hi.mant.magnitude().bits() + shift - cap > COMPRESS_BITS * 8 {
            return hi.clone();
        }
        Dyadic {
            mant: (&hi.mant << shift) + &lo.mant,
            exp: lo.exp,
        }
        .compress()
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic {
            mant: -&self.mant,
            exp: self.exp,
        }
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        Dyadic {
            mant: &self.mant * &other.mant,
            exp: self.exp + other.exp,
        }
        .compress()
    }

    pub fn cmp(&self, other: &Dyadic) -> std::cmp::Ordering {
        let d = self.sub(other);
        if d.mant.is_negative() {
            std::cmp::Ordering::Less
        } else if d.mant.is_zero() {
            std::cmp::Ordering::Equal
        } else {
            std::cmp::Ordering::Greater
        }
    }

    /// Nearest double, saturating to +-inf / +-0 far outside the exponent
    /// range.
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant.magnitude().bits();
        if bits <= 63 {
            return ldexp(self.mant.to_f64().unwrap_or(0.0), self.exp);
        }
        let shift = bits - 63;
        let top = (&self.mant >> shift).to_f64().unwrap_or(0.0);
        ldexp(top, self.exp + shift as i64)
    }

    /// Two-double (hi, lo) collapse: hi = nearest double, lo = nearest double
    /// of the remainder.
    pub fn to_dd(&self) -> Dd {
        let hi = self.to_f64();
        if !hi.is_finite() {
            return Dd { hi, lo: 0.0 };
        }
        let lo = self.sub(&Dyadic::from_f64(hi)).to_f64();
        Dd { hi, lo }
    }
}

/// Complex number with dyadic components.
#[derive(Debug, Clone)]
pub struct DyadicComplex {
    pub re: Dyadic,
    pub im: Dyadic,
}

impl DyadicComplex {
    pub fn from_c64(z: Complex64) -> DyadicComplex {
        DyadicComplex {
            re: Dyadic::from_f64(z.re),
            im: Dyadic::from_f64(z.im),
        }
    }

    pub fn zero() -> DyadicComplex {
        DyadicComplex {
            re: Dyadic::zero(),
            im: Dyadic::zero(),
        }
    }

    pub fn add(&self, other: &DyadicComplex) -> DyadicComplex {
        DyadicComplex {
            re: self.re.add(&other.re),
            im: self.im.add(&other.im),
        }
    }

    pub fn mul(&self, other: &DyadicComplex) -> DyadicComplex {
        DyadicComplex {
            re: self.re.mul(&other.re).sub(&self.im.mul(&other.im)),
            im: self.re.mul(&other.im).add(&self.im.mul(&other.re)),
        }
    }

    pub fn scale(&self, s: &Dyadic) -> DyadicComplex {
        DyadicComplex {
            re: self.re.mul(s),
            im: self.im.mul(s),
        }
    }

    pub fn to_dd(&self) -> DdComplex {
        DdComplex {
            re: self.re.to_dd(),
            im: self.im.to_dd(),
        }
    }
}

/// Horner evaluation of a double-coefficient polynomial at a dyadic point.
pub fn eval_poly(coeffs: &[Complex64], z: &DyadicComplex) -> DyadicComplex {
    let mut acc = DyadicComplex::zero();
    for &c in coeffs.iter().rev() {
        acc = acc.mul(z).add(&DyadicComplex::from_c64(c));
    }
    acc
}

/// Horner evaluation of a double-coefficient polynomial at a double-double
/// point.
pub fn eval_poly_dd(coeffs: &[Complex64], z: DdComplex) -> DdComplex {
    let mut acc = DdComplex::zero();
    for &c in coeffs.iter().rev() {
        acc = acc.mul(z).add(DdComplex::from_c64(c));
    }
    acc
}

/// Horner evaluation with dyadic coefficients (e.g. exactly-scaled derivative
/// coefficient lists).
pub fn eval_poly_dyadic(coeffs: &[DyadicComplex], z: &DyadicComplex) -> DyadicComplex {
    let mut acc = DyadicComplex::zero();
    for c in coeffs.iter().rev() {
        acc = acc.mul(z).add(c);
    }
    acc
}

// ---------------------------------------------------------------------------
// double-double (~106-bit) arithmetic for the refinement hot loop
// ---------------------------------------------------------------------------

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2.
#[derive(Debug, Clone, Copy)]
pub struct Dd {
    pub hi: f64,
    pub lo: f64,
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    (s, err)
}

#[inline]
fn quick_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let err = b - (s - a);
    (s, err)
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    let err = a.mul_add(b, -p);
    (p, err)
}

/// Reciprocal factorials 1/j! as double-doubles (lo limb from an exact FMA
/// residual), for the dd exponential's Taylor tail.
fn inv_factorials() -> &'static [Dd; 27] {
    use std::sync::OnceLock;
    static TABLE: OnceLock<[Dd; 27]> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut out = [Dd::from_f64(1.0); 27];
        let mut fact = 1.0f64;
        for (j, slot) in out.iter_mut().enumerate().skip(1) {
            fact *= j as f64;
            let hi = 1.0 / fact;
            let lo = (-fact).mul_add(hi, 1.0) / fact;
            *slot = Dd { hi, lo };
        }
        out
    })
}

impl Dd {
    pub fn from_f64(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }

    /// Exact sum of two doubles.
    pub fn from_sum(a: f64, b: f64) -> Dd {
        let (hi, lo) = two_sum(a, b);
        Dd { hi, lo }
    }

    pub fn zero() -> Dd {
        Dd { hi: 0.0, lo: 0.0 }
    }

    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }

    pub fn add(self, other: Dd) -> Dd {
        let (s, e) = two_sum(self.hi, other.hi);
        let e = e + self.lo + other.lo;
        let (hi, lo) = quick_two_sum(s, e);
        Dd { hi, lo }
    }

    pub fn sub(self, other: Dd) -> Dd {
        self.add(Dd {
            hi: -other.hi,
            lo: -other.lo,
        })
    }

    pub fn mul(self, other: Dd) -> Dd {
        let (p, e) = two_prod(self.hi, other.hi);
        let e = e + self.hi * other.lo + self.lo * other.hi;
        let (hi, lo) = quick_two_sum(p, e);
        Dd { hi, lo }
    }

    pub fn mul_f64(self, s: f64) -> Dd {
        self.mul(Dd::from_f64(s))
    }

    pub fn max(self, other: Dd) -> Dd {
        if self.to_f64() >= other.to_f64() {
            self
        } else {
            other
        }
    }

    /// e^x to double-double accuracy (argument reduction by ln 2, degree-26
    /// Taylor tail with dd reciprocal-factorial coefficients). Saturates to 0
    /// below the subnormal range and to +inf above the overflow threshold.
    pub fn exp(self) -> Dd {
        if self.hi.is_nan() {
            return Dd::from_f64(f64::NAN);
        }
        if self.hi < -745.0 {
            return Dd::zero();
        }
        if self.hi > 709.0 {
            return Dd::from_f64(f64::INFINITY);
        }
        const LN2_HI: f64 = std::f64::consts::LN_2;
        const LN2_LO: f64 = 2.3190468138462996e-17;
        let k = (self.hi / LN2_HI).round();
        let r = self.sub(Dd { hi: LN2_HI, lo: LN2_LO }.mul_f64(k));
        let table = inv_factorials();
        let mut p = table[26];
        for j in (0..26).rev() {
            p = p.mul(r).add(table[j]);
        }
        let e = k as i64;
        Dd {
            hi: ldexp(p.hi, e),
            lo: ldexp(p.lo, e),
        }
    }

    /// ln x to double-double accuracy via one Newton step off the double
    /// logarithm: y = y0 + (x e^{-y0} - 1). Requires x > 0.
    pub fn ln(self) -> Dd {
        let x = self.to_f64();
        if !(x > 0.0) || !x.is_finite() {
            return Dd::from_f64(x.ln());
        }
        let y0 = x.ln();
        let t = self.mul(Dd::from_f64(-y0).exp());
        Dd::from_f64(y0).add(t.sub(Dd::from_f64(1.0)))
    }
}

/// log(sum exp(x_i)) in double-double arithmetic. Same contract as the f64
/// version in `numerics` but with a ~1e-31 relative floor instead of ~1e-16,
/// which is what the finite-difference density oracle needs: its stencil
/// divides the potential's absolute rounding error by h^2.
pub fn logsumexp_dd(xs: &[Dd]) -> Dd {
    let m = xs
        .iter()
        .fold(f64::NEG_INFINITY, |acc, x| acc.max(x.to_f64()));
    if m == f64::NEG_INFINITY {
        return Dd::from_f64(f64::NEG_INFINITY);
    }
    let md = Dd::from_f64(m);
    let mut s = Dd::zero();
    for x in xs {
        s = s.add(x.sub(md).exp());
    }
    md.add(s.ln())
}

/// Complex double-double.
#[derive(Debug, Clone, Copy)]
pub struct DdComplex {
    pub re: Dd,
    pub im: Dd,
}

impl DdComplex {
    pub fn zero() -> DdComplex {
        DdComplex {
            re: Dd::zero(),
            im: Dd::zero(),
        }
    }

    pub fn from_c64(z: Complex64) -> DdComplex {
        DdComplex {
            re: Dd::from_f64(z.re),
            im: Dd::from_f64(z.im),
        }
    }

    pub fn add(self, other: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re.add(other.re),
            im: self.im.add(other.im),
        }
    }

    pub fn sub(self, other: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re.sub(other.re),
            im: self.im.sub(other.im),
        }
    }

    pub fn mul(self, other: DdComplex) -> DdComplex {
        DdComplex {
            re: self.re.mul(other.re).sub(self.im.mul(other.im)),
            im: self.re.mul(other.im).add(self.im.mul(other.re)),
        }
    }

    pub fn mul_f64(self, s: f64) -> DdComplex {
        DdComplex {
            re: self.re.mul_f64(s),
            im: self.im.mul_f64(s),
        }
    }

    pub fn norm_sqr(self) -> f64 {
        self.re.mul(self.re).add(self.im.mul(self.im)).to_f64()
    }

    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

// ---------------------------------------------------------------------------
// the near-circular path z(t) = z0 * q(t)
// ---------------------------------------------------------------------------

/// Degree of the Taylor polynomial q(t) ~ e^{it}. With |t| <= 1e-7 the radial
/// drift | |q(t)| - 1 | ~ t^6/720 stays below 1.4e-45, so the path is
/// indistinguishable from the true circle at any density accuracy we target.
const PATH_DEGREE: usize = 5;

/// Local circle parametrization around an anchor point z0 = r e^{i theta0}:
/// z(t) = z0 * q(t) with q(t) = sum_{j<=5} (it)^j / j!, the reciprocal
/// factorials carried as two-double dyadic constants.
pub struct CirclePath {
    z0: DyadicComplex,
    /// coefficients of q as dyadic complexes: (i^j / j!) for j = 0..=5
    gamma: Vec<DyadicComplex>,
}

impl CirclePath {
    pub fn new(z0: Complex64) -> CirclePath {
        // 1/j! as hi + lo double pairs (lo from an exact FMA residual)
        let inv_factorial = |j: f64| -> Dyadic {
            let fact = (1..=j as u64).map(|k| k as f64).product::<f64>().max(1.0);
            let hi = 1.0 / fact;
            let lo = (-fact).mul_add(hi, 1.0) / fact;
            Dyadic::from_f64(hi).add(&Dyadic::from_f64(lo))
        };
        let mut gamma = Vec::with_capacity(PATH_DEGREE + 1);
        for j in 0..=PATH_DEGREE {
            let c = inv_factorial(j as f64);
            // i^j cycles 1, i, -1, -i
            let (re, im) = match j % 4 {
                0 => (c.clone(), Dyadic::zero()),
                1 => (Dyadic::zero(), c.clone()),
                2 => (c.neg(), Dyadic::zero()),
                _ => (Dyadic::zero(), c.neg()),
            };
            gamma.push(DyadicComplex { re, im });
        }
        CirclePath {
            z0: DyadicComplex::from_c64(z0),
            gamma,
        }
    }

    /// z(t) for an exact multi-limb offset t.
    pub fn point(&self, t_parts: &[f64]) -> DyadicComplex {
        let t = Dyadic::from_parts(t_parts);
        let mut q = DyadicComplex::zero();
        for g in self.gamma.iter().rev() {
            q = DyadicComplex {
                re: q.re.mul(&t),
                im: q.im.mul(&t),
            }
            .add(g);
        }
        self.z0.mul(&q)
    }

    /// Taylor coefficients W_j of z(t_base + s) - z(t_base) = sum_j W_j s^j
    /// (j = 1..=5), exactly at the dyadic base offset and collapsed to
    /// double-double for the refinement loop.
    pub fn displacement_taylor(&self, t_base_parts: &[f64]) -> Vec<DdComplex> {
        let t = Dyadic::from_parts(t_base_parts);
        let mut out = Vec::with_capacity(PATH_DEGREE);
        for j in 1..=PATH_DEGREE {
            // Q_j = sum_{l >= j} C(l, j) gamma_l t^{l-j}
            let mut q = DyadicComplex::zero();
            let mut t_pow = Dyadic::from_f64(1.0);
            for l in j..=PATH_DEGREE {
                let binom = binomial(l, j);
                let term = self.gamma[l].scale(&t_pow.mul(&Dyadic::from_f64(binom)));
                q = q.add(&term);
                t_pow = t_pow.mul(&t);
            }
            out.push(self.z0.mul(&q).to_dd());
        }
        out
    }
}

/// Exact binomial coefficient as a double (exact for the small arguments used
/// in Taylor rescaling).
pub fn binomial(n: usize, k: usize) -> f64 {
    let mut v = 1.0;
    for i in 0..k {
        v = v * (n - i) as f64 / (i + 1) as f64;
    }
    v.round()
}
