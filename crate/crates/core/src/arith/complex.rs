use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Assign, Float, Rational};

use crate::error::{Error, Result};

/// Working precision in bits. Never below 64.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Precision(u32);

impl Precision {
    pub const MIN_BITS: u32 = 64;
    pub const DEFAULT: Precision = Precision(128);

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::InvalidArgument(format!(
                "precision must be at least {} bits, got {bits}",
                Self::MIN_BITS
            )));
        }
        Ok(Precision(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    /// Same precision plus `extra` guard bits.
    pub fn with_guard(self, extra: u32) -> Precision {
        Precision(self.0 + extra)
    }

    /// `2^(offset - bits)` as an `f64`, the tolerance idiom used across the crate.
    pub fn eps_scaled(self, offset: i32) -> f64 {
        2f64.powi(offset - self.0 as i32)
    }

    /// Number of significant decimal digits carried by this precision.
    pub fn decimal_digits(self) -> usize {
        (self.0 as f64 * std::f64::consts::LOG10_2).ceil() as usize
    }
}

impl Default for Precision {
    fn default() -> Self {
        Precision::DEFAULT
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} bits", self.0)
    }
}

/// Complex number with arbitrary-precision binary floating point parts.
///
/// Binary operations produce results at the larger of the two operand
/// precisions.
#[derive(Clone, PartialEq)]
pub struct BigComplex {
    pub re: Float,
    pub im: Float,
}

impl BigComplex {
    pub fn zero(prec: Precision) -> Self {
        BigComplex {
            re: Float::new(prec.bits()),
            im: Float::new(prec.bits()),
        }
    }

    pub fn one(prec: Precision) -> Self {
        Self::from_f64(1.0, 0.0, prec)
    }

    pub fn i(prec: Precision) -> Self {
        Self::from_f64(0.0, 1.0, prec)
    }

    pub fn from_f64(re: f64, im: f64, prec: Precision) -> Self {
        BigComplex {
            re: Float::with_val(prec.bits(), re),
            im: Float::with_val(prec.bits(), im),
        }
    }

    pub fn from_rational(q: &Rational, prec: Precision) -> Self {
        BigComplex {
            re: Float::with_val(prec.bits(), q),
            im: Float::new(prec.bits()),
        }
    }

    pub fn from_parts(re: Float, im: Float) -> Self {
        let p = re.prec().max(im.prec());
        let mut z = BigComplex { re, im };
        z.re.set_prec(p);
        z.im.set_prec(p);
        z
    }

    pub fn from_i64(v: i64, prec: Precision) -> Self {
        BigComplex {
            re: Float::with_val(prec.bits(), v),
            im: Float::new(prec.bits()),
        }
    }

    /// `exp(2 pi i q)` for rational `q`.
    pub fn root_of_unity(q: &Rational, prec: Precision) -> Self {
        let p = prec.bits();
        let mut angle = Float::with_val(p, Constant::Pi) * 2u32;
        angle *= q;
        let (s, c) = angle.sin_cos(Float::new(p));
        BigComplex { re: c, im: s }
    }

    pub fn prec(&self) -> Precision {
        Precision(self.re.prec().max(self.im.prec()))
    }

    pub fn with_prec(&self, prec: Precision) -> Self {
        BigComplex {
            re: Float::with_val(prec.bits(), &self.re),
            im: Float::with_val(prec.bits(), &self.im),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        BigComplex {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    pub fn norm_sqr(&self) -> Float {
        let p = self.re.prec();
        let mut s = Float::with_val(p, self.re.square_ref());
        s += Float::with_val(p, self.im.square_ref());
        s
    }

    pub fn abs(&self) -> Float {
        Float::with_val(self.re.prec(), self.re.hypot_ref(&self.im))
    }

    pub fn abs_f64(&self) -> f64 {
        self.abs().to_f64()
    }

    pub fn arg(&self) -> Float {
        Float::with_val(self.re.prec(), self.im.atan2_ref(&self.re))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }

    pub fn scale(&self, f: &Float) -> Self {
        let p = self.re.prec();
        BigComplex {
            re: Float::with_val(p, &self.re * f),
            im: Float::with_val(p, &self.im * f),
        }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        let p = self.re.prec();
        BigComplex {
            re: Float::with_val(p, &self.re * q),
            im: Float::with_val(p, &self.im * q),
        }
    }

    pub fn scale_i64(&self, k: i64) -> Self {
        let p = self.re.prec();
        BigComplex {
            re: Float::with_val(p, &self.re * k),
            im: Float::with_val(p, &self.im * k),
        }
    }

    /// Multiplication by `i`.
    pub fn mul_i(&self) -> Self {
        BigComplex {
            re: -self.im.clone(),
            im: self.re.clone(),
        }
    }

    pub fn recip(&self) -> Self {
        let n = self.norm_sqr();
        BigComplex {
            re: Float::with_val(n.prec(), &self.re / &n),
            im: -Float::with_val(n.prec(), &self.im / &n),
        }
    }

    pub fn exp(&self) -> Self {
        let p = self.re.prec();
        let r = Float::with_val(p, self.re.exp_ref());
        let (s, c) = self.im.clone().sin_cos(Float::new(p));
        BigComplex {
            re: c * &r,
            im: s * &r,
        }
    }

    /// Principal logarithm.
    pub fn ln(&self) -> Self {
        let p = self.re.prec();
        let r = self.abs();
        BigComplex {
            re: Float::with_val(p, r.ln_ref()),
            im: self.arg(),
        }
    }

    /// Principal branch of `self^q`.
    pub fn pow_rational(&self, q: &Rational) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.ln().scale_rational(q).exp()
    }

    pub fn powi(&self, k: u32) -> Self {
        let mut out = BigComplex::one(self.prec());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                out = &out * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        out
    }

    /// Principal square root.
    pub fn sqrt(&self) -> Self {
        let p = self.re.prec();
        if self.is_zero() {
            return self.clone();
        }
        let r = self.abs();
        // sqrt((r + |re|)/2) on the dominant side avoids cancellation.
        let mut t = Float::with_val(p, self.re.abs_ref());
        t += &r;
        t /= 2u32;
        let t = t.sqrt();
        let half_im = Float::with_val(p, &self.im / &t) / 2u32;
        if self.re >= 0 {
            BigComplex { re: t, im: half_im }
        } else {
            let re = half_im.abs();
            let im = if self.im < 0 { -t } else { t };
            BigComplex { re, im }
        }
    }

    /// `self += a * b` without temporaries beyond the two products.
    pub fn add_mul(&mut self, a: &BigComplex, b: &BigComplex, scratch: &mut Float) {
        scratch.assign(&a.re * &b.re);
        self.re += &*scratch;
        scratch.assign(&a.im * &b.im);
        self.re -= &*scratch;
        scratch.assign(&a.re * &b.im);
        self.im += &*scratch;
        scratch.assign(&a.im * &b.re);
        self.im += &*scratch;
    }

    /// Largest of `|re|`, `|im|` as f64, a cheap magnitude proxy.
    pub fn max_abs_f64(&self) -> f64 {
        self.re.to_f64().abs().max(self.im.to_f64().abs())
    }

    /// Decimal rendering of both parts with `digits` significant digits.
    pub fn to_decimal_strings(&self, digits: usize) -> (String, String) {
        (fmt_float(&self.re, digits), fmt_float(&self.im, digits))
    }

    pub fn parse_decimal(re: &str, im: &str, prec: Precision) -> Result<Self> {
        let parse = |s: &str| -> Result<Float> {
            Float::parse(s)
                .map(|v| Float::with_val(prec.bits(), v))
                .map_err(|e| Error::InvalidArgument(format!("bad decimal `{s}`: {e}")))
        };
        Ok(BigComplex {
            re: parse(re)?,
            im: parse(im)?,
        })
    }

    pub fn dist(&self, other: &BigComplex) -> Float {
        (self - other).abs()
    }
}

/// Stable decimal text for a float: `0` for zero, otherwise scientific
/// notation with a fixed digit count.
pub fn fmt_float(x: &Float, digits: usize) -> String {
    if x.is_zero() {
        return "0".to_string();
    }
    x.to_string_radix(10, Some(digits))
}

/// `pi` at the given precision.
pub fn pi(prec: Precision) -> Float {
    Float::with_val(prec.bits(), Constant::Pi)
}

/// `2^e` at the given precision.
pub fn pow2(e: i32, prec: Precision) -> Float {
    Float::with_val(prec.bits(), Float::with_val(64, 2u32).pow(e))
}

impl fmt::Debug for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, i) = self.to_f64_pair();
        write!(f, "({r:e}{i:+e}i)")
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = f.precision().unwrap_or(20);
        let (r, i) = self.to_decimal_strings(digits);
        if self.im.is_zero() {
            write!(f, "{r}")
        } else if self.im < 0 {
            write!(f, "{r} - {}i", fmt_float(&Float::with_val(self.im.prec(), -&self.im), digits))
        } else {
            write!(f, "{r} + {i}i")
        }
    }
}

fn out_prec(a: &BigComplex, b: &BigComplex) -> u32 {
    a.re.prec().max(b.re.prec())
}

impl Add for &BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &BigComplex) -> BigComplex {
        let p = out_prec(self, rhs);
        BigComplex {
            re: Float::with_val(p, &self.re + &rhs.re),
            im: Float::with_val(p, &self.im + &rhs.im),
        }
    }
}

impl Sub for &BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &BigComplex) -> BigComplex {
        let p = out_prec(self, rhs);
        BigComplex {
            re: Float::with_val(p, &self.re - &rhs.re),
            im: Float::with_val(p, &self.im - &rhs.im),
        }
    }
}

impl Mul for &BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &BigComplex) -> BigComplex {
        let p = out_prec(self, rhs);
        let mut re = Float::with_val(p, &self.re * &rhs.re);
        re -= Float::with_val(p, &self.im * &rhs.im);
        let mut im = Float::with_val(p, &self.re * &rhs.im);
        im += Float::with_val(p, &self.im * &rhs.re);
        BigComplex { re, im }
    }
}

impl Div for &BigComplex {
    type Output = BigComplex;
    fn div(self, rhs: &BigComplex) -> BigComplex {
        self * &rhs.recip()
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &BigComplex) -> BigComplex {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex {
            re: -self.re,
            im: -self.im,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::new(128).unwrap()
    }

    #[test]
    fn precision_floor() {
        assert!(Precision::new(63).is_err());
        assert_eq!(Precision::new(64).unwrap().bits(), 64);
    }

    #[test]
    fn never_downgrades() {
        let a = BigComplex::one(Precision::new(64).unwrap());
        let b = BigComplex::one(Precision::new(200).unwrap());
        assert_eq!((&a + &b).prec().bits(), 200);
        assert_eq!((&a * &b).prec().bits(), 200);
    }

    #[test]
    fn sqrt_of_minus_three() {
        let z = BigComplex::from_f64(-3.0, 0.0, p()).sqrt();
        assert!(z.re.to_f64().abs() < 1e-30);
        assert!((z.im.to_f64() - 3f64.sqrt()).abs() < 1e-15);
        let w = BigComplex::from_f64(-3.0, -4.0, p()).sqrt();
        let back = &w * &w;
        assert!((back.re.to_f64() + 3.0).abs() < 1e-30);
        assert!((back.im.to_f64() + 4.0).abs() < 1e-30);
    }

    #[test]
    fn roots_of_unity() {
        let z = BigComplex::root_of_unity(&Rational::from((1, 4)), p());
        assert!(z.re.to_f64().abs() < 1e-35);
        assert!((z.im.to_f64() - 1.0).abs() < 1e-35);
        let w = z.powi(4);
        assert!((&w - &BigComplex::one(p())).abs_f64() < 1e-35);
    }

    #[test]
    fn add_mul_matches_mul() {
        let a = BigComplex::from_f64(1.5, -2.0, p());
        let b = BigComplex::from_f64(0.25, 3.0, p());
        let mut acc = BigComplex::from_f64(1.0, 1.0, p());
        let mut s = Float::new(128);
        acc.add_mul(&a, &b, &mut s);
        let expect = &BigComplex::from_f64(1.0, 1.0, p()) + &(&a * &b);
        assert_eq!(acc, expect);
    }

    #[test]
    fn pow_rational_principal() {
        let z = BigComplex::from_f64(-4.0, 0.0, p()).pow_rational(&Rational::from((1, 2)));
        assert!(z.re.to_f64().abs() < 1e-30);
        assert!((z.im.to_f64() - 2.0).abs() < 1e-30);
    }
}
