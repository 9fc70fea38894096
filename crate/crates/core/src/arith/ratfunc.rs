use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::Rational;

use super::poly::{gcd, Poly};

/// Rational function `num / den` in lowest terms with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Builds `num / den` and reduces it. Panics when `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc::zero();
        }
        let g = gcd(&num, &den);
        let mut num = num.exact_div(&g).unwrap();
        let mut den = den.exact_div(&g).unwrap();
        let lead = den.leading().unwrap().clone();
        if lead != 1 {
            let inv = Rational::from(lead.recip_ref());
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn zero() -> Self {
        RatFunc::from_poly(Poly::zero())
    }

    pub fn one() -> Self {
        RatFunc::from_poly(Poly::one())
    }

    pub fn constant(c: Rational) -> Self {
        RatFunc::from_poly(Poly::constant(c))
    }

    /// `t^k` for any integer `k`.
    pub fn t_pow(k: i64) -> Self {
        if k >= 0 {
            RatFunc::from_poly(Poly::monomial(Rational::from(1), k as usize))
        } else {
            RatFunc {
                num: Poly::one(),
                den: Poly::monomial(Rational::from(1), (-k) as usize),
            }
        }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.degree() == Some(0)
    }

    pub fn recip(&self) -> RatFunc {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn derivative(&self) -> RatFunc {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(n, &self.den * &self.den)
    }

    pub fn scale(&self, c: &Rational) -> RatFunc {
        RatFunc::new(self.num.scale(c), self.den.clone())
    }

    /// Order of vanishing at 0 (negative for a pole); `None` for zero.
    pub fn valuation(&self) -> Option<i64> {
        Some(self.num.valuation()? as i64 - self.den.valuation().unwrap() as i64)
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        Some(self.num.degree()? as i64 - self.den.degree().unwrap() as i64)
    }

    pub fn eval(&self, x: &Rational) -> Option<Rational> {
        let d = self.den.eval(x);
        if d == 0 {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    /// Substitutes a rational function for `t`.
    pub fn compose(&self, q: &RatFunc) -> RatFunc {
        // p(n/d) = P(n, d) / d^deg p, homogenised to keep everything polynomial
        let hom = |p: &Poly, deg: usize| -> Poly {
            let mut acc = Poly::zero();
            for (k, c) in p.coeffs().iter().enumerate() {
                if *c == 0 {
                    continue;
                }
                let term = &q.num.pow(k as u32) * &q.den.pow((deg - k) as u32);
                acc = &acc + &term.scale(c);
            }
            acc
        };
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap();
        let deg = dn.max(dd);
        RatFunc::new(hom(&self.num, deg), hom(&self.den, deg))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        assert!(!rhs.is_zero(), "division by zero rational function");
        RatFunc::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduces_and_normalises() {
        let r = RatFunc::new(Poly::from_ints(&[-2, 0, 2]), Poly::from_ints(&[-3, 3]));
        assert_eq!(r.den(), &Poly::one());
        assert_eq!(r.num(), &Poly::new(vec![Rational::from((2, 3)), Rational::from((2, 3))]));
    }

    #[test]
    fn arithmetic() {
        let a = RatFunc::t_pow(-1);
        let b = RatFunc::t_pow(-2);
        let s = &a - &b;
        assert_eq!(s, RatFunc::new(Poly::from_ints(&[-1, 1]), Poly::from_ints(&[0, 0, 1])));
        assert_eq!(&(&s * &RatFunc::t_pow(2)), &RatFunc::from_poly(Poly::from_ints(&[-1, 1])));
    }

    #[test]
    fn derivative_and_compose() {
        let r = RatFunc::t_pow(-1);
        assert_eq!(r.derivative(), RatFunc::t_pow(-2).scale(&Rational::from(-1)));
        // 1/t composed with t+1
        let c = r.compose(&RatFunc::from_poly(Poly::from_ints(&[1, 1])));
        assert_eq!(c, RatFunc::new(Poly::one(), Poly::from_ints(&[1, 1])));
        let inv = RatFunc::t_pow(-1);
        let p = RatFunc::from_poly(Poly::from_ints(&[1, 2, 3]));
        // 1 + 2/t + 3/t^2 = (t^2+2t+3)/t^2
        assert_eq!(p.compose(&inv), RatFunc::new(Poly::from_ints(&[3, 2, 1]), Poly::from_ints(&[0, 0, 1])));
    }
}
