use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};

use super::complex::{BigComplex, Precision};

/// Univariate polynomial over the rationals, coefficients in ascending order.
///
/// Trailing zero coefficients are never stored; the zero polynomial has an
/// empty coefficient list.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(|c| *c == 0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(Rational::from(1))
    }

    pub fn constant(c: Rational) -> Self {
        Poly::new(vec![c])
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        Poly::monomial(Rational::from(1), 1)
    }

    pub fn monomial(c: Rational, k: usize) -> Self {
        let mut coeffs = vec![Rational::new(); k + 1];
        coeffs[k] = c;
        Poly::new(coeffs)
    }

    /// `t - r`.
    pub fn linear_root(r: &Rational) -> Self {
        Poly::new(vec![-r.clone(), Rational::from(1)])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Largest `k` with `t^k` dividing the polynomial (`None` for zero).
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| *c != 0)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= x;
            acc += c;
        }
        acc
    }

    pub fn eval_complex(&self, z: &BigComplex) -> BigComplex {
        let prec = z.prec();
        let mut acc = BigComplex::zero(prec);
        for c in self.coeffs.iter().rev() {
            acc = &acc * z;
            acc.re += c;
        }
        acc
    }

    pub fn to_complex(&self, prec: Precision) -> Vec<BigComplex> {
        self.coeffs
            .iter()
            .map(|c| BigComplex::from_rational(c, prec))
            .collect()
    }

    pub fn scale(&self, c: &Rational) -> Poly {
        Poly::new(self.coeffs.iter().map(|a| Rational::from(a * c)).collect())
    }

    pub fn shift_up(&self, k: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![Rational::new(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Poly { coeffs }
    }

    /// Division by `t^k`, dropping the low part.
    pub fn shift_down(&self, k: usize) -> Poly {
        Poly::new(self.coeffs.iter().skip(k).cloned().collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| Rational::from(c * k as u64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut out = Poly::one();
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some(l) => {
                let inv = Rational::from(l.recip_ref());
                self.scale(&inv)
            }
        }
    }

    /// Quotient and remainder of Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = Rational::from(d.coeffs[dd].recip_ref());
        let mut rem = self.coeffs.clone();
        let n = self.coeffs.len();
        if n <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::new(); n - dd];
        for k in (0..n - dd).rev() {
            let c = Rational::from(&rem[k + dd] * &lead_inv);
            if c != 0 {
                for (j, dc) in d.coeffs.iter().enumerate() {
                    rem[k + j] -= Rational::from(&c * dc);
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Exact quotient when `d` divides `self`.
    pub fn exact_div(&self, d: &Poly) -> Option<Poly> {
        let (q, r) = self.div_rem(d);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.div_rem(self).1.is_zero()
    }

    /// `p(t + c)`.
    pub fn taylor_shift(&self, c: &Rational) -> Poly {
        let mut a = self.coeffs.clone();
        let n = a.len();
        for i in 0..n {
            for j in (i..n - 1).rev() {
                let t = Rational::from(&a[j + 1] * c);
                a[j] += t;
            }
        }
        Poly::new(a)
    }

    /// `p(q(t))`.
    pub fn compose(&self, q: &Poly) -> Poly {
        let mut acc = Poly::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * q) + &Poly::constant(c.clone());
        }
        acc
    }

    /// Splits off the rational content: `self = content * primitive` with the
    /// primitive part integral, of content one, and with positive leading
    /// coefficient.
    pub fn primitive_part(&self) -> (Rational, Vec<Integer>) {
        if self.is_zero() {
            return (Rational::new(), Vec::new());
        }
        let mut den = Integer::from(1);
        for c in &self.coeffs {
            den.lcm_mut(c.denom());
        }
        let ints: Vec<Integer> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * Integer::from(&den / c.denom()))
            .collect();
        let mut g = Integer::new();
        for v in &ints {
            g.gcd_mut(v);
        }
        if *self.coeffs.last().unwrap() < 0 {
            g = -g;
        }
        let prim = ints.iter().map(|v| Integer::from(v / &g)).collect();
        (Rational::from((g, den)), prim)
    }

    pub fn from_integers(v: &[Integer]) -> Poly {
        Poly::new(v.iter().map(|i| Rational::from(i.clone())).collect())
    }

    /// Square-free decomposition (Yun): `self = c * prod f_i^i` with each
    /// returned `f_i` monic, square-free and pairwise coprime. Factors equal
    /// to one are omitted.
    pub fn square_free_decomposition(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = gcd(&f, &df);
        let mut b = f.exact_div(&a).unwrap();
        let mut c = df.exact_div(&a).unwrap();
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            a = gcd(&b, &d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.exact_div(&a).unwrap();
            if b.degree().unwrap_or(0) == 0 {
                break;
            }
            c = d.exact_div(&a).unwrap();
            d = &c - &b.derivative();
            i += 1;
        }
        out
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn radical(&self) -> Poly {
        self.square_free_decomposition()
            .into_iter()
            .fold(Poly::one(), |acc, (f, _)| &acc * &f)
    }

    /// Power of `t` and of `(t - r)` etc.: multiplicity of `f` as a factor.
    pub fn multiplicity_of(&self, f: &Poly) -> usize {
        if self.is_zero() || f.degree().unwrap_or(0) == 0 {
            return 0;
        }
        let mut k = 0;
        let mut cur = self.clone();
        while let Some(q) = cur.exact_div(f) {
            if q.is_zero() {
                break;
            }
            cur = q;
            k += 1;
        }
        k
    }

    /// Infinity norm of the coefficient vector.
    pub fn max_coeff_abs(&self) -> Rational {
        self.coeffs
            .iter()
            .map(|c| Rational::from(c.abs_ref()))
            .max()
            .unwrap_or_default()
    }
}

/// Monic greatest common divisor. `gcd(0, 0)` is zero.
pub fn gcd(a: &Poly, b: &Poly) -> Poly {
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let r = x.div_rem(&y).1;
        // keep sizes down
        x = y.monic();
        y = r;
    }
    x.monic()
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl fmt::Display for Poly {
    /// Expanded form in ascending powers, e.g. `-16+16*t^2`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let neg = *c < 0;
            let mag = Rational::from(c.abs_ref());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { "-" } else { "+" })?;
            }
            first = false;
            let show_coeff = k == 0 || mag != 1;
            if show_coeff {
                write!(f, "{mag}")?;
            }
            if k > 0 {
                if show_coeff {
                    write!(f, "*")?;
                }
                write!(f, "t")?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| {
                    let mut c = self.coeff(k);
                    if let Some(r) = rhs.coeffs.get(k) {
                        c += r;
                    }
                    c
                })
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| Rational::from(-c)).collect(),
        }
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::new(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if *a == 0 {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += Rational::from(a * b);
            }
        }
        Poly::new(out)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    #[test]
    fn trailing_zeros_dropped() {
        let p = Poly::from_ints(&[1, 2, 0, 0]);
        assert_eq!(p.degree(), Some(1));
        assert!(Poly::from_ints(&[0, 0]).is_zero());
    }

    #[test]
    fn gcd_examples() {
        let a = &Poly::from_ints(&[-1, 1]) * &Poly::from_ints(&[1, 1]);
        let b = Poly::from_ints(&[-1, 1]).pow(2);
        assert_eq!(gcd(&a, &b), Poly::from_ints(&[-1, 1]));
        let p = Poly::from_ints(&[2, 4]);
        assert_eq!(gcd(&p, &Poly::zero()), Poly::new(vec![q(1, 2), q(1, 1)]));
        // t^2+t+1 = (t-1)(t+2) + 3, then 3 is a unit
        assert_eq!(gcd(&Poly::from_ints(&[1, 1, 1]), &Poly::from_ints(&[-1, 1])), Poly::one());
    }

    #[test]
    fn taylor_shift_matches_compose() {
        let p = Poly::from_ints(&[3, -1, 0, 2, 5]);
        let c = q(-2, 3);
        let lin = Poly::new(vec![c.clone(), q(1, 1)]);
        assert_eq!(p.taylor_shift(&c), p.compose(&lin));
    }

    #[test]
    fn square_free() {
        // (t-1)^3 (t+1)^3 t
        let p = &(&Poly::from_ints(&[-1, 1]).pow(3) * &Poly::from_ints(&[1, 1]).pow(3)) * &Poly::t();
        let sf = p.square_free_decomposition();
        assert_eq!(sf.len(), 2);
        assert_eq!(sf[0], (Poly::t(), 1));
        assert_eq!(sf[1], (Poly::from_ints(&[-1, 0, 1]), 3));
    }

    #[test]
    fn primitive_part_sign_and_content() {
        let p = Poly::new(vec![q(1, 2), q(-3, 4)]);
        let (c, prim) = p.primitive_part();
        assert_eq!(prim, vec![Integer::from(-2), Integer::from(3)]);
        assert_eq!(c, q(-1, 4));
    }

    #[test]
    fn display_ascending() {
        assert_eq!(Poly::from_ints(&[-16, 16]).to_string(), "-16+16*t");
        assert_eq!(Poly::from_ints(&[0, -1, 0, 1]).to_string(), "-t+t^3");
        assert_eq!(Poly::new(vec![q(1, 2)]).to_string(), "1/2");
    }
}
