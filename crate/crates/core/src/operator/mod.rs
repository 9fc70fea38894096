//! Differential operators in θ-form and d-form, the exponent shift and
//! Möbius changes of variable.

mod weyl;

use std::fmt;

use rug::{Integer, Rational};

use crate::arith::{poly_gcd, Poly, RatFunc};
use crate::error::{Error, Result};

pub use weyl::{theta_apply, ThetaExpr};

/// Operator `Σ pᵢ(t) Θⁱ` in canonical form: polynomial coefficients with
/// denominators cleared, integer content one, and the leading coefficient
/// `pₙ` with positive top-degree coefficient.
///
/// A common polynomial factor of all coefficients is kept (so `Θ t` stays
/// `t Θ + t`); [`ThetaOperator::reduced`] removes it.
///
/// The zero operator is represented with a single zero coefficient.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ThetaOperator {
    coeffs: Vec<Poly>,
}

/// Operator `Σ qᵢ(t) (d/dt)ⁱ` with rational-function coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DOperator {
    coeffs: Vec<RatFunc>,
}

/// Möbius map `u ↦ (a u + b) / (c u + d)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Moebius {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

/// Signed Stirling numbers of the first kind: `x(x-1)…(x-k+1) = Σ s(k,i) xⁱ`.
pub fn stirling_first(k: usize) -> Vec<Integer> {
    let mut row = vec![Integer::from(1)];
    for m in 0..k {
        let mut next = vec![Integer::new(); row.len() + 1];
        for (i, c) in row.iter().enumerate() {
            next[i + 1] += c;
            next[i] -= Integer::from(c * m as u64);
        }
        row = next;
    }
    row
}

/// Stirling numbers of the second kind `S(i, k)` for `k = 0..=i`.
pub fn stirling_second(i: usize) -> Vec<Integer> {
    let mut row = vec![Integer::from(1)];
    for _ in 0..i {
        let mut next = vec![Integer::new(); row.len() + 1];
        for (k, c) in row.iter().enumerate() {
            next[k] += Integer::from(c * k as u64);
            next[k + 1] += c;
        }
        row = next;
    }
    row
}

impl ThetaOperator {
    /// Canonicalises `Σ rᵢ Θⁱ`.
    pub fn new(coeffs: Vec<RatFunc>) -> Self {
        let mut den = Poly::one();
        for r in &coeffs {
            if !r.is_zero() {
                let g = poly_gcd(&den, r.den());
                den = (&den * r.den()).exact_div(&g).unwrap();
            }
        }
        let polys = coeffs
            .iter()
            .map(|r| (r.num() * &den).exact_div(r.den()).unwrap())
            .collect();
        ThetaOperator::from_polys(polys)
    }

    /// Canonicalises `Σ pᵢ Θⁱ` with polynomial coefficients.
    pub fn from_polys(mut coeffs: Vec<Poly>) -> Self {
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        if coeffs.iter().all(|p| p.is_zero()) {
            return ThetaOperator::zero();
        }
        // integer content over all coefficients, sign from the leading one
        let mut den = Integer::from(1);
        for p in &coeffs {
            for c in p.coeffs() {
                den.lcm_mut(c.denom());
            }
        }
        let mut content = Integer::new();
        for p in &coeffs {
            for c in p.coeffs() {
                content.gcd_mut(&(c.numer() * Integer::from(&den / c.denom())));
            }
        }
        if *coeffs.last().unwrap().leading().unwrap() < 0 {
            content = -content;
        }
        let factor = Rational::from((den, content));
        ThetaOperator { coeffs: coeffs.iter().map(|p| p.scale(&factor)).collect() }
    }

    pub fn zero() -> Self {
        ThetaOperator { coeffs: vec![Poly::zero()] }
    }

    /// Divides out the polynomial gcd of all coefficients, giving a
    /// representative of the class of `P` under left multiplication by
    /// rational functions.
    pub fn reduced(&self) -> ThetaOperator {
        if self.is_zero() {
            return self.clone();
        }
        let mut g = Poly::zero();
        for p in &self.coeffs {
            g = poly_gcd(&g, p);
        }
        if g.degree() == Some(0) {
            return self.clone();
        }
        ThetaOperator::from_polys(self.coeffs.iter().map(|p| p.exact_div(&g).unwrap()).collect())
    }

    /// Equality up to a rational-function left factor (same solutions).
    pub fn equivalent(&self, other: &ThetaOperator) -> bool {
        self.reduced() == other.reduced()
    }

    pub fn from_expr(e: &ThetaExpr) -> Self {
        ThetaOperator::new(e.terms().to_vec())
    }

    pub fn to_expr(&self) -> ThetaExpr {
        ThetaExpr::new(self.coeffs.iter().cloned().map(RatFunc::from_poly).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_zero()
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Poly] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Poly {
        &self.coeffs[i]
    }

    pub fn leading(&self) -> &Poly {
        self.coeffs.last().unwrap()
    }

    /// Largest degree among the coefficients.
    pub fn max_degree(&self) -> usize {
        self.coeffs.iter().filter_map(|p| p.degree()).max().unwrap_or(0)
    }

    pub fn ensure_nonzero(&self) -> Result<()> {
        if self.is_zero() {
            Err(Error::ZeroOperator)
        } else {
            Ok(())
        }
    }

    /// Substitution `Θ ↦ Θ − α`: solutions get multiplied by `t^α` and the
    /// exponents at 0 move by `+α`.
    pub fn shift(&self, alpha: &Rational) -> ThetaOperator {
        if self.is_zero() || *alpha == 0 {
            return self.clone();
        }
        let n = self.order();
        let neg = Rational::from(-alpha);
        let mut out = vec![Poly::zero(); n + 1];
        for (i, p) in self.coeffs.iter().enumerate() {
            if p.is_zero() {
                continue;
            }
            let mut pw = Rational::from(1);
            // (−α)^(i−k) C(i,k) for k = i, i−1, …, 0
            for k in (0..=i).rev() {
                let c = Rational::from(Integer::binomial_u(i as u32, k as u32)) * &pw;
                out[k] = &out[k] + &p.scale(&c);
                pw *= &neg;
            }
        }
        ThetaOperator::from_polys(out)
    }

    /// Equivalent d-form `Σ qₖ Dᵏ` with `Θⁱ = Σ S(i,k) tᵏ Dᵏ`.
    pub fn to_d(&self) -> DOperator {
        let n = self.order();
        let mut q = vec![Poly::zero(); n + 1];
        for (i, p) in self.coeffs.iter().enumerate() {
            for (k, s) in stirling_second(i).iter().enumerate() {
                if *s != 0 {
                    q[k] = &q[k] + &p.shift_up(k).scale(&Rational::from(s.clone()));
                }
            }
        }
        DOperator { coeffs: q.into_iter().map(RatFunc::from_poly).collect() }
    }

    /// Applies the operator to `t^m`, giving `Σ pᵢ mⁱ · t^m`.
    pub fn apply_monomial(&self, m: i64) -> RatFunc {
        let mut acc = Poly::zero();
        let mut pw = Rational::from(1);
        for p in &self.coeffs {
            acc = &acc + &p.scale(&pw);
            pw *= m;
        }
        &RatFunc::from_poly(acc) * &RatFunc::t_pow(m)
    }

    /// Operator annihilating `y ∘ μ` for all solutions `y`.
    pub fn moebius_pullback(&self, mu: &Moebius) -> ThetaOperator {
        if self.is_zero() {
            return self.clone();
        }
        self.to_d().moebius_pullback(mu).to_theta()
    }

    /// Collects `P = Σ_r t^r Rᵣ(Θ)`: entry `[r][i]` is the coefficient of
    /// `t^r Θⁱ`.
    pub fn theta_rows(&self) -> Vec<Vec<Rational>> {
        let d = self.max_degree();
        (0..=d)
            .map(|r| self.coeffs.iter().map(|p| p.coeff(r)).collect())
            .collect()
    }

    fn fmt_text(&self) -> String {
        crate::opformat::print(self)
    }
}

impl fmt::Display for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.fmt_text())
    }
}

impl fmt::Debug for ThetaOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ThetaOperator({})", self.fmt_text())
    }
}

impl DOperator {
    pub fn new(mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.len() > 1 && coeffs.last().unwrap().is_zero() {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            coeffs.push(RatFunc::zero());
        }
        DOperator { coeffs }
    }

    pub fn from_polys(coeffs: Vec<Poly>) -> Self {
        DOperator::new(coeffs.into_iter().map(RatFunc::from_poly).collect())
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Equivalent canonical θ-form, using `tᵏDᵏ = Θ(Θ−1)…(Θ−k+1)`.
    pub fn to_theta(&self) -> ThetaOperator {
        let n = self.order();
        let mut p = vec![RatFunc::zero(); n + 1];
        for (k, q) in self.coeffs.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let base = q * &RatFunc::t_pow(-(k as i64));
            for (i, s) in stirling_first(k).iter().enumerate() {
                if *s != 0 {
                    p[i] = &p[i] + &base.scale(&Rational::from(s.clone()));
                }
            }
        }
        ThetaOperator::new(p)
    }

    /// Multiplies every coefficient by the same rational function.
    pub fn scale(&self, r: &RatFunc) -> DOperator {
        DOperator::new(self.coeffs.iter().map(|q| q * r).collect())
    }

    /// Coefficients with the leading one cleared to `1` and denominators
    /// cleared to polynomials: returns `(q₀, …, qₙ)` with `P ∝ Σ qᵢ Dⁱ`.
    pub fn polynomial_coeffs(&self) -> Vec<Poly> {
        let mut den = Poly::one();
        for r in &self.coeffs {
            let g = poly_gcd(&den, r.den());
            den = (&den * r.den()).exact_div(&g).unwrap();
        }
        let polys: Vec<Poly> = self
            .coeffs
            .iter()
            .map(|r| (r.num() * &den).exact_div(r.den()).unwrap())
            .collect();
        let mut g = Poly::zero();
        for p in &polys {
            g = poly_gcd(&g, p);
        }
        polys.iter().map(|p| p.exact_div(&g).unwrap()).collect()
    }

    /// Applies the operator to `t^m`.
    pub fn apply_monomial(&self, m: i64) -> RatFunc {
        let mut acc = RatFunc::zero();
        let mut falling = Rational::from(1);
        for (k, q) in self.coeffs.iter().enumerate() {
            let term = &(q * &RatFunc::t_pow(m - k as i64)).scale(&falling);
            acc = &acc + term;
            falling *= m - k as i64;
        }
        acc
    }

    /// Chain rule: with `t = μ(u)`, `d/dt = φ(u) d/du` where
    /// `φ = (cu + d)² / (ad − bc)`.
    pub fn moebius_pullback(&self, mu: &Moebius) -> DOperator {
        let n = self.order();
        let mu_rf = mu.as_ratfunc();
        let phi = mu.chain_factor();
        // (φ D)^j expanded as Σ_k L[j][k] D^k
        let mut powers: Vec<Vec<RatFunc>> = vec![vec![RatFunc::one()]];
        for j in 0..n {
            let prev = &powers[j];
            let mut next = vec![RatFunc::zero(); prev.len() + 1];
            for (k, f) in prev.iter().enumerate() {
                next[k] = &next[k] + &(&phi * &f.derivative());
                next[k + 1] = &next[k + 1] + &(&phi * f);
            }
            powers.push(next);
        }
        let mut out = vec![RatFunc::zero(); n + 1];
        for (j, q) in self.coeffs.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let qm = q.compose(&mu_rf);
            for (k, f) in powers[j].iter().enumerate() {
                out[k] = &out[k] + &(&qm * f);
            }
        }
        DOperator::new(out)
    }
}

impl Moebius {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Result<Self> {
        let m = Moebius { a, b, c, d };
        if m.det() == 0 {
            return Err(Error::InvalidArgument("Möbius map with ad − bc = 0".into()));
        }
        Ok(m)
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        Moebius::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Moebius::from_ints(1, 0, 0, 1).unwrap()
    }

    /// `u ↦ u + p`.
    pub fn translation(p: &Rational) -> Self {
        Moebius::new(1.into(), p.clone(), 0.into(), 1.into()).unwrap()
    }

    /// `u ↦ 1/u`.
    pub fn inversion() -> Self {
        Moebius::from_ints(0, 1, 1, 0).unwrap()
    }

    pub fn det(&self) -> Rational {
        Rational::from(&self.a * &self.d) - Rational::from(&self.b * &self.c)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Moebius) -> Moebius {
        let m = |x: &Rational, y: &Rational| Rational::from(x * y);
        Moebius {
            a: m(&self.a, &other.a) + m(&self.b, &other.c),
            b: m(&self.a, &other.b) + m(&self.b, &other.d),
            c: m(&self.c, &other.a) + m(&self.d, &other.c),
            d: m(&self.c, &other.b) + m(&self.d, &other.d),
        }
    }

    pub fn inverse(&self) -> Moebius {
        Moebius {
            a: self.d.clone(),
            b: Rational::from(-&self.b),
            c: Rational::from(-&self.c),
            d: self.a.clone(),
        }
    }

    pub fn as_ratfunc(&self) -> RatFunc {
        RatFunc::new(
            Poly::new(vec![self.b.clone(), self.a.clone()]),
            Poly::new(vec![self.d.clone(), self.c.clone()]),
        )
    }

    fn chain_factor(&self) -> RatFunc {
        let lin = Poly::new(vec![self.d.clone(), self.c.clone()]);
        let inv = Rational::from(self.det().recip_ref());
        RatFunc::from_poly((&lin * &lin).scale(&inv))
    }

    /// Image of a point of the projective line (`None` is ∞).
    pub fn apply(&self, u: Option<&Rational>) -> Option<Rational> {
        match u {
            None => {
                if self.c == 0 {
                    None
                } else {
                    Some(Rational::from(&self.a / &self.c))
                }
            }
            Some(u) => {
                let num = Rational::from(&self.a * u) + &self.b;
                let den = Rational::from(&self.c * u) + &self.d;
                if den == 0 {
                    None
                } else {
                    Some(num / den)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn no2() -> ThetaOperator {
        // Θ⁴ − t(Θ+1/2)⁴
        let th = ThetaExpr::theta();
        let e = &th.pow(4) - &(&ThetaExpr::t() * &(&th + &ThetaExpr::constant(q(1, 2))).pow(4));
        ThetaOperator::from_expr(&e)
    }

    #[test]
    fn stirling_rows() {
        let s1: Vec<i64> = stirling_first(3).iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(s1, vec![0, 2, -3, 1]);
        let s2: Vec<i64> = stirling_second(4).iter().map(|x| x.to_i64().unwrap()).collect();
        assert_eq!(s2, vec![0, 1, 7, 6, 1]);
    }

    #[test]
    fn canonical_no2() {
        let p = no2();
        let want = [
            Poly::from_ints(&[0, 1]),
            Poly::from_ints(&[0, 8]),
            Poly::from_ints(&[0, 24]),
            Poly::from_ints(&[0, 32]),
            Poly::from_ints(&[-16, 16]),
        ];
        assert_eq!(p.coeffs(), &want);
    }

    #[test]
    fn d_to_theta_examples() {
        let d1 = DOperator::from_polys(vec![Poly::zero(), Poly::one()]);
        assert_eq!(d1.to_theta(), ThetaOperator::from_polys(vec![Poly::zero(), Poly::one()]));
        let t2d2 = DOperator::from_polys(vec![Poly::zero(), Poly::zero(), Poly::monomial(1.into(), 2)]);
        assert_eq!(
            t2d2.to_theta(),
            ThetaOperator::from_polys(vec![Poly::zero(), Poly::from_ints(&[-1]), Poly::one()])
        );
        // D² + D = t⁻²Θ² + (t⁻¹ − t⁻²)Θ, canonical: Θ² + (t − 1)Θ
        let e = DOperator::from_polys(vec![Poly::zero(), Poly::one(), Poly::one()]);
        assert_eq!(
            e.to_theta(),
            ThetaOperator::from_polys(vec![Poly::zero(), Poly::from_ints(&[-1, 1]), Poly::one()])
        );
    }

    #[test]
    fn theta_to_d_examples() {
        let th = ThetaOperator::from_polys(vec![Poly::zero(), Poly::one()]);
        assert_eq!(th.to_d().coeffs()[1], RatFunc::from_poly(Poly::t()));
        let th2 = ThetaOperator::from_polys(vec![Poly::zero(), Poly::zero(), Poly::one()]);
        let d = th2.to_d();
        assert_eq!(d.coeffs()[2], RatFunc::from_poly(Poly::monomial(1.into(), 2)));
        assert_eq!(d.coeffs()[1], RatFunc::from_poly(Poly::t()));
        // leading coefficient of No. 2 in d-form is ∝ t⁴(1 − t)
        let lead = no2().to_d().coeffs()[4].clone();
        assert_eq!(lead, RatFunc::from_poly(Poly::from_ints(&[0, 0, 0, 0, -16, 16])));
    }

    #[test]
    fn action_agreement() {
        let p = no2();
        let d = p.to_d();
        for m in 0..7 {
            assert_eq!(p.apply_monomial(m), d.apply_monomial(m));
        }
    }

    #[test]
    fn shift_examples() {
        let p = no2();
        // (Θ−1/2)⁴ − tΘ⁴
        let th = ThetaExpr::theta();
        let e = &(&th - &ThetaExpr::constant(q(1, 2))).pow(4) - &(&ThetaExpr::t() * &th.pow(4));
        assert_eq!(p.shift(&q(1, 2)), ThetaOperator::from_expr(&e));
        assert_eq!(p.shift(&q(0, 1)), p);
        assert_eq!(p.shift(&q(1, 3)).shift(&q(-1, 3)), p);
    }

    #[test]
    fn moebius_identity_and_translation() {
        let p = no2();
        assert!(p.moebius_pullback(&Moebius::identity()).equivalent(&p));
        let mu = Moebius::translation(&q(1, 1));
        let pb = p.moebius_pullback(&mu);
        // leading coefficient of the pullback in d-form vanishes at −1 and 0
        let lead = pb.to_d().polynomial_coeffs().pop().unwrap();
        assert_eq!(lead.eval(&q(-1, 1)), 0);
        assert_eq!(lead.eval(&q(0, 1)), 0);
        assert_ne!(lead.eval(&q(1, 1)), 0);
    }

    #[test]
    fn moebius_functoriality() {
        let p = no2();
        let mu = Moebius::from_ints(2, 1, 1, 3).unwrap();
        let nu = Moebius::from_ints(1, -1, 2, 1).unwrap();
        let lhs = p.moebius_pullback(&mu).moebius_pullback(&nu);
        let rhs = p.moebius_pullback(&mu.compose(&nu));
        assert!(lhs.equivalent(&rhs));
    }
}
