use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};

use crate::arith::{Poly, RatFunc};

/// An element `Σ rᵢ(t) Θⁱ` of the ring of differential operators with
/// rational-function coefficients, always kept with coefficients on the left.
///
/// Products are normal ordered with `Θ r = r Θ + t r'`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThetaExpr {
    terms: Vec<RatFunc>,
}

impl ThetaExpr {
    pub fn new(mut terms: Vec<RatFunc>) -> Self {
        while terms.last().is_some_and(|r| r.is_zero()) {
            terms.pop();
        }
        ThetaExpr { terms }
    }

    pub fn zero() -> Self {
        ThetaExpr { terms: Vec::new() }
    }

    pub fn scalar(r: RatFunc) -> Self {
        ThetaExpr::new(vec![r])
    }

    pub fn constant(c: Rational) -> Self {
        ThetaExpr::scalar(RatFunc::constant(c))
    }

    /// `Θ = t d/dt`.
    pub fn theta() -> Self {
        ThetaExpr::new(vec![RatFunc::zero(), RatFunc::one()])
    }

    /// `d/dt = t⁻¹ Θ`.
    pub fn d() -> Self {
        ThetaExpr::new(vec![RatFunc::zero(), RatFunc::t_pow(-1)])
    }

    /// Multiplication by `t`.
    pub fn t() -> Self {
        ThetaExpr::scalar(RatFunc::from_poly(Poly::t()))
    }

    pub fn terms(&self) -> &[RatFunc] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<RatFunc> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn pow(&self, e: u32) -> ThetaExpr {
        let mut out = ThetaExpr::constant(Rational::from(1));
        for _ in 0..e {
            out = &out * self;
        }
        out
    }

    fn term(&self, i: usize) -> RatFunc {
        self.terms.get(i).cloned().unwrap_or_else(RatFunc::zero)
    }
}

/// `t · r'`, the action of `Θ` on a coefficient.
pub fn theta_apply(r: &RatFunc) -> RatFunc {
    &RatFunc::from_poly(Poly::t()) * &r.derivative()
}

fn binomial(n: usize, k: usize) -> Integer {
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

impl Add for &ThetaExpr {
    type Output = ThetaExpr;
    fn add(self, rhs: &ThetaExpr) -> ThetaExpr {
        let n = self.terms.len().max(rhs.terms.len());
        ThetaExpr::new((0..n).map(|i| &self.term(i) + &rhs.term(i)).collect())
    }
}

impl Sub for &ThetaExpr {
    type Output = ThetaExpr;
    fn sub(self, rhs: &ThetaExpr) -> ThetaExpr {
        self + &(-rhs)
    }
}

impl Neg for &ThetaExpr {
    type Output = ThetaExpr;
    fn neg(self) -> ThetaExpr {
        ThetaExpr { terms: self.terms.iter().map(|r| -r).collect() }
    }
}

impl Mul for &ThetaExpr {
    type Output = ThetaExpr;
    fn mul(self, rhs: &ThetaExpr) -> ThetaExpr {
        if self.is_zero() || rhs.is_zero() {
            return ThetaExpr::zero();
        }
        let mut out = vec![RatFunc::zero(); self.terms.len() + rhs.terms.len() - 1];
        for (j, b) in rhs.terms.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            // θ^m b for m up to the left degree
            let mut derivs = vec![b.clone()];
            for m in 1..self.terms.len() {
                let next = theta_apply(&derivs[m - 1]);
                derivs.push(next);
            }
            for (i, a) in self.terms.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                // a Θ^i b Θ^j = a Σ_k C(i,k) (θ^{i-k} b) Θ^{k+j}
                for k in 0..=i {
                    let d = &derivs[i - k];
                    if d.is_zero() {
                        continue;
                    }
                    let c = Rational::from(binomial(i, k));
                    out[k + j] = &out[k + j] + &(a * d).scale(&c);
                }
            }
        }
        ThetaExpr::new(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn commutator() {
        // Θ t = t Θ + t
        let lhs = &ThetaExpr::theta() * &ThetaExpr::t();
        let t = RatFunc::from_poly(Poly::t());
        assert_eq!(lhs.terms(), &[t.clone(), t]);
        // D t = t D + 1  i.e. Θ + 1 in θ-form
        let dt = &ThetaExpr::d() * &ThetaExpr::t();
        assert_eq!(dt.terms(), &[RatFunc::one(), RatFunc::one()]);
    }

    #[test]
    fn d_squared() {
        // D² = t⁻²(Θ² − Θ)
        let d2 = ThetaExpr::d().pow(2);
        assert_eq!(d2.terms(), &[RatFunc::zero(), -&RatFunc::t_pow(-2), RatFunc::t_pow(-2)]);
    }
}
