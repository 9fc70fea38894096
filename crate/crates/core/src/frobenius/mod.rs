//! Frobenius series solutions with logarithms at regular singular points.
//!
//! A solution near a point is written `u^α Σ_l Σ_j c[l][j] u^j logˡ(u)` in
//! the local coordinate `u` of [`local_rows`]. On the coefficient vector of
//! a fixed power `u^{α+j}`, `Θ_u` acts as `(α + j) + N` with `N` the
//! log-derivative `logˡ ↦ l·logˡ⁻¹`, so each order of the recurrence is a
//! small triangular system in the log degree.

use rug::Rational;
use serde_json::{json, Value};

use crate::arith::{BigComplex, Precision};
use crate::error::{Error, Result};
use crate::local::{
    analyze_point, complex_taylor_shift, local_rows, Exponent, ExponentList, Location, PointKind,
};
use crate::operator::ThetaOperator;

pub const DEFAULT_TERMS: usize = 40;

/// `u^α Σ_l Σ_j c[l][j] u^j logˡ(u)`, truncated at `u^{α+K}`.
#[derive(Clone, Debug)]
pub struct LogSeries {
    pub location: Location,
    pub exponent: Exponent,
    /// Truncation order `K`; `coeffs[l]` has `K + 1` entries.
    pub terms: usize,
    pub coeffs: Vec<Vec<BigComplex>>,
}

impl LogSeries {
    pub fn prec(&self) -> Precision {
        self.coeffs[0][0].prec()
    }

    /// Highest power of `log u` present, plus one.
    pub fn log_count(&self) -> usize {
        let mut m = self.coeffs.len();
        while m > 1 && self.coeffs[m - 1].iter().all(|c| c.is_zero()) {
            m -= 1;
        }
        m
    }

    /// Log degree of the leading `u^α` term.
    pub fn leading_log_degree(&self) -> usize {
        (0..self.coeffs.len()).rev().find(|&l| !self.coeffs[l][0].is_zero()).unwrap_or(0)
    }

    /// Multiplies by `u^β`.
    pub fn times_power(&self, beta: &Rational) -> LogSeries {
        let exponent = match &self.exponent {
            Exponent::Rational(r) => Exponent::Rational(Rational::from(r + beta)),
            Exponent::Numeric(z) => {
                let mut z = z.clone();
                z.re += beta;
                Exponent::Numeric(z)
            }
        };
        LogSeries { exponent, ..self.clone() }
    }

    /// Value at `u` of the truncated series, using the principal branches
    /// of `log u` and `u^α`.
    pub fn eval(&self, u: &BigComplex) -> BigComplex {
        let prec = u.prec();
        let lu = u.ln();
        let base = (&lu * &self.exponent.to_complex(prec)).exp();
        let mut total = BigComplex::zero(prec);
        let mut logpow = BigComplex::one(prec);
        for row in &self.coeffs {
            let mut acc = BigComplex::zero(prec);
            for c in row.iter().rev() {
                acc = &(&acc * u) + &c.with_prec(prec);
            }
            total = &total + &(&acc * &logpow);
            logpow = &logpow * &lu;
        }
        &total * &base
    }

    pub fn to_json(&self, digits: usize) -> Value {
        let coeffs: Vec<Value> = self
            .coeffs
            .iter()
            .map(|row| {
                Value::Array(
                    row.iter()
                        .map(|c| {
                            let (re, im) = c.to_decimal_strings(digits);
                            json!([re, im])
                        })
                        .collect(),
                )
            })
            .collect();
        json!({
            "point": self.location.label(),
            "exponent": self.exponent.to_string(),
            "terms": self.terms,
            "precision_bits": self.prec().bits(),
            "log_coeffs": coeffs,
        })
    }
}

impl std::fmt::Display for LogSeries {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "u^({}) * [", self.exponent)?;
        let mut first = true;
        for (l, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate().take(4) {
                if c.abs_f64() < 1e-30 {
                    continue;
                }
                let (a, b) = c.to_f64_pair();
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({a:.6}{b:+.6}i)")?;
                if j > 0 {
                    write!(f, "*u^{j}")?;
                }
                if l > 0 {
                    write!(f, "*log(u)^{l}")?;
                }
            }
        }
        write!(f, " + ...]")
    }
}

/// Exponents of one class modulo `Z`: base exponent and the integer offsets
/// with their multiplicities.
struct ExponentClass {
    base: Exponent,
    offsets: Vec<(usize, usize)>,
}

fn integer_difference(a: &Exponent, b: &Exponent, prec: Precision) -> Option<i64> {
    match (a, b) {
        (Exponent::Rational(x), Exponent::Rational(y)) => {
            let d = Rational::from(x - y);
            if *d.denom() == 1 {
                d.numer().to_i64()
            } else {
                None
            }
        }
        _ => {
            let d = &a.to_complex(prec) - &b.to_complex(prec);
            let (re, im) = d.to_f64_pair();
            let r = re.round();
            if im.abs() < 1e-20 && (re - r).abs() < 1e-20 {
                Some(r as i64)
            } else {
                None
            }
        }
    }
}

fn exponent_classes(exps: &ExponentList, prec: Precision) -> Vec<ExponentClass> {
    let distinct = exps.distinct();
    let mut used = vec![false; distinct.len()];
    let mut out = Vec::new();
    for i in 0..distinct.len() {
        if used[i] {
            continue;
        }
        let mut members: Vec<(i64, usize)> = Vec::new();
        for j in i..distinct.len() {
            if used[j] {
                continue;
            }
            if let Some(d) = integer_difference(&distinct[j].0, &distinct[i].0, prec) {
                used[j] = true;
                members.push((d, distinct[j].1));
            }
        }
        let low = members.iter().map(|m| m.0).min().unwrap();
        let base = match &distinct[i].0 {
            Exponent::Rational(r) => Exponent::Rational(Rational::from(r + low)),
            Exponent::Numeric(z) => {
                let mut z = z.clone();
                z.re += low;
                Exponent::Numeric(z)
            }
        };
        let mut offsets: Vec<(usize, usize)> = members.iter().map(|&(d, m)| ((d - low) as usize, m)).collect();
        offsets.sort();
        out.push(ExponentClass { base, offsets });
    }
    out
}

fn factorial_ratio(hi: usize, lo: usize) -> i64 {
    ((lo + 1)..=hi).map(|x| x as i64).product()
}

/// `Σ_m a_m N^m v` for Taylor coefficients `a` of a row polynomial.
fn apply_shifted(a: &[BigComplex], v: &[BigComplex], prec: Precision) -> Vec<BigComplex> {
    let len = v.len();
    let mut out = vec![BigComplex::zero(prec); len];
    for (m, am) in a.iter().enumerate().take(len) {
        if am.is_zero() {
            continue;
        }
        for l in 0..len - m {
            if v[l + m].is_zero() {
                continue;
            }
            // (N^m v)[l] = (l+m)!/l! v[l+m]
            let t = &v[l + m].scale_i64(factorial_ratio(l + m, l)) * am;
            out[l] = &out[l] + &t;
        }
    }
    out
}

/// Frobenius basis at a regular singular (or ordinary) point, truncated at
/// `K` terms past each leading exponent.
///
/// Solutions are grouped by distinct exponent; within a group the member
/// with leading term `u^α logˢ u` is listed in increasing `s`.
pub fn frobenius_basis(op: &ThetaOperator, loc: &Location, terms: usize, prec: Precision) -> Result<Vec<LogSeries>> {
    let n = op.order();
    if terms < n {
        return Err(Error::InvalidArgument(format!("truncation order {terms} is below the operator order {n}")));
    }
    let data = analyze_point(op, loc, prec)?;
    if data.kind == PointKind::Irregular {
        return Err(Error::IrregularSingularity { point: loc.label() });
    }
    let exps = data.exponents.expect("regular point has exponents");
    let work = prec.with_guard(16);
    let rows = local_rows(op, loc, work)?.to_complex(work);
    let mut out = Vec::new();
    for class in exponent_classes(&exps, prec) {
        let last = class.offsets.last().unwrap().0;
        for (idx, &(start, mult)) in class.offsets.iter().enumerate() {
            for s in 0..mult {
                let series = solve_member(&rows, n, &class, idx, s, start, last, terms, work, loc)?;
                out.push(series);
            }
        }
    }
    Ok(out
        .into_iter()
        .map(|mut s| {
            for row in &mut s.coeffs {
                for c in row.iter_mut() {
                    *c = c.with_prec(prec);
                }
            }
            s
        })
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn solve_member(
    rows: &[Vec<BigComplex>],
    n: usize,
    class: &ExponentClass,
    idx: usize,
    s: usize,
    start: usize,
    _last: usize,
    terms: usize,
    prec: Precision,
    loc: &Location,
) -> Result<LogSeries> {
    let base = class.base.to_complex(prec);
    let width = n;
    // coefficient vectors v_j for j = start..=start+terms (stored relative)
    let mut vs: Vec<Vec<BigComplex>> = Vec::with_capacity(terms + 1);
    for rel in 0..=terms {
        let j = start + rel;
        // rhs = − Σ_{r≥1} R_r(α + j − r + N) v_{j−r}
        let mut rhs = vec![BigComplex::zero(prec); width];
        for r in 1..rows.len().min(rel + 1) {
            let prev = &vs[rel - r];
            if prev.iter().all(|c| c.is_zero()) {
                continue;
            }
            let x = &base + &BigComplex::from_i64((j - r) as i64, prec);
            let a = complex_taylor_shift(&rows[r], &x);
            let t = apply_shifted(&a, prev, prec);
            for l in 0..width {
                rhs[l] = &rhs[l] - &t[l];
            }
        }
        let mu = class.offsets.iter().find(|o| o.0 == j).map_or(0, |o| o.1);
        let x = &base + &BigComplex::from_i64(j as i64, prec);
        let a = complex_taylor_shift(&rows[0], &x);
        // N^μ w = rhs
        let mut w = vec![BigComplex::zero(prec); width];
        for l in 0..width {
            if rhs[l].is_zero() {
                continue;
            }
            if l + mu >= width {
                if rhs[l].abs_f64() > 0.0 {
                    return Err(Error::Numeric(format!(
                        "log degree exceeds {} in the Frobenius recurrence at {} (order {j})",
                        width - 1,
                        loc.label()
                    )));
                }
                continue;
            }
            // (N^μ w)[l] = (l+μ)!/l! w[l+μ]
            w[l + mu] = rhs[l].scale_rational(&Rational::from((1, factorial_ratio(l + mu, l))));
        }
        if rel == 0 {
            debug_assert_eq!(idx, class.offsets.iter().position(|o| o.0 == start).unwrap());
            let mut v = vec![BigComplex::zero(prec); width];
            v[s] = BigComplex::one(prec);
            vs.push(v);
            continue;
        }
        // U v = w with U = Σ_{m≥μ} a_m N^{m−μ}
        let lead = &a[mu];
        if lead.is_zero() {
            return Err(Error::Numeric(format!("degenerate indicial factor at {}", loc.label())));
        }
        let inv = lead.recip();
        let mut v = vec![BigComplex::zero(prec); width];
        for l in (0..width).rev() {
            let mut acc = w[l].clone();
            for m in 1..width - l {
                if mu + m >= a.len() || v[l + m].is_zero() {
                    continue;
                }
                let t = &v[l + m].scale_i64(factorial_ratio(l + m, l)) * &a[mu + m];
                acc = &acc - &t;
            }
            v[l] = &acc * &inv;
        }
        vs.push(v);
    }
    let exponent = match &class.base {
        Exponent::Rational(r) => Exponent::Rational(Rational::from(r + start as i64)),
        Exponent::Numeric(z) => {
            let mut z = z.clone();
            z.re += start as i64;
            Exponent::Numeric(z)
        }
    };
    let coeffs: Vec<Vec<BigComplex>> = (0..width).map(|l| vs.iter().map(|v| v[l].clone()).collect()).collect();
    let mut series = LogSeries { location: loc.clone(), exponent, terms, coeffs };
    let m = series.log_count();
    series.coeffs.truncate(m);
    Ok(series)
}

/// Formal residual `L y` of a log series, as a log series with the same
/// exponent and `K + deg` terms.
#[derive(Clone, Debug)]
pub struct Residual {
    pub series: LogSeries,
    /// Smallest `α + j` carrying a coefficient above the noise level, or
    /// `None` when every computed coefficient vanishes.
    pub valuation: Option<Exponent>,
    pub valuation_offset: Option<usize>,
    pub max_abs: f64,
}

pub fn apply_operator(op: &ThetaOperator, series: &LogSeries) -> Result<Residual> {
    let prec = series.prec();
    let rows = local_rows(op, &series.location, prec)?.to_complex(prec);
    let width = series.coeffs.len().max(1);
    let len = series.terms + rows.len();
    let x0 = series.exponent.to_complex(prec);
    let mut out = vec![vec![BigComplex::zero(prec); len]; width];
    let mut scale = vec![0.0f64; len];
    for j in 0..=series.terms {
        let v: Vec<BigComplex> = (0..width).map(|l| series.coeffs[l][j].clone()).collect();
        if v.iter().all(|c| c.is_zero()) {
            continue;
        }
        let x = &x0 + &BigComplex::from_i64(j as i64, prec);
        for (r, row) in rows.iter().enumerate() {
            let a = complex_taylor_shift(row, &x);
            let t = apply_shifted(&a, &v, prec);
            for l in 0..width {
                scale[j + r] = scale[j + r].max(t[l].abs_f64());
                out[l][j + r] = &out[l][j + r] + &t[l];
            }
        }
    }
    let noise = prec.eps_scaled(24);
    let mut valuation_offset = None;
    let mut max_abs = 0.0f64;
    for j in 0..len {
        for l in 0..width {
            let a = out[l][j].abs_f64();
            if a > noise * scale[j].max(1.0) && valuation_offset.is_none() {
                valuation_offset = Some(j);
            }
            if j <= series.terms {
                max_abs = max_abs.max(a);
            }
        }
    }
    let valuation = valuation_offset.map(|j| match &series.exponent {
        Exponent::Rational(r) => Exponent::Rational(Rational::from(r + j as i64)),
        Exponent::Numeric(z) => {
            let mut z = z.clone();
            z.re += j as i64;
            Exponent::Numeric(z)
        }
    });
    let terms = len - 1;
    Ok(Residual {
        series: LogSeries { location: series.location.clone(), exponent: series.exponent.clone(), terms, coeffs: out },
        valuation,
        valuation_offset,
        max_abs,
    })
}

/// Group structure of a basis: `(exponent, group size)` per distinct
/// leading exponent, in basis order.
pub fn group_structure(basis: &[LogSeries]) -> Vec<(Exponent, usize)> {
    let mut out: Vec<(Exponent, usize)> = Vec::new();
    for s in basis {
        match out.last_mut() {
            Some((e, m)) if *e == s.exponent => *m += 1,
            _ => out.push((s.exponent.clone(), 1)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opformat::parse;

    fn c(re: f64) -> BigComplex {
        BigComplex::from_f64(re, 0.0, Precision::DEFAULT)
    }

    #[test]
    fn no2_at_zero() {
        let op = parse("T^4 - t*(T+1/2)^4").unwrap();
        let basis = frobenius_basis(&op, &Location::zero(), 40, Precision::DEFAULT).unwrap();
        assert_eq!(basis.len(), 4);
        assert_eq!(group_structure(&basis), vec![(Exponent::Rational(Rational::new()), 4)]);
        let y1 = &basis[0];
        assert_eq!(y1.log_count(), 1);
        assert!(y1.coeffs[0][1].dist(&c(1.0 / 16.0)).to_f64() < 1e-30, "{}", y1);
        // c_j j^4 = c_{j-1} (j - 1/2)^4
        let c2 = 1.0 / 16.0 * (1.5f64.powi(4)) / 16.0;
        assert!((y1.coeffs[0][2].to_f64_pair().0 - c2).abs() < 1e-14);
        for (s, y) in basis.iter().enumerate() {
            assert_eq!(y.log_count(), s + 1);
            assert_eq!(y.leading_log_degree(), s);
            let r = apply_operator(&op, y).unwrap();
            assert!(r.valuation_offset.unwrap() > 40 - 4);
        }
    }

    #[test]
    fn first_order() {
        let op = parse("T - 1/3").unwrap();
        let basis = frobenius_basis(&op, &Location::zero(), 5, Precision::DEFAULT).unwrap();
        assert_eq!(basis.len(), 1);
        assert_eq!(basis[0].exponent, Exponent::Rational(Rational::from((1, 3))));
        assert!(basis[0].coeffs[0][1..].iter().all(|c| c.is_zero()));
        let r = apply_operator(&op, &basis[0]).unwrap();
        assert_eq!(r.valuation_offset, None);
    }

    #[test]
    fn resonant_point() {
        // exponents 0,1,3,4 at -1/2 for No. 21 (no logarithms needed or not,
        // the basis must still solve the operator)
        let op = crate::corpus::get("no21").unwrap().operator().unwrap();
        let loc = Location::Rational(Rational::from((-1, 2)));
        let basis = frobenius_basis(&op, &loc, 40, Precision::DEFAULT).unwrap();
        assert_eq!(basis.len(), 4);
        for y in &basis {
            let r = apply_operator(&op, y).unwrap();
            assert!(r.valuation_offset.is_none_or(|j| j > 36), "{:?}", r.valuation_offset);
        }
    }

    #[test]
    fn log_forced_by_resonance() {
        // exponents 0, 1 at 0 and the recurrence is inconsistent at order 1
        let op = parse("T*(T-1) - t*(T+1)").unwrap();
        let basis = frobenius_basis(&op, &Location::zero(), 12, Precision::DEFAULT).unwrap();
        assert_eq!(basis.len(), 2);
        for y in &basis {
            let r = apply_operator(&op, y).unwrap();
            assert!(r.valuation_offset.is_none_or(|j| j > 10));
        }
        assert!(basis.iter().any(|y| y.log_count() == 2));
    }

    #[test]
    fn ploc_groups() {
        let op = crate::corpus::get("ploc").unwrap().operator().unwrap();
        let basis = frobenius_basis(&op, &Location::zero(), 40, Precision::DEFAULT).unwrap();
        let g = group_structure(&basis);
        assert_eq!(
            g,
            vec![(Exponent::Rational(Rational::from((1, 4))), 2), (Exponent::Rational(Rational::from((3, 4))), 2)]
        );
        assert_eq!(basis[0].log_count(), 1);
        assert_eq!(basis[1].log_count(), 2);
    }
}
