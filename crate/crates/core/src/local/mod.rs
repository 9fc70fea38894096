//! Singular points, indicial equations, local exponents and Riemann symbols.

use std::cmp::Ordering;
use std::fmt;

use rug::{Integer, Rational};

use crate::arith::roots::{clustered_roots, snap_complex_rational, sort_roots};
use crate::arith::{numeric_roots, rational_roots, BigComplex, Poly, Precision};
use crate::error::{Error, Result};
use crate::operator::{stirling_first, ThetaOperator};

/// Largest denominator accepted when snapping a numeric exponent.
pub const MAX_EXPONENT_DENOMINATOR: u32 = 120;

/// Guard bits used for numeric local analysis at algebraic points.
const GUARD_BITS: u32 = 32;

/// A point of the projective line.
#[derive(Clone, Debug, PartialEq)]
pub enum Location {
    Rational(Rational),
    /// Root number `index` (in the crate's deterministic root order) of the
    /// square-free rational factor `factor`, with its numeric value.
    Algebraic { factor: Poly, index: usize, value: BigComplex },
    Infinity,
}

impl Location {
    pub fn zero() -> Self {
        Location::Rational(Rational::new())
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Location::Rational(r) if *r == 0)
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Location::Infinity)
    }

    /// Numeric value of a finite point.
    pub fn value(&self, prec: Precision) -> Option<BigComplex> {
        match self {
            Location::Rational(r) => Some(BigComplex::from_rational(r, prec)),
            Location::Algebraic { value, .. } => Some(value.with_prec(prec)),
            Location::Infinity => None,
        }
    }

    pub fn label(&self) -> String {
        match self {
            Location::Rational(r) => r.to_string(),
            Location::Algebraic { factor, value, .. } => {
                let (re, im) = value.to_f64_pair();
                format!("root of {factor} ≈ {re:.10}{im:+.10}i")
            }
            Location::Infinity => "∞".into(),
        }
    }

    fn sort_key(&self) -> (u8, f64, f64) {
        match self {
            Location::Rational(r) => (0, r.to_f64(), 0.0),
            Location::Algebraic { value, .. } => {
                let (a, b) = value.to_f64_pair();
                (1, a, b)
            }
            Location::Infinity => (2, 0.0, 0.0),
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.label())
    }
}

/// Classification of a point by its local θ-rows.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PointKind {
    Ordinary,
    /// Zero of the leading coefficient with exponents `0, 1, …, n−1`; treated
    /// as ordinary.
    ApparentCandidate,
    RegularSingular,
    Irregular,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SingularPoint {
    pub location: Location,
    pub is_regular: bool,
}

/// A local exponent: exact when snapping succeeded.
#[derive(Clone, Debug, PartialEq)]
pub enum Exponent {
    Rational(Rational),
    Numeric(BigComplex),
}

impl Exponent {
    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Exponent::Rational(r) => Some(r),
            Exponent::Numeric(_) => None,
        }
    }

    pub fn to_complex(&self, prec: Precision) -> BigComplex {
        match self {
            Exponent::Rational(r) => BigComplex::from_rational(r, prec),
            Exponent::Numeric(z) => z.with_prec(prec),
        }
    }

    fn cmp_key(&self) -> (u8, f64, f64) {
        match self {
            Exponent::Rational(r) => (0, r.to_f64(), 0.0),
            Exponent::Numeric(z) => {
                let (a, b) = z.to_f64_pair();
                (1, a, b)
            }
        }
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Rational(r) => write!(f, "{r}"),
            Exponent::Numeric(z) => {
                let (a, b) = z.to_f64_pair();
                write!(f, "≈{a:.12}{b:+.12}i")
            }
        }
    }
}

/// Multiset of local exponents, sorted ascending (exact ones first).
#[derive(Clone, Debug, PartialEq)]
pub struct ExponentList {
    values: Vec<Exponent>,
}

impl ExponentList {
    pub fn new(mut values: Vec<Exponent>) -> Self {
        values.sort_by(|a, b| match (a, b) {
            (Exponent::Rational(x), Exponent::Rational(y)) => x.cmp(y),
            _ => a.cmp_key().partial_cmp(&b.cmp_key()).unwrap_or(Ordering::Equal),
        });
        ExponentList { values }
    }

    pub fn from_rationals(v: &[Rational]) -> Self {
        ExponentList::new(v.iter().cloned().map(Exponent::Rational).collect())
    }

    pub fn values(&self) -> &[Exponent] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// All exponents as rationals, when every one snapped.
    pub fn rationals(&self) -> Option<Vec<Rational>> {
        self.values.iter().map(|e| e.as_rational().cloned()).collect()
    }

    /// Distinct values with multiplicities.
    pub fn distinct(&self) -> Vec<(Exponent, usize)> {
        let mut out: Vec<(Exponent, usize)> = Vec::new();
        for e in &self.values {
            match out.last_mut() {
                Some((prev, m)) if same_exponent(prev, e) => *m += 1,
                _ => out.push((e.clone(), 1)),
            }
        }
        out
    }

    /// Number of distinct exponents.
    pub fn k(&self) -> usize {
        self.distinct().len()
    }

    pub fn sum(&self) -> Option<Rational> {
        self.rationals().map(|v| v.iter().fold(Rational::new(), |acc, x| acc + x))
    }

    /// Exponents `0, 1, …, n−1`.
    pub fn is_ordinary_pattern(&self) -> bool {
        match self.rationals() {
            Some(v) => v.iter().enumerate().all(|(i, r)| *r == i as i64),
            None => false,
        }
    }

    pub fn shifted(&self, alpha: &Rational) -> ExponentList {
        ExponentList::new(
            self.values
                .iter()
                .map(|e| match e {
                    Exponent::Rational(r) => Exponent::Rational(Rational::from(r + alpha)),
                    Exponent::Numeric(z) => {
                        let mut z = z.clone();
                        z.re += alpha;
                        Exponent::Numeric(z)
                    }
                })
                .collect(),
        )
    }
}

fn same_exponent(a: &Exponent, b: &Exponent) -> bool {
    match (a, b) {
        (Exponent::Rational(x), Exponent::Rational(y)) => x == y,
        (Exponent::Numeric(x), Exponent::Numeric(y)) => x.dist(y).to_f64() < 1e-20,
        _ => false,
    }
}

impl fmt::Display for ExponentList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values.iter().map(|e| e.to_string()).collect();
        write!(f, "{}", parts.join(", "))
    }
}

/// Local θ-rows at a point: the operator is proportional to
/// `Σ_r u^r R_r(Θ_u)` in a local coordinate `u`, with `rows[r][i]` the
/// coefficient of `Θ_u^i` in `R_r`. Leading zero rows are stripped, so
/// `rows[0]` is the indicial row.
#[derive(Clone, Debug)]
pub enum LocalRows {
    Exact(Vec<Vec<Rational>>),
    Numeric(Vec<Vec<BigComplex>>),
}

impl LocalRows {
    pub fn len(&self) -> usize {
        match self {
            LocalRows::Exact(r) => r.len(),
            LocalRows::Numeric(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Rows as complex numbers at the given precision.
    pub fn to_complex(&self, prec: Precision) -> Vec<Vec<BigComplex>> {
        match self {
            LocalRows::Exact(rows) => rows
                .iter()
                .map(|r| r.iter().map(|c| BigComplex::from_rational(c, prec)).collect())
                .collect(),
            LocalRows::Numeric(rows) => {
                rows.iter().map(|r| r.iter().map(|c| c.with_prec(prec)).collect()).collect()
            }
        }
    }
}

/// Local rows at a point; `u = t − t₀` at finite points and `u = 1/t` at ∞.
pub fn local_rows(op: &ThetaOperator, loc: &Location, prec: Precision) -> Result<LocalRows> {
    op.ensure_nonzero()?;
    match loc {
        Location::Infinity => Ok(LocalRows::Exact(strip_exact(infinity_rows(op)))),
        Location::Rational(r) => Ok(LocalRows::Exact(strip_exact(finite_rows_exact(op, r)))),
        Location::Algebraic { value, .. } => {
            let work = prec.with_guard(GUARD_BITS);
            Ok(LocalRows::Numeric(strip_numeric(finite_rows_numeric(op, &value.with_prec(work)), prec)))
        }
    }
}

fn infinity_rows(op: &ThetaOperator) -> Vec<Vec<Rational>> {
    let d = op.max_degree();
    (0..=d)
        .map(|r| {
            op.coeffs()
                .iter()
                .enumerate()
                .map(|(k, p)| {
                    let c = p.coeff(d - r);
                    if k % 2 == 1 {
                        -c
                    } else {
                        c
                    }
                })
                .collect()
        })
        .collect()
}

/// θ-coefficients `P_i(u) = Σ_k q_k(u + t₀) u^{n−k} s(k,i)` in the local
/// coordinate `u = t − t₀`, where `q_k` are the d-form coefficients.
fn finite_rows_exact(op: &ThetaOperator, t0: &Rational) -> Vec<Vec<Rational>> {
    let n = op.order();
    let d = op.to_d();
    let shifted: Vec<Poly> = d
        .coeffs()
        .iter()
        .map(|q| {
            debug_assert!(q.is_poly());
            q.num().taylor_shift(t0)
        })
        .collect();
    let mut polys = vec![Poly::zero(); n + 1];
    for (k, q) in shifted.iter().enumerate() {
        let base = q.shift_up(n - k);
        for (i, s) in stirling_first(k).iter().enumerate() {
            if *s != 0 {
                polys[i] = &polys[i] + &base.scale(&Rational::from(s.clone()));
            }
        }
    }
    let deg = polys.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
    (0..=deg).map(|r| polys.iter().map(|p| p.coeff(r)).collect()).collect()
}

fn finite_rows_numeric(op: &ThetaOperator, t0: &BigComplex) -> Vec<Vec<BigComplex>> {
    let prec = t0.prec();
    let n = op.order();
    let d = op.to_d();
    let shifted: Vec<Vec<BigComplex>> =
        d.coeffs().iter().map(|q| complex_taylor_shift(&q.num().to_complex(prec), t0)).collect();
    let deg = shifted.iter().map(|c| c.len()).max().unwrap_or(0) + n;
    let mut polys = vec![vec![BigComplex::zero(prec); deg]; n + 1];
    for (k, q) in shifted.iter().enumerate() {
        for (i, s) in stirling_first(k).iter().enumerate() {
            if *s == 0 {
                continue;
            }
            let s = s.to_i64().unwrap();
            for (m, c) in q.iter().enumerate() {
                let idx = m + n - k;
                polys[i][idx] = &polys[i][idx] + &c.scale_i64(s);
            }
        }
    }
    (0..deg).map(|r| polys.iter().map(|p| p[r].clone()).collect()).collect()
}

/// `p(u + c)` for complex coefficients.
pub fn complex_taylor_shift(p: &[BigComplex], c: &BigComplex) -> Vec<BigComplex> {
    let mut a = p.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = &a[j + 1] * c;
            a[j] = &a[j] + &t;
        }
    }
    a
}

fn strip_exact(mut rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let first = rows.iter().position(|r| r.iter().any(|c| *c != 0)).unwrap_or(rows.len());
    rows.drain(..first);
    while rows.last().is_some_and(|r| r.iter().all(|c| *c == 0)) {
        rows.pop();
    }
    rows
}

fn numeric_zero_threshold(rows: &[Vec<BigComplex>], prec: Precision) -> f64 {
    let scale = rows.iter().flatten().map(|c| c.abs_f64()).fold(0.0, f64::max);
    scale * prec.eps_scaled(16)
}

fn strip_numeric(mut rows: Vec<Vec<BigComplex>>, prec: Precision) -> Vec<Vec<BigComplex>> {
    let thr = numeric_zero_threshold(&rows, prec);
    let nonzero = |r: &Vec<BigComplex>| r.iter().any(|c| c.abs_f64() > thr);
    let first = rows.iter().position(nonzero).unwrap_or(rows.len());
    rows.drain(..first);
    while rows.last().is_some_and(|r| !nonzero(r)) {
        rows.pop();
    }
    // flush the noise in the indicial row so its degree is well defined
    if let Some(r0) = rows.first_mut() {
        for c in r0.iter_mut() {
            if c.abs_f64() <= thr {
                *c = BigComplex::zero(c.prec());
            }
        }
    }
    rows
}

fn rows_regular(rows: &LocalRows, n: usize) -> bool {
    match rows {
        LocalRows::Exact(r) => r.first().is_some_and(|r0| r0[n] != 0),
        LocalRows::Numeric(r) => r.first().is_some_and(|r0| !r0[n].is_zero()),
    }
}

/// Indicial polynomial, monic of degree `n`: exact at rational points and
/// ∞, numeric (complex coefficients, ascending) at algebraic points.
#[derive(Clone, Debug)]
pub enum Indicial {
    Exact(Poly),
    Numeric(Vec<BigComplex>),
}

pub fn indicial_polynomial(op: &ThetaOperator, loc: &Location, prec: Precision) -> Result<Indicial> {
    let rows = local_rows(op, loc, prec)?;
    indicial_from_rows(&rows, op.order(), loc)
}

fn indicial_from_rows(rows: &LocalRows, n: usize, loc: &Location) -> Result<Indicial> {
    if !rows_regular(rows, n) {
        return Err(Error::IrregularSingularity { point: loc.label() });
    }
    Ok(match rows {
        LocalRows::Exact(r) => Indicial::Exact(Poly::new(r[0].clone()).monic()),
        LocalRows::Numeric(r) => {
            let lead = r[0][n].clone();
            Indicial::Numeric(r[0].iter().map(|c| c / &lead).collect())
        }
    })
}

/// Roots of the indicial polynomial, snapped to rationals where possible.
pub fn exponents_of(ind: &Indicial, prec: Precision) -> Result<ExponentList> {
    let tol = prec.eps_scaled(32);
    let mut values = Vec::new();
    match ind {
        Indicial::Exact(p) => {
            let rr = rational_roots(p)?;
            let mut rest = p.clone();
            for (r, m) in &rr {
                for _ in 0..*m {
                    values.push(Exponent::Rational(r.clone()));
                    rest = rest.exact_div(&Poly::linear_root(r)).unwrap();
                }
            }
            if rest.degree().unwrap_or(0) > 0 {
                for (z, m) in numeric_roots(&rest, prec)? {
                    for _ in 0..m {
                        values.push(Exponent::Numeric(z.clone()));
                    }
                }
            }
        }
        Indicial::Numeric(c) => {
            let work = c[0].prec();
            let radius = 2f64.powf(-(prec.bits() as f64) / 8.0);
            for (z, m) in clustered_roots(c, work, radius)? {
                let e = match snap_complex_rational(&z, MAX_EXPONENT_DENOMINATOR, tol) {
                    Some(q) => Exponent::Rational(q),
                    None => Exponent::Numeric(z.with_prec(prec)),
                };
                for _ in 0..m {
                    values.push(e.clone());
                }
            }
        }
    }
    Ok(ExponentList::new(values))
}

/// Local exponents at a regular point (at ∞ in the `s = 1/t` convention).
pub fn local_exponents(op: &ThetaOperator, loc: &Location, prec: Precision) -> Result<ExponentList> {
    exponents_of(&indicial_polynomial(op, loc, prec)?, prec)
}

/// Everything the local analysis knows about one point.
#[derive(Clone, Debug)]
pub struct PointData {
    pub location: Location,
    pub kind: PointKind,
    pub rows: LocalRows,
    pub exponents: Option<ExponentList>,
}

/// Analyses one point: rows, regularity, exponents and kind.
pub fn analyze_point(op: &ThetaOperator, loc: &Location, prec: Precision) -> Result<PointData> {
    let n = op.order();
    let rows = local_rows(op, loc, prec)?;
    if !rows_regular(&rows, n) {
        return Ok(PointData { location: loc.clone(), kind: PointKind::Irregular, rows, exponents: None });
    }
    let ind = indicial_from_rows(&rows, n, loc)?;
    let exps = exponents_of(&ind, prec)?;
    let kind = if exps.is_ordinary_pattern() {
        if is_leading_zero(op, loc) {
            PointKind::ApparentCandidate
        } else {
            PointKind::Ordinary
        }
    } else {
        PointKind::RegularSingular
    };
    Ok(PointData { location: loc.clone(), kind, rows, exponents: Some(exps) })
}

/// Whether the point is a zero of the d-form leading coefficient (in the
/// coordinate `s = 1/t` at ∞).
fn is_leading_zero(op: &ThetaOperator, loc: &Location) -> bool {
    let lead = op.leading();
    match loc {
        Location::Rational(r) => *r == 0 || lead.eval(r) == 0,
        Location::Algebraic { .. } => true,
        // Θ_s^n = s^n D_s^n, so in d-form the leading coefficient vanishes at s = 0
        Location::Infinity => true,
    }
}

/// Candidate singular points: 0, rational and algebraic zeros of the
/// leading coefficient, and ∞.
pub fn candidate_points(op: &ThetaOperator, prec: Precision) -> Result<Vec<Location>> {
    op.ensure_nonzero()?;
    let lead = op.leading();
    let mut out = vec![Location::zero()];
    let rr = rational_roots(lead)?;
    let mut rest = lead.clone();
    for (r, m) in &rr {
        for _ in 0..*m {
            rest = rest.exact_div(&Poly::linear_root(r)).unwrap();
        }
        if *r != 0 {
            out.push(Location::Rational(r.clone()));
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        let work = prec.with_guard(GUARD_BITS);
        for (f, _) in rest.square_free_decomposition() {
            let mut roots = numeric_roots(&f, work)?;
            sort_roots(&mut roots);
            for (index, (z, _)) in roots.into_iter().enumerate() {
                out.push(Location::Algebraic { factor: f.clone(), index, value: z });
            }
        }
    }
    out.push(Location::Infinity);
    out.sort_by(|a, b| {
        let (ka, kb) = (a.sort_key(), b.sort_key());
        ka.partial_cmp(&kb).unwrap_or(Ordering::Equal)
    });
    Ok(out)
}

/// Genuine singular points (apparent candidates excluded), each flagged by
/// the pole-order criterion.
pub fn singular_points(op: &ThetaOperator, prec: Precision) -> Result<Vec<SingularPoint>> {
    Ok(point_survey(op, prec)?
        .into_iter()
        .filter(|p| matches!(p.kind, PointKind::RegularSingular | PointKind::Irregular))
        .map(|p| SingularPoint { is_regular: p.kind != PointKind::Irregular, location: p.location })
        .collect())
}

/// Analysis of every candidate point.
pub fn point_survey(op: &ThetaOperator, prec: Precision) -> Result<Vec<PointData>> {
    candidate_points(op, prec)?
        .iter()
        .map(|loc| analyze_point(op, loc, prec))
        .collect()
}

/// Singular points with their exponents.
#[derive(Clone, Debug)]
pub struct RiemannSymbol {
    pub order: usize,
    pub entries: Vec<(SingularPoint, ExponentList)>,
    /// Zeros of the leading coefficient with exponents `0, …, n−1`.
    pub apparent: Vec<Location>,
    /// Conjugate algebraic points gave identical snapped exponents.
    pub conjugates_consistent: bool,
}

impl RiemannSymbol {
    pub fn get(&self, loc: &Location) -> Option<&ExponentList> {
        self.entries.iter().find(|(p, _)| same_location(&p.location, loc)).map(|(_, e)| e)
    }

    pub fn at_rational(&self, r: &Rational) -> Option<&ExponentList> {
        self.get(&Location::Rational(r.clone()))
    }

    pub fn at_infinity(&self) -> Option<&ExponentList> {
        self.get(&Location::Infinity)
    }

    pub fn locations(&self) -> Vec<&Location> {
        self.entries.iter().map(|(p, _)| &p.location).collect()
    }
}

pub fn same_location(a: &Location, b: &Location) -> bool {
    match (a, b) {
        (Location::Rational(x), Location::Rational(y)) => x == y,
        (Location::Infinity, Location::Infinity) => true,
        (Location::Algebraic { value: x, .. }, Location::Algebraic { value: y, .. }) => {
            x.dist(y).to_f64() < 1e-20
        }
        _ => false,
    }
}

pub fn riemann_symbol(op: &ThetaOperator, prec: Precision) -> Result<RiemannSymbol> {
    let survey = point_survey(op, prec)?;
    let mut entries = Vec::new();
    let mut apparent = Vec::new();
    for p in survey {
        match p.kind {
            PointKind::Irregular => {
                return Err(Error::IrregularSingularity { point: p.location.label() })
            }
            PointKind::ApparentCandidate => apparent.push(p.location),
            PointKind::Ordinary => {}
            PointKind::RegularSingular => entries.push((
                SingularPoint { location: p.location, is_regular: true },
                p.exponents.unwrap(),
            )),
        }
    }
    let mut conjugates_consistent = true;
    for (i, (a, ea)) in entries.iter().enumerate() {
        for (b, eb) in entries.iter().skip(i + 1) {
            if let (Location::Algebraic { factor: fa, .. }, Location::Algebraic { factor: fb, .. }) =
                (&a.location, &b.location)
            {
                if fa == fb && (ea.rationals().is_none() || ea.rationals() != eb.rationals()) {
                    conjugates_consistent = false;
                }
            }
        }
    }
    Ok(RiemannSymbol { order: op.order(), entries, apparent, conjugates_consistent })
}

/// All `n` exponents equal.
pub fn is_mum_point(op: &ThetaOperator, loc: &Location, prec: Precision) -> Result<bool> {
    Ok(local_exponents(op, loc, prec)?.k() == 1)
}

/// Every exponent is rational.
pub fn quasi_unipotence_check(exps: &ExponentList) -> bool {
    exps.rationals().is_some()
}

/// Sum of all exponents against `(s − 2) n(n−1)/2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FuchsRelation {
    pub lhs: Rational,
    pub rhs: Rational,
    pub ok: bool,
}

pub fn fuchs_relation_check(rs: &RiemannSymbol, n: usize) -> Option<FuchsRelation> {
    let mut lhs = Rational::new();
    for (_, e) in &rs.entries {
        lhs += e.sum()?;
    }
    let s = rs.entries.len() as i64;
    let rhs = Rational::from(Integer::from((s - 2) * (n * (n - 1) / 2) as i64));
    let ok = lhs == rhs;
    Some(FuchsRelation { lhs, rhs, ok })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opformat::parse;

    fn q(n: i64, d: i64) -> Rational {
        Rational::from((n, d))
    }

    fn rats(e: &ExponentList) -> Vec<Rational> {
        e.rationals().unwrap()
    }

    #[test]
    fn no2_symbol() {
        let op = parse("T^4 - t*(T+1/2)^4").unwrap();
        let rs = riemann_symbol(&op, Precision::DEFAULT).unwrap();
        assert_eq!(rs.entries.len(), 3);
        assert_eq!(rats(rs.at_rational(&q(0, 1)).unwrap()), vec![q(0, 1); 4]);
        assert_eq!(rats(rs.at_rational(&q(1, 1)).unwrap()), vec![q(0, 1), q(1, 1), q(1, 1), q(2, 1)]);
        assert_eq!(rats(rs.at_infinity().unwrap()), vec![q(1, 2); 4]);
        let f = fuchs_relation_check(&rs, 4).unwrap();
        assert!(f.ok);
        assert_eq!(f.lhs, 6);
    }

    #[test]
    fn ordinary_point_exponents() {
        let op = parse("T^4 - t*(T+1/2)^4").unwrap();
        let e = local_exponents(&op, &Location::Rational(q(3, 7)), Precision::DEFAULT).unwrap();
        assert!(e.is_ordinary_pattern());
    }

    #[test]
    fn irregular_point_detected() {
        // t^2 Θ + 1 has an irregular point at 0
        let op = parse("t^2*T + 1").unwrap();
        assert!(matches!(
            indicial_polynomial(&op, &Location::zero(), Precision::DEFAULT),
            Err(Error::IrregularSingularity { .. })
        ));
        assert!(matches!(riemann_symbol(&op, Precision::DEFAULT), Err(Error::IrregularSingularity { .. })));
    }

    #[test]
    fn algebraic_points() {
        // annihilates (t^2 - t + 1)^(1/3)
        let op = parse("(1 - t + t^2)*T - 1/3*(2*t^2 - t)").unwrap();
        let rs = riemann_symbol(&op, Precision::DEFAULT).unwrap();
        let alg: Vec<_> = rs
            .entries
            .iter()
            .filter(|(p, _)| matches!(p.location, Location::Algebraic { .. }))
            .collect();
        assert_eq!(alg.len(), 2);
        assert!(rs.conjugates_consistent);
        for (_, e) in alg {
            assert_eq!(rats(e), vec![q(1, 3)]);
        }
        assert_eq!(rats(rs.at_infinity().unwrap()), vec![q(-2, 3)]);
        assert!(fuchs_relation_check(&rs, 1).unwrap().ok);
    }
}
