//! Decision layer: Assumptions A/B from local exponents, shift
//! classification, quarter-shift admissibility, local geometricity and the
//! quadratic-twist construction.

use std::collections::BTreeMap;

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde_json::{json, Value};

use crate::arith::Precision;
use crate::error::{Error, Result};
use crate::local::{analyze_point, riemann_symbol, ExponentList, Location, PointKind, RiemannSymbol};
use crate::monodromy::{frac_part, JordanData};
use crate::monodromy::{monodromy_matrices, Monodromy};
use crate::operator::{Moebius, ThetaOperator};
use crate::symplectic::{invariant_form_space, symplectic_certificate, AlternatingFormSpace, FormVerdict, SymplecticCertificate};

/// Points tried in order when the caller leaves the twist point open.
pub const TWIST_CANDIDATES: [(i64, i64); 12] =
    [(2, 1), (3, 1), (5, 1), (-3, 1), (-2, 1), (7, 1), (-5, 1), (1, 2), (1, 3), (-1, 2), (-1, 3), (11, 1)];

/// `(A, B)` at one point from its sorted exponents and local monodromy order.
///
/// `n` is only consulted when all four exponents are distinct.
pub fn assumption_check(exps: &ExponentList, n: Option<u64>) -> Result<(bool, bool)> {
    let q = exps
        .rationals()
        .ok_or_else(|| Error::Domain("assumption check needs rational exponents".into()))?;
    if q.len() != 4 {
        return Err(Error::InvalidArgument(format!("expected 4 exponents, got {}", q.len())));
    }
    match exps.k() {
        1 => Ok((true, true)),
        2 => Ok((false, true)),
        3 => Ok((true, false)),
        _ => {
            let n = n.ok_or_else(|| Error::InvalidArgument("N is required when k = 4".into()))?;
            if n == 0 {
                return Err(Error::InvalidArgument("N must be positive".into()));
            }
            let nq = Rational::from(Integer::from(n));
            let gap = |i: usize| Rational::from(&nq * &Rational::from(&q[i + 1] - &q[i]));
            Ok((gap(1) == 1, gap(0) == 1))
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PointAB {
    pub location: Location,
    pub exponents: Vec<Rational>,
    pub k: usize,
    /// Local monodromy order, computed when `k = 4`.
    pub n: Option<u64>,
    pub satisfies_a: bool,
    pub satisfies_b: bool,
}

impl PointAB {
    pub fn verdict(&self) -> (bool, bool) {
        (self.satisfies_a, self.satisfies_b)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "point": self.location.label(),
            "exponents": self.exponents.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "k": self.k,
            "N": self.n,
            "A": self.satisfies_a,
            "B": self.satisfies_b,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ABStatus {
    pub points: Vec<PointAB>,
    pub all_a: bool,
    pub all_b: bool,
    pub infinite_index_implied: bool,
    /// The exponent criterion was applied without knowing that the operator
    /// is geometric.
    pub formal: bool,
}

impl ABStatus {
    pub fn get(&self, loc: &Location) -> Option<&PointAB> {
        self.points.iter().find(|p| crate::local::same_location(&p.location, loc))
    }

    pub fn to_json(&self) -> Value {
        json!({
            "criterion": "exponent criterion for Assumptions A and B",
            "points": self.points.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "all_A": self.all_a,
            "all_B": self.all_b,
            "infinite_index_implied": self.infinite_index_implied,
            "formal": self.formal,
        })
    }
}

fn needs_order(rs: &RiemannSymbol) -> bool {
    rs.entries.iter().any(|(_, e)| e.k() == 4)
}

/// A/B status from a symbol and, when some point has four distinct
/// exponents, the monodromy.
pub fn global_ab_from(rs: &RiemannSymbol, mono: Option<&Monodromy>, max_order: u32) -> Result<ABStatus> {
    let mut points = Vec::new();
    for (sp, exps) in &rs.entries {
        let q = exps
            .rationals()
            .ok_or_else(|| Error::Domain(format!("irrational exponents at {}", sp.location.label())))?;
        let k = exps.k();
        let n = if k == 4 {
            let mono = mono.ok_or_else(|| Error::InvalidArgument("monodromy needed for N".into()))?;
            let m = mono
                .get(&sp.location)
                .ok_or_else(|| Error::Numeric(format!("no monodromy matrix at {}", sp.location.label())))?;
            Some(m.jordan(max_order, mono.precision)?.order)
        } else {
            None
        };
        let (a, b) = assumption_check(exps, n)?;
        points.push(PointAB { location: sp.location.clone(), exponents: q, k, n, satisfies_a: a, satisfies_b: b });
    }
    let all_a = points.iter().all(|p| p.satisfies_a);
    let all_b = points.iter().all(|p| p.satisfies_b);
    Ok(ABStatus { points, all_a, all_b, infinite_index_implied: all_a || all_b, formal: true })
}

/// Assumption A/B at every singular point.
pub fn global_ab(op: &ThetaOperator, prec: Precision, max_order: u32) -> Result<ABStatus> {
    let rs = riemann_symbol(op, prec)?;
    let mono = if needs_order(&rs) { Some(monodromy_matrices(op, prec)?) } else { None };
    global_ab_from(&rs, mono.as_ref(), max_order)
}

/// A shift amount; irrational amounts only carry a label.
#[derive(Clone, Debug, PartialEq)]
pub enum ShiftAmount {
    Rational(Rational),
    Irrational(String),
}

impl ShiftAmount {
    /// Accepts `p/q`, an integer, or `sqrt(n)` for a non-square `n`.
    pub fn parse(text: &str) -> Result<ShiftAmount> {
        let s = text.trim();
        if let Some(inner) = s.strip_prefix("sqrt(").and_then(|r| r.strip_suffix(')')) {
            let n: Integer = inner
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad radicand in `{s}`")))?;
            if n < 0 {
                return Err(Error::InvalidArgument("negative radicand".into()));
            }
            if n.is_perfect_square() {
                return Ok(ShiftAmount::Rational(Rational::from(n.sqrt())));
            }
            return Ok(ShiftAmount::Irrational(s.to_string()));
        }
        parse_rational(s).map(ShiftAmount::Rational)
    }
}

impl std::fmt::Display for ShiftAmount {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ShiftAmount::Rational(q) => write!(f, "{q}"),
            ShiftAmount::Irrational(s) => write!(f, "{s}"),
        }
    }
}

/// Parses `p/q` or an integer.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::InvalidArgument(format!("expected a rational p/q, got `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: Integer = n.trim().parse().map_err(|_| bad())?;
            let d: Integer = d.trim().parse().map_err(|_| bad())?;
            if d == 0 {
                return Err(bad());
            }
            Ok(Rational::from((n, d)))
        }
        None => Ok(Rational::from(s.parse::<Integer>().map_err(|_| bad())?)),
    }
}

/// What is known about Zariski density of the monodromy group.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DensityEvidence {
    HasMum,
    AssumeDense,
    Unknown,
}

impl DensityEvidence {
    pub fn name(self) -> &'static str {
        match self {
            DensityEvidence::HasMum => "has-mum",
            DensityEvidence::AssumeDense => "assume-dense",
            DensityEvidence::Unknown => "unknown",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftClassKind {
    HalfIntegerSymplectic,
    QuarterNonsymplectic,
    /// Quarter shift without density evidence.
    QuarterConditional,
    DetObstructed,
    IrrationalNonquasiunipotent,
}

impl ShiftClassKind {
    pub fn name(self) -> &'static str {
        match self {
            ShiftClassKind::HalfIntegerSymplectic => "half-integer-symplectic",
            ShiftClassKind::QuarterNonsymplectic => "quarter-nonsymplectic",
            ShiftClassKind::QuarterConditional => "conditional",
            ShiftClassKind::DetObstructed => "det-obstructed",
            ShiftClassKind::IrrationalNonquasiunipotent => "irrational-nonquasiunipotent",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftClass {
    pub alpha: ShiftAmount,
    pub class: ShiftClassKind,
    /// Arithmeticity is preserved by the shift (half-integer class only).
    pub arithmetic_preserved: bool,
    pub density: DensityEvidence,
    pub mum_points: Vec<String>,
    pub reason: &'static str,
}

impl ShiftClass {
    pub fn to_json(&self) -> Value {
        json!({
            "alpha": self.alpha.to_string(),
            "class": self.class.name(),
            "arithmetic_preserved": self.arithmetic_preserved,
            "density_evidence": self.density.name(),
            "mum_points": self.mum_points,
            "reason": self.reason,
        })
    }
}

/// Class of a shift amount alone.
pub fn shift_class_of(alpha: &ShiftAmount, density: DensityEvidence) -> (ShiftClassKind, &'static str) {
    let q = match alpha {
        ShiftAmount::Irrational(_) => {
            return (
                ShiftClassKind::IrrationalNonquasiunipotent,
                "irrational exponents at 0: local monodromy is not quasi-unipotent",
            )
        }
        ShiftAmount::Rational(q) => q,
    };
    let two = Rational::from(q * 2u32);
    let four = Rational::from(q * 4u32);
    if two.is_integer() {
        (ShiftClassKind::HalfIntegerSymplectic, "2α ∈ Z: shift by a half-integer keeps the group symplectic")
    } else if four.is_integer() {
        match density {
            DensityEvidence::Unknown => (
                ShiftClassKind::QuarterConditional,
                "4α ∈ Z, 2α ∉ Z: non-symplectic only under Zariski density, which is not established",
            ),
            _ => (
                ShiftClassKind::QuarterNonsymplectic,
                "4α ∈ Z, 2α ∉ Z: invariant forms of the shifted group are degenerate",
            ),
        }
    } else {
        (ShiftClassKind::DetObstructed, "4α ∉ Z: det(e^{2πiα}M) ≠ 1 for the shifted local monodromy")
    }
}

/// Classifies `P(α)` for an operator assumed symplectic.
///
/// `HasMum` is checked against the Riemann symbol.
pub fn classify_shift(op: &ThetaOperator, alpha: &ShiftAmount, density: DensityEvidence, prec: Precision) -> Result<ShiftClass> {
    let rs = riemann_symbol(op, prec)?;
    let mum_points: Vec<String> =
        rs.entries.iter().filter(|(_, e)| e.k() == 1).map(|(p, _)| p.location.label()).collect();
    if density == DensityEvidence::HasMum && mum_points.is_empty() {
        return Err(Error::InvalidArgument("operator has no MUM point".into()));
    }
    let (class, reason) = shift_class_of(alpha, density);
    Ok(ShiftClass {
        alpha: alpha.clone(),
        class,
        arithmetic_preserved: class == ShiftClassKind::HalfIntegerSymplectic,
        density,
        mum_points,
        reason,
    })
}

/// Density evidence read off the operator: a MUM point if there is one.
pub fn detect_density(op: &ThetaOperator, prec: Precision) -> Result<DensityEvidence> {
    let rs = riemann_symbol(op, prec)?;
    Ok(if rs.entries.iter().any(|(_, e)| e.k() == 1) { DensityEvidence::HasMum } else { DensityEvidence::Unknown })
}

/// Multiset of `(eigenvalue fraction, block size)`.
pub type BlockMultiset = Vec<(Rational, usize)>;

/// Jordan forms of `M₀` for which both `M₀` and `i·M₀` can be integral
/// symplectic, listed as block multisets.
pub fn literal_admissible_forms() -> Vec<BlockMultiset> {
    let q = |n: i64, d: i64| Rational::from((n, d));
    let diag = |fs: &[(i64, i64)]| -> BlockMultiset {
        let mut v: BlockMultiset = fs.iter().map(|&(n, d)| (q(n, d), 1)).collect();
        v.sort();
        v
    };
    let mut forms = vec![
        vec![(q(0, 1), 2), (q(1, 2), 2)],
        vec![(q(1, 4), 2), (q(3, 4), 2)],
        diag(&[(0, 1), (0, 1), (1, 2), (1, 2)]),
        diag(&[(1, 4), (1, 4), (3, 4), (3, 4)]),
        diag(&[(1, 3), (2, 3), (1, 6), (5, 6)]),
        diag(&[(1, 12), (5, 12), (7, 12), (11, 12)]),
        diag(&[(1, 8), (3, 8), (5, 8), (7, 8)]),
    ];
    for f in &mut forms {
        f.sort();
    }
    forms
}

fn totient(d: u64) -> u64 {
    (1..=d).filter(|a| gcd(*a, d) == 1).count() as u64
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Closed under `Gal(Q̄/Q)`: for each block size, each order `d` present
/// contributes every primitive `d`-th root equally often.
pub fn galois_invariant(set: &[(Rational, usize)]) -> bool {
    let mut by: BTreeMap<(usize, u64), BTreeMap<Rational, usize>> = BTreeMap::new();
    for (f, b) in set {
        let d = f.denom().to_u64().unwrap_or(0);
        *by.entry((*b, d)).or_default().entry(f.clone()).or_default() += 1;
    }
    by.iter().all(|(&(_, d), counts)| {
        let first = *counts.values().next().unwrap();
        counts.len() as u64 == totient(d) && counts.values().all(|&c| c == first)
    })
}

/// Compatible with a symplectic Jordan form: `ζ` and `ζ⁻¹` carry the same
/// blocks, and odd-size blocks at `±1` come in pairs.
pub fn symplectic_shape(set: &[(Rational, usize)]) -> bool {
    let mut counts: BTreeMap<(Rational, usize), usize> = BTreeMap::new();
    for (f, b) in set {
        *counts.entry((f.clone(), *b)).or_default() += 1;
    }
    counts.iter().all(|((f, b), &c)| {
        let inv = frac_part(&Rational::from(-f));
        if inv == *f {
            b % 2 == 0 || c % 2 == 0
        } else {
            counts.get(&(inv, *b)) == Some(&c)
        }
    })
}

/// Galois test for the quarter shift of a local monodromy.
#[derive(Clone, Debug, PartialEq)]
pub struct GaloisEvidence {
    pub e: BlockMultiset,
    pub e_prime: BlockMultiset,
    pub e_invariant: bool,
    pub e_prime_invariant: bool,
    pub symplectic_shape: bool,
    pub admissible: bool,
    /// Index into [`literal_admissible_forms`] of the matching form.
    pub literal_form: Option<usize>,
    /// The abstract and literal checks disagree.
    pub defect: bool,
}

impl GaloisEvidence {
    pub fn to_json(&self) -> Value {
        let set = |s: &BlockMultiset| -> Vec<Value> {
            s.iter().map(|(f, b)| json!([crate::monodromy::root_label(f), b])).collect()
        };
        json!({
            "E": set(&self.e),
            "E_prime": set(&self.e_prime),
            "E_invariant": self.e_invariant,
            "E_prime_invariant": self.e_prime_invariant,
            "symplectic_shape": self.symplectic_shape,
            "admissible": self.admissible,
            "literal_form": self.literal_form.map(|i| i + 1),
            "defect": self.defect,
        })
    }
}

pub fn quarter_shift_admissible(jd: &JordanData) -> GaloisEvidence {
    let e = jd.block_pairs();
    let e_prime = jd.scaled(&Rational::from((1, 4))).block_pairs();
    let e_invariant = galois_invariant(&e);
    let e_prime_invariant = galois_invariant(&e_prime);
    let shape = symplectic_shape(&e) && symplectic_shape(&e_prime);
    let admissible = e_invariant && e_prime_invariant && shape;
    let literal_form = literal_admissible_forms().iter().position(|f| *f == e);
    GaloisEvidence {
        defect: admissible != literal_form.is_some(),
        e,
        e_prime,
        e_invariant,
        e_prime_invariant,
        symplectic_shape: shape,
        admissible,
        literal_form,
    }
}

#[derive(Clone, Debug)]
pub struct LocalGeometry {
    pub location: Location,
    pub exponents: Option<ExponentList>,
    pub jordan: Option<JordanData>,
    pub quasi_unipotent: bool,
    pub certificate: Option<SymplecticCertificate>,
}

impl LocalGeometry {
    pub fn passes(&self) -> bool {
        self.quasi_unipotent && self.certificate.as_ref().is_some_and(|c| c.passes())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "point": self.location.label(),
            "exponents": self.exponents.as_ref().map(|e| e.values().iter().map(|x| x.to_string()).collect::<Vec<_>>()),
            "jordan": self.jordan.as_ref().map(|j| j.to_json()),
            "quasi_unipotent": self.quasi_unipotent,
            "symplectic_certificate": self.certificate.as_ref().map(|c| c.to_json()),
        })
    }
}

#[derive(Clone, Debug)]
pub struct LocallyGeometricReport {
    pub points: Vec<LocalGeometry>,
    pub locally_geometric: bool,
    pub forms: AlternatingFormSpace,
    /// Locally geometric, yet every invariant form is degenerate.
    pub geometric_obstruction: bool,
    pub product_residual: f64,
}

impl LocallyGeometricReport {
    pub fn global_verdict(&self) -> FormVerdict {
        self.forms.verdict
    }

    pub fn to_json(&self, digits: usize) -> Value {
        json!({
            "points": self.points.iter().map(|p| p.to_json()).collect::<Vec<_>>(),
            "locally_geometric": self.locally_geometric,
            "global_form_verdict": self.forms.verdict.name(),
            "global_forms": self.forms.to_json(digits),
            "geometric_obstruction": self.geometric_obstruction,
            "product_residual": self.product_residual,
        })
    }
}

pub fn locally_geometric_from(mono: &Monodromy, max_order: u32, seed: u64) -> Result<LocallyGeometricReport> {
    let prec = mono.precision;
    let points: Vec<Result<LocalGeometry>> = mono
        .singular()
        .par_iter()
        .map(|m| {
            let rational = m.exponents.as_ref().is_some_and(|e| e.rationals().is_some());
            let jordan = m.jordan(max_order, prec).ok();
            let certificate = Some(symplectic_certificate(&m.entries, prec)?);
            Ok(LocalGeometry {
                location: m.location.clone(),
                exponents: m.exponents.clone(),
                quasi_unipotent: rational && jordan.is_some(),
                jordan,
                certificate,
            })
        })
        .collect();
    let points = points.into_iter().collect::<Result<Vec<_>>>()?;
    let locally_geometric = points.iter().all(|p| p.passes());
    let forms = invariant_form_space(&mono.generators(), prec, seed)?;
    let degenerate = matches!(forms.verdict, FormVerdict::AllDegenerate | FormVerdict::ZeroOnly);
    Ok(LocallyGeometricReport {
        points,
        locally_geometric,
        geometric_obstruction: locally_geometric && degenerate,
        forms,
        product_residual: mono.product_residual,
    })
}

/// Quasi-unipotence and symplectic certificates at every singular point,
/// then invariant forms of the whole group.
pub fn locally_geometric_check(op: &ThetaOperator, prec: Precision, max_order: u32, seed: u64) -> Result<LocallyGeometricReport> {
    let mono = monodromy_matrices(op, prec)?;
    locally_geometric_from(&mono, max_order, seed)
}

#[derive(Clone, Debug)]
pub struct TwistReport {
    pub k: i64,
    pub point: Rational,
    pub point_chosen: bool,
    pub twisted: ThetaOperator,
    pub exponents_at_zero: Vec<Rational>,
    pub n_at_zero: Option<u64>,
    pub ab_at_zero: (bool, bool),
    pub original: ABStatus,
    pub twisted_ab: ABStatus,
    /// Finite singular points whose verdict changed under the twist.
    pub changed_points: Vec<String>,
    pub others_unchanged: bool,
    /// Infinite index carries over when the original satisfies A or B;
    /// conditional on the half-integer shift criterion.
    pub inherited_infinite_index: bool,
}

impl TwistReport {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "point": self.point.to_string(),
            "point_chosen_automatically": self.point_chosen,
            "twisted": crate::opformat::to_value(&self.twisted),
            "twisted_text": crate::opformat::print(&self.twisted),
            "exponents_at_0": self.exponents_at_zero.iter().map(|e| e.to_string()).collect::<Vec<_>>(),
            "N_at_0": self.n_at_zero,
            "A_at_0": self.ab_at_zero.0,
            "B_at_0": self.ab_at_zero.1,
            "original": self.original.to_json(),
            "twisted_assumptions": self.twisted_ab.to_json(),
            "changed_points": self.changed_points,
            "other_points_unchanged": self.others_unchanged,
            "inherited_infinite_index": self.inherited_infinite_index,
            "inheritance": "conditional: half-integer shifts preserve thinness",
        })
    }
}

fn is_ordinary(op: &ThetaOperator, p: &Rational, prec: Precision) -> Result<bool> {
    Ok(analyze_point(op, &Location::Rational(p.clone()), prec)?.kind == PointKind::Ordinary)
}

/// First ordinary point among [`TWIST_CANDIDATES`].
pub fn choose_twist_point(op: &ThetaOperator, prec: Precision) -> Result<Rational> {
    for &(n, d) in &TWIST_CANDIDATES {
        let p = Rational::from((n, d));
        if is_ordinary(op, &p, prec)? {
            return Ok(p);
        }
    }
    Err(Error::Domain("no ordinary point among the twist candidates".into()))
}

/// `t ↦ t + p`, then the shift by `k/2`.
pub fn twist_operator(op: &ThetaOperator, k: i64, p: &Rational) -> ThetaOperator {
    op.moebius_pullback(&Moebius::translation(p)).shift(&Rational::from((k, 2)))
}

/// Moves an ordinary point `p` to 0 and shifts by `k/2` with `k` odd.
pub fn twist_pipeline(op: &ThetaOperator, k: i64, p: Option<&Rational>, prec: Precision, max_order: u32) -> Result<TwistReport> {
    if k % 2 == 0 {
        return Err(Error::InvalidArgument(format!("twist needs odd k, got {k}")));
    }
    let (point, point_chosen) = match p {
        Some(p) => {
            if !is_ordinary(op, p, prec)? {
                return Err(Error::SingularPoint { point: p.to_string() });
            }
            (p.clone(), false)
        }
        None => (choose_twist_point(op, prec)?, true),
    };
    let twisted = twist_operator(op, k, &point);
    let original = global_ab(op, prec, max_order)?;
    let twisted_ab = global_ab(&twisted, prec, max_order)?;
    let zero = twisted_ab
        .get(&Location::zero())
        .ok_or_else(|| Error::Numeric("new origin is not singular after the twist".into()))?
        .clone();
    let mut changed_points = Vec::new();
    for pt in &original.points {
        let moved = match &pt.location {
            Location::Infinity => continue,
            Location::Rational(r) => Location::Rational(Rational::from(r - &point)),
            Location::Algebraic { factor, index, value } => Location::Algebraic {
                factor: factor.clone(),
                index: *index,
                value: &value.clone() - &crate::arith::BigComplex::from_rational(&point, value.prec()),
            },
        };
        match twisted_ab.get(&moved) {
            Some(q) if q.verdict() == pt.verdict() => {}
            _ => changed_points.push(pt.location.label()),
        }
    }
    Ok(TwistReport {
        k,
        point,
        point_chosen,
        exponents_at_zero: zero.exponents.clone(),
        n_at_zero: zero.n,
        ab_at_zero: zero.verdict(),
        inherited_infinite_index: original.infinite_index_implied,
        others_unchanged: changed_points.is_empty(),
        changed_points,
        original,
        twisted_ab,
        twisted,
    })
}
