//! Embedded regression corpus: operator text plus expected Riemann symbols
//! and Assumption A/B list membership.

use rayon::prelude::*;
use rug::Rational;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::arith::{numeric_roots, BigComplex, Poly, Precision};
use crate::error::{Error, Result};
use crate::criteria::{global_ab_from, ABStatus};
use crate::local::{fuchs_relation_check, riemann_symbol, ExponentList, FuchsRelation, Location, RiemannSymbol};
use crate::monodromy::monodromy_matrices;
use crate::operator::ThetaOperator;
use crate::opformat::parse;

macro_rules! entry {
    ($id:literal) => {
        (
            $id,
            include_str!(concat!("../../../../corpus/", $id, ".op")),
            include_str!(concat!("../../../../corpus/", $id, ".json")),
        )
    };
}

const RAW: &[(&str, &str, &str)] = &[
    entry!("no2"),
    entry!("no10"),
    entry!("no16"),
    entry!("no242"),
    entry!("no246"),
    entry!("no21"),
    entry!("no53"),
    entry!("no96"),
    entry!("no100"),
    entry!("no155"),
    entry!("no200"),
    entry!("no267"),
    entry!("no275"),
    entry!("no276"),
    entry!("ploc"),
];

/// Which table an operator is listed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
pub enum ListMembership {
    A,
    B,
    #[serde(rename = "none")]
    None,
}

/// Expected point of a Riemann symbol column.
#[derive(Clone, Debug, PartialEq)]
pub enum ExpectedPoint {
    Rational(Rational),
    Infinity,
    /// Both roots of a rational polynomial (a conjugate column).
    Algebraic { factor: Poly, label: String },
}

#[derive(Clone, Debug)]
pub struct ExpectedColumn {
    pub point: ExpectedPoint,
    pub exponents: Vec<Rational>,
}

#[derive(Clone, Debug)]
pub struct CorpusEntry {
    pub id: &'static str,
    pub title: String,
    pub text: &'static str,
    pub list: ListMembership,
    pub expected: Vec<ExpectedColumn>,
    pub printed_infinity: Option<Vec<Rational>>,
    pub notes: Option<String>,
}

#[derive(Deserialize)]
struct RawDoc {
    id: String,
    title: String,
    list: ListMembership,
    riemann_symbol: Vec<RawColumn>,
    #[serde(default)]
    printed_infinity: Option<Vec<String>>,
    #[serde(default)]
    notes: Option<String>,
}

#[derive(Deserialize)]
struct RawColumn {
    point: Value,
    exponents: Vec<String>,
}

fn rat(s: &str) -> Result<Rational> {
    s.parse::<Rational>().map_err(|_| Error::InvalidArgument(format!("bad rational `{s}` in corpus")))
}

fn parse_point(v: &Value) -> Result<ExpectedPoint> {
    match v {
        Value::String(s) if s == "inf" => Ok(ExpectedPoint::Infinity),
        Value::String(s) => Ok(ExpectedPoint::Rational(rat(s)?)),
        Value::Object(o) => {
            let f = o.get("factor").and_then(|f| f.as_str()).ok_or_else(|| {
                Error::InvalidArgument("algebraic corpus point needs a `factor`".into())
            })?;
            let op = parse(f)?;
            if op.order() != 0 {
                return Err(Error::InvalidArgument(format!("`{f}` is not a polynomial")));
            }
            let label = o.get("label").and_then(|l| l.as_str()).unwrap_or(f).to_string();
            Ok(ExpectedPoint::Algebraic { factor: op.coeff(0).monic(), label })
        }
        _ => Err(Error::InvalidArgument("bad corpus point".into())),
    }
}

fn load(id: &'static str, text: &'static str, json: &str) -> Result<CorpusEntry> {
    let raw: RawDoc = serde_json::from_str(json)
        .map_err(|e| Error::InvalidArgument(format!("corpus entry {id}: {e}")))?;
    debug_assert_eq!(raw.id, id);
    let expected = raw
        .riemann_symbol
        .iter()
        .map(|c| {
            Ok(ExpectedColumn {
                point: parse_point(&c.point)?,
                exponents: c.exponents.iter().map(|s| rat(s)).collect::<Result<_>>()?,
            })
        })
        .collect::<Result<_>>()?;
    let printed_infinity = match raw.printed_infinity {
        Some(v) => Some(v.iter().map(|s| rat(s)).collect::<Result<_>>()?),
        None => None,
    };
    Ok(CorpusEntry { id, title: raw.title, text, list: raw.list, expected, printed_infinity, notes: raw.notes })
}

/// Identifiers in table order.
pub fn list() -> Vec<&'static str> {
    RAW.iter().map(|r| r.0).collect()
}

pub fn get(id: &str) -> Result<CorpusEntry> {
    let (id, text, json) = RAW
        .iter()
        .find(|r| r.0 == id)
        .ok_or_else(|| Error::UnknownCorpusEntry(id.to_string()))?;
    load(id, text, json)
}

pub fn all() -> Vec<CorpusEntry> {
    RAW.iter().map(|(id, text, json)| load(id, text, json).expect("corpus data")).collect()
}

impl CorpusEntry {
    pub fn operator(&self) -> Result<ThetaOperator> {
        parse(self.text.trim())
    }

    /// Sum of the expected exponents and the Fuchs right-hand side.
    pub fn expected_fuchs(&self, n: usize) -> (Rational, Rational) {
        let mut lhs = Rational::new();
        let mut s = 0i64;
        for c in &self.expected {
            let copies = match &c.point {
                ExpectedPoint::Algebraic { factor, .. } => factor.degree().unwrap_or(0) as i64,
                _ => 1,
            };
            s += copies;
            for e in &c.exponents {
                lhs += Rational::from(e * copies);
            }
        }
        (lhs, Rational::from((s - 2) * (n * (n - 1) / 2) as i64))
    }
}

/// Outcome of comparing a computed Riemann symbol with the stored one.
#[derive(Clone, Debug)]
pub struct SymbolCheck {
    pub passed: bool,
    pub mismatches: Vec<String>,
    /// Largest distance between an expected algebraic location and the
    /// computed point matched to it.
    pub max_location_error: f64,
}

fn rationals_of(e: &ExponentList) -> Option<Vec<Rational>> {
    e.rationals()
}

/// Compares a computed symbol with the expected columns.
pub fn compare_symbol(entry: &CorpusEntry, rs: &RiemannSymbol, prec: Precision) -> Result<SymbolCheck> {
    let mut mismatches = Vec::new();
    let mut matched = vec![false; rs.entries.len()];
    let mut max_err = 0.0f64;
    for col in &entry.expected {
        let mut want = col.exponents.clone();
        want.sort();
        match &col.point {
            ExpectedPoint::Rational(_) | ExpectedPoint::Infinity => {
                let loc = match &col.point {
                    ExpectedPoint::Rational(r) => Location::Rational(r.clone()),
                    _ => Location::Infinity,
                };
                match rs.entries.iter().position(|(p, _)| crate::local::same_location(&p.location, &loc)) {
                    None => mismatches.push(format!("missing singular point {loc}")),
                    Some(i) => {
                        matched[i] = true;
                        let got = rationals_of(&rs.entries[i].1);
                        if got.as_ref() != Some(&want) {
                            mismatches.push(format!(
                                "exponents at {loc}: expected {}, found {}",
                                fmt_list(&want),
                                rs.entries[i].1
                            ));
                        }
                    }
                }
            }
            ExpectedPoint::Algebraic { factor, label } => {
                let roots = numeric_roots(factor, prec)?;
                for (z, _) in roots {
                    let best = rs
                        .entries
                        .iter()
                        .enumerate()
                        .filter_map(|(i, (p, _))| match &p.location {
                            Location::Algebraic { value, .. } => Some((i, value.dist(&z).to_f64())),
                            _ => None,
                        })
                        .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
                    match best {
                        Some((i, d)) if d < 1e-30 => {
                            matched[i] = true;
                            max_err = max_err.max(d);
                            let got = rationals_of(&rs.entries[i].1);
                            if got.as_ref() != Some(&want) {
                                mismatches.push(format!(
                                    "exponents at {label} ({}): expected {}, found {}",
                                    fmt_complex(&z),
                                    fmt_list(&want),
                                    rs.entries[i].1
                                ));
                            }
                        }
                        Some((_, d)) => mismatches.push(format!(
                            "no computed point within 1e-30 of {label} ({}); nearest at distance {d:e}",
                            fmt_complex(&z)
                        )),
                        None => mismatches.push(format!("missing algebraic point {label}")),
                    }
                }
            }
        }
    }
    for (i, m) in matched.iter().enumerate() {
        if !m {
            mismatches.push(format!("unexpected singular point {}", rs.entries[i].0.location));
        }
    }
    Ok(SymbolCheck { passed: mismatches.is_empty(), mismatches, max_location_error: max_err })
}

fn fmt_list(v: &[Rational]) -> String {
    v.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(", ")
}

fn fmt_complex(z: &BigComplex) -> String {
    let (a, b) = z.to_f64_pair();
    format!("{a:.6}{b:+.6}i")
}

/// Recomputes the Riemann symbol of an entry and compares it.
pub fn verify_symbol(entry: &CorpusEntry, prec: Precision) -> Result<(RiemannSymbol, SymbolCheck)> {
    let op = entry.operator()?;
    let rs = riemann_symbol(&op, prec)?;
    let check = compare_symbol(entry, &rs, prec)?;
    Ok((rs, check))
}

/// Full regression result for one entry.
#[derive(Clone, Debug)]
pub struct VerifyReport {
    pub id: &'static str,
    pub symbol: SymbolCheck,
    pub fuchs: Option<FuchsRelation>,
    pub assumptions: ABStatus,
    pub list: ListMembership,
    pub list_ok: bool,
    pub passed: bool,
}

impl VerifyReport {
    pub fn to_json(&self) -> Value {
        json!({
            "id": self.id,
            "passed": self.passed,
            "riemann_symbol_ok": self.symbol.passed,
            "mismatches": self.symbol.mismatches,
            "max_location_error": self.symbol.max_location_error,
            "fuchs": self.fuchs.as_ref().map(|f| json!({"lhs": f.lhs.to_string(), "rhs": f.rhs.to_string(), "ok": f.ok})),
            "list": match self.list { ListMembership::A => "A", ListMembership::B => "B", ListMembership::None => "none" },
            "list_ok": self.list_ok,
            "assumptions": self.assumptions.to_json(),
        })
    }
}

/// Recomputes the Riemann symbol and the A/B status and compares both with
/// the stored expectations.
pub fn verify(entry: &CorpusEntry, prec: Precision, max_order: u32) -> Result<VerifyReport> {
    let op = entry.operator()?;
    let rs = riemann_symbol(&op, prec)?;
    let symbol = compare_symbol(entry, &rs, prec)?;
    let fuchs = fuchs_relation_check(&rs, op.order());
    let mono = if rs.entries.iter().any(|(_, e)| e.k() == 4) { Some(monodromy_matrices(&op, prec)?) } else { None };
    let mut assumptions = global_ab_from(&rs, mono.as_ref(), max_order)?;
    // corpus operators are Picard-Fuchs operators
    assumptions.formal = false;
    let list_ok = match entry.list {
        ListMembership::A => assumptions.all_a,
        ListMembership::B => assumptions.all_b,
        ListMembership::None => true,
    };
    let passed = symbol.passed && fuchs.as_ref().is_some_and(|f| f.ok) && list_ok;
    Ok(VerifyReport { id: entry.id, symbol, fuchs, assumptions, list: entry.list, list_ok, passed })
}

/// [`verify`] over every entry, in table order.
pub fn verify_all(prec: Precision, max_order: u32) -> Result<Vec<VerifyReport>> {
    all().par_iter().map(|e| verify(e, prec, max_order)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_entries_load_and_parse() {
        let entries = all();
        assert_eq!(entries.len(), 15);
        for e in &entries {
            let op = e.operator().unwrap();
            assert_eq!(op.order(), 4, "{}", e.id);
        }
        assert!(matches!(get("no999"), Err(Error::UnknownCorpusEntry(_))));
    }

    #[test]
    fn expected_data_satisfies_fuchs() {
        for e in all() {
            let (lhs, rhs) = e.expected_fuchs(4);
            assert_eq!(lhs, rhs, "{}", e.id);
        }
    }
}
