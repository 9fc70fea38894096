//! Acceptance run: one PASS/FAIL line per criterion.
//!
//! Run with `cargo test -p fop-cli --test acceptance`. The process exits
//! nonzero when any criterion fails.

use std::process::{Command, ExitCode};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use fop_core::arith::{CMatrix, Precision, Rational};
use fop_core::corpus::{self, ListMembership};
use fop_core::criteria::{global_ab, locally_geometric_check, twist_pipeline};
use fop_core::frobenius::{apply_operator, frobenius_basis};
use fop_core::local::{fuchs_relation_check, local_exponents, riemann_symbol, Exponent, Location};
use fop_core::monodromy::monodromy_matrices;
use fop_core::operator::ThetaOperator;
use fop_core::symplectic::{invariant_form_space, FormVerdict, DEFAULT_SEED, SKEW_PAIRS};

const MAX_ORDER: u32 = 120;

struct Outcome {
    ok: bool,
    detail: String,
}

impl Outcome {
    fn new() -> Self {
        Outcome { ok: true, detail: String::new() }
    }

    fn check(&mut self, cond: bool, what: impl Into<String>) {
        if !cond {
            self.ok = false;
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(&what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        if self.ok {
            if !self.detail.is_empty() {
                self.detail.push_str("; ");
            }
            self.detail.push_str(&what.into());
        }
    }
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn op(id: &str) -> ThetaOperator {
    corpus::get(id).unwrap().operator().unwrap()
}

fn criterion_1() -> Outcome {
    let mut o = Outcome::new();
    let t = Instant::now();
    let out = Command::new(env!("CARGO_BIN_EXE_fop"))
        .args(["--format", "json", "--precision", "128", "corpus", "verify"])
        .env_remove("FOP_PRECISION_BITS")
        .output()
        .unwrap();
    let secs = t.elapsed().as_secs_f64();
    o.check(out.status.success(), format!("exit status {:?}", out.status.code()));
    let v: Value = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    let entries = v["entries"].as_array().cloned().unwrap_or_default();
    o.check(entries.len() == 15, format!("{} entries", entries.len()));
    let mut worst = 0.0f64;
    for e in &entries {
        o.check(e["riemann_symbol_ok"] == true, format!("{} symbol {}", e["id"], e["mismatches"]));
        worst = worst.max(e["max_location_error"].as_f64().unwrap_or(f64::INFINITY));
    }
    o.check(worst < 1e-30, format!("location error {worst:e}"));
    o.check(secs < 30.0, format!("{secs:.1} s"));
    o.note(format!("15 symbols, location error {worst:.1e}, {secs:.1} s"));
    o
}

fn criterion_2() -> Outcome {
    let mut o = Outcome::new();
    let prec = Precision::DEFAULT;
    for e in corpus::all() {
        let rs = riemann_symbol(&e.operator().unwrap(), prec).unwrap();
        let f = fuchs_relation_check(&rs, 4);
        o.check(f.as_ref().is_some_and(|f| f.ok), format!("{} fails", e.id));
        let (printed, rhs) = e.expected_fuchs(4);
        o.check(printed == rhs, format!("{} printed sum {printed} vs {rhs}", e.id));
        if let Some(f) = f {
            o.check(f.lhs == printed, format!("{} computed {} vs printed {printed}", e.id, f.lhs));
        }
    }
    for (id, s, sum) in [("no21", 4, 12), ("no267", 8, 36)] {
        let rs = riemann_symbol(&op(id), prec).unwrap();
        let f = fuchs_relation_check(&rs, 4).unwrap();
        o.check(rs.entries.len() == s && f.lhs == sum, format!("{id}: s={} sum={}", rs.entries.len(), f.lhs));
    }
    o.note("15 operators; no21 sum 12 (s=4), no267 sum 36 (s=8)");
    o
}

fn criterion_3() -> Outcome {
    let mut o = Outcome::new();
    let ops: Vec<ThetaOperator> = corpus::all().iter().map(|e| e.operator().unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5417);
    let rand_q = |rng: &mut ChaCha8Rng| q(rng.gen_range(-24..=24), rng.gen_range(1..=12));
    for _ in 0..100 {
        let p = &ops[rng.gen_range(0..ops.len())];
        let a = rand_q(&mut rng);
        let b = rand_q(&mut rng);
        if p.shift(&a).shift(&b) != p.shift(&Rational::from(&a + &b)) {
            o.check(false, format!("additivity fails at {a}, {b}"));
        }
    }
    let prec = Precision::DEFAULT;
    let ploc = op("ploc");
    let e = local_exponents(&ploc.shift(&q(1, 4)), &Location::zero(), prec).unwrap();
    o.check(e.rationals() == Some(vec![q(1, 2), q(1, 2), q(1, 1), q(1, 1)]), "shift(P_loc, 1/4) exponents at 0");

    const K: i64 = 40;
    for (id, alpha) in [("no2", q(1, 3)), ("ploc", q(1, 4)), ("no53", q(-5, 2)), ("no267", q(7, 12))] {
        let p = op(id);
        let shifted = p.shift(&alpha);
        for y in frobenius_basis(&p, &Location::zero(), K as usize, prec).unwrap() {
            let r = apply_operator(&shifted, &y.times_power(&alpha)).unwrap();
            let Some(v) = r.valuation else { continue };
            let min = Rational::from(&alpha + (K - 3));
            match (&v, &y.exponent) {
                (Exponent::Rational(v), Exponent::Rational(rho)) => {
                    o.check(*v >= min, format!("{id}: valuation {v} < {min}"));
                    o.check(Rational::from(v - rho) >= Rational::from(&alpha + (K - 3)), format!("{id}: offset"));
                }
                _ => o.check(false, format!("{id}: numeric exponent")),
            }
        }
    }
    o.note("100 random additivity cases; residual valuation >= alpha+37 at K=40");
    o
}

// Exact oracle for the hypergeometric No. 2: companion matrices of (x−1)⁴ at 0
// and (x+1)⁴ at ∞.

type QMat = Vec<Vec<Rational>>;

fn companion(c: &[i64]) -> QMat {
    let n = c.len();
    let mut m = vec![vec![Rational::new(); n]; n];
    for i in 1..n {
        m[i][i - 1] = Rational::from(1);
    }
    for i in 0..n {
        m[i][n - 1] = Rational::from(-c[i]);
    }
    m
}

fn rank(mut a: QMat) -> usize {
    let cols = a[0].len();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..a.len()).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, p);
        for i in 0..a.len() {
            if i != r && a[i][c] != 0 {
                let f = Rational::from(&a[i][c] / &a[r][c]);
                for j in 0..cols {
                    let d = Rational::from(&f * &a[r][j]);
                    a[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    r
}

fn exact_form_dimension(gens: &[QMat]) -> usize {
    let mut rows = Vec::new();
    for m in gens {
        for &(p, s) in &SKEW_PAIRS {
            rows.push(
                SKEW_PAIRS
                    .iter()
                    .map(|&(a, b)| {
                        let mut v = Rational::from(&m[a][p] * &m[b][s]) - Rational::from(&m[b][p] * &m[a][s]);
                        if (a, b) == (p, s) {
                            v -= 1;
                        }
                        v
                    })
                    .collect(),
            );
        }
    }
    6 - rank(rows)
}

fn unipotent_distance(m: &CMatrix, k: u32) -> f64 {
    (m - &CMatrix::identity(m.rows(), m.prec())).pow(k).max_abs()
}

/// Stable facts of a run, compared between precisions.
type Fingerprint = Vec<String>;

fn criterion_4(prec: Precision, fp: &mut Fingerprint) -> Outcome {
    let mut o = Outcome::new();
    let exact = exact_form_dimension(&[companion(&[1, -4, 6, -4]), companion(&[1, 4, 6, 4])]);
    o.check(exact == 1, format!("exact oracle dimension {exact}"));

    let t = Instant::now();
    let mono = monodromy_matrices(&op("no2"), prec).unwrap();
    let m0 = &mono.get(&Location::zero()).unwrap().entries;
    let (d4, d3) = (unipotent_distance(m0, 4), unipotent_distance(m0, 3));
    o.check(d4 < 1e-10, format!("|(M0-I)^4| = {d4:e}"));
    o.check(d3 > 1e-3, format!("|(M0-I)^3| = {d3:e}"));
    o.check(mono.product_residual < 1e-9, format!("product residual {:e}", mono.product_residual));
    let space = invariant_form_space(&mono.generators(), prec, DEFAULT_SEED).unwrap();
    o.check(space.dimension() == exact, format!("no2 form dimension {}", space.dimension()));
    o.check(space.verdict == FormVerdict::NondegenerateExists && space.witness.is_some(), "no2 has no nondegenerate witness");
    for m in mono.singular() {
        fp.push(format!("no2 {} {}", m.label(), m.jordan(MAX_ORDER, prec).map(|j| j.to_string()).unwrap_or_default()));
    }
    fp.push(format!("no2 forms {} {}", space.dimension(), space.verdict.name()));
    let s_no2 = t.elapsed().as_secs_f64();
    o.check(s_no2 < 60.0, format!("no2 {s_no2:.1} s"));

    let t = Instant::now();
    let mono = monodromy_matrices(&op("ploc"), prec).unwrap();
    let j = |loc: Location| mono.get(&loc).unwrap().jordan(MAX_ORDER, prec).unwrap();
    let jm = j(Location::Rational(q(-1, 1)));
    o.check(jm.is_unipotent() && jm.eigenvalues[0].blocks == vec![4], format!("M(-1) = {jm}"));
    for loc in [Location::zero(), Location::Infinity] {
        let jd = j(loc.clone());
        let pairs: Vec<(String, usize)> = jd.block_pairs().iter().map(|(f, b)| (f.to_string(), *b)).collect();
        o.check(pairs == [("1/4".to_string(), 2), ("3/4".to_string(), 2)], format!("M({}) = {jd}", loc.label()));
    }
    let space = invariant_form_space(&mono.generators(), prec, DEFAULT_SEED).unwrap();
    o.check(space.verdict == FormVerdict::NondegenerateExists, format!("P_loc forms {}", space.verdict.name()));
    for m in mono.singular() {
        fp.push(format!("ploc {} {}", m.label(), m.jordan(MAX_ORDER, prec).map(|j| j.to_string()).unwrap_or_default()));
    }
    fp.push(format!("ploc forms {} {}", space.dimension(), space.verdict.name()));
    let s_ploc = t.elapsed().as_secs_f64();
    o.check(s_ploc < 60.0, format!("ploc {s_ploc:.1} s"));
    o.note(format!("no2 |(M0-I)^3|={d3:.2}, forms dim 1 (exact 1); P_loc i[2] -i[2]; {s_no2:.1} s / {s_ploc:.1} s"));
    o
}

fn criterion_5(prec: Precision, fp: &mut Fingerprint) -> Outcome {
    let mut o = Outcome::new();
    let shifted = op("ploc").shift(&q(1, 4));
    let r = locally_geometric_check(&shifted, prec, MAX_ORDER, DEFAULT_SEED).unwrap();
    for p in &r.points {
        o.check(p.quasi_unipotent, format!("{} not quasi-unipotent", p.location.label()));
        o.check(p.certificate.as_ref().is_some_and(|c| c.passes()), format!("{} certificate fails", p.location.label()));
        fp.push(format!(
            "ploc(1/4) {} qu={} cert={} {}",
            p.location.label(),
            p.quasi_unipotent,
            p.passes(),
            p.jordan.as_ref().map(|j| j.to_string()).unwrap_or_default()
        ));
    }
    let degenerate = matches!(r.forms.verdict, FormVerdict::AllDegenerate | FormVerdict::ZeroOnly);
    o.check(degenerate, format!("verdict {}", r.forms.verdict.name()));
    o.check(r.forms.max_pfaffian < 1e-8, format!("max |Pf| {:e}", r.forms.max_pfaffian));
    o.check(r.geometric_obstruction, "no obstruction reported");
    fp.push(format!("ploc(1/4) forms {} {} obstruction={}", r.forms.dimension(), r.forms.verdict.name(), r.geometric_obstruction));
    o.note(format!(
        "{} points locally geometric; forms {} (dim {}, max |Pf| {:.1e})",
        r.points.len(),
        r.forms.verdict.name(),
        r.forms.dimension(),
        r.forms.max_pfaffian
    ));
    o
}

fn criterion_6(prec: Precision, fp: &mut Fingerprint) -> Outcome {
    let mut o = Outcome::new();
    let mut twists = 0;
    for e in corpus::all() {
        if e.list == ListMembership::None {
            continue;
        }
        let p = e.operator().unwrap();
        let ab = global_ab(&p, prec, MAX_ORDER).unwrap();
        match e.list {
            ListMembership::A => o.check(ab.all_a, format!("{} all_A false", e.id)),
            _ => o.check(ab.all_b, format!("{} all_B false", e.id)),
        }
        for pt in &ab.points {
            fp.push(format!("{} {} k={} N={:?} A={} B={}", e.id, pt.location.label(), pt.k, pt.n, pt.satisfies_a, pt.satisfies_b));
        }
        if e.list != ListMembership::B {
            continue;
        }
        let r = twist_pipeline(&p, 1, None, prec, MAX_ORDER).unwrap();
        o.check(r.n_at_zero == Some(2), format!("{} twisted N={:?}", e.id, r.n_at_zero));
        o.check(r.ab_at_zero == (false, false), format!("{} twisted (A,B)={:?}", e.id, r.ab_at_zero));
        o.check(r.others_unchanged, format!("{} changed {:?}", e.id, r.changed_points));
        fp.push(format!("{} twist p={} N={:?} ab={:?} unchanged={}", e.id, r.point, r.n_at_zero, r.ab_at_zero, r.others_unchanged));
        twists += 1;
    }
    o.note(format!("A-list all_A, B-list all_B; {twists} twists give N=2, (A,B)=(false,false), others unchanged"));
    o
}

fn criterion_8() -> Outcome {
    let mut o = Outcome::new();
    let prec = Precision::DEFAULT;
    // verdicts on operators of unknown origin stay formal
    let formal = global_ab(&op("ploc").shift(&q(1, 2)), prec, MAX_ORDER).unwrap();
    o.check(formal.formal, "A/B verdict of a non-corpus operator is not marked formal");
    let r = corpus::verify(&corpus::get("no2").unwrap(), prec, MAX_ORDER).unwrap();
    o.check(!r.assumptions.formal, "corpus verdict marked formal");
    let tw = twist_pipeline(&op("no2"), 1, None, prec, MAX_ORDER).unwrap().to_json();
    o.check(tw["inheritance"].as_str().is_some_and(|s| s.starts_with("conditional")), "twist inheritance not conditional");
    o.note("out of scope: thinness and geometric origin are not decided; covered by certificates, obstructions and formal verdicts");
    o
}

fn main() -> ExitCode {
    let mut all_ok = true;
    let mut report = |n: usize, name: &str, o: &Outcome| {
        all_ok &= o.ok;
        println!("criterion {n} [{name}]: {} ({})", if o.ok { "PASS" } else { "FAIL" }, o.detail);
    };
    report(1, "riemann-symbol regression", &criterion_1());
    report(2, "fuchs relation", &criterion_2());
    report(3, "shift laws", &criterion_3());

    let lo = Precision::DEFAULT;
    let hi = Precision::new(256).unwrap();
    let mut fp_lo = Fingerprint::new();
    let mut fp_hi = Fingerprint::new();
    let c4 = criterion_4(lo, &mut fp_lo);
    report(4, "monodromy structure", &c4);
    let c5 = criterion_5(lo, &mut fp_lo);
    report(5, "locally geometric, not geometric", &c5);
    let c6 = criterion_6(lo, &mut fp_lo);
    report(6, "assumptions and twists", &c6);

    let t = Instant::now();
    let hi_ok = [criterion_4(hi, &mut fp_hi), criterion_5(hi, &mut fp_hi), criterion_6(hi, &mut fp_hi)]
        .iter()
        .all(|o| o.ok);
    let mut c7 = Outcome::new();
    c7.check(hi_ok, "criteria 4-6 fail at 256 bits");
    c7.check(fp_lo.len() == fp_hi.len(), format!("{} facts vs {}", fp_lo.len(), fp_hi.len()));
    for (a, b) in fp_lo.iter().zip(&fp_hi) {
        c7.check(a == b, format!("'{a}' became '{b}'"));
    }
    c7.note(format!("{} facts identical at 128 and 256 bits ({:.0} s)", fp_lo.len(), t.elapsed().as_secs_f64()));
    report(7, "precision stability", &c7);
    report(8, "out of computational scope", &criterion_8());

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
