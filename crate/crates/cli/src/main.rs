use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use fop_core::arith::{BigComplex, CMatrix, Precision, Rational};
use fop_core::corpus::{self, ExpectedPoint, ListMembership};
use fop_core::criteria::{
    classify_shift, detect_density, global_ab, locally_geometric_check, parse_rational, quarter_shift_admissible,
    twist_pipeline, DensityEvidence, ShiftAmount,
};
use fop_core::frobenius::{apply_operator, frobenius_basis};
use fop_core::local::{fuchs_relation_check, riemann_symbol, Location};
use fop_core::monodromy::{kind_name, monodromy_matrices};
use fop_core::operator::{Moebius, ThetaOperator};
use fop_core::opformat::{envelope, print, read_operator, to_json, to_value};
use fop_core::symplectic::{invariant_form_space, DEFAULT_SEED};
use fop_core::{Error, ErrorKind, Result};

#[derive(Parser)]
#[command(name = "fop", version, about = "Fuchsian operator workbench: exponents, monodromy, invariant forms and shift criteria")]
struct Cli {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, env = "FOP_PRECISION_BITS", default_value_t = 128)]
    precision: u32,
    /// Frobenius truncation order K.
    #[arg(long, global = true, default_value_t = 40)]
    terms: usize,
    /// Largest root-of-unity order accepted when snapping eigenvalues.
    #[arg(long, global = true, default_value_t = 120)]
    max_order: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Seed for Pfaffian sampling.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Density {
    /// Use a MUM point when the operator has one.
    Auto,
    HasMum,
    AssumeDense,
    Unknown,
}

/// Operator argument: expression text, `@file`, or `-` for stdin.
type OpArg = String;

#[derive(Subcommand)]
enum Cmd {
    /// Canonical JSON of an operator.
    Parse {
        #[arg(allow_hyphen_values = true)]
        op: OpArg,
    },
    /// Riemann symbol and Fuchs relation.
    Riemann {
        #[arg(allow_hyphen_values = true)]
        op: OpArg,
    },
    /// Shift of the exponents at 0 by alpha.
    Shift {
        #[arg(allow_hyphen_values = true)]
        op: OpArg,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
    },
    /// Pullback along t = (a u + b)/(c u + d).
    Moebius {
        #[arg(allow_hyphen_values = true)]
        op: OpArg,
        #[arg(long, allow_hyphen_values = true, value_name = "A,B,C,D")]
        map: String,
    },
    /// Frobenius basis at a point.
    Frobenius {
        #[arg(allow_hyphen_values = true)]
        op: OpArg,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        point: String,
    },
    /// Monodromy matrices, Jordan data and product residual.
    Monodromy {
        #[arg(allow_hyphen_values = true)]
        op: OpArg,
    },
    /// Invariant alternating forms of the monodromy group.
    InvariantForm {
        #[arg(allow_hyphen_values = true)]
        op: OpArg,
    },
    /// Assumptions A and B at every singular point.
    Assumptions {
        #[arg(allow_hyphen_values = true)]
        op: OpArg,
    },
    /// Class of the shifted operator.
    ClassifyShift {
        #[arg(allow_hyphen_values = true)]
        op: OpArg,
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long, value_enum, default_value_t = Density::Auto)]
        density: Density,
    },
    /// Local quasi-unipotence and symplecticity, and global forms.
    LocallyGeometric {
        #[arg(allow_hyphen_values = true)]
        op: OpArg,
    },
    /// Move an ordinary point to 0 and shift by k/2.
    Twist {
        #[arg(allow_hyphen_values = true)]
        op: OpArg,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        k: i64,
        /// Ordinary point; chosen automatically when omitted.
        #[arg(long, allow_hyphen_values = true)]
        point: Option<String>,
    },
    /// Embedded regression corpus.
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
    },
}

#[derive(Subcommand)]
enum CorpusCmd {
    List,
    Get { id: String },
    Verify { id: Option<String> },
}

struct Config {
    prec: Precision,
    terms: usize,
    max_order: u32,
    format: Format,
    seed: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(e.kind()))
        }
    }
}

fn exit_code(kind: ErrorKind) -> u8 {
    match kind {
        ErrorKind::Usage => 2,
        ErrorKind::Domain => 3,
        ErrorKind::Numeric => 4,
        ErrorKind::Verification => 5,
    }
}

fn load(arg: &str) -> Result<ThetaOperator> {
    let text = if arg == "-" {
        let mut s = String::new();
        std::io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Error::InvalidArgument(format!("reading stdin: {e}")))?;
        s
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| Error::InvalidArgument(format!("reading {path}: {e}")))?
    } else {
        arg.to_string()
    };
    read_operator(&text)
}

fn parse_location(s: &str) -> Result<Location> {
    match s.trim() {
        "inf" | "∞" | "infinity" => Ok(Location::Infinity),
        other => parse_rational(other).map(Location::Rational),
    }
}

fn emit(cfg: &Config, kind: &str, body: Value, text: impl FnOnce() -> String) {
    match cfg.format {
        Format::Json => {
            let mut body = body;
            if let Value::Object(o) = &mut body {
                o.insert("precision_bits".into(), json!(cfg.prec.bits()));
            }
            out(&format!("{}\n", serde_json::to_string_pretty(&envelope(kind, body)).unwrap()));
        }
        Format::Text => out(&text()),
    }
}

/// Writes to stdout; a closed pipe ends output quietly.
fn out(s: &str) {
    use std::io::Write;
    let mut h = std::io::stdout().lock();
    if h.write_all(s.as_bytes()).and_then(|_| h.flush()).is_err() {
        std::process::exit(0);
    }
}

fn yes(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn cnum(z: &BigComplex) -> String {
    let (a, b) = z.to_f64_pair();
    format!("{a:+.12e}{b:+.12e}i")
}

fn matrix_text(m: &CMatrix) -> String {
    let mut s = String::new();
    for r in m.to_rows() {
        let cells: Vec<String> = r.iter().map(cnum).collect();
        s.push_str(&format!("    [{}]\n", cells.join(", ")));
    }
    s
}

fn exps_text(v: &[impl std::fmt::Display]) -> String {
    v.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" ")
}

fn run(cli: Cli) -> Result<ExitCode> {
    let cfg = Config {
        prec: Precision::new(cli.precision)?,
        terms: cli.terms,
        max_order: cli.max_order,
        format: cli.format,
        seed: cli.seed,
    };
    let digits = cfg.prec.decimal_digits();
    match cli.cmd {
        Cmd::Parse { op } => {
            let op = load(&op)?;
            out(&format!("{}\n", to_json(&op)));
        }
        Cmd::Riemann { op } => {
            let op = load(&op)?;
            let rs = riemann_symbol(&op, cfg.prec)?;
            let fuchs = fuchs_relation_check(&rs, op.order());
            let body = json!({
                "order": rs.order,
                "points": rs.entries.iter().map(|(p, e)| json!({
                    "point": p.location.label(),
                    "exponents": e.values().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
                "apparent": rs.apparent.iter().map(|l| l.label()).collect::<Vec<_>>(),
                "fuchs_relation": fuchs.as_ref().map(|f| json!({"sum": f.lhs.to_string(), "expected": f.rhs.to_string(), "ok": f.ok})),
            });
            emit(&cfg, "riemann-symbol", body, || {
                let mut s = String::new();
                for (p, e) in &rs.entries {
                    s.push_str(&format!("{:<48} {}\n", p.location.label(), exps_text(e.values())));
                }
                for a in &rs.apparent {
                    s.push_str(&format!("apparent: {}\n", a.label()));
                }
                match &fuchs {
                    Some(f) => s.push_str(&format!(
                        "Fuchs relation: sum of exponents {} vs (s-2)n(n-1)/2 = {}: {}\n",
                        f.lhs,
                        f.rhs,
                        if f.ok { "ok" } else { "FAILED" }
                    )),
                    None => s.push_str("Fuchs relation: not checked (irrational exponents)\n"),
                }
                s
            });
        }
        Cmd::Shift { op, alpha } => {
            let op = load(&op)?;
            let a = parse_rational(&alpha)?;
            let out = op.shift(&a);
            emit(&cfg, "operator", json!({"operator": to_value(&out), "text": print(&out)}), || format!("{}\n", print(&out)));
        }
        Cmd::Moebius { op, map } => {
            let op = load(&op)?;
            let parts: Vec<Rational> = map.split(',').map(parse_rational).collect::<Result<_>>()?;
            if parts.len() != 4 {
                return Err(Error::InvalidArgument("--map needs four comma-separated rationals".into()));
            }
            let [a, b, c, d]: [Rational; 4] = parts.try_into().unwrap();
            let out = op.moebius_pullback(&Moebius::new(a, b, c, d)?);
            emit(&cfg, "operator", json!({"operator": to_value(&out), "text": print(&out)}), || format!("{}\n", print(&out)));
        }
        Cmd::Frobenius { op, point } => {
            let op = load(&op)?;
            let loc = parse_location(&point)?;
            let basis = frobenius_basis(&op, &loc, cfg.terms, cfg.prec)?;
            let residuals = basis.iter().map(|s| apply_operator(&op, s)).collect::<Result<Vec<_>>>()?;
            let body = json!({
                "point": loc.label(),
                "terms": cfg.terms,
                "basis": basis.iter().zip(&residuals).map(|(s, r)| json!({
                    "series": s.to_json(digits),
                    "residual_valuation_offset": r.valuation_offset,
                    "residual_max_abs": r.max_abs,
                })).collect::<Vec<_>>(),
            });
            emit(&cfg, "frobenius-basis", body, || {
                let mut s = String::new();
                for (f, r) in basis.iter().zip(&residuals) {
                    let lead: Vec<String> = f.coeffs[0].iter().take(4).map(cnum).collect();
                    s.push_str(&format!(
                        "exponent {} log degree {}  log^0 coefficients {} ...  residual valuation offset {}\n",
                        f.exponent,
                        f.leading_log_degree(),
                        lead.join(", "),
                        r.valuation_offset.map_or("none".into(), |v| v.to_string()),
                    ));
                }
                s
            });
        }
        Cmd::Monodromy { op } => {
            let op = load(&op)?;
            let mono = monodromy_matrices(&op, cfg.prec)?;
            emit(&cfg, "monodromy", mono.to_json(cfg.max_order), || {
                let mut s = format!("base point {}\n", mono.base_point);
                for m in &mono.matrices {
                    let jd = m.jordan(cfg.max_order, cfg.prec);
                    s.push_str(&format!(
                        "{} ({})  exponents {}\n  jordan: {}\n  det residual: {}\n",
                        m.label(),
                        kind_name(m.kind, &m.location),
                        m.exponents.as_ref().map_or("?".into(), |e| exps_text(e.values())),
                        jd.map_or_else(|e| format!("unclassified ({e})"), |j| j.to_string()),
                        m.det_residual().map_or("n/a".into(), |r| format!("{r:.3e}")),
                    ));
                    s.push_str(&matrix_text(&m.entries));
                }
                s.push_str(&format!("product residual: {:.3e}\n", mono.product_residual));
                s
            });
        }
        Cmd::InvariantForm { op } => {
            let op = load(&op)?;
            let mono = monodromy_matrices(&op, cfg.prec)?;
            let space = invariant_form_space(&mono.generators(), cfg.prec, cfg.seed)?;
            emit(&cfg, "invariant-forms", space.to_json(digits), || {
                let mut s = format!(
                    "dimension {}\nverdict {}\nmax |Pf| {:.3e} (threshold {:.3e})\n",
                    space.dimension(),
                    space.verdict.name(),
                    space.max_pfaffian,
                    space.threshold
                );
                if let Some(w) = &space.witness {
                    let names = ["b", "c", "d", "g", "h", "l"];
                    for (n, c) in names.iter().zip(&w.entries) {
                        s.push_str(&format!("  {n} = {}\n", cnum(c)));
                    }
                }
                s
            });
        }
        Cmd::Assumptions { op } => {
            let op = load(&op)?;
            let ab = global_ab(&op, cfg.prec, cfg.max_order)?;
            emit(&cfg, "assumptions", ab.to_json(), || {
                let mut s = String::new();
                for p in &ab.points {
                    s.push_str(&format!(
                        "{:<48} {:<16} k={} N={}  A={} B={}\n",
                        p.location.label(),
                        exps_text(&p.exponents),
                        p.k,
                        p.n.map_or("-".into(), |n| n.to_string()),
                        yes(p.satisfies_a),
                        yes(p.satisfies_b)
                    ));
                }
                s.push_str(&format!(
                    "all A: {}  all B: {}  infinite index implied: {}{}\n",
                    yes(ab.all_a),
                    yes(ab.all_b),
                    yes(ab.infinite_index_implied),
                    if ab.formal { " (formal)" } else { "" }
                ));
                s
            });
        }
        Cmd::ClassifyShift { op, alpha, density } => {
            let op = load(&op)?;
            let alpha = ShiftAmount::parse(&alpha)?;
            let density = match density {
                Density::Auto => detect_density(&op, cfg.prec)?,
                Density::HasMum => DensityEvidence::HasMum,
                Density::AssumeDense => DensityEvidence::AssumeDense,
                Density::Unknown => DensityEvidence::Unknown,
            };
            let c = classify_shift(&op, &alpha, density, cfg.prec)?;
            emit(&cfg, "shift-class", c.to_json(), || {
                format!(
                    "alpha {}: {}\n  {}\n  arithmetic preserved: {}\n  density evidence: {}\n",
                    c.alpha,
                    c.class.name(),
                    c.reason,
                    yes(c.arithmetic_preserved),
                    c.density.name()
                )
            });
        }
        Cmd::LocallyGeometric { op } => {
            let op = load(&op)?;
            let r = locally_geometric_check(&op, cfg.prec, cfg.max_order, cfg.seed)?;
            let mut body = r.to_json(digits);
            if let Some(Value::Array(pts)) = body.get_mut("points") {
                for (v, p) in pts.iter_mut().zip(&r.points) {
                    if let (Value::Object(o), Some(j)) = (v, &p.jordan) {
                        o.insert("quarter_shift".into(), quarter_shift_admissible(j).to_json());
                    }
                }
            }
            emit(&cfg, "locally-geometric", body, || {
                let mut s = String::new();
                for p in &r.points {
                    s.push_str(&format!(
                        "{:<48} quasi-unipotent {:<3} certificate {:<4} {}\n",
                        p.location.label(),
                        yes(p.quasi_unipotent),
                        if p.certificate.as_ref().is_some_and(|c| c.passes()) { "pass" } else { "fail" },
                        p.jordan.as_ref().map_or(String::new(), |j| j.to_string())
                    ));
                }
                s.push_str(&format!(
                    "locally geometric: {}\nglobal invariant forms: {} (dimension {})\ngeometric obstruction: {}\n",
                    yes(r.locally_geometric),
                    r.forms.verdict.name(),
                    r.forms.dimension(),
                    if r.geometric_obstruction { "reported (locally geometric but not geometric)" } else { "none" }
                ));
                s
            });
        }
        Cmd::Twist { op, k, point } => {
            let op = load(&op)?;
            let p = point.as_deref().map(parse_rational).transpose()?;
            let r = twist_pipeline(&op, k, p.as_ref(), cfg.prec, cfg.max_order)?;
            emit(&cfg, "twist", r.to_json(), || {
                format!(
                    "point {} moved to 0{}, shift by {}/2\n{}\nexponents at 0: {}\nN at 0: {}\nA at 0: {}  B at 0: {}\nother finite points unchanged: {}\ninfinite index inherited (conditional): {}\n",
                    r.point,
                    if r.point_chosen { " (chosen)" } else { "" },
                    r.k,
                    print(&r.twisted),
                    exps_text(&r.exponents_at_zero),
                    r.n_at_zero.map_or("-".into(), |n| n.to_string()),
                    yes(r.ab_at_zero.0),
                    yes(r.ab_at_zero.1),
                    yes(r.others_unchanged),
                    yes(r.inherited_infinite_index)
                )
            });
        }
        Cmd::Corpus { cmd } => return run_corpus(&cfg, cmd),
    }
    Ok(ExitCode::SUCCESS)
}

fn list_name(l: ListMembership) -> &'static str {
    match l {
        ListMembership::A => "A",
        ListMembership::B => "B",
        ListMembership::None => "none",
    }
}

fn point_name(p: &ExpectedPoint) -> String {
    match p {
        ExpectedPoint::Rational(r) => r.to_string(),
        ExpectedPoint::Infinity => "∞".into(),
        ExpectedPoint::Algebraic { label, .. } => label.clone(),
    }
}

fn run_corpus(cfg: &Config, cmd: CorpusCmd) -> Result<ExitCode> {
    match cmd {
        CorpusCmd::List => {
            let entries = corpus::all();
            let body = json!({"entries": entries.iter().map(|e| json!({"id": e.id, "title": e.title, "list": list_name(e.list)})).collect::<Vec<_>>()});
            emit(cfg, "corpus-list", body, || {
                entries.iter().map(|e| format!("{:<8} {:<5} {}\n", e.id, list_name(e.list), e.title)).collect()
            });
        }
        CorpusCmd::Get { id } => {
            let e = corpus::get(&id)?;
            let op = e.operator()?;
            let body = json!({
                "id": e.id,
                "title": e.title,
                "text": e.text.trim(),
                "operator": to_value(&op),
                "list": list_name(e.list),
                "riemann_symbol": e.expected.iter().map(|c| json!({
                    "point": point_name(&c.point),
                    "exponents": c.exponents.iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
                "printed_infinity": e.printed_infinity.as_ref().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                "notes": e.notes,
            });
            emit(cfg, "corpus-entry", body, || {
                let mut s = format!("{} ({}, list {})\n{}\n", e.title, e.id, list_name(e.list), e.text.trim());
                for c in &e.expected {
                    s.push_str(&format!("  {:<24} {}\n", point_name(&c.point), exps_text(&c.exponents)));
                }
                if let Some(n) = &e.notes {
                    s.push_str(&format!("note: {n}\n"));
                }
                s
            });
        }
        CorpusCmd::Verify { id } => {
            let reports = match id {
                Some(id) => vec![corpus::verify(&corpus::get(&id)?, cfg.prec, cfg.max_order)?],
                None => corpus::verify_all(cfg.prec, cfg.max_order)?,
            };
            let ok = reports.iter().all(|r| r.passed);
            let body = json!({"passed": ok, "entries": reports.iter().map(|r| r.to_json()).collect::<Vec<_>>()});
            emit(cfg, "corpus-verify", body, || {
                let mut s = String::new();
                for r in &reports {
                    s.push_str(&format!(
                        "{:<8} {}  symbol {}  fuchs {}  list {} {}\n",
                        r.id,
                        if r.passed { "PASS" } else { "FAIL" },
                        if r.symbol.passed { "ok" } else { "mismatch" },
                        if r.fuchs.as_ref().is_some_and(|f| f.ok) { "ok" } else { "mismatch" },
                        list_name(r.list),
                        if r.list_ok { "ok" } else { "mismatch" },
                    ));
                    for m in &r.symbol.mismatches {
                        s.push_str(&format!("    {m}\n"));
                    }
                }
                s.push_str(&format!("{} of {} entries pass\n", reports.iter().filter(|r| r.passed).count(), reports.len()));
                s
            });
            if !ok {
                return Ok(ExitCode::from(exit_code(ErrorKind::Verification)));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
