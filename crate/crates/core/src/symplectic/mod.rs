//! Invariant alternating forms of 4×4 matrix groups, a necessary-condition
//! certificate for symplectic integral matrices, and the analysis of pencils
//! of forms and their radicals.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::{Float, Rational};
use serde_json::{json, Value};

use crate::arith::roots::snap_rational;
use crate::arith::{BigComplex, CMatrix, Precision};
use crate::error::{Error, Result};

/// Index pairs of the free entries `b, c, d, g, h, l` of a skew 4×4 matrix.
pub const SKEW_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub const PFAFFIAN_SAMPLES: usize = 64;
pub const DEFAULT_SEED: u64 = 0x5eed;

/// Alternating form on `C⁴` given by its six upper entries.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewForm {
    /// `[b, c, d, g, h, l]`.
    pub entries: [BigComplex; 6],
}

impl SkewForm {
    pub fn new(entries: [BigComplex; 6]) -> Self {
        SkewForm { entries }
    }

    pub fn from_coords(v: &[BigComplex]) -> Self {
        SkewForm { entries: std::array::from_fn(|i| v[i].clone()) }
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        SkewForm { entries: std::array::from_fn(|i| m[SKEW_PAIRS[i]].clone()) }
    }

    /// The standard form `e₁∧e₄ + e₂∧e₃` (`d = g = 1`).
    pub fn standard(prec: Precision) -> Self {
        let z = BigComplex::zero(prec);
        let o = BigComplex::one(prec);
        SkewForm::new([z.clone(), z.clone(), o.clone(), o, z.clone(), z])
    }

    pub fn matrix(&self) -> CMatrix {
        let prec = self.entries[0].prec();
        let mut m = CMatrix::zeros(4, 4, prec);
        for (k, &(i, j)) in SKEW_PAIRS.iter().enumerate() {
            m[(i, j)] = self.entries[k].clone();
            m[(j, i)] = -&self.entries[k];
        }
        m
    }

    /// `bl − ch + dg`; its square is `det Ω`.
    pub fn pfaffian(&self) -> BigComplex {
        let [b, c, d, g, h, l] = &self.entries;
        &(&(b * l) - &(c * h)) + &(d * g)
    }

    pub fn combine(forms: &[SkewForm], coeffs: &[BigComplex]) -> SkewForm {
        let prec = forms[0].entries[0].prec();
        let mut e: [BigComplex; 6] = std::array::from_fn(|_| BigComplex::zero(prec));
        for (f, c) in forms.iter().zip(coeffs) {
            for k in 0..6 {
                e[k] = &e[k] + &(&f.entries[k] * c);
            }
        }
        SkewForm::new(e)
    }

    pub fn norm(&self) -> f64 {
        self.entries.iter().map(|c| c.abs_f64().powi(2)).sum::<f64>().sqrt()
    }

    /// `‖MᵀΩM − sign·Ω‖`.
    pub fn invariance_residual(&self, m: &CMatrix, sign: i64) -> f64 {
        let w = self.matrix();
        let lhs = &(&m.transpose() * &w) * m;
        (&lhs - &w.scale(&BigComplex::from_i64(sign, w.prec()))).max_abs()
    }

    pub fn to_json(&self, digits: usize) -> Value {
        let names = ["b", "c", "d", "g", "h", "l"];
        let mut obj = serde_json::Map::new();
        for (k, n) in names.iter().enumerate() {
            let (a, b) = self.entries[k].to_decimal_strings(digits);
            obj.insert(n.to_string(), json!([a, b]));
        }
        let (a, b) = self.pfaffian().to_decimal_strings(digits);
        obj.insert("pfaffian".into(), json!([a, b]));
        Value::Object(obj)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FormVerdict {
    NondegenerateExists,
    AllDegenerate,
    ZeroOnly,
}

impl FormVerdict {
    pub fn name(self) -> &'static str {
        match self {
            FormVerdict::NondegenerateExists => "nondegenerate-exists",
            FormVerdict::AllDegenerate => "all-degenerate",
            FormVerdict::ZeroOnly => "zero-only",
        }
    }
}

/// How the Pfaffian was examined on the nullspace.
#[derive(Clone, Debug, PartialEq)]
pub enum PfaffianEvidence {
    /// Exact quadratic form in the nullspace coordinates, `coeffs[i][j]`
    /// for `i ≤ j`, recovered by interpolation.
    Polynomial { coeffs: Vec<Vec<BigComplex>> },
    /// Values at the basis and at random rational combinations.
    Sampled { samples: usize },
}

#[derive(Clone, Debug)]
pub struct AlternatingFormSpace {
    pub basis: Vec<SkewForm>,
    pub singular_values: Vec<Float>,
    pub witness: Option<SkewForm>,
    pub verdict: FormVerdict,
    pub evidence: PfaffianEvidence,
    /// Largest `|Pf|` found over unit-coefficient combinations.
    pub max_pfaffian: f64,
    pub threshold: f64,
}

impl AlternatingFormSpace {
    pub fn dimension(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self, digits: usize) -> Value {
        let evidence = match &self.evidence {
            PfaffianEvidence::Polynomial { coeffs } => json!({
                "method": "interpolation",
                "coefficients": coeffs.iter().map(|r| r.iter().map(|c| {
                    let (a, b) = c.to_decimal_strings(12);
                    json!([a, b])
                }).collect::<Vec<_>>()).collect::<Vec<_>>(),
            }),
            PfaffianEvidence::Sampled { samples } => json!({"method": "sampling", "samples": samples}),
        };
        json!({
            "dimension": self.dimension(),
            "verdict": self.verdict.name(),
            "max_abs_pfaffian": self.max_pfaffian,
            "threshold": self.threshold,
            "singular_values": self.singular_values.iter().map(|s| s.to_f64()).collect::<Vec<_>>(),
            "basis": self.basis.iter().map(|f| f.to_json(digits)).collect::<Vec<_>>(),
            "witness": self.witness.as_ref().map(|w| w.to_json(digits)),
            "pfaffian_evidence": evidence,
        })
    }
}

fn check_dims(mats: &[&CMatrix]) -> Result<()> {
    if mats.is_empty() {
        return Err(Error::InvalidArgument("at least one matrix is required".into()));
    }
    for m in mats {
        if m.rows() != 4 || m.cols() != 4 {
            return Err(Error::Domain(format!(
                "invariant forms are implemented for 4×4 matrices, got {}×{}",
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok(())
}

/// Stacked linear map `Ω ↦ (MᵀΩM − Ω)` on the six skew coordinates.
fn invariance_system(mats: &[&CMatrix]) -> CMatrix {
    let prec = mats[0].prec();
    let mut rows = Vec::with_capacity(6 * mats.len());
    for m in mats {
        for &(p, q) in &SKEW_PAIRS {
            let row: Vec<BigComplex> = SKEW_PAIRS
                .iter()
                .map(|&(a, b)| {
                    // (Mᵀ E_ab M)_pq = M_ap M_bq − M_bp M_aq
                    let mut v = &(&m[(a, p)] * &m[(b, q)]) - &(&m[(b, p)] * &m[(a, q)]);
                    if (a, b) == (p, q) {
                        v = &v - &BigComplex::one(prec);
                    }
                    v
                })
                .collect();
            rows.push(row);
        }
    }
    CMatrix::from_rows(rows)
}

/// Space of alternating forms `Ω` with `MᵀΩM = Ω` for every matrix, with a
/// nondegeneracy decision. `nominal` sets the thresholds.
pub fn invariant_form_space(mats: &[&CMatrix], nominal: Precision, seed: u64) -> Result<AlternatingFormSpace> {
    check_dims(mats)?;
    let prec = mats[0].prec();
    let sys = invariance_system(mats);
    // relative to the largest singular value, floored at the size of the
    // products MᵀΩM so that matrices equal to the identity up to noise
    // keep their full nullspace
    let (sv, v) = sys.svd_right();
    let smax = sv.first().map_or(0.0, |s| s.to_f64());
    let mscale = mats.iter().map(|m| m.max_abs().powi(2)).fold(1.0, f64::max);
    let thr = nominal.eps_scaled(24) * smax.max(mscale);
    let basis: Vec<SkewForm> =
        (0..6).filter(|&k| sv[k].to_f64() <= thr).map(|k| SkewForm::from_coords(&v.column(k))).collect();
    let threshold = 2f64.powf(-(nominal.bits() as f64) / 2.0);
    let dim = basis.len();
    if dim == 0 {
        return Ok(AlternatingFormSpace {
            basis,
            singular_values: sv,
            witness: None,
            verdict: FormVerdict::ZeroOnly,
            evidence: PfaffianEvidence::Sampled { samples: 0 },
            max_pfaffian: 0.0,
            threshold,
        });
    }
    let mut best: Option<(f64, SkewForm)> = None;
    let consider = |f: SkewForm, best: &mut Option<(f64, SkewForm)>| {
        let v = f.pfaffian().abs_f64();
        if best.as_ref().is_none_or(|b| v > b.0) {
            *best = Some((v, f));
        }
    };
    let evidence = if dim <= 3 {
        // Pf(Σ λ_i B_i) = Σ_{i≤j} a_ij λ_i λ_j
        let pf: Vec<BigComplex> = basis.iter().map(|b| b.pfaffian()).collect();
        let mut coeffs = vec![vec![BigComplex::zero(prec); dim]; dim];
        for i in 0..dim {
            coeffs[i][i] = pf[i].clone();
            consider(basis[i].clone(), &mut best);
            for j in i + 1..dim {
                let one = BigComplex::one(prec);
                let mut lam = vec![BigComplex::zero(prec); dim];
                lam[i] = one.clone();
                lam[j] = one;
                let f = SkewForm::combine(&basis, &lam);
                coeffs[i][j] = &(&f.pfaffian() - &pf[i]) - &pf[j];
                consider(f, &mut best);
            }
        }
        // a nonzero quadratic form is nonzero at some e_i or e_i + e_j
        PfaffianEvidence::Polynomial { coeffs }
    } else {
        for b in &basis {
            consider(b.clone(), &mut best);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..PFAFFIAN_SAMPLES {
            let lam: Vec<BigComplex> = (0..dim)
                .map(|_| {
                    let q = Rational::from((rng.gen_range(-8i64..=8), rng.gen_range(1i64..=8)));
                    BigComplex::from_rational(&q, prec)
                })
                .collect();
            let norm = lam.iter().map(|c| c.abs_f64().powi(2)).sum::<f64>().sqrt().max(1e-300);
            let lam: Vec<BigComplex> = lam.iter().map(|c| c.scale(&Float::with_val(prec.bits(), 1.0 / norm))).collect();
            consider(SkewForm::combine(&basis, &lam), &mut best);
        }
        PfaffianEvidence::Sampled { samples: PFAFFIAN_SAMPLES + dim }
    };
    let (max_pf, wf) = best.unwrap();
    let verdict = if max_pf > threshold { FormVerdict::NondegenerateExists } else { FormVerdict::AllDegenerate };
    Ok(AlternatingFormSpace {
        basis,
        singular_values: sv,
        witness: (verdict == FormVerdict::NondegenerateExists).then_some(wf),
        verdict,
        evidence,
        max_pfaffian: max_pf,
        threshold,
    })
}

/// Necessary conditions for conjugacy into `Sp(4, Z)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SymplecticCertificate {
    pub det_ok: bool,
    pub form_ok: bool,
    pub charpoly_integral: bool,
    pub charpoly_reciprocal: bool,
    /// Characteristic polynomial, ascending, when integral.
    pub charpoly: Option<Vec<i64>>,
    pub det_residual: f64,
}

impl SymplecticCertificate {
    pub fn passes(&self) -> bool {
        self.det_ok && self.form_ok && self.charpoly_integral && self.charpoly_reciprocal
    }

    pub fn to_json(&self) -> Value {
        json!({
            "det_ok": self.det_ok,
            "form_ok": self.form_ok,
            "charpoly_integral": self.charpoly_integral,
            "charpoly_reciprocal": self.charpoly_reciprocal,
            "charpoly": self.charpoly,
            "det_residual": self.det_residual,
            "passes": self.passes(),
        })
    }
}

pub fn symplectic_certificate(m: &CMatrix, nominal: Precision) -> Result<SymplecticCertificate> {
    check_dims(&[m])?;
    let tol = 2f64.powf(-(nominal.bits() as f64) / 2.0);
    let det = m.det();
    let det_residual = det.dist(&BigComplex::one(det.prec())).to_f64();
    let det_ok = det_residual < tol;
    let space = invariant_form_space(&[m], nominal, DEFAULT_SEED)?;
    let form_ok = space.verdict == FormVerdict::NondegenerateExists;
    let cp = m.charpoly();
    let ints: Option<Vec<i64>> = cp
        .iter()
        .map(|c| {
            let scale = 1.0 + c.abs_f64();
            if c.im.to_f64().abs() > tol * scale {
                return None;
            }
            snap_rational(&c.re, 1, tol * scale).and_then(|q| q.numer().to_i64())
        })
        .collect();
    let charpoly_integral = ints.is_some();
    let charpoly_reciprocal = ints.as_ref().is_some_and(|v| v.len() == 5 && v[0] == 1 && v[1] == v[3]);
    Ok(SymplecticCertificate { det_ok, form_ok, charpoly_integral, charpoly_reciprocal, charpoly: ints, det_residual })
}

/// `det(Ω₁ + tΩ₂)` and the radicals at its roots.
#[derive(Clone, Debug)]
pub struct PencilReport {
    /// `Pf(Ω₁ + tΩ₂)`, ascending in `t` (degree ≤ 2).
    pub pfaffian: Vec<BigComplex>,
    /// `det(Ω₁ + tΩ₂) = Pf²`, ascending (degree ≤ 4).
    pub determinant: Vec<BigComplex>,
    /// Distinct roots with multiplicity in the Pfaffian and the kernel of
    /// `Ω₁ + tΩ₂` (columns).
    pub roots: Vec<PencilRoot>,
}

#[derive(Clone, Debug)]
pub struct PencilRoot {
    pub t: BigComplex,
    pub multiplicity: usize,
    pub radical: Vec<Vec<BigComplex>>,
}

impl PencilReport {
    /// The two 2-dimensional radicals as the columns of one basis, when
    /// the Pfaffian has two simple roots.
    pub fn radical_basis(&self) -> Option<CMatrix> {
        if self.roots.len() != 2 || self.roots.iter().any(|r| r.radical.len() != 2) {
            return None;
        }
        let cols: Vec<&Vec<BigComplex>> = self.roots.iter().flat_map(|r| r.radical.iter()).collect();
        let mut m = CMatrix::zeros(4, 4, cols[0][0].prec());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..4 {
                m[(i, j)] = c[i].clone();
            }
        }
        Some(m)
    }

    pub fn to_json(&self, digits: usize) -> Value {
        let cs = |v: &[BigComplex]| {
            v.iter()
                .map(|c| {
                    let (a, b) = c.to_decimal_strings(digits);
                    json!([a, b])
                })
                .collect::<Vec<_>>()
        };
        json!({
            "pfaffian": cs(&self.pfaffian),
            "determinant": cs(&self.determinant),
            "roots": self.roots.iter().map(|r| json!({
                "t": cs(std::slice::from_ref(&r.t))[0],
                "multiplicity": r.multiplicity,
                "radical_dimension": r.radical.len(),
                "radical": r.radical.iter().map(|v| cs(v)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn form_pencil_analysis(w1: &SkewForm, w2: &SkewForm, nominal: Precision) -> Result<PencilReport> {
    let prec = w1.entries[0].prec();
    let tol = 2f64.powf(-(nominal.bits() as f64) / 2.0);
    let p0 = w1.pfaffian();
    if p0.abs_f64() <= tol * w1.norm().powi(2) {
        return Err(Error::Domain("the first form of a pencil must be nondegenerate".into()));
    }
    let p2 = w2.pfaffian();
    let one = BigComplex::one(prec);
    let p1 = &(&SkewForm::combine(&[w1.clone(), w2.clone()], &[one.clone(), one.clone()]).pfaffian() - &p0) - &p2;
    let determinant = vec![
        &p0 * &p0,
        (&p0 * &p1).scale_i64(2),
        &(&p0 * &p2).scale_i64(2) + &(&p1 * &p1),
        (&p1 * &p2).scale_i64(2),
        &p2 * &p2,
    ];
    let scale = p0.abs_f64().max(p1.abs_f64()).max(p2.abs_f64());
    let mut roots_t: Vec<(BigComplex, usize)> = Vec::new();
    if p2.abs_f64() > tol * scale {
        // p2 t² + p1 t + p0
        let disc = &(&p1 * &p1) - &(&p0 * &p2).scale_i64(4);
        let two_a = p2.scale_i64(2);
        if disc.abs_f64() <= tol * scale * scale {
            roots_t.push(((-&p1) / &two_a, 2));
        } else {
            let s = disc.sqrt();
            roots_t.push((&(-&p1 + &s) / &two_a, 1));
            roots_t.push((&(-&p1 - &s) / &two_a, 1));
        }
    } else if p1.abs_f64() > tol * scale {
        roots_t.push(((-&p0) / &p1, 1));
    }
    let mut roots = Vec::new();
    for (t, multiplicity) in roots_t {
        let wt = SkewForm::combine(&[w1.clone(), w2.clone()], &[one.clone(), t.clone()]);
        let m = wt.matrix();
        let (radical, _) = if m.max_abs() <= tol * w1.norm().max(1.0) {
            (
                (0..4)
                    .map(|j| (0..4).map(|i| if i == j { one.clone() } else { BigComplex::zero(prec) }).collect())
                    .collect(),
                vec![],
            )
        } else {
            m.nullspace(2f64.powf(-(nominal.bits() as f64) / 3.0))
        };
        roots.push(PencilRoot { t, multiplicity, radical });
    }
    Ok(PencilReport { pfaffian: vec![p0, p1, p2], determinant, roots })
}

/// Shape of a matrix relative to a splitting `C⁴ = V₁ ⊕ V₂` into the
/// first two and last two basis vectors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockShape {
    /// Block diagonal: preserves both summands.
    Split,
    /// Block anti-diagonal: exchanges the summands.
    Swap,
    Neither,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockVerdict {
    Split,
    Swap,
    /// Every matrix split or swap, some of each: products stay in the
    /// (non-dense) group of such matrices.
    Mixed,
    DenseCandidate,
}

impl BlockVerdict {
    pub fn name(self) -> &'static str {
        match self {
            BlockVerdict::Split => "split",
            BlockVerdict::Swap => "swap",
            BlockVerdict::Mixed => "mixed",
            BlockVerdict::DenseCandidate => "dense-candidate",
        }
    }
}

#[derive(Clone, Debug)]
pub struct BlockReport {
    pub shapes: Vec<BlockShape>,
    pub verdict: BlockVerdict,
}

/// Checks every matrix, rewritten in the basis given by the columns of
/// `basis`, for the 2+2 block shapes.
pub fn block_form_detect(mats: &[&CMatrix], basis: &CMatrix, nominal: Precision) -> Result<BlockReport> {
    check_dims(mats)?;
    let qinv = basis.inverse()?;
    let tol = 2f64.powf(-(nominal.bits() as f64) / 3.0);
    let shapes: Vec<BlockShape> = mats
        .iter()
        .map(|m| {
            let a = &(&qinv * m) * basis;
            let scale = a.max_abs().max(1e-300);
            let mut off = 0.0f64;
            let mut diag = 0.0f64;
            for i in 0..4 {
                for j in 0..4 {
                    let v = a[(i, j)].abs_f64();
                    if (i < 2) == (j < 2) {
                        diag = diag.max(v);
                    } else {
                        off = off.max(v);
                    }
                }
            }
            if off <= tol * scale {
                BlockShape::Split
            } else if diag <= tol * scale {
                BlockShape::Swap
            } else {
                BlockShape::Neither
            }
        })
        .collect();
    let verdict = if shapes.contains(&BlockShape::Neither) {
        BlockVerdict::DenseCandidate
    } else if shapes.iter().all(|s| *s == BlockShape::Split) {
        BlockVerdict::Split
    } else if shapes.iter().all(|s| *s == BlockShape::Swap) {
        BlockVerdict::Swap
    } else {
        BlockVerdict::Mixed
    };
    Ok(BlockReport { shapes, verdict })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Precision {
        Precision::DEFAULT
    }

    fn cf(x: f64) -> BigComplex {
        BigComplex::from_f64(x, 0.0, p())
    }

    fn form(v: [f64; 6]) -> SkewForm {
        SkewForm::new(v.map(cf))
    }

    #[test]
    fn pfaffian_squared_is_det() {
        let f = form([1.0, -2.0, 3.0, 0.5, 4.0, -1.5]);
        let det = f.matrix().det();
        let pf = f.pfaffian();
        assert!(det.dist(&(&pf * &pf)).to_f64() < 1e-30);
    }

    #[test]
    fn identity_group() {
        let id = CMatrix::identity(4, p());
        let s = invariant_form_space(&[&id], p(), DEFAULT_SEED).unwrap();
        assert_eq!(s.dimension(), 6);
        assert_eq!(s.verdict, FormVerdict::NondegenerateExists);
        assert!(matches!(s.evidence, PfaffianEvidence::Sampled { .. }));
    }

    #[test]
    fn wrong_size_rejected() {
        let id = CMatrix::identity(3, p());
        assert!(matches!(invariant_form_space(&[&id], p(), 1), Err(Error::Domain(_))));
    }

    #[test]
    fn certificate_i_identity_fails() {
        let m = CMatrix::identity(4, p()).scale(&BigComplex::i(p()));
        let c = symplectic_certificate(&m, p()).unwrap();
        assert!(c.det_ok);
        assert!(!c.charpoly_integral);
        assert!(!c.passes());
    }

    #[test]
    fn pencil_with_itself() {
        let w = SkewForm::standard(p());
        let r = form_pencil_analysis(&w, &w, p()).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert_eq!(r.roots[0].multiplicity, 2);
        assert!(r.roots[0].t.dist(&cf(-1.0)).to_f64() < 1e-30);
        assert_eq!(r.roots[0].radical.len(), 4);
        // (1 + t)^4
        for (k, c) in [1.0, 4.0, 6.0, 4.0, 1.0].iter().enumerate() {
            assert!(r.determinant[k].dist(&cf(*c)).to_f64() < 1e-30);
        }
    }

    #[test]
    fn pencil_block_case() {
        // Ω₁ = e₁∧e₂ + e₃∧e₄ layout (b = l = 1), Ω₂ with c = 1, h = a:
        // Pf(Ω₁ + tΩ₂) = 1 − a t², so det = (a t² − 1)²
        let a = 4.0;
        let w1 = form([1.0, 0.0, 0.0, 0.0, 0.0, 1.0]);
        let w2 = form([0.0, 1.0, 0.0, 0.0, a, 0.0]);
        let r = form_pencil_analysis(&w1, &w2, p()).unwrap();
        let expect = [1.0, 0.0, -2.0 * a, 0.0, a * a];
        for (k, c) in expect.iter().enumerate() {
            assert!(r.determinant[k].dist(&cf(*c)).to_f64() < 1e-30, "{k}");
        }
        assert_eq!(r.roots.len(), 2);
        for root in &r.roots {
            assert!((root.t.abs_f64() - 0.5).abs() < 1e-30);
            assert_eq!(root.radical.len(), 2);
        }
        assert!(r.radical_basis().is_some());
    }

    #[test]
    fn degenerate_first_form_rejected() {
        let w1 = form([1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        assert!(form_pencil_analysis(&w1, &SkewForm::standard(p()), p()).is_err());
    }

    #[test]
    fn block_shapes() {
        let d = CMatrix::from_f64_rows(
            &[&[1.0, 2.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 3.0, 1.0], &[0.0, 0.0, 1.0, 1.0]],
            p(),
        );
        let s = CMatrix::from_f64_rows(
            &[&[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0], &[1.0, 0.0, 0.0, 0.0], &[0.0, 1.0, 0.0, 0.0]],
            p(),
        );
        let id = CMatrix::identity(4, p());
        assert_eq!(block_form_detect(&[&d, &id], &id, p()).unwrap().verdict, BlockVerdict::Split);
        assert_eq!(block_form_detect(&[&d, &s], &id, p()).unwrap().verdict, BlockVerdict::Mixed);
        let dense = CMatrix::from_f64_rows(
            &[&[1.0, 1.0, 1.0, 0.0], &[0.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 0.0], &[0.0, 0.0, 0.0, 1.0]],
            p(),
        );
        assert_eq!(block_form_detect(&[&dense], &id, p()).unwrap().verdict, BlockVerdict::DenseCandidate);
    }
}
