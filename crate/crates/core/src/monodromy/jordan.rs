//! Jordan structure of quasi-unipotent matrices.

use rug::{Float, Rational};
use serde_json::{json, Value};

use crate::arith::roots::{clustered_roots, snap_rational};
use crate::arith::{pi, BigComplex, CMatrix, Precision};
use crate::error::{Error, Result};

pub const DEFAULT_MAX_ORDER: u32 = 120;

/// One eigenvalue `e^{2πi·fraction}` with the sizes of its Jordan blocks.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanEigen {
    /// `arg/2π` in `[0, 1)`.
    pub fraction: Rational,
    pub order: u32,
    pub value: BigComplex,
    /// Descending block sizes.
    pub blocks: Vec<usize>,
}

impl JordanEigen {
    pub fn multiplicity(&self) -> usize {
        self.blocks.iter().sum()
    }

    /// Short name such as `1`, `-1`, `i`, `-i` or `e^(2πi·1/8)`.
    pub fn label(&self) -> String {
        root_label(&self.fraction)
    }
}

pub fn root_label(f: &Rational) -> String {
    let (n, d) = (f.numer().to_i64().unwrap_or(0), f.denom().to_i64().unwrap_or(1));
    match (n, d) {
        (0, 1) => "1".into(),
        (1, 2) => "-1".into(),
        (1, 4) => "i".into(),
        (3, 4) => "-i".into(),
        _ => format!("e^(2πi·{n}/{d})"),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct JordanData {
    pub eigenvalues: Vec<JordanEigen>,
    /// Least common multiple of the eigenvalue orders.
    pub order: u64,
}

impl JordanData {
    pub fn block_count(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.blocks.len()).sum()
    }

    pub fn dimension(&self) -> usize {
        self.eigenvalues.iter().map(|e| e.multiplicity()).sum()
    }

    pub fn is_unipotent(&self) -> bool {
        self.eigenvalues.len() == 1 && self.eigenvalues[0].fraction == 0
    }

    pub fn is_identity(&self) -> bool {
        self.is_unipotent() && self.eigenvalues[0].blocks.iter().all(|&b| b == 1)
    }

    /// `(fraction, block size)` pairs, one per block, sorted.
    pub fn block_pairs(&self) -> Vec<(Rational, usize)> {
        let mut v: Vec<(Rational, usize)> = self
            .eigenvalues
            .iter()
            .flat_map(|e| e.blocks.iter().map(move |&b| (e.fraction.clone(), b)))
            .collect();
        v.sort();
        v
    }

    /// Same structure with every eigenvalue multiplied by `e^{2πiα}`.
    pub fn scaled(&self, alpha: &Rational) -> JordanData {
        let prec = self.eigenvalues.first().map_or(Precision::DEFAULT, |e| e.value.prec());
        let mut eigenvalues: Vec<JordanEigen> = self
            .eigenvalues
            .iter()
            .map(|e| {
                let f = frac_part(&Rational::from(&e.fraction + alpha));
                JordanEigen {
                    order: f.denom().to_u32().unwrap_or(u32::MAX),
                    value: BigComplex::root_of_unity(&f, prec),
                    fraction: f,
                    blocks: e.blocks.clone(),
                }
            })
            .collect();
        eigenvalues.sort_by(|a, b| a.fraction.cmp(&b.fraction));
        let order = lcm_all(eigenvalues.iter().map(|e| e.order as u64));
        JordanData { eigenvalues, order }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "order": self.order,
            "eigenvalues": self.eigenvalues.iter().map(|e| json!({
                "eigenvalue": e.label(),
                "fraction": e.fraction.to_string(),
                "root_order": e.order,
                "blocks": e.blocks,
            })).collect::<Vec<_>>(),
        })
    }
}

impl std::fmt::Display for JordanData {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .eigenvalues
            .iter()
            .map(|e| {
                let b: Vec<String> = e.blocks.iter().map(|b| b.to_string()).collect();
                format!("{} [{}]", e.label(), b.join(","))
            })
            .collect();
        write!(f, "{}; N = {}", parts.join(", "), self.order)
    }
}

pub fn frac_part(q: &Rational) -> Rational {
    let fl = q.clone().floor();
    Rational::from(q - &fl)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm_all(it: impl Iterator<Item = u64>) -> u64 {
    it.fold(1, |acc, x| acc / gcd(acc, x) * x)
}

/// Snaps eigenvalues to roots of unity of order at most `max_order` and
/// reads block sizes off the numeric ranks of `(M − ζ)^k`.
pub fn jordan_classify(m: &CMatrix, max_order: u32) -> Result<JordanData> {
    jordan_classify_at(m, max_order, m.prec())
}

/// As [`jordan_classify`] for a matrix carried with guard bits, with
/// tolerances taken from the nominal precision.
pub fn jordan_classify_at(m: &CMatrix, max_order: u32, nominal: Precision) -> Result<JordanData> {
    if !m.is_square() {
        return Err(Error::InvalidArgument("Jordan classification needs a square matrix".into()));
    }
    let n = m.rows();
    let prec = m.prec();
    let bits = prec.bits();
    let cp = m.charpoly();
    let radius = 2f64.powf(-(nominal.bits() as f64) / 8.0);
    let roots = clustered_roots(&cp, prec, radius)?;
    let window = nominal.eps_scaled(24);
    let two_pi = Float::with_val(bits, pi(prec) * 2u32);
    let mut eigenvalues = Vec::new();
    for (z, mult) in roots {
        let modulus = z.abs_f64();
        let arg = Float::with_val(bits, z.arg() / &two_pi);
        let snapped = snap_rational(&arg, max_order, window);
        let fraction = match snapped {
            Some(q) if (modulus - 1.0).abs() < window => frac_part(&q),
            _ => {
                let (a, b) = z.to_f64_pair();
                return Err(Error::NotQuasiUnipotent { eigenvalue: format!("{a:.12}{b:+.12}i") });
            }
        };
        let value = BigComplex::root_of_unity(&fraction, prec);
        let blocks = block_sizes(m, &value, mult, n, nominal);
        eigenvalues.push(JordanEigen {
            order: fraction.denom().to_u32().unwrap_or(u32::MAX),
            fraction,
            value,
            blocks,
        });
    }
    eigenvalues.sort_by(|a, b| a.fraction.cmp(&b.fraction));
    // merge clusters that snapped to the same root
    let mut merged: Vec<JordanEigen> = Vec::new();
    for e in eigenvalues {
        match merged.last_mut() {
            Some(last) if last.fraction == e.fraction => {
                let mult = last.multiplicity() + e.multiplicity();
                last.blocks = block_sizes(m, &last.value, mult, n, nominal);
            }
            _ => merged.push(e),
        }
    }
    let order = lcm_all(merged.iter().map(|e| e.order as u64));
    Ok(JordanData { eigenvalues: merged, order })
}

fn block_sizes(m: &CMatrix, zeta: &BigComplex, mult: usize, n: usize, nominal: Precision) -> Vec<usize> {
    let prec = m.prec();
    let mut a = m.clone();
    for i in 0..n {
        a[(i, i)] = &a[(i, i)] - zeta;
    }
    let scale = 1.0 + m.max_abs();
    let base = 2f64.powf(-(nominal.bits() as f64) / 2.0);
    // ranks r_0 = n, r_1, …, r_mult
    let mut ranks = vec![n];
    let mut p = CMatrix::identity(n, prec);
    for k in 1..=mult {
        p = &p * &a;
        let thr = base * scale.powi(k as i32);
        ranks.push(p.rank(thr));
    }
    // number of blocks of size ≥ k is r_{k−1} − r_k
    let ge: Vec<usize> = (1..=mult).map(|k| ranks[k - 1].saturating_sub(ranks[k])).collect();
    let mut blocks = Vec::new();
    for k in (1..=mult).rev() {
        let exactly = ge[k - 1] - if k < mult { ge[k] } else { 0 };
        for _ in 0..exactly {
            blocks.push(k);
        }
    }
    let found: usize = blocks.iter().sum();
    if found != mult {
        // rank noise: fall back to the coarsest consistent reading
        blocks = vec![1; mult];
        let nb = ge.first().copied().unwrap_or(mult).clamp(1, mult);
        blocks.truncate(nb);
        let extra = mult - nb;
        blocks[0] += extra;
    }
    blocks
}

/// `e^{2πiα}·M`.
pub fn scalar_scale(m: &CMatrix, alpha: &Rational) -> CMatrix {
    m.scale(&BigComplex::root_of_unity(alpha, m.prec()))
}
