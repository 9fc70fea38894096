//! Numerical monodromy: loops around the singular points, transport
//! matrices, the product relation and Jordan classification.
//!
//! A loop's matrix `M_γ` has as columns the states reached by continuing
//! the basis with unit initial states `(y, y′, y″/2!, …)` at the base
//! point. Continuing along `γ₁` then `γ₂` gives `M_{γ₂} M_{γ₁}`.

mod continuation;
mod jordan;

pub use continuation::{Continuator, Transport, CONTINUATION_GUARD, STEP_RATIO};
pub use jordan::{
    frac_part, jordan_classify, jordan_classify_at, lcm_all, root_label, scalar_scale, JordanData,
    JordanEigen, DEFAULT_MAX_ORDER,
};

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::Rational;
use serde_json::{json, Value};

use crate::arith::{BigComplex, CMatrix, Precision};
use crate::error::{Error, Result};
use crate::local::{point_survey, ExponentList, Location, PointKind};
use crate::operator::ThetaOperator;

/// Loop radius as a fraction of the distance to the nearest other obstacle.
pub const LOOP_RADIUS: f64 = 0.4;
pub const LOOP_SIDES: usize = 16;
const BIG_LOOP_SIDES: usize = 32;
const DETOUR_SIDES: usize = 8;

/// A finite zero of the d-form leading coefficient.
#[derive(Clone, Debug)]
pub struct Obstacle {
    pub location: Location,
    pub value: BigComplex,
    pub kind: PointKind,
    pub exponents: Option<ExponentList>,
}

/// Closed polyline from the base point around one obstacle.
#[derive(Clone, Debug)]
pub struct Loop {
    pub base: BigComplex,
    /// From the base point to the start of the polygon.
    pub approach: Vec<BigComplex>,
    /// Counterclockwise polygon, first vertex = last vertex.
    pub circle: Vec<BigComplex>,
    pub target: usize,
}

impl Loop {
    /// Full closed polyline: approach, polygon, approach reversed.
    pub fn vertices(&self) -> Vec<BigComplex> {
        let mut v = self.approach.clone();
        v.extend(self.circle.iter().skip(1).cloned());
        v.extend(self.approach.iter().rev().skip(1).cloned());
        v
    }
}

#[derive(Clone, Debug)]
pub struct MonodromyMatrix {
    pub location: Location,
    pub kind: PointKind,
    pub exponents: Option<ExponentList>,
    /// Entries at the continuation precision.
    pub entries: CMatrix,
    pub error_bound: f64,
}

impl MonodromyMatrix {
    pub fn label(&self) -> String {
        self.location.label()
    }

    pub fn jordan(&self, max_order: u32, nominal: Precision) -> Result<JordanData> {
        jordan_classify_at(&self.entries, max_order, nominal)
    }

    /// `|det M − e^{2πi·Σα}|` when the exponents are rational.
    pub fn det_residual(&self) -> Option<f64> {
        let sum = self.exponents.as_ref()?.sum()?;
        let expected = BigComplex::root_of_unity(&sum, self.entries.prec());
        Some(self.entries.det().dist(&expected).to_f64())
    }

    /// Whether the point is a genuine singularity (not ordinary or apparent).
    pub fn is_singular(&self) -> bool {
        self.kind == PointKind::RegularSingular || self.location.is_infinity()
    }
}

/// Monodromy representation with the data needed to reproduce it.
#[derive(Clone, Debug)]
pub struct Monodromy {
    pub precision: Precision,
    pub base_point: Rational,
    /// Finite loops in generator order, then ∞.
    pub matrices: Vec<MonodromyMatrix>,
    pub loops: Vec<Loop>,
    /// `M_∞` transported along one large counterclockwise circle, inverted.
    pub infinity_direct: CMatrix,
    /// `‖P · M_∞(direct) − I‖` for the ordered product `P` of finite matrices.
    pub product_residual: f64,
    pub steps: usize,
}

impl Monodromy {
    pub fn finite(&self) -> &[MonodromyMatrix] {
        &self.matrices[..self.matrices.len() - 1]
    }

    pub fn infinity(&self) -> &MonodromyMatrix {
        self.matrices.last().unwrap()
    }

    pub fn get(&self, loc: &Location) -> Option<&MonodromyMatrix> {
        self.matrices.iter().find(|m| crate::local::same_location(&m.location, loc))
    }

    /// Matrices of the genuine singular points (including ∞).
    pub fn singular(&self) -> Vec<&MonodromyMatrix> {
        self.matrices.iter().filter(|m| m.is_singular()).collect()
    }

    /// Matrices generating the group (every loop, ∞ omitted as redundant).
    pub fn generators(&self) -> Vec<&CMatrix> {
        self.finite().iter().map(|m| &m.entries).collect()
    }

    pub fn to_json(&self, max_order: u32) -> Value {
        let digits = self.precision.decimal_digits();
        let mats: Vec<Value> = self
            .matrices
            .iter()
            .map(|m| {
                let jd = m.jordan(max_order, self.precision).ok();
                json!({
                    "point": m.label(),
                    "kind": kind_name(m.kind, &m.location),
                    "exponents": m.exponents.as_ref().map(|e| e.values().iter().map(|x| x.to_string()).collect::<Vec<_>>()),
                    "matrix": matrix_json(&m.entries, digits),
                    "error_bound": m.error_bound,
                    "det_residual": m.det_residual(),
                    "jordan": jd.map(|j| j.to_json()),
                })
            })
            .collect();
        json!({
            "precision_bits": self.precision.bits(),
            "base_point": self.base_point.to_string(),
            "loop_radius_factor": LOOP_RADIUS,
            "loop_sides": LOOP_SIDES,
            "step_ratio": STEP_RATIO,
            "ordering": self.finite().iter().map(|m| m.label()).collect::<Vec<_>>(),
            "matrices": mats,
            "product_residual": self.product_residual,
        })
    }
}

pub fn kind_name(kind: PointKind, loc: &Location) -> &'static str {
    if loc.is_infinity() {
        return "singular";
    }
    match kind {
        PointKind::Ordinary => "ordinary",
        PointKind::ApparentCandidate => "apparent",
        PointKind::RegularSingular => "singular",
        PointKind::Irregular => "irregular",
    }
}

pub fn matrix_json(m: &CMatrix, digits: usize) -> Value {
    Value::Array(
        m.to_rows()
            .iter()
            .map(|r| {
                Value::Array(
                    r.iter()
                        .map(|c| {
                            let (a, b) = c.to_decimal_strings(digits);
                            json!([a, b])
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

/// Finite obstacles of an operator: every finite candidate point, with its
/// classification.
pub fn obstacles(op: &ThetaOperator, prec: Precision) -> Result<Vec<Obstacle>> {
    let work = prec.with_guard(CONTINUATION_GUARD);
    let mut out = Vec::new();
    for p in point_survey(op, prec)? {
        if p.location.is_infinity() {
            continue;
        }
        if p.kind == PointKind::Irregular {
            return Err(Error::IrregularSingularity { point: p.location.label() });
        }
        let is_obstacle = match &p.location {
            Location::Rational(r) => *r == 0 || op.leading().eval(r) == 0,
            _ => true,
        };
        if !is_obstacle {
            continue;
        }
        out.push(Obstacle {
            value: p.location.value(work).unwrap(),
            location: p.location,
            kind: p.kind,
            exponents: p.exponents,
        });
    }
    Ok(out)
}

/// Base point: a rational half a unit (at least) left of every obstacle,
/// so rays to the obstacles fan out over `(−π/2, π/2)`.
pub fn base_point(obs: &[Obstacle]) -> Rational {
    let left = obs.iter().map(|o| o.value.re.to_f64()).fold(f64::INFINITY, f64::min);
    let left = if left.is_finite() { left } else { 0.0 };
    let spread = obs.iter().map(|o| o.value.abs_f64()).fold(0.0, f64::max);
    let gap = (spread / 4.0).clamp(0.5, 2.0);
    // multiples of 1/2
    let b = ((left - gap) * 2.0).floor() / 2.0;
    Rational::from_f64(b).unwrap()
}

fn c64(z: &BigComplex) -> (f64, f64) {
    z.to_f64_pair()
}

fn from64(a: f64, b: f64, prec: Precision) -> BigComplex {
    BigComplex::from_f64(a, b, prec)
}

/// Nearest-other-obstacle distance for each obstacle.
fn neighbour_distances(obs: &[Obstacle]) -> Vec<f64> {
    obs.iter()
        .enumerate()
        .map(|(i, o)| {
            obs.iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, p)| o.value.dist(&p.value).to_f64())
                .fold(f64::INFINITY, f64::min)
        })
        .map(|d| if d.is_finite() { d } else { 1.0 })
        .collect()
}

/// Generator order: argument from the base point, ties by distance.
fn generator_order(obs: &[Obstacle], base: &BigComplex) -> Vec<usize> {
    let (bx, by) = c64(base);
    let mut idx: Vec<usize> = (0..obs.len()).collect();
    let key = |i: usize| {
        let (x, y) = c64(&obs[i].value);
        let arg = (y - by).atan2(x - bx);
        let r = ((x - bx).powi(2) + (y - by).powi(2)).sqrt();
        (arg, r)
    };
    idx.sort_by(|&a, &b| {
        let (ka, kb) = (key(a), key(b));
        if (ka.0 - kb.0).abs() < 1e-12 {
            ka.1.partial_cmp(&kb.1).unwrap_or(Ordering::Equal)
        } else {
            ka.0.partial_cmp(&kb.0).unwrap_or(Ordering::Equal)
        }
    });
    idx
}

/// Builds the loop around obstacle `target`. Obstacles near the approach
/// segment are passed on the side that keeps them consistent with the
/// generator order: earlier generators stay on the right.
fn build_loop(obs: &[Obstacle], nn: &[f64], rank: &[usize], base: &BigComplex, target: usize, prec: Precision) -> Loop {
    let (bx, by) = c64(base);
    let (sx, sy) = c64(&obs[target].value);
    let (dx, dy) = (sx - bx, sy - by);
    let len = (dx * dx + dy * dy).sqrt();
    let (ux, uy) = (dx / len, dy / len);
    let rho = LOOP_RADIUS * nn[target];
    let start = (sx - rho * ux, sy - rho * uy);
    let seg_len = len - rho;
    // detours: (entry parameter, vertices)
    let mut detours: Vec<(f64, Vec<(f64, f64)>)> = Vec::new();
    for (j, o) in obs.iter().enumerate() {
        if j == target {
            continue;
        }
        let (ox, oy) = c64(&o.value);
        let (rx, ry) = (ox - bx, oy - by);
        let along = rx * ux + ry * uy;
        let across = -rx * uy + ry * ux; // positive: o lies to the left
        let r = LOOP_RADIUS * nn[j];
        if across.abs() >= r || along <= 0.0 || along >= seg_len {
            continue;
        }
        let half = (r * r - across * across).sqrt();
        let (t1, t2) = (along - half, along + half);
        let keep_right = rank[j] < rank[target];
        let a1 = (by + t1 * uy - oy).atan2(bx + t1 * ux - ox);
        let a2 = (by + t2 * uy - oy).atan2(bx + t2 * ux - ox);
        // keeping o on the right means travelling clockwise around it
        let mut sweep = a2 - a1;
        if keep_right {
            while sweep >= 0.0 {
                sweep -= 2.0 * std::f64::consts::PI;
            }
        } else {
            while sweep <= 0.0 {
                sweep += 2.0 * std::f64::consts::PI;
            }
        }
        let pts = (0..=DETOUR_SIDES)
            .map(|k| {
                let a = a1 + sweep * k as f64 / DETOUR_SIDES as f64;
                (ox + r * a.cos(), oy + r * a.sin())
            })
            .collect();
        detours.push((t1, pts));
    }
    detours.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut approach = vec![base.clone()];
    for (_, pts) in detours {
        for (x, y) in pts {
            approach.push(from64(x, y, prec));
        }
    }
    let start_pt = from64(start.0, start.1, prec);
    approach.push(start_pt.clone());
    let mut circle = vec![start_pt.clone()];
    let (px, py) = (start.0 - sx, start.1 - sy);
    for k in 1..LOOP_SIDES {
        let a = 2.0 * std::f64::consts::PI * k as f64 / LOOP_SIDES as f64;
        let (c, s) = (a.cos(), a.sin());
        circle.push(from64(sx + px * c - py * s, sy + px * s + py * c, prec));
    }
    circle.push(start_pt);
    Loop { base: base.clone(), approach, circle, target }
}

/// Large counterclockwise polygon around every obstacle, reached from the
/// base point by a segment running left (away from all obstacles).
fn big_loop(obs: &[Obstacle], base: &BigComplex, prec: Precision) -> Vec<BigComplex> {
    let (bx, _) = c64(base);
    let cx = if obs.is_empty() {
        bx + 1.0
    } else {
        obs.iter().map(|o| o.value.re.to_f64()).sum::<f64>() / obs.len() as f64
    };
    let spread = obs.iter().map(|o| {
        let (x, y) = c64(&o.value);
        ((x - cx).powi(2) + y * y).sqrt()
    });
    let r = (1.5 * spread.fold(0.0, f64::max) + 1.0).max(cx - bx + 1.0).ceil();
    let start = from64(cx - r, 0.0, prec);
    let mut v = vec![base.clone(), start.clone()];
    for k in 1..BIG_LOOP_SIDES {
        let a = std::f64::consts::PI + 2.0 * std::f64::consts::PI * k as f64 / BIG_LOOP_SIDES as f64;
        v.push(from64(cx + r * a.cos(), r * a.sin(), prec));
    }
    v.push(start);
    v.push(base.clone());
    v
}

/// Monodromy matrices around every finite obstacle (in generator order)
/// and ∞, with `M_∞` the inverse of the ordered product.
pub fn monodromy_matrices(op: &ThetaOperator, prec: Precision) -> Result<Monodromy> {
    let work = prec.with_guard(CONTINUATION_GUARD);
    let obs = obstacles(op, prec)?;
    let labels = obs.iter().map(|o| (o.value.clone(), o.location.label())).collect();
    let cont = Continuator::new(op, labels, work)?;
    let base_q = base_point(&obs);
    let base = BigComplex::from_rational(&base_q, work);
    let order = generator_order(&obs, &base);
    let mut rank = vec![0; obs.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let nn = neighbour_distances(&obs);
    let loops: Vec<Loop> = order.iter().map(|&i| build_loop(&obs, &nn, &rank, &base, i, work)).collect();
    let big = big_loop(&obs, &base, work);
    let results: Vec<Result<(CMatrix, usize, f64)>> = loops
        .par_iter()
        .map(|l| {
            let (a, ta) = cont.transport_matrix(&l.approach)?;
            let (c, tc) = cont.transport_matrix(&l.circle)?;
            let ainv = a.inverse()?;
            let m = &(&ainv * &c) * &a;
            Ok((m, ta.steps + tc.steps, ta.error + tc.error))
        })
        .chain(rayon::iter::once(()).map(|_| {
            let (m, t) = cont.transport_matrix(&big)?;
            Ok((m, t.steps, t.error))
        }))
        .collect();
    let mut steps = 0;
    let mut matrices = Vec::new();
    let mut big_m = None;
    for (k, r) in results.into_iter().enumerate() {
        let (m, s, e) = r?;
        steps += s;
        if k < loops.len() {
            let o = &obs[loops[k].target];
            matrices.push(MonodromyMatrix {
                location: o.location.clone(),
                kind: o.kind,
                exponents: o.exponents.clone(),
                entries: m,
                error_bound: e,
            });
        } else {
            big_m = Some((m, e));
        }
    }
    let (big_m, big_err) = big_m.unwrap();
    let n = op.order();
    let mut product = CMatrix::identity(n, work);
    for m in &matrices {
        product = &m.entries * &product;
    }
    let m_inf = product.inverse()?;
    let inf_direct = big_m.inverse()?;
    let residual = (&(&product * &inf_direct) - &CMatrix::identity(n, work)).max_abs();
    let inf_exps = crate::local::local_exponents(op, &Location::Infinity, prec).ok();
    let err = matrices.iter().map(|m| m.error_bound).sum::<f64>() + big_err;
    matrices.push(MonodromyMatrix {
        location: Location::Infinity,
        kind: PointKind::RegularSingular,
        exponents: inf_exps,
        entries: m_inf,
        error_bound: err,
    });
    Ok(Monodromy {
        precision: prec,
        base_point: base_q,
        matrices,
        loops,
        infinity_direct: inf_direct,
        product_residual: residual,
        steps,
    })
}

/// Transport of the unit states once around the circle `|t − c| = r`
/// starting at `c + r`, as a polygon with `sides` vertices.
pub fn circle_transport(op: &ThetaOperator, center: &Rational, radius: &Rational, sides: usize, prec: Precision) -> Result<CMatrix> {
    let work = prec.with_guard(CONTINUATION_GUARD);
    let obs = obstacles(op, prec)?;
    let labels = obs.iter().map(|o| (o.value.clone(), o.location.label())).collect();
    let cont = Continuator::new(op, labels, work)?;
    let c = BigComplex::from_rational(center, work);
    let r = BigComplex::from_rational(radius, work);
    let mut path = Vec::with_capacity(sides + 1);
    for k in 0..sides {
        let w = BigComplex::root_of_unity(&Rational::from((k as i64, sides as i64)), work);
        path.push(&c + &(&r * &w));
    }
    path.push(path[0].clone());
    Ok(cont.transport_matrix(&path)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::opformat::parse;

    #[test]
    fn first_order_circle() {
        let op = parse("T - 1/2").unwrap();
        let m = circle_transport(&op, &Rational::new(), &Rational::from(1), 16, Precision::DEFAULT).unwrap();
        let minus_one = BigComplex::from_i64(-1, m.prec());
        assert!(m[(0, 0)].dist(&minus_one).to_f64() < 1e-30, "{:?}", m[(0, 0)]);
        let op = parse("T - 1/3").unwrap();
        let m = circle_transport(&op, &Rational::new(), &Rational::from(1), 16, Precision::DEFAULT).unwrap();
        let z = BigComplex::root_of_unity(&Rational::from((1, 3)), m.prec());
        assert!(m[(0, 0)].dist(&z).to_f64() < 1e-30);
    }

    #[test]
    fn constant_path_is_identity() {
        let op = parse("T^4 - t*(T+1/2)^4").unwrap();
        let work = Precision::DEFAULT.with_guard(CONTINUATION_GUARD);
        let cont = Continuator::new(&op, vec![], work).unwrap();
        let p = BigComplex::from_f64(-0.5, 0.0, work);
        let (m, _) = cont.transport_matrix(&[p.clone(), p]).unwrap();
        assert_eq!(m, CMatrix::identity(4, work));
    }

    #[test]
    fn no2_monodromy() {
        let op = parse("T^4 - t*(T+1/2)^4").unwrap();
        let t = std::time::Instant::now();
        let mon = monodromy_matrices(&op, Precision::DEFAULT).unwrap();
        eprintln!("no2 monodromy {:?}, {} steps, residual {:e}", t.elapsed(), mon.steps, mon.product_residual);
        assert!(mon.product_residual < 1e-20);
        let m0 = mon.get(&Location::zero()).unwrap();
        let jd = m0.jordan(120, Precision::DEFAULT).unwrap();
        assert_eq!(jd.block_pairs(), vec![(Rational::new(), 4)]);
        let m1 = mon.get(&Location::Rational(Rational::from(1))).unwrap();
        let jd1 = m1.jordan(120, Precision::DEFAULT).unwrap();
        assert_eq!(jd1.block_pairs(), vec![(Rational::new(), 1), (Rational::new(), 1), (Rational::new(), 2)]);
        let jinf = mon.infinity().jordan(120, Precision::DEFAULT).unwrap();
        assert_eq!(jinf.block_pairs(), vec![(Rational::from((1, 2)), 4)]);
        for m in &mon.matrices {
            assert!(m.det_residual().unwrap() < 1e-25, "{}", m.label());
        }
    }
}

