//! Taylor-series transport of the order-`n` system along polylines.

use rug::{Assign, Float};

use crate::arith::{BigComplex, CMatrix, Precision};
use crate::error::{Error, Result};
use crate::local::complex_taylor_shift;
use crate::operator::ThetaOperator;

/// Largest step as a fraction of the distance to the nearest obstacle.
pub const STEP_RATIO: f64 = 0.5;

/// Guard bits carried by the continuation on top of the requested precision.
pub const CONTINUATION_GUARD: u32 = 32;

/// The d-form of an operator prepared for numerical continuation, together
/// with the zeros of its leading coefficient (the obstacles).
#[derive(Clone, Debug)]
pub struct Continuator {
    n: usize,
    q: Vec<Vec<BigComplex>>,
    obstacles: Vec<BigComplex>,
    obstacle_labels: Vec<String>,
    work: Precision,
}

/// Result of transporting a set of state vectors.
#[derive(Clone, Debug)]
pub struct Transport {
    pub states: Vec<Vec<BigComplex>>,
    pub steps: usize,
    /// Accumulated truncation estimate relative to the state size.
    pub error: f64,
}

impl Continuator {
    /// `obstacles` are the finite zeros of the d-form leading coefficient
    /// with display labels; `work` is the arithmetic precision.
    pub fn new(op: &ThetaOperator, obstacles: Vec<(BigComplex, String)>, work: Precision) -> Result<Self> {
        op.ensure_nonzero()?;
        let d = op.to_d();
        let q = d.coeffs().iter().map(|c| c.num().to_complex(work)).collect();
        let (obstacles, obstacle_labels) = obstacles.into_iter().map(|(z, l)| (z.with_prec(work), l)).unzip();
        Ok(Continuator { n: op.order(), q, obstacles, obstacle_labels, work })
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn precision(&self) -> Precision {
        self.work
    }

    /// Distance from `z` to the nearest obstacle, with its index.
    pub fn nearest(&self, z: &BigComplex) -> (f64, Option<usize>) {
        let mut best = (f64::INFINITY, None);
        for (i, o) in self.obstacles.iter().enumerate() {
            let d = o.dist(z).to_f64();
            if d < best.0 {
                best = (d, Some(i));
            }
        }
        best
    }

    /// Transports the scaled states `(y, y′, y″/2!, …)` along `path`.
    pub fn transport(&self, path: &[BigComplex], states: Vec<Vec<BigComplex>>) -> Result<Transport> {
        let mut states: Vec<Vec<BigComplex>> =
            states.into_iter().map(|s| s.into_iter().map(|c| c.with_prec(self.work)).collect()).collect();
        let mut steps = 0;
        let mut error = 0.0;
        for w in path.windows(2) {
            let end = w[1].with_prec(self.work);
            let mut z = w[0].with_prec(self.work);
            let total = z.dist(&end).to_f64();
            if total == 0.0 {
                continue;
            }
            loop {
                let remaining = &end - &z;
                let rem = remaining.abs_f64();
                if rem == 0.0 {
                    break;
                }
                let (dist, idx) = self.nearest(&z);
                let max_step = STEP_RATIO * dist;
                if max_step < total * 1e-12 {
                    let location = idx.map_or("?".to_string(), |i| self.obstacle_labels[i].clone());
                    return Err(Error::Continuation { location, message: "step size underflow".into() });
                }
                let (h, last) = if rem <= max_step {
                    (remaining, true)
                } else {
                    (remaining.scale(&Float::with_val(self.work.bits(), max_step / rem)), false)
                };
                let tail = self.step(&z, &h, &mut states)?;
                error += tail;
                steps += 1;
                if last {
                    z = end.clone();
                    break;
                }
                z = &z + &h;
            }
        }
        Ok(Transport { states, steps, error })
    }

    /// Transport matrix of `path`: columns are the images of the unit states.
    pub fn transport_matrix(&self, path: &[BigComplex]) -> Result<(CMatrix, Transport)> {
        let n = self.n;
        let init: Vec<Vec<BigComplex>> = (0..n)
            .map(|j| (0..n).map(|i| if i == j { BigComplex::one(self.work) } else { BigComplex::zero(self.work) }).collect())
            .collect();
        let t = self.transport(path, init)?;
        let mut m = CMatrix::zeros(n, n, self.work);
        for (j, col) in t.states.iter().enumerate() {
            for (i, c) in col.iter().enumerate() {
                m[(i, j)] = c.clone();
            }
        }
        Ok((m, t))
    }

    /// One Taylor step from `z` by `h`; returns the tail estimate.
    fn step(&self, z: &BigComplex, h: &BigComplex, states: &mut [Vec<BigComplex>]) -> Result<f64> {
        let n = self.n;
        let p = self.work;
        let bits = p.bits();
        let rho_f = h.abs_f64();
        let rho = Float::with_val(bits, rho_f);
        let rho_inv = Float::with_val(bits, 1) / &rho;
        let u = h.scale(&rho_inv);
        // B[k][i] = b_{k,i} ρ^{i−k}, where q_k(z + x) = Σ b_{k,i} x^i
        let mut big_b: Vec<Vec<BigComplex>> = Vec::with_capacity(n + 1);
        for (k, qk) in self.q.iter().enumerate() {
            let shifted = complex_taylor_shift(qk, z);
            let mut scale = Float::with_val(bits, &rho);
            scale.pow_assign_i32(-(k as i32));
            let mut row = Vec::with_capacity(shifted.len());
            for b in shifted {
                row.push(b.scale(&scale));
                scale *= &rho;
            }
            while row.len() > 1 && row.last().is_some_and(|c| c.is_zero()) {
                row.pop();
            }
            big_b.push(row);
        }
        let lead = big_b[n][0].clone();
        if lead.is_zero() {
            return Err(Error::Continuation { location: format!("{z:?}"), message: "leading coefficient vanishes".into() });
        }
        let inv_lead = lead.recip();
        let max_terms = 6 * bits as usize + 64;
        let tol = p.eps_scaled(-4);
        let mut worst_tail = 0.0f64;
        let mut scratch = Float::new(bits);
        for state in states.iter_mut() {
            // c_j = a_j ρ^j ; d[k][j] = c_j j!/(j−k)!
            let mut c: Vec<BigComplex> = Vec::with_capacity(max_terms);
            let mut rp = Float::with_val(bits, 1);
            for a in state.iter() {
                c.push(a.scale(&rp));
                rp *= &rho;
            }
            let mut d: Vec<Vec<BigComplex>> = vec![Vec::with_capacity(max_terms); n + 1];
            let push_d = |d: &mut Vec<Vec<BigComplex>>, cj: &BigComplex, j: usize| {
                for (k, dk) in d.iter_mut().enumerate() {
                    if j < k {
                        dk.push(BigComplex::zero(p));
                    } else {
                        dk.push(cj.scale(&falling(j, k, bits)));
                    }
                }
            };
            for (j, cj) in c.iter().enumerate() {
                push_d(&mut d, cj, j);
            }
            let size0 = c.iter().map(|x| x.max_abs_f64()).fold(0.0, f64::max).max(1e-300);
            let mut scale = size0;
            let mut small = 0;
            let mut tail = 0.0f64;
            let mut m = 0;
            loop {
                // coefficient of x^m: Σ_{k,i} B[k][i] d[k][m − i + k] = 0
                let mut acc = BigComplex::zero(p);
                for (k, row) in big_b.iter().enumerate() {
                    for (i, b) in row.iter().enumerate() {
                        if i > m || (k == n && i == 0) || b.is_zero() {
                            continue;
                        }
                        acc.add_mul(b, &d[k][m - i + k], &mut scratch);
                    }
                }
                let ff = falling(m + n, n, bits);
                let mut next = &acc * &inv_lead;
                next.re /= &ff;
                next.im /= &ff;
                next.re = -next.re;
                next.im = -next.im;
                let j = m + n;
                let mag = next.max_abs_f64();
                scale = scale.max(mag);
                push_d(&mut d, &next, j);
                c.push(next);
                m += 1;
                if mag <= tol * scale * (j as f64).powi(n as i32).recip() {
                    small += 1;
                    tail += mag * (j as f64).powi(n as i32);
                } else {
                    small = 0;
                    tail = 0.0;
                }
                if small >= 4 && j > 2 * n {
                    break;
                }
                if c.len() >= max_terms {
                    return Err(Error::Continuation {
                        location: format!("{z:?}"),
                        message: "Taylor series did not converge".into(),
                    });
                }
            }
            // Taylor coefficients of Y at u by repeated synthetic division
            let len = c.len();
            for j in 0..n {
                for i in (j..len - 1).rev() {
                    let (lo, hi) = c.split_at_mut(i + 1);
                    lo[i].add_mul(&hi[0], &u, &mut scratch);
                }
            }
            let mut rinv = Float::with_val(bits, 1);
            for j in 0..n {
                state[j] = c[j].scale(&rinv);
                rinv *= &rho_inv;
            }
            let out = state.iter().map(|x| x.max_abs_f64()).fold(0.0, f64::max).max(1e-300);
            worst_tail = worst_tail.max(tail / out);
        }
        Ok(worst_tail)
    }
}

/// `j!/(j−k)!` as a float.
fn falling(j: usize, k: usize, bits: u32) -> Float {
    let mut f = Float::with_val(bits, 1);
    for x in (j + 1 - k)..=j {
        f *= x as u32;
    }
    f
}

trait PowAssign {
    fn pow_assign_i32(&mut self, e: i32);
}

impl PowAssign for Float {
    fn pow_assign_i32(&mut self, e: i32) {
        use rug::ops::Pow;
        let v = Float::with_val(self.prec(), (&*self).pow(e));
        self.assign(v);
    }
}
