use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use rug::Float;

use super::complex::{BigComplex, Precision};
use crate::error::{Error, Result};

/// Dense complex matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigComplex>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize, prec: Precision) -> Self {
        CMatrix { rows, cols, data: vec![BigComplex::zero(prec); rows * cols] }
    }

    pub fn identity(n: usize, prec: Precision) -> Self {
        let mut m = CMatrix::zeros(n, n, prec);
        for i in 0..n {
            m[(i, i)] = BigComplex::one(prec);
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigComplex>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged matrix");
        CMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_f64_rows(rows: &[&[f64]], prec: Precision) -> Self {
        CMatrix::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| BigComplex::from_f64(x, 0.0, prec)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn prec(&self) -> Precision {
        self.data.first().map_or(Precision::DEFAULT, |z| z.prec())
    }

    pub fn with_prec(&self, prec: Precision) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z.with_prec(prec)).collect(),
        }
    }

    pub fn row(&self, i: usize) -> &[BigComplex] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<BigComplex> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigComplex>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> CMatrix {
        let mut t = CMatrix::zeros(self.cols, self.rows, self.prec());
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &BigComplex) -> CMatrix {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn trace(&self) -> BigComplex {
        let mut t = BigComplex::zero(self.prec());
        for i in 0..self.rows.min(self.cols) {
            t = &t + &self[(i, i)];
        }
        t
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr().to_f64()).sum::<f64>().sqrt()
    }

    /// Frobenius norm at working precision.
    pub fn norm_float(&self) -> Float {
        let mut s = Float::new(self.prec().bits());
        for z in &self.data {
            s += z.norm_sqr();
        }
        s.sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.abs_f64()).fold(0.0, f64::max)
    }

    pub fn pow(&self, k: u32) -> CMatrix {
        let mut out = CMatrix::identity(self.rows, self.prec());
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigComplex]) -> Vec<BigComplex> {
        let prec = self.prec();
        let mut scratch = Float::new(prec.bits());
        (0..self.rows)
            .map(|i| {
                let mut acc = BigComplex::zero(prec);
                for j in 0..self.cols {
                    acc.add_mul(&self[(i, j)], &v[j], &mut scratch);
                }
                acc
            })
            .collect()
    }

    /// LU factorisation with partial pivoting; returns `(lu, perm, sign)`.
    fn lu(&self) -> Result<(CMatrix, Vec<usize>, i32)> {
        let n = self.rows;
        let mut a = self.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1;
        for k in 0..n {
            let (p, best) = (k..n)
                .map(|i| (i, a[(i, k)].abs_f64()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if best == 0.0 {
                return Err(Error::Numeric("singular matrix".into()));
            }
            if p != k {
                for j in 0..n {
                    a.data.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let inv = a[(k, k)].recip();
            for i in k + 1..n {
                let f = &a[(i, k)] * &inv;
                for j in k + 1..n {
                    let v = &a[(i, j)] - &(&f * &a[(k, j)]);
                    a[(i, j)] = v;
                }
                a[(i, k)] = f;
            }
        }
        Ok((a, perm, sign))
    }

    pub fn det(&self) -> BigComplex {
        assert!(self.is_square());
        match self.lu() {
            Err(_) => BigComplex::zero(self.prec()),
            Ok((lu, _, sign)) => {
                let mut d = BigComplex::from_i64(sign as i64, self.prec());
                for i in 0..self.rows {
                    d = &d * &lu[(i, i)];
                }
                d
            }
        }
    }

    pub fn inverse(&self) -> Result<CMatrix> {
        assert!(self.is_square());
        let n = self.rows;
        let prec = self.prec();
        let (lu, perm, _) = self.lu()?;
        let mut inv = CMatrix::zeros(n, n, prec);
        for col in 0..n {
            let mut x: Vec<BigComplex> = (0..n)
                .map(|i| if perm[i] == col { BigComplex::one(prec) } else { BigComplex::zero(prec) })
                .collect();
            for i in 0..n {
                for j in 0..i {
                    let v = &x[i] - &(&lu[(i, j)] * &x[j]);
                    x[i] = v;
                }
            }
            for i in (0..n).rev() {
                for j in i + 1..n {
                    let v = &x[i] - &(&lu[(i, j)] * &x[j]);
                    x[i] = v;
                }
                x[i] = &x[i] / &lu[(i, i)];
            }
            for i in 0..n {
                inv[(i, col)] = x[i].clone();
            }
        }
        Ok(inv)
    }

    /// Characteristic polynomial `det(x I - M)`, ascending coefficients,
    /// by the Faddeev–LeVerrier recursion.
    pub fn charpoly(&self) -> Vec<BigComplex> {
        let n = self.rows;
        let prec = self.prec();
        let mut c = vec![BigComplex::zero(prec); n + 1];
        c[n] = BigComplex::one(prec);
        let id = CMatrix::identity(n, prec);
        let mut m = id.clone();
        for k in 1..=n {
            let am = self * &m;
            let ck = -(am.trace().scale_rational(&rug::Rational::from((1, k as i64))));
            m = &am + &id.scale(&ck);
            c[n - k] = ck;
        }
        c
    }

    /// Singular values (descending) and right singular vectors as columns
    /// of `V`, by one-sided Jacobi rotations.
    pub fn svd_right(&self) -> (Vec<Float>, CMatrix) {
        let prec = self.prec();
        let n = self.cols;
        let mut a = self.clone();
        let mut v = CMatrix::identity(n, prec);
        let eps = crate::arith::pow2(-(prec.bits() as i32), prec);
        for _sweep in 0..60 {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let mut alpha = Float::new(prec.bits());
                    let mut beta = Float::new(prec.bits());
                    let mut gamma = BigComplex::zero(prec);
                    let mut scratch = Float::new(prec.bits());
                    for i in 0..a.rows {
                        alpha += a[(i, p)].norm_sqr();
                        beta += a[(i, q)].norm_sqr();
                        gamma.add_mul(&a[(i, p)].conj(), &a[(i, q)], &mut scratch);
                    }
                    let g = gamma.abs();
                    let bound = Float::with_val(prec.bits(), &alpha * &beta).sqrt() * &eps;
                    if g <= bound || g.is_zero() {
                        continue;
                    }
                    rotated = true;
                    // phase so that the q column pairs with real gamma
                    let phase = gamma.scale(&Float::with_val(prec.bits(), g.recip_ref())).conj();
                    let zeta = Float::with_val(prec.bits(), &beta - &alpha) / (Float::with_val(prec.bits(), &g * 2u32));
                    let root = Float::with_val(prec.bits(), 1 + Float::with_val(prec.bits(), zeta.square_ref())).sqrt();
                    let mut t = Float::with_val(prec.bits(), zeta.abs_ref()) + &root;
                    t.recip_mut();
                    if zeta.is_sign_negative() {
                        t = -t;
                    }
                    let c = Float::with_val(prec.bits(), 1 + Float::with_val(prec.bits(), t.square_ref())).sqrt().recip();
                    let s = Float::with_val(prec.bits(), &c * &t);
                    let rot = |m: &mut CMatrix| {
                        for i in 0..m.rows {
                            let xp = m[(i, p)].clone();
                            let xq = &m[(i, q)] * &phase;
                            m[(i, p)] = &xp.scale(&c) - &xq.scale(&s);
                            m[(i, q)] = &xp.scale(&s) + &xq.scale(&c);
                        }
                    };
                    rot(&mut a);
                    rot(&mut v);
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<(Float, usize)> = (0..n)
            .map(|j| {
                let mut s = Float::new(prec.bits());
                for i in 0..a.rows {
                    s += a[(i, j)].norm_sqr();
                }
                (s.sqrt(), j)
            })
            .collect();
        sv.sort_by(|x, y| y.0.partial_cmp(&x.0).unwrap().then(x.1.cmp(&y.1)));
        let mut vs = CMatrix::zeros(n, n, prec);
        for (k, (_, j)) in sv.iter().enumerate() {
            for i in 0..n {
                vs[(i, k)] = v[(i, *j)].clone();
            }
        }
        (sv.into_iter().map(|x| x.0).collect(), vs)
    }

    pub fn singular_values(&self) -> Vec<Float> {
        self.svd_right().0
    }

    /// Numerical rank: singular values above `rel_tol * sigma_max`, or above
    /// `abs_tol` when given.
    pub fn rank(&self, abs_tol: f64) -> usize {
        self.singular_values().iter().filter(|s| s.to_f64() > abs_tol).count()
    }

    /// Right nullspace basis (columns) for singular values at most
    /// `rel_tol * sigma_max`. Also returns all singular values.
    pub fn nullspace(&self, rel_tol: f64) -> (Vec<Vec<BigComplex>>, Vec<Float>) {
        let (sv, v) = self.svd_right();
        let smax = sv.first().map_or(0.0, |s| s.to_f64());
        let thr = rel_tol * smax;
        let basis = (0..self.cols)
            .filter(|&k| smax == 0.0 || sv[k].to_f64() <= thr)
            .map(|k| v.column(k))
            .collect();
        (basis, sv)
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = BigComplex;
    fn index(&self, (i, j): (usize, usize)) -> &BigComplex {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut BigComplex {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch");
        let prec = self.prec().max(rhs.prec());
        let mut out = CMatrix::zeros(self.rows, rhs.cols, prec);
        let mut scratch = Float::new(prec.bits());
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let mut acc = std::mem::replace(&mut out[(i, j)], BigComplex::zero(prec));
                    acc.add_mul(a, &rhs[(k, j)], &mut scratch);
                    out[(i, j)] = acc;
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl fmt::Debug for CMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = self
                .row(i)
                .iter()
                .map(|z| {
                    let (r, im) = z.to_f64_pair();
                    format!("{r:+.6e}{im:+.6e}i")
                })
                .collect();
            writeln!(f, "  {}", row.join(", "))?;
        }
        write!(f, "]")
    }
}
