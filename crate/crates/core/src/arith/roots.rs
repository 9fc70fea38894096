use rug::{Float, Integer, Rational};

use super::complex::{pow2, BigComplex, Precision};
use super::poly::Poly;
use crate::error::{Error, Result};

/// Rational roots of `p` with multiplicities, in ascending order.
pub fn rational_roots(p: &Poly) -> Result<Vec<(Rational, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    let mut cur = p.clone();
    if let Some(v) = cur.valuation() {
        if v > 0 {
            out.push((Rational::new(), v));
            cur = cur.shift_down(v);
        }
    }
    for (f, mult) in cur.square_free_decomposition() {
        for r in rational_roots_squarefree(&f) {
            out.push((r, mult));
        }
    }
    out.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(out)
}

/// Rational roots of a square-free polynomial with nonzero constant term.
fn rational_roots_squarefree(f: &Poly) -> Vec<Rational> {
    let mut roots = Vec::new();
    let mut cur = f.clone();
    if cur.degree().unwrap_or(0) == 0 {
        return roots;
    }
    let (_, ints) = cur.primitive_part();
    let lead = ints.last().unwrap().clone().abs();
    let trail = ints[0].clone().abs();
    let nums = divisors(&trail);
    let dens = divisors(&lead);
    let mut cands: Vec<Rational> = Vec::new();
    for q in &dens {
        for p in &nums {
            let r = Rational::from((p.clone(), q.clone()));
            if *r.denom() == *q {
                cands.push(r.clone());
                cands.push(-r);
            }
        }
    }
    cands.sort();
    cands.dedup();
    for r in cands {
        if cur.degree().unwrap_or(0) == 0 {
            break;
        }
        if cur.eval(&r) == 0 {
            cur = cur.exact_div(&Poly::linear_root(&r)).unwrap();
            roots.push(r);
        }
    }
    roots
}

/// Positive divisors of a nonzero integer by trial division.
fn divisors(n: &Integer) -> Vec<Integer> {
    let mut n = n.clone().abs();
    let mut primes: Vec<(Integer, u32)> = Vec::new();
    let mut d = Integer::from(2);
    while Integer::from(&d * &d) <= n {
        let mut e = 0;
        while n.is_divisible(&d) {
            n /= &d;
            e += 1;
        }
        if e > 0 {
            primes.push((d.clone(), e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        primes.push((n, 1));
    }
    let mut divs = vec![Integer::from(1)];
    for (p, e) in primes {
        let cur = divs.clone();
        let mut pk = Integer::from(1);
        for _ in 0..e {
            pk *= &p;
            divs.extend(cur.iter().map(|x| Integer::from(x * &pk)));
        }
    }
    divs.sort();
    divs
}

/// All complex roots of `p` with multiplicities from the square-free
/// decomposition. Each square-free factor is solved by simultaneous
/// iteration at the target precision plus guard bits.
pub fn numeric_roots(p: &Poly, prec: Precision) -> Result<Vec<(BigComplex, usize)>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    let work = prec.with_guard(32);
    for (f, mult) in p.square_free_decomposition() {
        let coeffs = f.to_complex(work);
        for z in polynomial_roots(&coeffs, work)? {
            out.push((z.with_prec(prec), mult));
        }
    }
    sort_roots(&mut out);
    Ok(out)
}

/// Deterministic ordering: by real part, then imaginary part (rounded to
/// absorb noise).
pub fn sort_roots<T>(v: &mut [(BigComplex, T)]) {
    v.sort_by(|a, b| {
        let (ar, ai) = a.0.to_f64_pair();
        let (br, bi) = b.0.to_f64_pair();
        let key = |x: f64| (x * 1e12).round();
        key(ar)
            .partial_cmp(&key(br))
            .unwrap()
            .then(key(ai).partial_cmp(&key(bi)).unwrap())
    });
}

/// Roots of a complex polynomial (ascending coefficients) by Aberth
/// iteration. Repeated roots come back as tight clusters; see [`cluster`].
pub fn polynomial_roots(coeffs: &[BigComplex], prec: Precision) -> Result<Vec<BigComplex>> {
    let mut c: Vec<BigComplex> = coeffs.iter().map(|z| z.with_prec(prec)).collect();
    while c.last().is_some_and(|z| z.is_zero()) {
        c.pop();
    }
    if c.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let n = c.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = c[n].clone();
    let monic: Vec<BigComplex> = c.iter().map(|z| z / &lead).collect();
    if n == 1 {
        return Ok(vec![-monic[0].clone()]);
    }
    let dmonic: Vec<BigComplex> = (1..=n).map(|k| monic[k].scale_i64(k as i64)).collect();
    let abs_c: Vec<f64> = monic.iter().map(|z| z.abs_f64()).collect();

    // Fujiwara-style bound for the initial circle
    let mut radius = 0.0f64;
    for k in 0..n {
        radius = radius.max(abs_c[k].powf(1.0 / (n - k) as f64));
    }
    let radius = 2.0 * radius.max(1e-3);
    let mut z: Vec<BigComplex> = (0..n)
        .map(|k| {
            let ang = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4;
            BigComplex::from_f64(radius * ang.cos(), radius * ang.sin(), prec)
        })
        .collect();

    let eval = |coef: &[BigComplex], x: &BigComplex| -> BigComplex {
        let mut acc = BigComplex::zero(prec);
        let mut scratch = Float::new(prec.bits());
        for a in coef.iter().rev() {
            let mut t = BigComplex::zero(prec);
            t.add_mul(&acc, x, &mut scratch);
            acc = &t + a;
        }
        acc
    };
    let tol = pow2(8 - prec.bits() as i32, prec).to_f64();
    let backward_ok = |x: &BigComplex, val: &BigComplex| -> bool {
        let r = x.abs_f64();
        let mut scale = 0.0;
        for a in abs_c.iter().rev() {
            scale = scale * r + a;
        }
        val.abs_f64() <= tol * scale
    };
    let max_iter = 60 + 8 * prec.bits() as usize;
    let mut done = vec![false; n];
    for _ in 0..max_iter {
        let mut all = true;
        for i in 0..n {
            if done[i] {
                continue;
            }
            let pv = eval(&monic, &z[i]);
            if backward_ok(&z[i], &pv) {
                done[i] = true;
                continue;
            }
            all = false;
            let dv = eval(&dmonic, &z[i]);
            let ratio = &pv / &dv;
            let mut sum = BigComplex::zero(prec);
            for j in 0..n {
                if j != i {
                    let diff = &z[i] - &z[j];
                    if !diff.is_zero() {
                        sum = &sum + &diff.recip();
                    }
                }
            }
            let denom = &BigComplex::one(prec) - &(&ratio * &sum);
            let step = if denom.is_zero() || !denom.is_finite() {
                ratio
            } else {
                &ratio / &denom
            };
            if step.is_finite() {
                z[i] = &z[i] - &step;
            }
        }
        if all {
            return Ok(z);
        }
    }
    let worst = z
        .iter()
        .map(|x| eval(&monic, x).abs_f64())
        .fold(0.0, f64::max);
    Err(Error::RootsDidNotConverge { residual: worst })
}

/// Groups points closer than `radius` (single linkage) and returns each
/// group's mean with its size, in input order of first member.
pub fn cluster(points: &[BigComplex], radius: f64) -> Vec<(BigComplex, usize)> {
    let n = points.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if points[i].dist(&points[j]).to_f64() < radius {
                let a = find(&mut parent, i);
                let b = find(&mut parent, j);
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: Vec<(usize, Vec<usize>)> = Vec::new();
    for i in 0..n {
        let r = find(&mut parent, i);
        match groups.iter_mut().find(|g| g.0 == r) {
            Some(g) => g.1.push(i),
            None => groups.push((r, vec![i])),
        }
    }
    groups
        .into_iter()
        .map(|(_, idx)| {
            let prec = points[idx[0]].prec();
            let mut s = BigComplex::zero(prec);
            for &i in &idx {
                s = &s + &points[i];
            }
            (s.scale_rational(&Rational::from((1, idx.len() as i64))), idx.len())
        })
        .collect()
}

/// Roots of a complex polynomial grouped into clusters of radius `radius`,
/// each cluster centre refined by Newton's method on the derivative of order
/// `m - 1` (which has a simple root at an `m`-fold root).
pub fn clustered_roots(
    coeffs: &[BigComplex],
    prec: Precision,
    radius: f64,
) -> Result<Vec<(BigComplex, usize)>> {
    let z = polynomial_roots(coeffs, prec)?;
    let mut out = Vec::new();
    for (mean, m) in cluster(&z, radius) {
        out.push((polish_multiple(coeffs, mean, m, prec), m));
    }
    sort_roots(&mut out);
    Ok(out)
}

fn polish_multiple(coeffs: &[BigComplex], start: BigComplex, m: usize, prec: Precision) -> BigComplex {
    let mut d: Vec<BigComplex> = coeffs.iter().map(|c| c.with_prec(prec)).collect();
    for _ in 1..m {
        d = (1..d.len()).map(|k| d[k].scale_i64(k as i64)).collect();
    }
    let dd: Vec<BigComplex> = (1..d.len()).map(|k| d[k].scale_i64(k as i64)).collect();
    let horner = |c: &[BigComplex], x: &BigComplex| {
        let mut acc = BigComplex::zero(prec);
        for a in c.iter().rev() {
            acc = &(&acc * x) + a;
        }
        acc
    };
    let mut z = start.with_prec(prec);
    let start_err = horner(&d, &z).abs_f64();
    for _ in 0..2 * prec.bits() {
        let fv = horner(&d, &z);
        let dv = horner(&dd, &z);
        if dv.is_zero() {
            break;
        }
        let step = &fv / &dv;
        z = &z - &step;
        if step.abs_f64() <= prec.eps_scaled(4) * (1.0 + z.abs_f64()) {
            break;
        }
    }
    if horner(&d, &z).abs_f64() <= start_err && z.dist(&start).to_f64() < 1.0 {
        z
    } else {
        start
    }
}

/// Best rational approximation with denominator at most `max_den`, accepted
/// when within `tol`.
pub fn snap_rational(x: &Float, max_den: u32, tol: f64) -> Option<Rational> {
    if !x.is_finite() {
        return None;
    }
    let exact = x.to_rational()?;
    let mut best: Option<Rational> = None;
    // continued-fraction convergents
    let (mut h0, mut h1) = (Integer::from(0), Integer::from(1));
    let (mut k0, mut k1) = (Integer::from(1), Integer::from(0));
    let mut rem = exact.clone();
    for _ in 0..64 {
        let a = rem.clone().floor().into_numer_denom().0;
        let h2 = Integer::from(&a * &h1) + &h0;
        let k2 = Integer::from(&a * &k1) + &k0;
        if k2 > max_den {
            break;
        }
        best = Some(Rational::from((h2.clone(), k2.clone())));
        h0 = h1;
        h1 = h2;
        k0 = k1;
        k1 = k2;
        let frac = rem.clone() - Rational::from(a);
        if frac == 0 {
            break;
        }
        rem = frac.recip();
    }
    let q = best?;
    let err = Float::with_val(x.prec(), x - &q).abs().to_f64();
    (err < tol).then_some(q)
}

/// Snaps a complex number to a rational when its imaginary part is
/// negligible and its real part is close to a small-denominator fraction.
pub fn snap_complex_rational(z: &BigComplex, max_den: u32, tol: f64) -> Option<Rational> {
    if z.im.clone().abs().to_f64() >= tol {
        return None;
    }
    snap_rational(&z.re, max_den, tol)
}
