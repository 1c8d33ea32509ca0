//! Integer-relation search over weight-graded monomial bases.
//!
//! The lattice is reduced with exact integral LLL, so results are
//! deterministic. Every relation found is re-checked against the target
//! at 1.5x the fitting precision before it is returned.

use std::collections::HashMap;

use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::atom::{Atom, Part};
use crate::atoms::eval_atom;
use crate::ball::{bits_for_digits, BigReal};
use crate::closedform::{ClosedForm, Monomial};
use crate::coeff::GaussianRational as G;
use crate::error::{Error, Result};

pub const DEFAULT_HEIGHT: u64 = 10_000_000;

/// LLL parameter delta = 99/100.
const DELTA: (u32, u32) = (99, 100);

/// Exact integral LLL (rational-free Gram-Schmidt). Rows must be independent.
pub fn lll(rows: &mut [Vec<Integer>]) {
    let n = rows.len();
    if n < 2 {
        return;
    }
    let dot = |a: &[Integer], b: &[Integer]| -> Integer {
        let mut s = Integer::new();
        for (x, y) in a.iter().zip(b) {
            s += x * y;
        }
        s
    };
    // d[0] = 1, d[i+1] = Gram determinant of rows 0..=i
    let mut d = vec![Integer::from(1); n + 1];
    let mut lam = vec![vec![Integer::new(); n]; n];
    d[1] = dot(&rows[0], &rows[0]);
    let (p, q) = DELTA;
    let mut k = 1usize;
    let mut kmax = 0usize;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&rows[k], &rows[j]);
                for i in 0..j {
                    u = (Integer::from(&d[i + 1] * &u) - Integer::from(&lam[k][i] * &lam[j][i])) / &d[i];
                }
                if j < k {
                    lam[k][j] = u;
                } else {
                    assert!(u != 0, "lattice rows are dependent");
                    d[k + 1] = u;
                }
            }
        }
        reduce_pair(rows, &mut lam, &d, k, k - 1);
        // Lovasz test: q d_k d_{k-2} < p d_{k-1}^2 - q lam^2 (1-based)
        let lhs = Integer::from(&d[k + 1] * &d[k - 1]) * q;
        let l2 = Integer::from(lam[k][k - 1].square_ref());
        let rhs = Integer::from(d[k].square_ref()) * p - l2 * q;
        if lhs < rhs {
            swap_rows(rows, &mut lam, &mut d, k, kmax);
            k = (k - 1).max(1);
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                reduce_pair(rows, &mut lam, &d, k, l);
            }
            k += 1;
        }
    }
}

fn reduce_pair(rows: &mut [Vec<Integer>], lam: &mut [Vec<Integer>], d: &[Integer], k: usize, l: usize) {
    let two_lam = Integer::from(&lam[k][l] * 2u32);
    if two_lam.clone().abs() <= d[l + 1] {
        return;
    }
    // nearest integer to lam / d
    let num = Integer::from(&two_lam + &d[l + 1]);
    let den = Integer::from(&d[l + 1] * 2u32);
    let (r, _) = num.div_rem_floor(den);
    let (head, tail) = rows.split_at_mut(k);
    for (x, y) in tail[0].iter_mut().zip(&head[l]) {
        *x -= Integer::from(&r * y);
    }
    lam[k][l] -= Integer::from(&r * &d[l + 1]);
    for i in 0..l {
        let t = Integer::from(&r * &lam[l][i]);
        lam[k][i] -= t;
    }
}

fn swap_rows(rows: &mut [Vec<Integer>], lam: &mut [Vec<Integer>], d: &mut [Integer], k: usize, kmax: usize) {
    rows.swap(k, k - 1);
    for j in 0..k.saturating_sub(1) {
        let t = lam[k][j].clone();
        lam[k][j] = lam[k - 1][j].clone();
        lam[k - 1][j] = t;
    }
    let l = lam[k][k - 1].clone();
    let b = (Integer::from(&d[k - 1] * &d[k + 1]) + Integer::from(l.square_ref())) / &d[k];
    for i in (k + 1)..=kmax {
        let t = lam[i][k].clone();
        lam[i][k] = (Integer::from(&d[k + 1] * &lam[i][k - 1]) - Integer::from(&l * &t)) / &d[k];
        lam[i][k - 1] = (Integer::from(&b * &t) + Integer::from(&l * &lam[i][k])) / &d[k + 1];
    }
    d[k] = b;
}

/// Algebra generators admitted at `level`, up to weight `max_w`.
pub fn generators(level: u8, max_w: u32) -> Vec<Atom> {
    let mut g = vec![Atom::Pi];
    if level >= 2 {
        g.push(Atom::Log2);
    }
    if level >= 4 {
        g.push(Atom::catalan());
    }
    for w in 3..=max_w {
        if w % 2 == 1 {
            g.push(Atom::Zeta(w));
        }
        if level >= 4 {
            if w % 2 == 0 {
                g.push(Atom::Beta(w));
            }
            g.push(Atom::ImLiHalfI(w));
        }
        if level >= 2 && w >= 4 {
            g.push(Atom::LiHalf(w));
        }
        let mz = |s: &[u32], signs: &[i8]| Atom::Mz { s: s.to_vec(), signs: signs.to_vec() };
        let im = |s: &[u32], c: &[u8], part| Atom::Qmz { part, s: s.to_vec(), chars: c.to_vec() };
        match w {
            5 if level >= 4 => {
                g.push(im(&[4, 1], &[1, 0], Part::Im));
                g.push(im(&[4, 1], &[1, 2], Part::Im));
                g.push(im(&[3, 1, 1], &[0, 0, 1], Part::Re));
            }
            6 if level >= 2 => g.push(mz(&[5, 1], &[-1, 1])),
            7 if level >= 2 => g.push(mz(&[5, 1, 1], &[-1, 1, 1])),
            8 if level >= 2 => {
                g.push(mz(&[7, 1], &[-1, 1]));
                g.push(mz(&[5, 1, 1, 1], &[-1, 1, -1, 1]));
            }
            _ => {}
        }
    }
    g
}

/// All products of generators of exactly the given weight, in a fixed order.
pub fn monomial_basis(weight: u32, level: u8) -> Vec<Monomial> {
    let gens = generators(level, weight);
    let mut out = Vec::new();
    fn rec(gens: &[Atom], from: usize, left: i32, cur: &mut Vec<Atom>, out: &mut Vec<Monomial>) {
        if left == 0 {
            let mut m = Monomial::one();
            for a in cur.iter() {
                *m.0.entry(a.clone()).or_insert(0) += 1;
            }
            out.push(m);
            return;
        }
        for i in from..gens.len() {
            let w = gens[i].weight();
            if w <= left {
                cur.push(gens[i].clone());
                rec(gens, i, left - w, cur, out);
                cur.pop();
            }
        }
    }
    rec(&gens, 0, weight as i32, &mut Vec::new(), &mut out);
    out
}

/// Sign under complex conjugation: imaginary-type atoms (pi, C, beta,
/// Im parts) are odd.
pub fn atom_parity(a: &Atom) -> i32 {
    match a {
        Atom::Pi | Atom::Beta(_) | Atom::ImLiHalfI(_) | Atom::Qmz { part: Part::Im, .. } => -1,
        _ => 1,
    }
}

pub fn monomial_parity(m: &Monomial) -> i32 {
    m.0.iter().map(|(a, e)| if atom_parity(a) == -1 && e % 2 != 0 { -1 } else { 1 }).product()
}

/// Split a basis into its even and odd parts.
pub fn parity_split(basis: &[Monomial]) -> (Vec<Monomial>, Vec<Monomial>) {
    basis.iter().cloned().partition(|m| monomial_parity(m) == 1)
}

fn eval_monomial(m: &Monomial, digits: u32, cache: &mut HashMap<Atom, BigReal>) -> Result<BigReal> {
    let prec = bits_for_digits(digits) + 16;
    let mut acc = BigReal::from_int(1, prec);
    for (a, e) in &m.0 {
        if !cache.contains_key(a) {
            cache.insert(a.clone(), eval_atom(a, digits + 5)?);
        }
        acc = &acc * &cache[a].powi(*e);
    }
    Ok(acc)
}

/// Digits actually carried by a ball.
fn ball_digits(x: &BigReal) -> u32 {
    let r = x.rad_f64();
    if r <= 0.0 {
        return bits_for_digits(1).max(x.prec()) * 3 / 10;
    }
    let mag = x.mag().to_f64().abs().max(1.0);
    ((mag / r).log10().floor().max(0.0)) as u32
}

/// Find c0 x + sum c_i b_i = 0 with |c| <= height, returning x = -sum (c_i/c0) b_i.
/// The residual is checked at the precision of `value` only.
pub fn find_relation(value: &BigReal, basis: &[Monomial], height: u64) -> Result<ClosedForm> {
    let digits = ball_digits(value);
    if digits < 8 {
        return Err(Error::Precision(format!("target carries only {digits} digits")));
    }
    let mut cache = HashMap::new();
    let mut vals = vec![value.clone()];
    for m in basis {
        vals.push(eval_monomial(m, digits, &mut cache)?);
    }
    let n = vals.len();
    let work = digits.saturating_sub(3);
    let prec = bits_for_digits(digits) + 32;
    let scale = Float::with_val(prec, 10).pow(work);
    let mut rows: Vec<Vec<Integer>> = Vec::with_capacity(n);
    for (i, v) in vals.iter().enumerate() {
        let mut row = vec![Integer::new(); n + 1];
        row[i] = Integer::from(1);
        let s = Float::with_val(prec, v.mid() * &scale);
        row[n] = s.to_integer().expect("finite basis value");
        rows.push(row);
    }
    lll(&mut rows);
    let bound = Integer::from(height);
    let mut best: Option<f64> = None;
    for row in &rows {
        let c = &row[..n];
        let qual = c.iter().map(|x| x.to_f64().abs()).fold(0.0, f64::max);
        best = Some(best.map_or(qual, |b: f64| b.min(qual)));
        if c[0] == 0 || c.iter().any(|x| Integer::from(x.abs_ref()) > bound) {
            continue;
        }
        // residual within rounding of the scaled entries
        let mut res = BigReal::zero(vals[0].prec());
        for (ci, v) in c.iter().zip(&vals) {
            res = &res + &v.mul_rational(&Rational::from(ci));
        }
        let tol: f64 = c.iter().map(|x| x.to_f64().abs()).sum::<f64>() * 10f64.powi(-(work as i32) + 1);
        if res.mag().to_f64() > tol {
            continue;
        }
        let mut form = ClosedForm::zero();
        for (ci, m) in c[1..].iter().zip(basis) {
            if *ci != 0 {
                let q = Rational::from((Integer::from(-ci), c[0].clone()));
                form += &ClosedForm::monomial(G::real(q), m.clone());
            }
        }
        return Ok(form);
    }
    Err(Error::NoRelation(format!(
        "no relation of height <= {height} over {} monomials at {digits} digits (smallest reduced coefficient vector max-norm {:.3e})",
        basis.len(),
        best.unwrap_or(f64::NAN)
    )))
}

/// Fit `target` (evaluated at `digits`) over `basis`, then confirm at 1.5x digits.
pub fn fit(
    target: &dyn Fn(u32) -> Result<BigReal>,
    basis: &[Monomial],
    digits: u32,
    height: u64,
) -> Result<ClosedForm> {
    let v = target(digits)?;
    let form = find_relation(&v, basis, height)?;
    verify(target, &form, digits * 3 / 2)?;
    Ok(form)
}

/// Check a candidate against the target at `digits`.
pub fn verify(target: &dyn Fn(u32) -> Result<BigReal>, form: &ClosedForm, digits: u32) -> Result<()> {
    let hi = target(digits)?;
    let f = crate::atoms::eval_closedform(form, digits)?;
    let diff = (&f.re - &hi).mag().to_f64().abs().max(f.im.mag().to_f64().abs());
    let tol = 10f64.powi(-(digits as i32) + 3);
    if diff > tol {
        return Err(Error::NoRelation(format!(
            "candidate {} failed confirmation at {digits} digits (residual {diff:.3e})",
            form.to_text()
        )));
    }
    Ok(())
}

/// Try the even part, the odd part, then the full basis.
pub fn fit_graded(
    target: &dyn Fn(u32) -> Result<BigReal>,
    basis: &[Monomial],
    digits: u32,
    height: u64,
) -> Result<ClosedForm> {
    let (even, odd) = parity_split(basis);
    let mut last = None;
    for b in [&even, &odd, &basis.to_vec()] {
        if b.is_empty() {
            continue;
        }
        match fit(target, b, digits, height) {
            Ok(f) => return Ok(f),
            Err(e @ Error::NoRelation(_)) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.unwrap_or_else(|| Error::NoRelation("empty basis".into())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::eval_series;
    use crate::parser::{parse_closedform, parse_series};

    fn ints(v: &[i64]) -> Vec<Integer> {
        v.iter().map(|&x| Integer::from(x)).collect()
    }

    #[test]
    fn lll_small_lattice() {
        let mut rows = vec![ints(&[1, 1, 1]), ints(&[-1, 0, 2]), ints(&[3, 5, 6])];
        lll(&mut rows);
        let norm = |r: &Vec<Integer>| r.iter().map(|x| x.to_f64() * x.to_f64()).sum::<f64>();
        assert_eq!(norm(&rows[0]), 1.0);
        // determinant is preserved up to sign: |det| = 3
        let m: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|x| x.to_f64()).collect()).collect();
        let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
        assert_eq!(det.abs(), 3.0);
    }

    #[test]
    fn basis_enumeration() {
        assert_eq!(monomial_basis(0, 4), vec![Monomial::one()]);
        let b2: Vec<String> = monomial_basis(2, 2).iter().map(|m| m.text()).collect();
        assert_eq!(b2.len(), 3);
        for t in ["pi^2", "pi*log2", "log2^2"] {
            assert!(b2.iter().any(|x| x == t), "{t} missing from {b2:?}");
        }
        // 6 + 6 + 2 + 6 + 2 + 4 + 6 by partition shape
        assert_eq!(monomial_basis(5, 4).len(), 32);
        let (even, odd) = parity_split(&monomial_basis(5, 4));
        assert_eq!((even.len(), odd.len()), (16, 16));
    }

    #[test]
    fn recovers_half_pi_log2() {
        let s = parse_series("binom(1; 1/(2n+1)^2)").unwrap();
        let target = |d: u32| eval_series(&s, d).map(|z| z.re);
        let f = fit(&target, &monomial_basis(2, 2), 30, DEFAULT_HEIGHT).unwrap();
        assert_eq!(f, parse_closedform("1/2*pi*log2").unwrap());
    }

    #[test]
    fn pi_is_not_rational() {
        let target = |d: u32| eval_atom(&Atom::Pi, d);
        let e = fit(&target, &[Monomial::one()], 60, DEFAULT_HEIGHT).unwrap_err();
        assert!(matches!(e, Error::NoRelation(_)), "{e:?}");
    }

    #[test]
    fn arcsine_square_entry() {
        let s = parse_series("binom(-1; 1/n^2; start=1)").unwrap();
        let target = |d: u32| eval_series(&s, d).map(|z| z.re);
        let f = fit_graded(&target, &monomial_basis(2, 2), 30, DEFAULT_HEIGHT).unwrap();
        assert_eq!(f, parse_closedform("1/2*pi^2").unwrap());
    }
}
