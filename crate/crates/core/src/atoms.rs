//! Certified numeric values of atoms and closed forms.
//!
//! Each atom kind has a primary route (`eval_atom`) and an independent
//! second route (`eval_atom_alt`) used for two-method agreement checks.
//! Colored multiple zeta values use Hölder convolution at p = 1/2; their
//! second route is the nested-sum evaluator in the oracle.

use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::path::Path;
use std::sync::Mutex;

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::atom::{Atom, Part};
use crate::ball::{bits_for_digits, BigComplex, BigReal};
use crate::closedform::ClosedForm;
use crate::coeff::GaussianRational as G;
use crate::error::{Error, Result};
use crate::exact;

/// Largest supported precision in decimal digits.
pub const MAX_DIGITS: u32 = 400;

static CACHE: Mutex<Option<HashMap<(Atom, u32), BigReal>>> = Mutex::new(None);

fn check_digits(digits: u32) -> Result<()> {
    if digits > MAX_DIGITS {
        return Err(Error::Precision(format!("{digits} digits exceeds the maximum of {MAX_DIGITS}")));
    }
    Ok(())
}

/// Value of `a` with radius below 10^-digits.
pub fn eval_atom(a: &Atom, digits: u32) -> Result<BigReal> {
    check_digits(digits)?;
    a.validate().map_err(Error::Semantic)?;
    let prec = bits_for_digits(digits) + 16;
    if let Some(v) = CACHE.lock().unwrap().get_or_insert_with(HashMap::new).get(&(a.clone(), prec)) {
        return Ok(v.clone());
    }
    let v = primary(a, prec);
    let bound = 10f64.powi(-(digits as i32));
    if !(v.rad_f64() < bound) {
        return Err(Error::Precision(format!(
            "{}: reached radius {:.3e}, wanted {:.0e}",
            a.text(),
            v.rad_f64(),
            bound
        )));
    }
    CACHE.lock().unwrap().get_or_insert_with(HashMap::new).insert((a.clone(), prec), v.clone());
    Ok(v)
}

/// Second, independent evaluation route. Multiple zeta atoms have no second
/// route here (see the oracle) and return `None`.
pub fn eval_atom_alt(a: &Atom, digits: u32) -> Option<BigReal> {
    let prec = bits_for_digits(digits) + 16;
    secondary(a, prec)
}

/// Numeric value of a closed form (complex, since coefficients may be).
pub fn eval_closedform(f: &ClosedForm, digits: u32) -> Result<BigComplex> {
    check_digits(digits)?;
    let prec = bits_for_digits(digits) + 16;
    let mut acc = BigComplex::zero(prec);
    if f.is_zero() {
        return Ok(acc);
    }
    // a few extra digits absorb the cancellation between terms
    let inner = digits + 10;
    for (m, c) in f.terms() {
        let mut t = BigReal::from_int(1, prec + 40);
        for (a, e) in &m.0 {
            let v = eval_atom(a, inner)?;
            t = &t * &v.powi(*e);
        }
        acc = &acc + &BigComplex::from_gaussian(c, prec + 40).scale(&t);
    }
    Ok(acc)
}

fn pi(prec: u32) -> BigReal {
    BigReal::from_rounded(Float::with_val(prec, Constant::Pi))
}

fn log2(prec: u32) -> BigReal {
    BigReal::from_rounded(Float::with_val(prec, Constant::Log2))
}

fn primary(a: &Atom, prec: u32) -> BigReal {
    match a {
        Atom::Pi => pi(prec),
        Atom::Log2 => log2(prec),
        Atom::EulerGamma => BigReal::from_rounded(Float::with_val(prec, Constant::Euler)),
        Atom::Sqrt2 => BigReal::from_int(2, prec).sqrt(),
        Atom::SqrtPi => pi(prec + 8).sqrt().with_prec(prec),
        Atom::Gamma14 => gamma14_agm(prec),
        Atom::Zeta(n) => BigReal::from_rounded(Float::with_val(prec, Float::zeta_u(*n))),
        Atom::Beta(n) => cvz(prec, |k, p| odd_power_recip(k, *n, p)),
        Atom::LiHalf(n) => polylog_power_series(*n, &G::from_ratio(1, 2), prec).re,
        Atom::ImLiHalfI(n) => polylog_power_series(*n, &half_plus_half_i(), prec).im,
        Atom::Hurwitz4(o) => {
            // zeta(4, o/4) = 128 (15/16 zeta(4) +- beta(4))
            let z4 = primary(&Atom::Zeta(4), prec);
            let b4 = primary(&Atom::Beta(4), prec);
            let t = z4.mul_rational(&Rational::from((15, 16)));
            let s = if *o == 1 { &t + &b4 } else { &t - &b4 };
            s.mul_i64(128)
        }
        Atom::Mz { s, signs } => {
            let chars: Vec<u8> = signs.iter().map(|&e| if e == 1 { 0 } else { 2 }).collect();
            cmzv_holder(s, &chars, prec).re
        }
        Atom::Qmz { part, s, chars } => {
            let v = cmzv_holder(s, chars, prec);
            match part {
                Part::Re => v.re,
                Part::Im => v.im,
            }
        }
    }
}

fn secondary(a: &Atom, prec: u32) -> Option<BigReal> {
    Some(match a {
        Atom::Pi => machin_pi(prec),
        Atom::Log2 => {
            // log 2 = sum_{k>=1} 1 / (k 2^k)
            polylog_power_series(1, &G::from_ratio(1, 2), prec).re
        }
        Atom::EulerGamma => euler_gamma_em(prec),
        Atom::Sqrt2 => {
            let l = log2(prec + 16);
            let h = Float::with_val(prec + 16, l.mid() / 2u32);
            BigReal::from_rounded(Float::with_val(prec, h.exp_ref())).with_prec(prec)
        }
        Atom::SqrtPi => BigReal::from_rounded(Float::with_val(prec, Float::with_val(prec, 0.5).gamma_ref())),
        Atom::Gamma14 => BigReal::from_rounded(Float::with_val(prec, Float::with_val(prec, 0.25).gamma_ref())),
        Atom::Zeta(n) => {
            // zeta(n) = eta(n) / (1 - 2^(1-n))
            let eta = cvz(prec, |k, p| int_power_recip(k + 1, *n, p));
            let f = Rational::from(1) - Rational::from((1, Integer::from(1) << (*n - 1)));
            &eta / &BigReal::from_rational(&f, prec)
        }
        Atom::Beta(1) => machin_pi(prec).div_i64(4),
        Atom::Beta(n) => {
            let a = hurwitz_em(*n, &Rational::from((1, 4)), prec);
            let b = hurwitz_em(*n, &Rational::from((3, 4)), prec);
            let f = Rational::from((1, Integer::from(1) << (2 * n)));
            (&a - &b).mul_rational(&f)
        }
        Atom::LiHalf(n) => {
            let mu = BigComplex::real(-&log2(prec + 16));
            polylog_log_expansion(*n, &mu, prec).re
        }
        Atom::ImLiHalfI(n) => {
            // log((1+i)/2) = -log2/2 + i pi/4
            let mu = BigComplex::new(-&log2(prec + 16).div_i64(2), pi(prec + 16).div_i64(4));
            polylog_log_expansion(*n, &mu, prec).im
        }
        Atom::Hurwitz4(o) => hurwitz_em(4, &Rational::from((*o as i64, 4)), prec),
        Atom::Mz { .. } | Atom::Qmz { .. } => return None,
    })
}

/// 2^l as a low-precision float (no underflow for very negative l).
fn pow2(l: f64) -> Float {
    let fl = l.floor();
    let mut f = Float::with_val(64, (l - fl).exp2());
    f <<= fl as i32;
    f
}

fn half_plus_half_i() -> G {
    G::new(Rational::from((1, 2)), Rational::from((1, 2)))
}

fn int_power_recip(k: u64, n: u32, prec: u32) -> BigReal {
    let d = Integer::from(k).pow(n);
    BigReal::from_rational(&Rational::from((Integer::from(1), d)), prec)
}

fn odd_power_recip(k: u64, n: u32, prec: u32) -> BigReal {
    int_power_recip(2 * k + 1, n, prec)
}

/// Cohen-Rodriguez Villegas-Zagier acceleration of sum_{k>=0} (-1)^k a_k for
/// completely monotone a_k; error below 2 a_0 / 5.828^n.
pub fn cvz(prec: u32, a: impl Fn(u64, u32) -> BigReal) -> BigReal {
    let wp = prec + 32;
    let n = ((prec as f64 + 8.0) * std::f64::consts::LN_2 / (3.0 + 8f64.sqrt()).ln()).ceil() as u64 + 2;
    let s8 = Float::with_val(wp, 8).sqrt();
    let base = Float::with_val(wp, 3 + s8);
    let d0 = base.pow(n as u32);
    let d = (Float::with_val(wp, &d0 + &Float::with_val(wp, 1 / &d0))) / 2u32;
    let mut b = Float::with_val(wp, -1);
    let mut c = Float::with_val(wp, -&d);
    let mut s = BigReal::zero(wp);
    for k in 0..n {
        c = Float::with_val(wp, &b - &c);
        s = &s + &a(k, wp).scale_float(&c);
        let num = Integer::from(k + n) * Integer::from(k as i64 - n as i64);
        b *= Float::with_val(wp, &num);
        b /= Float::with_val(wp, (Rational::from((2 * k + 1, 2))) * Integer::from(k + 1));
    }
    let mut r = &s / &BigReal::from_rounded(d.clone());
    let a0 = a(0, 64).mag().to_f64();
    let bound = Float::with_val(64, 2.0 * a0) / Float::with_val(64, &d);
    r.add_error(&bound);
    // the b/c recursion itself rounds; charge a generous relative error
    let mut e = r.mag();
    e >>= wp as i32 - 2 * (64 - (n.leading_zeros() as i32)) - 8;
    r.add_error(&e);
    r.with_prec(prec)
}

impl BigReal {
    fn scale_float(&self, f: &Float) -> BigReal {
        self * &BigReal::from_rounded(Float::with_val(self.prec(), f))
    }
}

/// Machin: pi = 16 atan(1/5) - 4 atan(1/239), each by its alternating series.
fn machin_pi(prec: u32) -> BigReal {
    fn atan_inv(q: u64, prec: u32) -> BigReal {
        let mut s = BigReal::zero(prec);
        let q2 = Integer::from(q * q);
        let mut pw = Integer::from(q);
        let mut k = 0u64;
        loop {
            let t = BigReal::from_rational(&Rational::from((Integer::from(1), Integer::from(2 * k + 1) * &pw)), prec);
            let small = t.mag() < pow2(-(prec as f64) - 4.0);
            s = if k % 2 == 0 { &s + &t } else { &s - &t };
            if small {
                s.add_error(&t.mag());
                return s;
            }
            pw *= &q2;
            k += 1;
        }
    }
    let a = atan_inv(5, prec + 16).mul_i64(16);
    let b = atan_inv(239, prec + 16).mul_i64(4);
    (&a - &b).with_prec(prec)
}

/// Gamma(1/4) = sqrt((2 pi)^(3/2) / AGM(1, sqrt 2)).
fn gamma14_agm(prec: u32) -> BigReal {
    let wp = prec + 32;
    let s2 = Float::with_val(wp, 2).sqrt();
    let agm = Float::with_val(wp, Float::with_val(wp, 1).agm_ref(&s2));
    let tp = Float::with_val(wp, Constant::Pi) * 2u32;
    let num = Float::with_val(wp, &tp * Float::with_val(wp, tp.sqrt_ref()));
    let v = Float::with_val(wp, (num / agm).sqrt());
    // about ten correctly rounded steps, each within an ulp
    let mut b = BigReal::from_rounded(v);
    let mut e = b.mag();
    e >>= wp as i32 - 6;
    b.add_error(&e);
    b.with_prec(prec)
}

/// Euler-Maclaurin for gamma = H_N - log N - 1/(2N) + sum B_2j / (2j N^2j).
fn euler_gamma_em(prec: u32) -> BigReal {
    let wp = prec + 32;
    let n = (prec as u64 / 5).max(10);
    let m = (prec / 5).max(10);
    let mut h = BigReal::zero(wp);
    for k in 1..=n {
        h = &h + &BigReal::from_rational(&Rational::from((1, k)), wp);
    }
    let ln = BigReal::from_rounded(Float::with_val(wp, Float::with_val(wp, n).ln_ref()));
    let mut g = &(&h - &ln) - &BigReal::from_rational(&Rational::from((1, 2 * n)), wp);
    let b = exact::bernoulli_upto(2 * m + 2);
    let nn = Integer::from(n);
    for j in 1..=m {
        let t = Rational::from(&b[2 * j as usize] / (Integer::from(2 * j) * nn.clone().pow(2 * j)));
        g = &g + &BigReal::from_rational(&t, wp);
    }
    let next = Rational::from(&b[2 * m as usize + 2] / (Integer::from(2 * m + 2) * nn.pow(2 * m + 2)));
    g.add_error(&(Float::with_val(64, &next).abs() * 2u32));
    g.with_prec(prec)
}

/// Hurwitz zeta(s, a) for integer s >= 2 and 0 < a <= 1 by Euler-Maclaurin.
pub fn hurwitz_em(s: u32, a: &Rational, prec: u32) -> BigReal {
    assert!(s >= 2);
    let wp = prec + 32;
    let n = (prec as u64 / 4).max(16);
    let m = (prec / 4).max(8);
    let mut acc = BigReal::zero(wp);
    for k in 0..n {
        let x = Rational::from(a + k);
        acc = &acc + &BigReal::from_rational(&x, wp).powi(-(s as i32));
    }
    let x = BigReal::from_rational(&Rational::from(a + n), wp);
    let xs = x.powi(-(s as i32));
    acc = &acc + &(&xs * &x).div_i64(s as i64 - 1);
    acc = &acc + &xs.div_i64(2);
    let b = exact::bernoulli_upto(2 * m + 2);
    // term_j = B_2j / (2j)! * s (s+1) ... (s+2j-2) x^(-s-2j+1)
    let mut rising = Integer::from(s);
    let mut xp = &xs / &x;
    let x2inv = x.powi(-2);
    let mut last = Float::new(64);
    for j in 1..=m + 1 {
        let c = Rational::from(&b[2 * j as usize] * &rising) / exact::factorial(2 * j);
        let t = xp.mul_rational(&c);
        if j == m + 1 {
            last = t.mag();
            break;
        }
        acc = &acc + &t;
        rising *= Integer::from(s + 2 * j - 1) * Integer::from(s + 2 * j);
        xp = &xp * &x2inv;
    }
    acc.add_error(&(last * 2u32));
    acc.with_prec(prec)
}

/// Li_n(z) = sum_{k>=1} z^k / k^n for |z| <= 1/sqrt 2.
pub fn polylog_power_series(n: u32, z: &G, prec: u32) -> BigComplex {
    let wp = prec + 32;
    let r2 = z.norm_sqr().to_f64();
    assert!(r2 <= 0.5 + 1e-12);
    let r = r2.sqrt();
    let zb = BigComplex::from_gaussian(z, wp);
    let mut p = zb.clone();
    let mut acc = BigComplex::zero(wp);
    let mut k = 1u64;
    loop {
        let t = p.scale(&int_power_recip(k, n, wp));
        acc = &acc + &t;
        // remaining tail below r^(k+1) / (1 - r)
        let tail = (k as f64 + 1.0) * r.log2() - (1.0 - r).log2();
        if tail < -(prec as f64) - 8.0 {
            acc.re.add_error(&pow2(tail));
            acc.im.add_error(&pow2(tail));
            break;
        }
        p = &p * &zb;
        k += 1;
    }
    BigComplex::new(acc.re.with_prec(prec), acc.im.with_prec(prec))
}

/// Li_n(e^mu) = sum_{k != n-1} zeta(n-k) mu^k / k! + mu^(n-1)/(n-1)! (H_{n-1} - log(-mu)),
/// valid for |mu| < 2 pi.
pub fn polylog_log_expansion(n: u32, mu: &BigComplex, prec: u32) -> BigComplex {
    let wp = prec + 32;
    let absmu = mu.mag_f64();
    let ratio = absmu / (2.0 * std::f64::consts::PI);
    assert!(ratio < 0.5);
    let mut acc = BigComplex::zero(wp);
    let mut pw = BigComplex::from_int(1, wp); // mu^k / k!
    let mut k: u32 = 0;
    loop {
        if k + 1 != n {
            let z = if k + 2 <= n {
                BigReal::from_rounded(Float::with_val(wp, Float::zeta_u(n - k)))
            } else {
                BigReal::from_rational(&exact::zeta_nonpositive(k - n), wp)
            };
            acc = &acc + &pw.scale(&z);
        } else {
            let h: Rational = (1..n).map(|j| Rational::from((1, j))).sum();
            let neg = -mu;
            let lnr = Float::with_val(wp, neg.norm_sqr().mid().ln_ref()) / 2u32;
            let arg = Float::with_val(wp, neg.im.mid().atan2_ref(neg.re.mid()));
            let mut lr = BigReal::from_rounded(lnr);
            let mut la = BigReal::from_rounded(arg);
            // propagate the input radius through log
            let rel = mu.rad_f64() / mu.mag_f64().max(1e-300) * 4.0;
            lr.add_error_f64(rel);
            la.add_error_f64(rel);
            let hb = BigReal::from_rational(&h, wp);
            let f = BigComplex::new(&hb - &lr, -&la);
            acc = &acc + &(&pw * &f);
        }
        k += 1;
        pw = (&pw * mu).scale(&BigReal::from_rational(&Rational::from((1, k)), wp));
        // |zeta(-m)| <= 4 m! / (2 pi)^(m+1): the tail is geometric in ratio
        if k > n + 2 {
            // log2 of 4 m! |mu|^k / (k! (2 pi)^(m+1) (1 - ratio))
            let m = k - n;
            let lf = |x: u32| (1..=x).map(|v| (v as f64).log2()).sum::<f64>();
            let bound = 2.0 + lf(m) - lf(k) + k as f64 * absmu.log2()
                - (m as f64 + 1.0) * (2.0 * std::f64::consts::PI).log2()
                - (1.0 - ratio).log2();
            if bound < -(prec as f64) - 8.0 {
                acc.re.add_error(&pow2(bound));
                acc.im.add_error(&pow2(bound));
                break;
            }
        }
    }
    BigComplex::new(acc.re.with_prec(prec), acc.im.with_prec(prec))
}

// ---- colored multiple zeta values by Hölder convolution ----

fn i_pow(e: i64) -> G {
    match e.rem_euclid(4) {
        0 => G::one(),
        1 => G::i(),
        2 => G::from_int(-1),
        _ => -G::i(),
    }
}

/// Iterated-integral word of Li_{s}(x) with x_j = i^{chars_j}:
/// Li = (-1)^k I(0; 0^{s1-1} c1 ... 0^{sk-1} ck; 1), c_j = 1/(x_1...x_j).
fn cmzv_word(s: &[u32], chars: &[u8]) -> Vec<G> {
    let mut w = Vec::new();
    let mut acc = 0i64;
    for (sj, cj) in s.iter().zip(chars) {
        acc += *cj as i64;
        for _ in 1..*sj {
            w.push(G::zero());
        }
        w.push(i_pow(-acc));
    }
    w
}

/// I(0; w; y) for a word ending in a nonzero letter, as a nested series
/// (-1)^k Li_{s}(y/b1, b1/b2, ...).
fn iterated_integral(w: &[G], y: &G, prec: u32) -> BigComplex {
    if w.is_empty() {
        return BigComplex::from_int(1, prec);
    }
    assert!(!w.last().unwrap().is_zero(), "word must end in a nonzero letter");
    let mut s = Vec::new();
    let mut b = Vec::new();
    let mut z = 0u32;
    for a in w {
        if a.is_zero() {
            z += 1;
        } else {
            s.push(z + 1);
            b.push(a.clone());
            z = 0;
        }
    }
    let mut x = Vec::with_capacity(b.len());
    let mut r: f64 = 0.0;
    for j in 0..b.len() {
        let prev = if j == 0 { y.clone() } else { b[j - 1].clone() };
        x.push(&prev / &b[j]);
        r = r.max((&y.clone() / &b[j]).norm_sqr().to_f64().sqrt());
    }
    let v = nested_polylog(&s, &x, r, prec);
    if s.len() % 2 == 1 {
        -&v
    } else {
        v
    }
}

/// sum_{n1>...>nk>0} prod x_j^{n_j} / n_j^{s_j}; `r` bounds |x_1...x_j| for all j.
fn nested_polylog(s: &[u32], x: &[G], r: f64, prec: u32) -> BigComplex {
    let k = s.len();
    assert!(r < 0.75);
    let wp = prec + 32;
    // term at n1 = n is at most r^n n^(k-1); tail below 4 r^(N+1) (N+1)^(k-1)
    let mut nmax: u64 = 8;
    let target = -(prec as f64) - 8.0;
    while (4.0f64).log2() + (nmax as f64 + 1.0) * r.log2() + (k as f64 - 1.0) * ((nmax + 1) as f64).log2() > target {
        nmax += 8;
    }
    let xb: Vec<BigComplex> = x.iter().map(|g| BigComplex::from_gaussian(g, wp)).collect();
    // acc[j] = sum over n_j <= current n of the depth-j..k partial sums
    let mut acc: Vec<BigComplex> = vec![BigComplex::zero(wp); k + 1];
    acc[k] = BigComplex::from_int(1, wp);
    let mut pw: Vec<BigComplex> = vec![BigComplex::from_int(1, wp); k];
    for n in 1..=nmax {
        // update from outermost to innermost so inner sums are over m < n
        for j in 0..k {
            pw[j] = &pw[j] * &xb[j];
        }
        let inv: Vec<BigReal> = s.iter().map(|&sj| int_power_recip(n, sj, wp)).collect();
        for j in 0..k {
            let inner = if j + 1 == k { BigComplex::from_int(1, wp) } else { acc[j + 1].clone() };
            let t = (&pw[j] * &inner).scale(&inv[j]);
            acc[j] = &acc[j] + &t;
        }
    }
    let tail = pow2(2.0 + (nmax as f64 + 1.0) * r.log2() + (k as f64 - 1.0) * ((nmax + 1) as f64).log2());
    let mut v = acc[0].clone();
    v.re.add_error(&tail);
    v.im.add_error(&tail);
    v
}

/// sum_{n1>...>nk>0} prod i^{chars_j n_j} / n_j^{s_j} via Hölder convolution at 1/2.
pub fn cmzv_holder(s: &[u32], chars: &[u8], prec: u32) -> BigComplex {
    let wp = prec + 16 + 4 * s.iter().sum::<u32>();
    let w = cmzv_word(s, chars);
    let half = G::from_ratio(1, 2);
    let mut total = BigComplex::zero(wp);
    for m in 0..=w.len() {
        // I(1/2; a1..am; 1) = (-1)^m I(0; 1-am, ..., 1-a1; 1/2)
        let head: Vec<G> = w[..m].iter().rev().map(|a| &G::one() - a).collect();
        let mut h = iterated_integral(&head, &half, wp);
        if m % 2 == 1 {
            h = -&h;
        }
        let t = iterated_integral(&w[m..], &half, wp);
        total = &total + &(&h * &t);
    }
    let v = if s.len() % 2 == 1 { -&total } else { total };
    BigComplex::new(v.re.with_prec(prec), v.im.with_prec(prec))
}

// ---- disk cache ----

/// Append-only on-disk cache of atom values, one JSON record per line.
pub struct AtomCache;

impl AtomCache {
    /// Load cached values, keeping only records whose radius certifies the
    /// stated digits. Returns the number of records accepted.
    pub fn load(path: &Path) -> Result<usize> {
        if !path.exists() {
            return Ok(0);
        }
        let f = std::fs::File::open(path)?;
        let mut n = 0;
        for line in std::io::BufReader::new(f).lines() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let v: serde_json::Value = serde_json::from_str(&line).map_err(|e| Error::Io(e.to_string()))?;
            let (Some(at), Some(d), Some(mid), Some(rad)) =
                (v["atom"].as_str(), v["digits"].as_u64(), v["mid"].as_str(), v["rad"].as_str())
            else {
                continue;
            };
            let cf = crate::parser::parse_closedform(at)?;
            let Some((m, _)) = cf.terms().next() else { continue };
            let Some((a, _)) = m.0.iter().next() else { continue };
            let prec = bits_for_digits(d as u32) + 16;
            let Ok(midf) = Float::parse(mid).map(|p| Float::with_val(prec, p)) else { continue };
            let Ok(radf) = Float::parse(rad).map(|p| Float::with_val(64, p)) else { continue };
            if radf.to_f64() >= 10f64.powi(-(d as i32)) {
                continue;
            }
            let mut b = BigReal::from_rounded(midf);
            b.add_error(&radf);
            CACHE.lock().unwrap().get_or_insert_with(HashMap::new).insert((a.clone(), prec), b);
            n += 1;
        }
        Ok(n)
    }

    /// Append a record for each of `atoms` at `digits`.
    pub fn append(path: &Path, atoms: &[Atom], digits: u32) -> Result<()> {
        let mut f = std::fs::OpenOptions::new().create(true).append(true).open(path)?;
        for a in atoms {
            let v = eval_atom(a, digits)?;
            let mid = crate::ball::fixed_point(v.mid(), digits as usize + 12);
            let rec = serde_json::json!({
                "atom": a.text(),
                "digits": digits,
                "mid": mid,
                "rad": format!("{:.6e}", v.rad_f64() + 10f64.powi(-(digits as i32) - 12)),
            });
            writeln!(f, "{rec}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &BigReal, b: &BigReal) -> bool {
        a.overlaps(b)
    }

    #[test]
    fn constants_two_routes() {
        for a in [Atom::Pi, Atom::Log2, Atom::EulerGamma, Atom::Sqrt2, Atom::SqrtPi, Atom::Gamma14] {
            let x = eval_atom(&a, 30).unwrap();
            let y = eval_atom_alt(&a, 30).unwrap();
            assert!(close(&x, &y), "{a}: {x} vs {y}");
            assert!(y.rad_f64() < 1e-30, "{a}: alt radius {}", y.rad_f64());
        }
    }

    #[test]
    fn zeta_beta_two_routes() {
        for a in [Atom::Zeta(3), Atom::Zeta(2), Atom::Beta(2), Atom::Beta(4), Atom::Beta(1), Atom::Hurwitz4(1)] {
            let x = eval_atom(&a, 30).unwrap();
            let y = eval_atom_alt(&a, 30).unwrap();
            assert!(close(&x, &y), "{a}: {x} vs {y}");
            assert!(y.rad_f64() < 1e-30, "{a}: alt radius {}", y.rad_f64());
        }
        let z3 = eval_atom(&Atom::Zeta(3), 30).unwrap();
        assert!(z3.to_decimal(30).starts_with("1.2020569031595942853997381615"));
        let c = eval_atom(&Atom::Beta(2), 30).unwrap();
        assert!(c.to_decimal(30).starts_with("0.91596559417721901505460351493"));
    }

    #[test]
    fn polylogs_two_routes() {
        for a in [Atom::LiHalf(2), Atom::LiHalf(4), Atom::ImLiHalfI(2), Atom::ImLiHalfI(5)] {
            let x = eval_atom(&a, 30).unwrap();
            let y = eval_atom_alt(&a, 30).unwrap();
            assert!(close(&x, &y), "{a}: {x} vs {y}");
            assert!(y.rad_f64() < 1e-30, "{a}: alt radius {}", y.rad_f64());
        }
    }

    #[test]
    fn holder_depth_one_matches_closed_values() {
        // sum (-1)^n / n^2 = -pi^2/12
        let v = cmzv_holder(&[2], &[2], 160);
        let p = pi(160);
        let e = (&p * &p).div_i64(-12);
        assert!(v.re.overlaps(&e), "{} vs {}", v.re, e);
        // sum i^n / n = log((1+i)/2)... imaginary part pi/4
        let w = cmzv_holder(&[1], &[1], 160);
        assert!(w.im.overlaps(&p.div_i64(4)));
        // zeta(2,1) = zeta(3)
        let z21 = cmzv_holder(&[2, 1], &[0, 0], 160);
        assert!(z21.re.overlaps(&eval_atom(&Atom::Zeta(3), 40).unwrap()));
    }
}
