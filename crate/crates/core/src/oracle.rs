//! Independent numeric referee for series and nested sums.
//!
//! Nothing here calls the reducer or the gamma engine; only core types and
//! ball arithmetic are shared.

use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Integer, Rational};

use crate::atom::{Atom, Part};
use crate::ball::{bits_for_digits, BigComplex, BigReal};
use crate::coeff::GaussianRational as G;
use crate::error::{Error, Result};
use crate::exact::bernoulli;
use crate::poly::{Poly, RatFunc};
use crate::series::{BinomSpec, PfqSpec, SeriesSpec};

const N_START: u64 = 1 << 10;
const N_BUDGET: u64 = 1 << 20;

fn i_pow(e: u32) -> G {
    match e % 4 {
        0 => G::one(),
        1 => G::i(),
        2 => G::from_int(-1),
        _ => -G::i(),
    }
}

fn binom_rat(top: &Rational, j: u32) -> Rational {
    let mut r = Rational::from(1);
    for t in 0..j {
        r *= Rational::from(top - t);
        r /= t + 1;
    }
    r
}

fn cf(x: &Float) -> BigComplex {
    BigComplex::real(BigReal::from_rounded(x.clone()))
}

/// A nested sum sum_{n1 > ... > nk > 0} prod_j i^(c_j n_j) / n_j^(s_j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedSum {
    pub s: Vec<u32>,
    pub chars: Vec<u8>,
}

impl NestedSum {
    /// The defining sum of an MZ or QMZ atom together with the part taken.
    pub fn from_atom(a: &Atom) -> Option<(NestedSum, Option<Part>)> {
        match a {
            Atom::Mz { s, signs } => {
                let chars = signs.iter().map(|&e| if e < 0 { 2 } else { 0 }).collect();
                Some((NestedSum { s: s.clone(), chars }, None))
            }
            Atom::Qmz { part, s, chars } => Some((NestedSum { s: s.clone(), chars: chars.clone() }, Some(*part))),
            _ => None,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.s.is_empty() || self.s.len() != self.chars.len() || self.s.len() > 4 {
            return Err(Error::Semantic("nested sum needs 1..=4 matching indices".into()));
        }
        if self.s[0] == 1 && self.chars[0] % 4 == 0 {
            return Err(Error::Divergent("leading index 1 with trivial character".into()));
        }
        if self.s.iter().any(|&s| s == 0) {
            return Err(Error::Divergent("zero exponent in nested sum".into()));
        }
        Ok(())
    }
}

/// Asymptotic expansions on the residue classes mod 4:
/// `e[r][a]` is the coefficient of m^-a for m = r (mod 4).
type Expansion = [Vec<G>; 4];

fn zero_expansion(k: usize) -> Expansion {
    std::array::from_fn(|_| vec![G::zero(); k + 1])
}

/// Add c * (n + d)^-b expanded in n^-1 up to order k.
fn add_shifted_power(out: &mut [G], c: &G, b: usize, d: i64, k: usize) {
    let nb = Rational::from(-(b as i64));
    let mut dp = Rational::from(1);
    for i in 0..=(k.saturating_sub(b)) {
        if b + i > k {
            break;
        }
        let coef = binom_rat(&nb, i as u32) * &dp;
        out[b + i] += &(c * &G::real(coef));
        dp *= d;
    }
}

/// V(n) = sum_{m > n} g(m), expanded per residue class of n.
fn tail_sum(g: &Expansion, k: usize) -> Result<Expansion> {
    let mut lead = G::zero();
    for r in 0..4 {
        if !g[r][0].is_zero() {
            return Err(Error::Divergent("nested tail with constant summand".into()));
        }
        lead += &g[r][1];
    }
    if !lead.is_zero() {
        return Err(Error::Divergent("nested tail with harmonic summand".into()));
    }
    let mut out = zero_expansion(k);
    for nu in 0..4usize {
        for d in 1..=4i64 {
            let rho = (nu + d as usize) % 4;
            for a in 1..=k {
                let c = &g[rho][a];
                if c.is_zero() {
                    continue;
                }
                // sum_{t >= 0} (y + 4t)^-a with y = n + d
                if a == 1 {
                    // -(1/4) log(1 + d/n); the log n parts cancel across classes
                    let mut dp = Rational::from(1);
                    for i in 1..=k {
                        dp *= d;
                        let mut t: Rational = Rational::from(&dp / (i as u32)) / 4u32;
                        if i % 2 == 1 {
                            t = -t;
                        }
                        out[nu][i] += &(c * &G::real(t));
                    }
                } else {
                    let t = Rational::from((1, 4 * (a as i64 - 1)));
                    add_shifted_power(&mut out[nu], &(c * &G::real(t)), a - 1, d, k);
                }
                add_shifted_power(&mut out[nu], &(c * &G::from_ratio(1, 2)), a, d, k);
                let mut j = 1usize;
                while a + 2 * j - 1 <= k {
                    // B_2j/(2j)! * (a)_(2j-1) * 4^(2j-1)
                    let mut t = bernoulli(2 * j as u32);
                    for q in 0..(2 * j - 1) {
                        t *= (a + q) as u32;
                    }
                    for q in 1..=(2 * j) {
                        t /= q as u32;
                    }
                    t *= Integer::from(1) << (2 * (2 * j - 1)) as u32;
                    add_shifted_power(&mut out[nu], &(c * &G::real(t)), a + 2 * j - 1, d, k);
                    j += 1;
                }
            }
        }
    }
    Ok(out)
}

/// m -> i^(c m) m^-s * v(m)
fn times_char(s: u32, c: u8, v: &Expansion, k: usize) -> Expansion {
    let mut out = zero_expansion(k);
    for r in 0..4usize {
        let w = i_pow(c as u32 * r as u32);
        for a in 0..=k {
            if a + s as usize > k {
                break;
            }
            out[r][a + s as usize] = &v[r][a] * &w;
        }
    }
    out
}

fn eval_expansion(e: &Expansion, n: u64, prec: u32) -> BigComplex {
    let coeffs = &e[(n % 4) as usize];
    let x = BigReal::from_rounded(Float::with_val(prec, 1) / n);
    let mut acc = BigComplex::zero(prec);
    for c in coeffs.iter().rev() {
        acc = &acc.scale(&x) + &BigComplex::from_gaussian(c, prec);
    }
    acc
}

fn nested_at(ns: &NestedSum, n_cut: u64, prec: u32) -> Result<BigComplex> {
    let k_depth = ns.s.len();
    let order = ((prec + 16) as f64 / (n_cut as f64).log2()).ceil() as usize + 4;
    // tails A_j = sum_{n1 > ... > nj >= N} f1 ... fj, via U_j(N - 1)
    let mut tails = vec![BigComplex::from_int(1, prec)];
    let mut u = zero_expansion(order);
    for r in 0..4 {
        u[r][0] = G::one();
    }
    for j in 0..k_depth {
        let g = times_char(ns.s[j], ns.chars[j], &u, order);
        u = tail_sum(&g, order)?;
        tails.push(eval_expansion(&u, n_cut - 1, prec));
    }
    // prefix sums P_j(N) = sum_{N > n_j > ... > n_k >= 1} f_j ... f_k
    let mut q: Vec<BigComplex> = vec![BigComplex::from_int(1, prec); n_cut as usize];
    let mut prefix = vec![BigComplex::zero(prec); k_depth + 2];
    prefix[k_depth] = BigComplex::from_int(1, prec);
    for j in (0..k_depth).rev() {
        let mut running = BigComplex::zero(prec);
        let mut next = vec![BigComplex::zero(prec); n_cut as usize];
        for m in 1..n_cut as usize {
            next[m] = running.clone();
            let f = BigComplex::from_gaussian(&i_pow(ns.chars[j] as u32 * (m % 4) as u32), prec);
            let inv = BigReal::from_rounded(Float::with_val(prec, m as u64).pow(ns.s[j]).recip());
            running = &running + &(&f.scale(&inv) * &q[m]);
        }
        prefix[j] = running;
        q = next;
    }
    // sum_j A_j * P_{j+1}
    let mut total = BigComplex::zero(prec);
    for j in 0..=k_depth {
        total = &total + &(&tails[j] * &prefix[j]);
    }
    Ok(total)
}

/// Numeric value of a nested sum.
pub fn eval_nested_sum(ns: &NestedSum, digits: u32) -> Result<BigComplex> {
    ns.validate()?;
    let prec = bits_for_digits(digits) + 32;
    let target = Float::with_val(64, 10).pow(-(digits as i32));
    let mut n = N_START.min(256);
    let mut prev = nested_at(ns, n, prec)?;
    loop {
        let next_n = 2 * n;
        let cur = nested_at(ns, next_n, prec)?;
        let d = (&cur - &prev).mag_f64();
        if d < target.to_f64() || next_n >= 1 << 14 {
            let mut out = cur;
            out.re.add_error_f64(d);
            out.im.add_error_f64(d);
            return Ok(out);
        }
        prev = cur;
        n = next_n;
    }
}

/// Value of an MZ/QMZ atom through its defining sum.
pub fn eval_nested_atom(a: &Atom, digits: u32) -> Result<BigReal> {
    let (ns, part) = NestedSum::from_atom(a).ok_or_else(|| Error::Semantic(format!("{} is not a nested-sum atom", a.text())))?;
    let v = eval_nested_sum(&ns, digits)?;
    Ok(match part {
        Some(Part::Im) => v.im,
        _ => v.re,
    })
}

/// Term data of a series: first index, ratio t_{n+1}/t_n, the sign `eps`
/// of the limit of the ratio, and a direct term evaluator.
struct TermModel<'a> {
    start: u64,
    ratio: RatFunc,
    eps: i32,
    spec: &'a SeriesSpec,
}

fn pfq_ratio(p: &PfqSpec) -> RatFunc {
    let mut num = Poly::constant(G::real(p.z.clone()));
    for a in &p.top {
        num = &num * &Poly::linear(G::one(), a.clone());
    }
    let mut den = Poly::linear(G::one(), G::one());
    for b in &p.bottom {
        den = &den * &Poly::linear(G::one(), b.clone());
    }
    RatFunc::new(num, den)
}

fn binom_ratio(b: &BinomSpec) -> RatFunc {
    let two = G::from_int(2);
    let a = RatFunc::new(Poly::linear(two.clone(), G::one()), Poly::linear(two, G::from_int(2)));
    let mut r = &a.pow(b.k) * &(&b.r.shift(&G::one()) / &b.r);
    if b.alternating {
        r = &r * &RatFunc::constant(G::from_int(-1));
    }
    r
}

impl<'a> TermModel<'a> {
    fn new(spec: &'a SeriesSpec) -> Self {
        match spec {
            SeriesSpec::Pfq(p) => {
                let eps = if p.z == 1 { 1 } else if p.z == -1 { -1 } else { 0 };
                TermModel { start: 0, ratio: pfq_ratio(p), eps, spec }
            }
            SeriesSpec::Binom(b) => TermModel {
                start: b.start as u64,
                ratio: binom_ratio(b),
                eps: if b.alternating { -1 } else { 1 },
                spec,
            },
        }
    }

    /// Terms t_start .. t_{end-1}.
    fn terms(&self, end: u64, prec: u32) -> Vec<BigComplex> {
        let mut out = Vec::with_capacity(end.saturating_sub(self.start) as usize);
        match self.spec {
            SeriesSpec::Pfq(_) => {
                let mut t = BigComplex::from_int(1, prec);
                for n in 0..end {
                    out.push(t.clone());
                    let r = self.ratio.eval(&G::from_int(n as i64)).expect("pole in term ratio");
                    t = t.mul_gaussian(&r);
                }
            }
            SeriesSpec::Binom(b) => {
                // a_n by its product recurrence
                let mut a = BigReal::from_int(1, prec);
                for n in 0..end {
                    if n >= self.start {
                        let r = b.r.eval(&G::from_int(n as i64)).expect("pole in summand");
                        let mut t = BigComplex::real(a.powi(b.k)).mul_gaussian(&r);
                        if b.alternating && n % 2 == 1 {
                            t = -&t;
                        }
                        out.push(t);
                    }
                    a = a.mul_rational(&Rational::from((2 * n + 1, 2 * n + 2)));
                }
            }
        }
        out
    }
}

/// Power series of p(1/x) * x^deg p, i.e. the reversed coefficient list.
fn reversed(p: &Poly) -> Vec<G> {
    p.coeffs().iter().rev().cloned().collect()
}

fn series_div(a: &[G], b: &[G], k: usize) -> Vec<G> {
    let mut out = vec![G::zero(); k + 1];
    let b0inv = b[0].inv();
    for m in 0..=k {
        let mut s = a.get(m).cloned().unwrap_or_else(G::zero);
        for i in 1..=m {
            if let Some(bi) = b.get(i) {
                s -= &(bi * &out[m - i]);
            }
        }
        out[m] = &s * &b0inv;
    }
    out
}

/// Exponent sigma and coefficients c_0..c_k with t_n ~ C eps^n n^-sigma sum c_i n^-i.
fn asymptotic_shape(ratio: &RatFunc, eps: i32, k: usize) -> Result<(Rational, Vec<G>)> {
    let (p, q) = (&ratio.num, &ratio.den);
    if p.degree() != q.degree() {
        return Err(Error::Divergent("term ratio does not tend to a finite nonzero limit".into()));
    }
    let d = p.degree() as usize;
    let lim = &p.lead() / &q.lead();
    if lim != G::from_int(eps as i64) {
        return Err(Error::Semantic("term ratio limit does not match the series argument".into()));
    }
    let sub = |poly: &Poly| -> G {
        if d == 0 {
            G::zero()
        } else {
            &poly.coeffs()[d - 1] / &poly.lead()
        }
    };
    let sigma_g = &sub(q) - &sub(p);
    let sigma = sigma_g
        .as_real()
        .ok_or_else(|| Error::Semantic("complex decay exponent is not supported".into()))?;
    // w(x) = eps * r(1/x) * (1+x)^sigma
    let rq = series_div(&reversed(p), &reversed(q), k + 2);
    let mut w = vec![G::zero(); k + 2];
    for (m, wm) in w.iter_mut().enumerate() {
        for i in 0..=m {
            let b = G::real(binom_rat(&sigma, (m - i) as u32));
            *wm += &(&rq[i] * &b);
        }
        if eps < 0 {
            *wm = -wm.clone();
        }
    }
    debug_assert!(w[1].is_zero());
    let mut c = vec![G::one()];
    for m in 1..=k {
        let mut s = G::zero();
        for (i, ci) in c.iter().enumerate() {
            let b = binom_rat(&Rational::from(-(i as i64)), (m + 1 - i) as u32);
            s += &(ci * &(&G::real(b) - &w[m + 1 - i]));
        }
        c.push(&s * &G::from_ratio(1, m as i64));
    }
    Ok((sigma.clone(), c))
}

fn rpow_float(x: &Float, e: &Rational, prec: u32) -> Float {
    let ef = Float::with_val(prec, e);
    Float::with_val(prec, x.pow(&ef))
}

/// zeta(s, x) by Euler-Maclaurin for large x; `s != 1`.
fn hurwitz_large(s: &Rational, x: &Float, prec: u32) -> Float {
    let one_minus = Rational::from(1 - s.clone());
    let mut acc = rpow_float(x, &one_minus, prec) / Float::with_val(prec, &Rational::from(s - 1));
    acc += rpow_float(x, &Rational::from(-s.clone()), prec) / 2u32;
    acc += eml_terms(s, x, prec);
    acc
}

/// sum_j B_2j/(2j)! (s)_(2j-1) x^(-s-2j+1)
fn eml_terms(s: &Rational, x: &Float, prec: u32) -> Float {
    let mut acc = Float::with_val(prec, 0);
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) - 8));
    let mut poch = Rational::from(s.clone());
    for j in 1..200u32 {
        if j > 1 {
            poch *= Rational::from(s + (2 * j - 3));
            poch *= Rational::from(s + (2 * j - 2));
        }
        let mut c = bernoulli(2 * j) * &poch;
        c /= Integer::from(Integer::factorial(2 * j));
        let e = Rational::from(-s.clone() - (2 * j - 1));
        let t = Float::with_val(prec, &c) * rpow_float(x, &e, prec);
        let small = Float::with_val(prec, t.abs_ref()) < eps;
        acc += t;
        if small {
            break;
        }
    }
    acc
}

/// zeta(s, a) - zeta(s, b), valid at s = 1 as psi(b) - psi(a).
fn hurwitz_diff(s: &Rational, a: &Float, b: &Float, prec: u32) -> Float {
    if *s == 1 {
        let mut v = Float::with_val(prec, b.ln_ref()) - Float::with_val(prec, a.ln_ref());
        v += Float::with_val(prec, a.recip_ref()) / 2u32 - Float::with_val(prec, b.recip_ref()) / 2u32;
        v += eml_terms(s, a, prec) - eml_terms(s, b, prec);
        return v;
    }
    hurwitz_large(s, a, prec) - hurwitz_large(s, b, prec)
}

fn tail_estimate(model: &TermModel, t_n: &BigComplex, n: u64, sigma: &Rational, c: &[G], prec: u32) -> BigComplex {
    let nf = Float::with_val(prec, n);
    let inv = BigReal::from_rounded(Float::with_val(prec, nf.recip_ref()));
    // u(N) = sum c_i N^-i
    let mut u = BigComplex::zero(prec);
    for ci in c.iter().rev() {
        u = &u.scale(&inv) + &BigComplex::from_gaussian(ci, prec);
    }
    // tail = t_N / u(N) * N^sigma * sum_i c_i H_i, H_i = sum_m eps^m (N+m)^-(sigma+i)
    let mut h = BigComplex::zero(prec);
    for (i, ci) in c.iter().enumerate() {
        let s = Rational::from(sigma + i as u32);
        let hi = if model.eps > 0 {
            hurwitz_large(&s, &nf, prec)
        } else {
            let a = Float::with_val(prec, &nf / 2u32);
            let b = Float::with_val(prec, Float::with_val(prec, &nf + 1u32) / 2u32);
            let two = Float::with_val(prec, 2);
            hurwitz_diff(&s, &a, &b, prec) * rpow_float(&two, &Rational::from(-s.clone()), prec)
        };
        h = &h + &cf(&hi).mul_gaussian(ci);
    }
    let ns = BigReal::from_rounded(rpow_float(&nf, sigma, prec));
    &(t_n / &u).scale(&ns) * &h
}

fn eval_algebraic(spec: &SeriesSpec, digits: u32) -> Result<BigComplex> {
    let model = TermModel::new(spec);
    let prec = bits_for_digits(digits) + 48;
    let target = 10f64.powi(-(digits as i32));
    let mut n = N_START.max(2 * model.start + 64);
    let mut prev: Option<BigComplex> = None;
    loop {
        let order = ((prec + 16) as f64 / (n as f64).log2()).ceil() as usize + 4;
        let (sigma, c) = asymptotic_shape(&model.ratio, model.eps, order)?;
        if model.eps > 0 && sigma <= 1 {
            return Err(Error::Divergent(format!("terms decay like n^-{sigma}")));
        }
        if model.eps < 0 && sigma <= 0 {
            return Err(Error::Divergent(format!("alternating terms decay like n^-{sigma}")));
        }
        let terms = model.terms(n + 1, prec);
        let mut s = BigComplex::zero(prec);
        for t in &terms[..terms.len() - 1] {
            s = &s + t;
        }
        let t_n = terms.last().unwrap();
        let v = &s + &tail_estimate(&model, t_n, n, &sigma, &c, prec);
        if let Some(p) = prev {
            let d = (&v - &p).mag_f64();
            if d < target / 100.0 || 2 * n > N_BUDGET {
                let mut out = v;
                out.re.add_error_f64(d);
                out.im.add_error_f64(d);
                return Ok(out);
            }
        }
        prev = Some(v);
        n *= 2;
    }
}

fn eval_geometric(spec: &SeriesSpec, z: &Rational, digits: u32) -> Result<BigComplex> {
    let model = TermModel::new(spec);
    let prec = bits_for_digits(digits) + 48;
    let zf = z.to_f64().abs();
    let bits_per_term = -zf.log2();
    let mut n = ((prec as f64 + 64.0) / bits_per_term) as u64 + 64;
    loop {
        let terms = model.terms(n, prec);
        let mut s = BigComplex::zero(prec);
        for t in &terms {
            s = &s + t;
        }
        let last = terms.last().unwrap();
        let r1 = model.ratio.eval(&G::from_int(n as i64 - 1)).unwrap();
        let r2 = model.ratio.eval(&G::from_int(2 * n as i64)).unwrap();
        let q = [r1, r2]
            .iter()
            .map(|r| (r.norm_sqr().to_f64()).sqrt())
            .fold(zf, f64::max);
        if q < 1.0 {
            let bound = last.mag_f64() * q / (1.0 - q);
            if bound < 10f64.powi(-(digits as i32) - 5) {
                let mut out = s;
                out.re.add_error_f64(bound);
                out.im.add_error_f64(bound);
                return Ok(out);
            }
        }
        n *= 2;
        if n > N_BUDGET {
            return Err(Error::Precision("geometric tail did not settle".into()));
        }
    }
}

/// Numeric value of a convergent series, with the pi prefactor applied.
pub fn eval_series(spec: &SeriesSpec, digits: u32) -> Result<BigComplex> {
    spec.validate()?;
    let v = match spec {
        SeriesSpec::Pfq(p) if p.z != 1 && p.z != -1 => {
            if p.z.clone().abs() > 1 {
                return Err(Error::Divergent(format!("|z| = |{}| > 1", p.z)));
            }
            if p.z == 0 {
                BigComplex::from_int(1, bits_for_digits(digits))
            } else {
                eval_geometric(spec, &p.z, digits)?
            }
        }
        SeriesSpec::Binom(b) if b.r.is_zero() => BigComplex::zero(bits_for_digits(digits)),
        _ => eval_algebraic(spec, digits)?,
    };
    if spec.pi_prefactor() {
        let prec = v.prec();
        let pi = BigReal::from_rounded(Float::with_val(prec, Constant::Pi));
        return Ok(v.scale(&pi));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::eval_atom;
    use crate::parser::parse_series;

    fn close(v: &BigComplex, x: &Float, tol: f64) -> bool {
        let d = Float::with_val(x.prec(), v.re.mid() - x).abs().to_f64();
        d < tol && v.im.mag().to_f64() < tol
    }

    #[test]
    fn geometric_and_algebraic_series() {
        let p = 200;
        let ln2 = Float::with_val(p, Constant::Log2);
        let pi = Float::with_val(p, Constant::Pi);
        let v = eval_series(&parse_series("pfq(1,1;2;1/2)").unwrap(), 30).unwrap();
        assert!(close(&v, &Float::with_val(p, &ln2 * 2u32), 1e-30));
        let v = eval_series(&parse_series("pfq(1/2,1/2;3/2;1)").unwrap(), 30).unwrap();
        assert!(close(&v, &Float::with_val(p, &pi / 2u32), 1e-30), "{}", v.to_text(40));
        assert!(v.re.rad_f64() < 1e-30);
        let v = eval_series(&parse_series("pfq(1,1;2;-1)").unwrap(), 30).unwrap();
        assert!(close(&v, &ln2, 1e-30));
        let v = eval_series(&parse_series("binom(1; 1/(2n+1)^2)").unwrap(), 30).unwrap();
        assert!(close(&v, &(Float::with_val(p, &pi * &ln2) / 2u32), 1e-30));
        assert!(v.re.to_decimal(20).starts_with("1.08879304515180106"));
    }

    #[test]
    fn zero_summand_is_zero() {
        let v = eval_series(&parse_series("binom(1; 0; start=1)").unwrap(), 30).unwrap();
        assert!(v.re.contains_zero() && v.im.contains_zero());
    }

    #[test]
    fn divergent_inputs_rejected() {
        assert!(matches!(eval_series(&parse_series("pfq(1,1;2;1)").unwrap(), 20), Err(Error::Divergent(_))));
        assert!(matches!(
            eval_series(&parse_series("binom(-1; 1/(2n+1))").unwrap(), 20),
            Err(Error::Divergent(_))
        ));
    }

    #[test]
    fn nested_sums_match_atoms() {
        let ns = NestedSum { s: vec![1], chars: vec![2] };
        let v = eval_nested_sum(&ns, 30).unwrap();
        let ln2 = Float::with_val(200, Constant::Log2);
        assert!(close(&v, &Float::with_val(200, -&ln2), 1e-30));

        let mz = Atom::Mz { s: vec![5, 1], signs: vec![-1, 1] };
        let a = eval_atom(&mz, 30).unwrap();
        let b = eval_nested_atom(&mz, 30).unwrap();
        assert!(a.overlaps(&b) && b.rad_f64() < 1e-28);

        let q = Atom::Qmz { part: Part::Re, s: vec![3, 1, 1], chars: vec![0, 0, 1] };
        let a = eval_atom(&q, 25).unwrap();
        let b = eval_nested_atom(&q, 25).unwrap();
        assert!(a.overlaps(&b) && b.rad_f64() < 1e-23, "{a} vs {b}");
    }
}
