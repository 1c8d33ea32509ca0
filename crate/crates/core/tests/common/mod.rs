//! Independent references and random generators shared by the integration tests.
#![allow(dead_code)]

use hyp2mzv::atoms::eval_closedform;
use hyp2mzv::basetable::BaseTable;
use hyp2mzv::oracle::eval_series;
use hyp2mzv::pfrac::unit;
use hyp2mzv::reducer::reduce;
use hyp2mzv::{BinomSpec, GaussianRational as G, RatFunc, SeriesSpec};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rug::float::Constant;
use rug::ops::Pow;
use rug::{Float, Rational};

pub mod criteria;

pub const SEED: u64 = 0x5eed_2024;

pub fn rng(salt: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(SEED ^ salt)
}

/// Adaptive tanh-sinh on (0, 1): the step is halved until two levels agree.
/// The integrand gets (x, 1 - x), both computed without cancellation, so
/// endpoint singularities are harmless.
pub fn tanh_sinh(f: &dyn Fn(&Float, &Float) -> Float, prec: u32) -> Float {
    let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
    let node = |t: &Float| -> Float {
        let v = Float::with_val(prec, t.clone().sinh() * &half_pi);
        // x = 1/(1 + e^(-2v)), 1 - x = e^(-2v)/(1 + e^(-2v))
        let e = Float::with_val(prec, -2 * v).exp();
        let one_e = Float::with_val(prec, 1 + &e);
        let x = Float::with_val(prec, one_e.clone().recip());
        let omx = Float::with_val(prec, &e / &one_e);
        if x.is_zero() || omx.is_zero() {
            return Float::with_val(prec, 0);
        }
        let w = Float::with_val(prec, t.clone().cosh() * &half_pi) * Float::with_val(prec, &x * &omx) * 2u32;
        f(&x, &omx) * w
    };
    let t_max = 7i32;
    let mut h = Float::with_val(prec, 1);
    let mut sum = Float::with_val(prec, 0);
    for i in -t_max..=t_max {
        sum += node(&Float::with_val(prec, i));
    }
    let mut est = Float::with_val(prec, &sum * &h);
    let tol = Float::with_val(prec, Float::i_exp(1, -(prec as i32) + 40));
    for level in 1..=10 {
        h /= 2u32;
        // new nodes are the odd multiples of h
        let count = t_max << level;
        let mut i = -count + 1;
        while i < count {
            sum += node(&Float::with_val(prec, &h * i));
            i += 2;
        }
        let next = Float::with_val(prec, &sum * &h);
        let diff = Float::with_val(prec, &next - &est).abs();
        est = next;
        if level >= 3 && diff <= Float::with_val(prec, est.clone().abs().max(&Float::with_val(prec, 1)) * &tol) {
            break;
        }
    }
    est
}

/// int_0^1 t^p (1-t)^q log^n t dt by quadrature.
pub fn beta_moment_quadrature(p: &Rational, q: &Rational, n: u32) -> Float {
    let prec = 256;
    let pf = Float::with_val(prec, p);
    let qf = Float::with_val(prec, q);
    let f = |x: &Float, omx: &Float| {
        let lx = Float::with_val(prec, x.ln_ref());
        Float::with_val(prec, x.pow(&pf)) * Float::with_val(prec, omx.pow(&qf)) * lx.pow(n)
    };
    tanh_sinh(&f, prec)
}

/// Rational with denominator 1, 2 or 4, strictly above -1 and at most `hi`.
pub fn quarter_rational(rng: &mut ChaCha8Rng, hi: i64) -> Rational {
    let d = [1i64, 2, 4][rng.gen_range(0..3)];
    let num = rng.gen_range(-d + 1..=hi * d);
    Rational::from((num, d))
}

fn small_coeff(rng: &mut ChaCha8Rng) -> G {
    let mut n = rng.gen_range(-5i64..=5);
    if n == 0 {
        n = 1;
    }
    G::from_ratio(n, rng.gen_range(1i64..=4))
}

/// Random convergent sum over the pole lattice with k in {0, 1} and weight <= 4.
/// k = 0 draws poles from d n + j with d in {1, 2, 4}; k = 1 from 2n + j.
pub fn random_reducible(rng: &mut ChaCha8Rng) -> SeriesSpec {
    let k = rng.gen_range(0..=1);
    let d: u32 = if k == 1 { 2 } else { [1, 2, 4][rng.gen_range(0..3)] };
    // alternation mixes badly with quarter poles, so only for d <= 2
    let alternating = k == 0 && d <= 2 && rng.gen_bool(0.4);
    let mut poles: Vec<(i64, u32, G)> = Vec::new();
    for _ in 0..rng.gen_range(1..=3) {
        let j = rng.gen_range(-3i64..=5);
        let m = rng.gen_range(1..=4);
        poles.push((j, m, small_coeff(rng)));
    }
    if k == 0 && !alternating {
        // harmonic parts must cancel
        let h: Vec<(i64, G)> = poles.iter().filter(|p| p.1 == 1).map(|p| (p.0, p.2.clone())).collect();
        for (j, c) in h {
            let mut j2 = rng.gen_range(-3i64..=5);
            if j2 == j {
                j2 += 1;
            }
            poles.push((j2, 1, -c));
        }
    }
    let mut r = RatFunc::constant(G::zero());
    for (j, m, c) in &poles {
        r = &r + &unit(d, *j, *m, c);
    }
    if r.is_zero() {
        r = unit(d, 1, 2, &G::one());
    }
    // first index past every pole
    let mut start = 0u32;
    for (j, _, _) in &poles {
        let need = (-j).div_euclid(d as i64) + 1;
        start = start.max(need.max(0) as u32);
    }
    start += rng.gen_range(0..=1);
    SeriesSpec::Binom(BinomSpec { k, pi_prefactor: false, r, start, alternating })
}

/// |oracle(s) - atoms(reduce(s))| at `digits`.
pub fn reduce_residual(s: &SeriesSpec, table: &BaseTable, digits: u32) -> Result<f64, String> {
    let (cf, _) = reduce(s, table).map_err(|e| format!("{}: {e}", s.to_text()))?;
    let lhs = eval_series(s, digits).map_err(|e| e.to_string())?;
    let rhs = eval_closedform(&cf, digits).map_err(|e| e.to_string())?;
    Ok((&lhs - &rhs).mag_f64())
}

/// sum_{n1 > n2 > 0} e1^n1 e2^n2 / (n1^s1 n2^s2) up to n1 = big_n, plus the
/// averaged remainder for an alternating outer sum.
pub fn mz2_brute(s1: u32, s2: u32, e1: i32, e2: i32, big_n: u64, prec: u32) -> Float {
    let mut inner = Float::with_val(prec, 0);
    let mut total = Float::with_val(prec, 0);
    let mut last = Float::with_val(prec, 0);
    for n in 1..=big_n {
        let sign1 = if e1 < 0 && n % 2 == 1 { -1 } else { 1 };
        let nf = Float::with_val(prec, n);
        let term = Float::with_val(prec, &inner / Float::with_val(prec, nf.clone().pow(s1))) * sign1;
        total += &term;
        last = term;
        let sign2 = if e2 < 0 && n % 2 == 1 { -1 } else { 1 };
        inner += Float::with_val(prec, nf.pow(s2)).recip() * sign2;
    }
    if e1 < 0 {
        // Euler's half-term correction for an alternating tail
        total -= last / 2u32;
    }
    total
}

fn step_series(text: &str) -> Option<SeriesSpec> {
    hyp2mzv::parser::parse_series(text).ok()
}

/// Every traced step whose two sides are both series must satisfy
/// value(before) = value(after) + contribution. Returns how many were checked.
pub fn check_rewrites(s: &SeriesSpec, table: &BaseTable) -> Result<usize, String> {
    let (_, trace) = reduce(s, table).map_err(|e| format!("{}: {e}", s.to_text()))?;
    let mut checked = 0;
    for st in &trace.steps {
        let (Some(b), Some(a)) = (step_series(&st.before), step_series(&st.after)) else { continue };
        let vb = eval_series(&b, 30).map_err(|e| e.to_string())?;
        let va = eval_series(&a, 30).map_err(|e| e.to_string())?;
        let c = eval_closedform(&st.contribution, 30).map_err(|e| e.to_string())?;
        let r = (&(&vb - &va) - &c).mag_f64();
        if !(r < 1e-20) {
            return Err(format!("{} step {} -> {}: residual {r:e}", st.rule.id(), st.before, st.after));
        }
        checked += 1;
    }
    Ok(checked)
}

fn pole_map(s: &SeriesSpec) -> Option<std::collections::BTreeMap<(i64, u32), G>> {
    match s {
        SeriesSpec::Binom(b) => hyp2mzv::pfrac::partial_fractions(&b.r, 2).ok().map(|p| p.as_map()),
        SeriesSpec::Pfq(_) => None,
    }
}

/// The pole measure strictly drops across every telescoping step.
pub fn check_measure(s: &SeriesSpec, table: &BaseTable) -> Result<usize, String> {
    use hyp2mzv::reducer::{pole_measure, Rule};
    let (_, trace) = reduce(s, table).map_err(|e| format!("{}: {e}", s.to_text()))?;
    let mut checked = 0;
    for st in &trace.steps {
        if !matches!(st.rule, Rule::R1 | Rule::R1p | Rule::R2 | Rule::R2p) {
            continue;
        }
        let b = step_series(&st.before).and_then(|x| pole_map(&x)).ok_or("unparseable before")?;
        let a = step_series(&st.after).and_then(|x| pole_map(&x)).ok_or("unparseable after")?;
        if pole_measure(&a) >= pole_measure(&b) {
            return Err(format!("measure did not drop: {} -> {}", st.before, st.after));
        }
        checked += 1;
    }
    Ok(checked)
}

pub fn random_gaussian(rng: &mut ChaCha8Rng) -> G {
    let re = G::from_ratio(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=6));
    if rng.gen_bool(0.3) {
        &re + &(&G::i() * &G::from_ratio(rng.gen_range(-9i64..=9), rng.gen_range(1i64..=6)))
    } else {
        re
    }
}

pub fn random_atom(rng: &mut ChaCha8Rng) -> hyp2mzv::Atom {
    use hyp2mzv::{Atom, Part};
    match rng.gen_range(0..13) {
        0 => Atom::Pi,
        1 => Atom::Log2,
        2 => Atom::Sqrt2,
        3 => Atom::SqrtPi,
        4 => Atom::Gamma14,
        5 => Atom::Zeta(rng.gen_range(2..=7)),
        6 => Atom::Beta(rng.gen_range(2..=6)),
        7 => Atom::LiHalf(rng.gen_range(4..=6)),
        8 => Atom::ImLiHalfI(rng.gen_range(2..=6)),
        9 => Atom::Hurwitz4([1, 3][rng.gen_range(0..2)]),
        10 => Atom::Mz { s: vec![5, 1], signs: vec![-1, 1] },
        11 => Atom::Qmz { part: Part::Im, s: vec![4, 1], chars: vec![1, [0, 2][rng.gen_range(0..2)]] },
        _ => Atom::EulerGamma,
    }
}

/// Sum of up to four monomials; prefactor atoms and pi may carry negative powers.
pub fn random_closedform(rng: &mut ChaCha8Rng) -> hyp2mzv::ClosedForm {
    use hyp2mzv::{Atom, ClosedForm};
    let mut f = ClosedForm::zero();
    for _ in 0..rng.gen_range(0..=4) {
        let mut t = ClosedForm::constant(random_gaussian(rng));
        for _ in 0..rng.gen_range(0..=3) {
            let a = random_atom(rng);
            let neg_ok = matches!(a, Atom::Pi | Atom::SqrtPi | Atom::Gamma14);
            let e = if neg_ok { rng.gen_range(-2..=3) } else { rng.gen_range(1..=3) };
            t = &t * &ClosedForm::atom_pow(a, e);
        }
        f += &t;
    }
    f
}

pub fn random_ratfunc(rng: &mut ChaCha8Rng) -> RatFunc {
    use hyp2mzv::Poly;
    let poly = |deg: usize, rng: &mut ChaCha8Rng| Poly::new((0..=deg).map(|_| random_gaussian(rng)).collect());
    let nd = rng.gen_range(0..=2);
    let num = poly(nd, rng);
    let dd = rng.gen_range(0..=3);
    let mut den = poly(dd, rng);
    if den.is_zero() {
        den = Poly::one();
    }
    RatFunc::new(num, den)
}

pub fn random_pfq(rng: &mut ChaCha8Rng) -> SeriesSpec {
    let param = |rng: &mut ChaCha8Rng| G::from_ratio(rng.gen_range(1i64..=12), [1, 2, 4][rng.gen_range(0..3)]);
    let p = rng.gen_range(1..=5);
    let mut top: Vec<G> = (0..p).map(|_| param(rng)).collect();
    let mut bottom: Vec<G> = (0..p - 1).map(|_| param(rng)).collect();
    top.sort_by_key(|g| g.to_text());
    bottom.sort_by_key(|g| g.to_text());
    let z = [(1, 1), (-1, 1), (1, 2), (-1, 4)][rng.gen_range(0..4)];
    SeriesSpec::Pfq(hyp2mzv::PfqSpec { top, bottom, z: Rational::from(z), pi_prefactor: rng.gen_bool(0.2) })
}

/// Text round-trips for series, closed forms and rational functions.
pub fn check_roundtrips(rng: &mut ChaCha8Rng) -> Result<(), String> {
    use hyp2mzv::parser::{parse_closedform, parse_ratfunc, parse_series};
    for s in [random_reducible(rng), random_pfq(rng)] {
        let t = s.to_text();
        let back = parse_series(&t).map_err(|e| format!("{t}: {e}"))?;
        if back != s {
            return Err(format!("series {t} reparsed as {}", back.to_text()));
        }
    }
    let f = random_closedform(rng);
    for t in [f.to_text(), f.to_text_hurwitz()] {
        let back = parse_closedform(&t).map_err(|e| format!("{t}: {e}"))?;
        if back != f {
            return Err(format!("closed form {t} reparsed as {}", back.to_text()));
        }
    }
    let r = random_ratfunc(rng);
    let t = r.to_text();
    let back = parse_ratfunc(&t).map_err(|e| format!("{t}: {e}"))?;
    if back != r {
        return Err(format!("rational function {t} reparsed as {}", back.to_text()));
    }
    Ok(())
}

/// Commutative ring axioms on three random closed forms.
pub fn check_ring(rng: &mut ChaCha8Rng) -> Result<(), String> {
    use hyp2mzv::ClosedForm;
    let (a, b, c) = (random_closedform(rng), random_closedform(rng), random_closedform(rng));
    let one = ClosedForm::one();
    let zero = ClosedForm::zero();
    let laws = [
        ("a+b = b+a", &a + &b == &b + &a),
        ("ab = ba", &a * &b == &b * &a),
        ("(a+b)+c = a+(b+c)", &(&a + &b) + &c == &a + &(&b + &c)),
        ("(ab)c = a(bc)", &(&a * &b) * &c == &a * &(&b * &c)),
        ("a(b+c) = ab+ac", &a * &(&b + &c) == &(&a * &b) + &(&a * &c)),
        ("a+0 = a", &a + &zero == a),
        ("a*1 = a", &a * &one == a),
        ("a-a = 0", (&a - &a).is_zero()),
        ("a*0 = 0", (&a * &zero).is_zero()),
    ];
    match laws.iter().find(|(_, ok)| !ok) {
        Some((law, _)) => Err(format!("{law} fails for a={a}, b={b}, c={c}")),
        None => Ok(()),
    }
}
