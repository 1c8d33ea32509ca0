//! Symbolic reduction of binomial and hypergeometric sums to closed forms.
//!
//! A sum is first normalized to `sum_{n>=s} w_n R(n)` with weight
//! `w_n = a_n^k` (a_n = binom(2n,n)/4^n) or `w_n = (c)_n/n!` for a quarter
//! `c`. Rational sums (k = 0) go through Hurwitz zeta and digamma values,
//! Pochhammer weights through Beta log-moments, and central weights are
//! telescoped until every pole sits at 2n or 2n+1, where the base values
//! come from the gamma engine (k = 1) or the base table (k = -2, -1, 2).

use std::collections::BTreeMap;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::atom::Atom;
use crate::closedform::ClosedForm;
use crate::coeff::GaussianRational as G;
use crate::error::{Error, Result};
use crate::gamma;
use crate::pfrac::{lattice_for, partial_fractions, unit};
use crate::poly::{Poly, RatFunc};
use crate::series::{is_nonpositive_integer, BinomSpec, PfqSpec, SeriesSpec};

pub use crate::basetable::{BaseEntry, BaseKey, BaseTable, Family, Provenance};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Convergence {
    /// |z| < 1.
    Geometric,
    /// Terms decay like n^-(1 + excess) (times a sign for alternating sums).
    Algebraic { excess: Rational, alternating: bool },
    Divergent,
    Terminating,
}

pub fn check_convergence(s: &SeriesSpec) -> Convergence {
    match s {
        SeriesSpec::Pfq(p) => {
            if p.top.iter().any(is_nonpositive_integer) {
                return Convergence::Terminating;
            }
            let az = p.z.clone().abs();
            if az < 1 {
                return Convergence::Geometric;
            }
            if az > 1 {
                return Convergence::Divergent;
            }
            let mut excess = Rational::new();
            for b in &p.bottom {
                excess += &b.re;
            }
            for a in &p.top {
                excess -= &a.re;
            }
            let alternating = p.z < 0;
            let ok = if alternating { excess > -1 } else { excess > 0 };
            if ok {
                Convergence::Algebraic { excess, alternating }
            } else {
                Convergence::Divergent
            }
        }
        SeriesSpec::Binom(b) => {
            // a_n^k R(n) ~ n^(deg R - k/2)
            let e = Rational::from(b.r.degree_diff()) - Rational::from((b.k, 2));
            let excess = Rational::from(-e - 1u32);
            let ok = if b.alternating { excess > -1 } else { excess > 0 };
            if ok {
                Convergence::Algebraic { excess, alternating: b.alternating }
            } else {
                Convergence::Divergent
            }
        }
    }
}

/// Summand weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Weight {
    /// a_n^k
    Central(i32),
    /// (c)_n / n! with c in {1/4, 3/4}
    Poch(Rational),
}

/// sum_{n >= start} w_n R(n) (-1)^(n alternating), times pi when `pi` is set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedSum {
    pub weight: Weight,
    pub r: RatFunc,
    pub start: u32,
    pub alternating: bool,
    pub pi: bool,
}

impl WeightedSum {
    pub fn to_text(&self) -> String {
        match &self.weight {
            Weight::Central(k) => {
                let b = BinomSpec {
                    k: *k,
                    pi_prefactor: self.pi,
                    r: self.r.clone(),
                    start: self.start,
                    alternating: self.alternating,
                };
                b.to_text()
            }
            Weight::Poch(c) => format!(
                "{}sum_(n>={}) ({})_n/n! * {}",
                if self.pi { "pi*" } else { "" },
                self.start,
                c,
                self.r.to_text()
            ),
        }
    }
}

/// (a)_n / (b)_n for a - b an integer, as a rational function of n.
fn poch_ratio(a: &G, b: &G) -> RatFunc {
    let delta = (a - b).as_integer().expect("parameters differ by an integer");
    let delta = delta.to_i64().unwrap();
    let mut num = Poly::one();
    let mut den = Poly::one();
    if delta >= 0 {
        for i in 0..delta {
            let bi = b + &G::from_int(i);
            num = &num * &Poly::linear(G::one(), bi.clone());
            den = &den * &Poly::constant(bi);
        }
    } else {
        for i in 0..(-delta) {
            let ai = a + &G::from_int(i);
            num = &num * &Poly::constant(ai.clone());
            den = &den * &Poly::linear(G::one(), ai);
        }
    }
    RatFunc::new(num, den)
}

fn frac_class(x: &G) -> (Rational, Rational) {
    let fl = Integer::from(x.re.floor_ref());
    (Rational::from(&x.re - fl), x.im.clone())
}

/// Rewrite a hypergeometric series at z = +-1 as a weighted rational sum.
pub fn pfq_to_weighted(p: &PfqSpec) -> Result<WeightedSum> {
    let alternating = if p.z == 1 {
        false
    } else if p.z == -1 {
        true
    } else {
        return Err(Error::UnmatchedShape(format!(
            "argument z = {} is outside the reducible classes (z = 1 or -1)",
            p.z
        )));
    };
    let mut classes: BTreeMap<(Rational, Rational), (Vec<G>, Vec<G>)> = BTreeMap::new();
    for a in &p.top {
        classes.entry(frac_class(a)).or_default().0.push(a.clone());
    }
    let mut bottoms = p.bottom.clone();
    bottoms.push(G::one());
    for b in &bottoms {
        classes.entry(frac_class(b)).or_default().1.push(b.clone());
    }
    let zero = (Rational::new(), Rational::new());
    let half = (Rational::from((1, 2)), Rational::new());
    let mut r = RatFunc::constant(G::one());
    let mut e_int = 0i64;
    let mut e_half = 0i64;
    let mut poch: Option<Rational> = None;
    for (key, (tops, bots)) in classes.iter_mut() {
        let e = tops.len() as i64 - bots.len() as i64;
        let base = if *key == zero {
            e_int = e;
            Some(G::one())
        } else if *key == half {
            e_half = e;
            Some(G::from_ratio(1, 2))
        } else if e == 0 {
            None
        } else if e == 1 && key.1 == 0 && (key.0 == Rational::from((1, 4)) || key.0 == Rational::from((3, 4))) && poch.is_none() {
            poch = Some(key.0.clone());
            Some(G::real(key.0.clone()))
        } else {
            return Err(Error::UnmatchedShape(format!(
                "parameter class {} + {}i is unbalanced ({} top vs {} bottom)",
                key.0,
                key.1,
                tops.len(),
                bots.len()
            )));
        };
        let key_re = |x: &G| x.re.clone();
        tops.sort_by_key(key_re);
        bots.sort_by_key(key_re);
        match base {
            Some(beta) => {
                for a in tops.iter() {
                    r = &r * &poch_ratio(a, &beta);
                }
                for b in bots.iter() {
                    r = &r / &poch_ratio(b, &beta);
                }
            }
            None => {
                for (a, b) in tops.iter().zip(bots.iter()) {
                    r = &r * &poch_ratio(a, b);
                }
            }
        }
    }
    let weight = match poch {
        Some(c) => {
            if e_half != 0 || e_int != -1 {
                return Err(Error::UnmatchedShape("quarter weight mixed with a central-binomial weight".into()));
            }
            Weight::Poch(c)
        }
        None => {
            if e_half != -e_int {
                return Err(Error::UnmatchedShape("integer and half-integer parameters do not balance".into()));
            }
            if e_half.abs() > 2 {
                return Err(Error::UnmatchedShape(format!("central-binomial power {e_half} is outside -2..=2")));
            }
            Weight::Central(e_half as i32)
        }
    };
    Ok(WeightedSum { weight, r, start: 0, alternating, pi: p.pi_prefactor })
}

pub fn to_weighted(s: &SeriesSpec) -> Result<WeightedSum> {
    match s {
        SeriesSpec::Pfq(p) => pfq_to_weighted(p),
        SeriesSpec::Binom(b) => Ok(WeightedSum {
            weight: Weight::Central(b.k),
            r: b.r.clone(),
            start: b.start,
            alternating: b.alternating,
            pi: b.pi_prefactor,
        }),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rule {
    Pf,
    R1,
    R2,
    R1p,
    R2p,
    Pair,
    Base,
    InitTerms,
}

impl Rule {
    pub fn id(&self) -> &'static str {
        match self {
            Rule::Pf => "PF",
            Rule::R1 => "R1",
            Rule::R2 => "R2",
            Rule::R1p => "R1'",
            Rule::R2p => "R2'",
            Rule::Pair => "PAIR",
            Rule::Base => "BASE",
            Rule::InitTerms => "INIT-TERMS",
        }
    }
}

/// One rewrite. `contribution` is the exact amount moved out of the sum
/// into the closed form by this step.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceStep {
    pub rule: Rule,
    pub before: String,
    pub after: String,
    pub contribution: ClosedForm,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ReductionTrace {
    pub steps: Vec<TraceStep>,
}

impl ReductionTrace {
    /// Sum of all contributions; equals the reduced value.
    pub fn replay(&self) -> ClosedForm {
        let mut acc = ClosedForm::zero();
        for s in &self.steps {
            acc += &s.contribution;
        }
        acc
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.steps
                .iter()
                .map(|s| {
                    serde_json::json!({
                        "rule": s.rule.id(),
                        "before": s.before,
                        "after": s.after,
                        "contribution": s.contribution.to_text(),
                    })
                })
                .collect(),
        )
    }
}

#[derive(Default)]
struct Ctx {
    trace: ReductionTrace,
}

impl Ctx {
    fn push(&mut self, rule: Rule, before: String, after: String, contribution: ClosedForm) {
        self.trace.steps.push(TraceStep { rule, before, after, contribution });
    }
}

fn cf(c: &G) -> ClosedForm {
    ClosedForm::constant(c.clone())
}

fn pole_text(map: &BTreeMap<(i64, u32), G>, d: u32) -> String {
    if map.is_empty() {
        return "0".into();
    }
    map.iter()
        .map(|(&(j, m), c)| format!("{}/({}n{:+})^{}", c.to_text(), if d == 1 { String::new() } else { d.to_string() }, j, m))
        .collect::<Vec<_>>()
        .join(" + ")
}

fn no_poly_part(poly: &Poly, what: &str) -> Result<()> {
    if poly.is_zero() {
        Ok(())
    } else {
        Err(Error::Divergent(format!("{what} has a polynomial part")))
    }
}

/// sum_{n>=s} (-1)^n / (n + x)^m with s + x > 0 and 2x an integer.
fn alternating_unit(s: u32, x: &Rational, m: u32) -> Result<ClosedForm> {
    let y = Rational::from(s) + x;
    let y0 = Rational::from(&y / 2u32);
    let y1 = Rational::from((&y + Rational::from(1)) / 2u32);
    let sign = if s % 2 == 0 { 1 } else { -1 };
    let v = if m >= 2 {
        let scale = Rational::from((sign, 1)) / Rational::from(Integer::from(2).pow(m));
        (gamma::hurwitz(m, &y0)? - gamma::hurwitz(m, &y1)?).scale(&G::real(scale))
    } else {
        let scale = Rational::from((sign, 2));
        (gamma::polygamma(0, &y1)? - gamma::polygamma(0, &y0)?).scale(&G::real(scale))
    };
    Ok(v)
}

/// k = 0: sum of rational terms via Hurwitz zeta and digamma values.
fn reduce_rational(ws: &WeightedSum, ctx: &mut Ctx) -> Result<ClosedForm> {
    let d = lattice_for(&ws.r.den).ok_or_else(|| {
        Error::PoleOffLattice(format!("denominator {} has poles outside the quarter lattice", ws.r.den.to_text()))
    })?;
    let pf = partial_fractions(&ws.r, d)?;
    no_poly_part(&pf.poly, "rational summand")?;
    let map = pf.as_map();
    ctx.push(Rule::Pf, ws.to_text(), pole_text(&map, d), ClosedForm::zero());
    if !ws.alternating {
        let mut harmonic = G::zero();
        for t in pf.terms.iter().filter(|t| t.m == 1) {
            harmonic += &t.c;
        }
        if !harmonic.is_zero() {
            return Err(Error::Divergent("harmonic parts do not cancel".into()));
        }
    } else if d == 4 && pf.terms.iter().any(|t| t.j % 2 != 0) {
        return Err(Error::UnmatchedShape("alternating sum with quarter poles".into()));
    }
    let mut total = ClosedForm::zero();
    for t in &pf.terms {
        let rho = Rational::from((t.j, d as i64));
        let x = Rational::from(ws.start) + &rho;
        let dm = Rational::from(Integer::from(d).pow(t.m));
        let c = &t.c * &G::real(dm.recip());
        let v = if ws.alternating {
            alternating_unit(ws.start, &rho, t.m)?.scale(&c)
        } else if t.m >= 2 {
            gamma::hurwitz(t.m, &x)?.scale(&c)
        } else {
            gamma::polygamma(0, &x)?.scale(&-c)
        };
        ctx.push(
            Rule::Base,
            format!("sum_(n>={}) {}{}/({}n{:+})^{}", ws.start, if ws.alternating { "(-1)^n*" } else { "" }, t.c.to_text(), d, t.j, t.m),
            v.to_text(),
            v.clone(),
        );
        total += &v;
    }
    Ok(total)
}

/// w_n = (c)_n / n! as an exact rational.
fn poch_weight(c: &Rational, n: u32) -> Rational {
    let mut w = Rational::from(1);
    for i in 0..n {
        w *= Rational::from(c + i) / Rational::from(i + 1);
    }
    w
}

/// Quarter Pochhammer weight: sum_{n>=0} w_n / (n + rho)^m equals
/// (-1)^(m-1)/(m-1)! times the Beta log-moment B_{m-1}(rho - 1, -c).
fn reduce_poch(c: &Rational, ws: &WeightedSum, ctx: &mut Ctx) -> Result<ClosedForm> {
    if ws.alternating {
        return Err(Error::UnmatchedShape("alternating quarter-weight sum".into()));
    }
    let d = lattice_for(&ws.r.den).ok_or_else(|| {
        Error::PoleOffLattice(format!("denominator {} has poles outside the quarter lattice", ws.r.den.to_text()))
    })?;
    let pf0 = partial_fractions(&ws.r, d)?;
    no_poly_part(&pf0.poly, "quarter-weight summand")?;
    // shift so that every pole is left of n = 0
    let mut shift = ws.start;
    for t in &pf0.terms {
        let need = Rational::from((-t.j, d as i64)).floor().numer().to_i64().unwrap() + 1;
        shift = shift.max(need.max(0) as u32);
    }
    let mut total = ClosedForm::zero();
    // w_{n+S} = w_n prod_{i<S} (n+i+c)/(n+i+1)
    let mut r = ws.r.shift(&G::from_int(shift as i64));
    for i in 0..shift {
        let num = Poly::linear(G::one(), G::real(Rational::from(c + i)));
        let den = Poly::linear(G::one(), G::from_int(i as i64 + 1));
        r = &r * &RatFunc::new(num, den);
    }
    if shift > ws.start {
        let mut init = G::zero();
        for n in ws.start..shift {
            let v = ws.r.eval(&G::from_int(n as i64)).ok_or_else(|| Error::PoleInRange(format!("n = {n}")))?;
            init += &(&v * &G::real(poch_weight(c, n)));
        }
        let v = cf(&init);
        ctx.push(Rule::InitTerms, ws.to_text(), format!("sum_(n>={shift}) ({c})_n/n! * {}", ws.r.to_text()), v.clone());
        total += &v;
    }
    let pf = partial_fractions(&r, d)?;
    no_poly_part(&pf.poly, "shifted summand")?;
    ctx.push(Rule::Pf, format!("sum_(n>=0) ({c})_n/n! * {}", r.to_text()), pole_text(&pf.as_map(), d), ClosedForm::zero());
    let neg_c = Rational::from(-c);
    for t in &pf.terms {
        let rho = Rational::from((t.j, d as i64));
        let dm = Rational::from(Integer::from(d).pow(t.m));
        let mut scale = Rational::from(1) / dm / Rational::from(crate::exact::factorial(t.m - 1));
        if t.m % 2 == 0 {
            scale = -scale;
        }
        let v = gamma::beta_log_moment(&Rational::from(&rho - 1u32), &neg_c, t.m - 1)?
            .scale(&(&t.c * &G::real(scale)));
        ctx.push(
            Rule::Base,
            format!("sum_(n>=0) ({c})_n/n! * {}/({}n{:+})^{}", t.c.to_text(), d, t.j, t.m),
            v.to_text(),
            v.clone(),
        );
        total += &v;
    }
    Ok(total)
}

/// Telescoping function T(n) = (2n + c0)^p.
#[derive(Clone, Copy, Debug)]
struct Mover {
    c0: i64,
    p: i32,
}

impl Mover {
    /// T(n + s)
    fn at(&self, s: i64) -> RatFunc {
        let lin = Poly::linear(G::from_int(2), G::from_int(self.c0 + 2 * s));
        if self.p >= 0 {
            RatFunc::poly(lin.pow(self.p as u32))
        } else {
            RatFunc::new(Poly::one(), lin.pow((-self.p) as u32))
        }
    }
}

/// ((2n+1)/(2n+2))^k = a_{n+1}^k / a_n^k
fn ratio(k: i32) -> RatFunc {
    let num = Poly::linear(G::from_int(2), G::from_int(1));
    let den = Poly::linear(G::from_int(2), G::from_int(2));
    RatFunc::new(num, den).pow(k)
}

/// lim_{M->inf} a_M^k T(M) - a_1^k T(1)
fn boundary(k: i32, mv: Mover) -> Result<ClosedForm> {
    // a_M^k T(M) ~ pi^(-k/2) 2^p M^(p - k/2)
    let e = 2 * mv.p - k;
    let mut out = if e < 0 {
        ClosedForm::zero()
    } else if e == 0 {
        let two_p = if mv.p >= 0 {
            Rational::from(Integer::from(2).pow(mv.p as u32))
        } else {
            Rational::from((1, 1)) / Rational::from(Integer::from(2).pow((-mv.p) as u32))
        };
        ClosedForm::atom_pow(Atom::Pi, -k / 2).scale(&G::real(two_p))
    } else {
        return Err(Error::Divergent("telescoping boundary term grows".into()));
    };
    let t1 = mv.at(0).eval(&G::one()).ok_or_else(|| Error::PoleInRange("telescoping function at n = 1".into()))?;
    let a1k = G::from_ratio(1, 2).powi(k);
    out -= &cf(&(&a1k * &t1));
    Ok(out)
}

/// Parseable state `binom(k; R; start=1)`, so traced rewrites can be re-evaluated.
fn central_state(k: i32, r: &RatFunc) -> String {
    BinomSpec { k, pi_prefactor: false, r: r.clone(), start: 1, alternating: false }.to_text()
}

fn central_text(k: i32, map: &BTreeMap<(i64, u32), G>) -> String {
    let mut r = RatFunc::constant(G::zero());
    for (&(j, m), c) in map {
        r = &r + &unit(2, j, m, c);
    }
    central_state(k, &r)
}

fn add_scaled(map: &mut BTreeMap<(i64, u32), G>, other: &BTreeMap<(i64, u32), G>, lambda: &G) {
    for (key, v) in other {
        let e = map.entry(*key).or_insert_with(G::zero);
        *e -= &(lambda * v);
        if e.is_zero() {
            map.remove(key);
        }
    }
}

/// Move R(n) to the index range n >= 1, returning the exact initial-term correction.
fn normalize_start(k: i32, ws: &WeightedSum, ctx: &mut Ctx) -> Result<(RatFunc, ClosedForm)> {
    let r = ws.r.clone();
    match ws.start {
        1 => Ok((r, ClosedForm::zero())),
        0 => {
            let v = r.eval(&G::zero()).ok_or_else(|| Error::PoleInRange("R(0)".into()))?;
            let c = cf(&v);
            ctx.push(Rule::InitTerms, ws.to_text(), central_state(k, &r), c.clone());
            Ok((r, c))
        }
        s => {
            // drop the terms 1 <= n < s when all are finite
            let mut sum = G::zero();
            let mut finite = true;
            for n in 1..s {
                match r.eval(&G::from_int(n as i64)) {
                    Some(v) => sum += &(&v * &G::real(gamma::central(n as u64).pow(k))),
                    None => {
                        finite = false;
                        break;
                    }
                }
            }
            if finite {
                let c = cf(&-sum);
                ctx.push(Rule::InitTerms, ws.to_text(), central_state(k, &r), c.clone());
                return Ok((r, c));
            }
            // otherwise reindex: a_{n+t} = a_n prod_{i<t} (2n+2i+1)/(2n+2i+2)
            let t = (s - 1) as i64;
            let mut out = r.shift(&G::from_int(t));
            for i in 0..t {
                out = &out * &ratio(k).shift(&G::from_int(i));
            }
            ctx.push(Rule::InitTerms, ws.to_text(), central_state(k, &out), ClosedForm::zero());
            Ok((out, ClosedForm::zero()))
        }
    }
}

/// Rank of a pole 1/(2n+j)^m. Every telescoping move removes one pole and
/// only adds poles of smaller rank. Ties in |2j - 1| go to the left side:
/// moving (2n-1) up creates a (2n+2) pole through the weight ratio.
fn pole_rank(j: i64, m: u32) -> (i64, bool, u32) {
    ((2 * j - 1).abs(), j <= 0, m)
}

/// Telescoping measure: pole ranks, largest first. Compared
/// lexicographically it strictly drops at every R1/R2 step.
pub fn pole_measure(map: &BTreeMap<(i64, u32), G>) -> Vec<(i64, bool, u32)> {
    let mut v: Vec<_> = map.keys().map(|&(j, m)| pole_rank(j, m)).collect();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

/// Eliminate every pole outside {2n, 2n+1}. Returns the remaining pole map
/// on n >= 1 and the accumulated boundary contributions.
fn telescope(k: i32, map: &mut BTreeMap<(i64, u32), G>, ctx: &mut Ctx) -> Result<ClosedForm> {
    let mut acc = ClosedForm::zero();
    loop {
        let key = map
            .keys()
            .filter(|(j, _)| *j != 0 && *j != 1)
            .max_by_key(|&&(j, m)| pole_rank(j, m))
            .copied();
        let Some((j, m)) = key else { break };
        let c = map[&(j, m)].clone();
        let (mv, down) = if j >= 3 {
            (Mover { c0: j - 2, p: -(m as i32) }, true)
        } else if j == 2 {
            (Mover { c0: 0, p: k - m as i32 }, true)
        } else {
            (Mover { c0: j, p: -(m as i32) }, false)
        };
        let rule = match (down, k > 0) {
            (true, true) => Rule::R1,
            (true, false) => Rule::R1p,
            (false, true) => Rule::R2,
            (false, false) => Rule::R2p,
        };
        let e = &(&ratio(k) * &mv.at(1)) - &mv.at(0);
        let pe = partial_fractions(&e, 2)?;
        no_poly_part(&pe.poly, "telescoping difference")?;
        let pe = pe.as_map();
        let gamma_ = pe.get(&(j, m)).cloned().unwrap_or_else(G::zero);
        if gamma_.is_zero() {
            return Err(Error::UnmatchedShape(format!("no telescoping move for pole (2n{j:+})^{m}")));
        }
        let lambda = &c / &gamma_;
        let before = central_text(k, map);
        add_scaled(map, &pe, &lambda);
        debug_assert!(!map.contains_key(&(j, m)));
        let contrib = boundary(k, mv)?.scale(&lambda);
        ctx.push(rule, before, central_text(k, map), contrib.clone());
        acc += &contrib;
    }
    Ok(acc)
}

fn base_piece(ctx: &mut Ctx, what: String, v: ClosedForm) -> ClosedForm {
    ctx.push(Rule::Base, what, v.to_text(), v.clone());
    v
}

/// sum_{n>=1} a_n^k c/(2n+j)^m for j in {0, 1}.
fn base_single(k: i32, j: i64, m: u32, table: &BaseTable) -> Result<ClosedForm> {
    if k == 1 {
        return gamma::base_sum_k1(2, j, m, 1);
    }
    if j == 1 {
        // Odd(m) minus its n = 0 term
        Ok(table.value(&BaseKey::new(k, Family::Odd, m))? - &ClosedForm::one())
    } else {
        let two_m = Rational::from(Integer::from(2).pow(m)).recip();
        Ok(table.value(&BaseKey::new(k, Family::Even, m))?.scale(&G::real(two_m)))
    }
}

fn dispatch_base(k: i32, map: &BTreeMap<(i64, u32), G>, table: &BaseTable, ctx: &mut Ctx) -> Result<ClosedForm> {
    let mut total = ClosedForm::zero();
    let get = |j: i64, m: u32| map.get(&(j, m)).cloned().unwrap_or_else(G::zero);
    // orders that only converge in combination
    let low = match k {
        -1 => 1,
        -2 => 2,
        _ => 0,
    };
    for (&(j, m), c) in map {
        if m <= low {
            continue;
        }
        let v = base_single(k, j, m, table)?.scale(c);
        total += &base_piece(ctx, format!("sum_(n>=1) a_n^{k} * {}/(2n{:+})^{m}", c.to_text(), j), v);
    }
    if k == -1 {
        let (alpha, beta) = (get(1, 1), get(0, 1));
        if !(&alpha + &beta).is_zero() {
            return Err(Error::Divergent("unpaired 1/(2n+j) terms with a_n^-1".into()));
        }
        if !beta.is_zero() {
            // beta (1/(2n) - 1/(2n+1)) = beta/2 * 1/(n(2n+1))
            let v = table.value(&BaseKey::pair())?.scale(&(&beta * &G::from_ratio(1, 2)));
            ctx.push(
                Rule::Pair,
                format!("sum_(n>=1) a_n^-1 * [{0}/(2n) - {0}/(2n+1)]", beta.to_text()),
                v.to_text(),
                v.clone(),
            );
            total += &v;
        }
    }
    if k == -2 {
        let (a1, a2, b1, b2) = (get(1, 1), get(1, 2), get(0, 1), get(0, 2));
        // A (1/x - 1/(x+1) - 1/(x+1)^2) + B (1/x^2 - 1/x + 1/(x+1)) in x = 2n
        let a = -a2.clone();
        let b = b2.clone();
        if b1 != &a - &b || a1 != &b - &a {
            return Err(Error::Divergent("low-order a_n^-2 terms do not form triple units".into()));
        }
        if !a.is_zero() || !b.is_zero() {
            let va = table.value(&BaseKey::triple_a())?.scale(&(&a * &G::from_ratio(1, 2)));
            let vb = table.value(&BaseKey::triple_b())?.scale(&(&b * &G::from_ratio(1, 4)));
            let v = &va + &vb;
            ctx.push(
                Rule::Pair,
                format!(
                    "sum_(n>=1) a_n^-2 * [{}/(n(2n+1)^2) + {}/(n^2(2n+1))]",
                    (&a * &G::from_ratio(1, 2)).to_text(),
                    (&b * &G::from_ratio(1, 4)).to_text()
                ),
                v.to_text(),
                v.clone(),
            );
            total += &v;
        }
    }
    Ok(total)
}

fn reduce_central(k: i32, ws: &WeightedSum, table: &BaseTable, ctx: &mut Ctx) -> Result<ClosedForm> {
    if ws.alternating {
        return Err(Error::UnmatchedShape("alternating central-binomial sums are not reducible".into()));
    }
    let (r, init) = normalize_start(k, ws, ctx)?;
    let pf = partial_fractions(&r, 2)?;
    no_poly_part(&pf.poly, "summand")?;
    let mut map = pf.as_map();
    ctx.push(Rule::Pf, central_state(k, &r), central_text(k, &map), ClosedForm::zero());
    let mut total = init;
    total += &telescope(k, &mut map, ctx)?;
    total += &dispatch_base(k, &map, table, ctx)?;
    Ok(total)
}

/// Reduce an admissible series to a closed form, with the rewrite trace.
pub fn reduce(s: &SeriesSpec, table: &BaseTable) -> Result<(ClosedForm, ReductionTrace)> {
    s.validate()?;
    match check_convergence(s) {
        Convergence::Divergent => return Err(Error::Divergent(s.to_text())),
        Convergence::Terminating => return Err(Error::Terminating(s.to_text())),
        Convergence::Geometric => {
            return Err(Error::UnmatchedShape(format!("{} has |z| < 1; only z = 1 and z = -1 reduce", s.to_text())))
        }
        Convergence::Algebraic { .. } => {}
    }
    let ws = to_weighted(s)?;
    let mut ctx = Ctx::default();
    if ws.r.is_zero() {
        return Ok((ClosedForm::zero(), ctx.trace));
    }
    let mut v = match &ws.weight {
        Weight::Central(0) => reduce_rational(&ws, &mut ctx)?,
        Weight::Central(k) => reduce_central(*k, &ws, table, &mut ctx)?,
        Weight::Poch(c) => reduce_poch(c, &ws, &mut ctx)?,
    };
    if ws.pi {
        let pi = ClosedForm::atom(Atom::Pi);
        v = &v * &pi;
        for st in ctx.trace.steps.iter_mut() {
            st.contribution = &st.contribution * &pi;
            for t in [&mut st.before, &mut st.after] {
                if t.starts_with("binom(") {
                    *t = format!("pi*{t}");
                }
            }
        }
    }
    debug_assert_eq!(ctx.trace.replay(), v);
    Ok((v, ctx.trace))
}

/// `unit(2, j, m, c)` summed against a_n^k from n = 1; the shape the base table is keyed on.
pub fn base_unit(k: i32, j: i64, m: u32) -> BinomSpec {
    let mut b = BinomSpec::new(k, unit(2, j, m, &G::one()));
    b.start = 1;
    b
}

/// Discover a base-table entry by integer relation over the weight/level
/// basis of `key`, confirmed at 1.5x `digits`.
pub fn populate_base_table(key: BaseKey, digits: u32) -> Result<BaseEntry> {
    let mut b = key.series();
    // k = 2 sums are fitted as pi times the sum
    b.pi_prefactor = key.k == 2;
    let spec = SeriesSpec::Binom(b);
    let target = |d: u32| crate::oracle::eval_series(&spec, d).map(|z| z.re);
    let basis: Vec<_> = if key.homogeneous() {
        crate::fitter::monomial_basis(key.weight(), key.level())
    } else {
        (0..=key.weight()).flat_map(|w| crate::fitter::monomial_basis(w, key.level())).collect()
    };
    let form = crate::fitter::fit_graded(&target, &basis, digits, crate::fitter::DEFAULT_HEIGHT)?;
    let value = if key.k == 2 { &form * &ClosedForm::atom_pow(Atom::Pi, -1) } else { form };
    Ok(BaseEntry { key, value, provenance: Provenance::Fitted(digits) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::eval_closedform;
    use crate::oracle::eval_series;
    use crate::parser::{parse_closedform, parse_series};

    fn red(s: &str) -> (ClosedForm, ReductionTrace) {
        reduce(&parse_series(s).unwrap(), &BaseTable::builtin()).unwrap()
    }

    fn agrees(s: &str, v: &ClosedForm, digits: u32) {
        let a = eval_series(&parse_series(s).unwrap(), digits).unwrap();
        let b = eval_closedform(v, digits).unwrap();
        let diff = (&a - &b).mag_f64();
        assert!(diff < 10f64.powi(-(digits as i32) + 5), "{s}: {} vs {} (diff {diff:e})", a.to_text(25), b.to_text(25));
    }

    #[test]
    fn convergence_classes() {
        let c = |s: &str| check_convergence(&parse_series(s).unwrap());
        assert!(matches!(c("binom(1; 1/(2n+1))"), Convergence::Algebraic { .. }));
        assert_eq!(c("binom(-1; 1/(2n+1))"), Convergence::Divergent);
        assert_eq!(
            c("pfq(1/2,1/2;3/2;1)"),
            Convergence::Algebraic { excess: Rational::from((1, 2)), alternating: false }
        );
        assert_eq!(c("pfq(1,1;2;1/2)"), Convergence::Geometric);
        assert!(matches!(parse_series("pfq(-2,1;2;1)"), Err(Error::Terminating(_))));
    }

    #[test]
    fn traced_quarter_pi() {
        let (v, tr) = red("binom(1; 1/(2n+3))");
        assert_eq!(v, parse_closedform("1/4*pi").unwrap());
        assert_eq!(tr.replay(), v);
        let rules: Vec<_> = tr.steps.iter().map(|s| s.rule.id()).collect();
        assert_eq!(rules, ["INIT-TERMS", "PF", "R1", "R1", "BASE"]);
        let contribs: Vec<_> = tr.steps.iter().map(|s| s.contribution.to_text()).collect();
        assert_eq!(contribs[0], "1/3");
        assert_eq!(contribs[2], "-1/12");
        assert_eq!(contribs[3], "1/4");
    }

    #[test]
    fn rational_sums() {
        let (v, _) = red("binom(0; 1/((2n+1)(2n+2)))");
        assert_eq!(v, parse_closedform("log2").unwrap());
        let (v, _) = red("binom(0; 1/((4n+1)(4n+3)))");
        assert_eq!(v, parse_closedform("1/8*pi").unwrap());
        let (v, _) = red("binom(0; 1/(2n+1); alt)");
        assert_eq!(v, parse_closedform("1/4*pi").unwrap());
        let (v, _) = red("binom(0; 1/(n+1)^2; alt)");
        assert_eq!(v, parse_closedform("1/12*pi^2").unwrap());
    }

    #[test]
    fn pfq_translation() {
        let ws = to_weighted(&parse_series("pfq({1}_9,3/2;{2}_9;1)").unwrap()).unwrap();
        assert_eq!(ws.weight, Weight::Central(1));
        assert_eq!(ws.r, crate::parser::parse_ratfunc("(2n+1)/(n+1)^9").unwrap());
        let ws = to_weighted(&parse_series("pfq({1/2}_4,{1}_2;{3/2}_5;1)").unwrap()).unwrap();
        assert_eq!(ws.weight, Weight::Central(-1));
        assert_eq!(ws.r, crate::parser::parse_ratfunc("1/(2n+1)^5").unwrap());
        let ws = to_weighted(&parse_series("pfq({1/4}_6,3/4;{5/4}_6;1)").unwrap()).unwrap();
        assert_eq!(ws.weight, Weight::Poch(Rational::from((3, 4))));
        assert!(matches!(
            to_weighted(&parse_series("pfq({1}_6;{2}_4,11/4;1)").unwrap()),
            Err(Error::UnmatchedShape(_))
        ));
    }

    #[test]
    fn weight_eight_pin() {
        let (v, tr) = red("pfq({1}_9,3/2;{2}_9;1)");
        let want = parse_closedform(
            "2/3*pi^2*zeta(3)^2 - 24*zeta(3)*zeta(5) - 16/15*zeta(3)*log2^5 + 8/9*pi^2*zeta(3)*log2^3 \
             - 16*zeta(5)*log2^3 - 8*zeta(3)^2*log2^2 + 1/5*pi^4*zeta(3)*log2 + 4*pi^2*zeta(5)*log2 \
             - 72*zeta(7)*log2 + 2339/907200*pi^8 - 4/315*log2^8 + 4/135*pi^2*log2^6 + 1/30*pi^4*log2^4 \
             + 79/3780*pi^6*log2^2",
        )
        .unwrap();
        assert_eq!(v, want);
        assert_eq!(tr.replay(), v);
    }

    #[test]
    fn quarter_weights_match_oracle() {
        for s in ["pfq(1/4,{1/2}_3;{3/2}_3;1)", "pfq({1/4}_3,3/4;{5/4}_3;1)", "pfq(3/4,1/2,1;3/2,2;1)"] {
            let (v, tr) = red(s);
            assert_eq!(tr.replay(), v);
            agrees(s, &v, 30);
        }
    }

    #[test]
    fn central_sums_match_oracle() {
        for s in [
            "binom(1; 1/(2n+5)^2)",
            "binom(1; 1/((2n+1)(n+3)))",
            "binom(1; 1/(2n-1)^2; start=1)",
            "binom(1; (n+i)/(2n+3)^3; start=2)",
            "binom(1; 1/((2n-3)(2n+4)); start=3)",
        ] {
            let (v, tr) = red(s);
            assert_eq!(tr.replay(), v);
            agrees(s, &v, 30);
        }
    }

    #[test]
    fn table_miss_names_key() {
        let e = reduce(&parse_series("binom(-1; 1/(2n+1)^3)").unwrap(), &BaseTable::new()).unwrap_err();
        match e {
            Error::TableMiss(m) => assert!(m.contains("k=-1, odd, m=3"), "{m}"),
            other => panic!("{other:?}"),
        }
    }
}
