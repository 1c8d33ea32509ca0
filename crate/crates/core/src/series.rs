//! Parsed series descriptions.

use rug::Rational;

use crate::coeff::{rational_text, GaussianRational as G};
use crate::error::{Error, Result};
use crate::poly::{Poly, RatFunc};

/// `[pi*] pFq(top; bottom; z)`
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PfqSpec {
    pub top: Vec<G>,
    pub bottom: Vec<G>,
    pub z: Rational,
    pub pi_prefactor: bool,
}

/// `[pi*] sum_{n >= start} R(n) a_n^k [(-1)^n]` with `a_n = binom(2n,n)/4^n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BinomSpec {
    pub k: i32,
    pub pi_prefactor: bool,
    pub r: RatFunc,
    pub start: u32,
    pub alternating: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum SeriesSpec {
    Pfq(PfqSpec),
    Binom(BinomSpec),
}

/// Nonpositive integer test for a parameter.
pub fn is_nonpositive_integer(x: &G) -> bool {
    x.as_integer().map_or(false, |n| n.cmp0().is_le())
}

/// Upper bound on the modulus of every root of `p`.
pub fn root_bound(p: &Poly) -> f64 {
    let c = p.coeffs();
    if c.len() <= 1 {
        return 0.0;
    }
    let lead = c.last().unwrap();
    let ln = lead.norm_sqr().to_f64().sqrt();
    let mut m: f64 = 0.0;
    for x in &c[..c.len() - 1] {
        m = m.max(x.norm_sqr().to_f64().sqrt() / ln);
    }
    1.0 + m
}

/// First integer `n >= start` where `p(n) = 0`, if any.
pub fn integer_root_from(p: &Poly, start: u32) -> Option<u32> {
    let b = root_bound(p).ceil() as u64;
    (start as u64..=b.max(start as u64))
        .find(|&n| p.eval(&G::from_int(n as i64)).is_zero())
        .map(|n| n as u32)
}

impl PfqSpec {
    pub fn validate(&self) -> Result<()> {
        if self.top.len() != self.bottom.len() + 1 {
            return Err(Error::Semantic(format!(
                "pfq needs |top| = |bottom| + 1, got {} and {}",
                self.top.len(),
                self.bottom.len()
            )));
        }
        if let Some(b) = self.bottom.iter().find(|b| is_nonpositive_integer(b)) {
            return Err(Error::Semantic(format!("bottom parameter {} is a nonpositive integer", b.bare_text())));
        }
        if let Some(a) = self.top.iter().find(|a| is_nonpositive_integer(a)) {
            return Err(Error::Terminating(format!("top parameter {} is a nonpositive integer", a.bare_text())));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        format!(
            "{}pfq({};{};{})",
            if self.pi_prefactor { "pi*" } else { "" },
            params_text(&self.top),
            params_text(&self.bottom),
            rational_text(&self.z)
        )
    }
}

fn params_text(ps: &[G]) -> String {
    let mut out: Vec<String> = Vec::new();
    let mut i = 0;
    while i < ps.len() {
        let mut j = i;
        while j < ps.len() && ps[j] == ps[i] {
            j += 1;
        }
        let t = ps[i].bare_text();
        if j - i > 1 {
            out.push(format!("{{{t}}}_{}", j - i));
        } else {
            out.push(t);
        }
        i = j;
    }
    out.join(",")
}

impl BinomSpec {
    pub fn new(k: i32, r: RatFunc) -> Self {
        BinomSpec { k, pi_prefactor: false, r, start: 0, alternating: false }
    }

    pub fn validate(&self) -> Result<()> {
        if !(-2..=2).contains(&self.k) {
            return Err(Error::Semantic(format!("binomial power k={} outside -2..=2", self.k)));
        }
        if self.r.is_zero() {
            return Ok(());
        }
        if self.r.degree_diff() >= 0 {
            return Err(Error::Semantic("R(n) must decay (numerator degree < denominator degree)".into()));
        }
        if let Some(n) = integer_root_from(&self.r.den, self.start) {
            return Err(Error::PoleInRange(format!("R(n) has a pole at n={n}")));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "{}binom({}; {}",
            if self.pi_prefactor { "pi*" } else { "" },
            self.k,
            self.r.to_text()
        );
        if self.start != 0 {
            s.push_str(&format!("; start={}", self.start));
        }
        if self.alternating {
            s.push_str("; alt");
        }
        s.push(')');
        s
    }
}

impl SeriesSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            SeriesSpec::Pfq(p) => p.validate(),
            SeriesSpec::Binom(b) => b.validate(),
        }
    }

    pub fn to_text(&self) -> String {
        match self {
            SeriesSpec::Pfq(p) => p.to_text(),
            SeriesSpec::Binom(b) => b.to_text(),
        }
    }

    pub fn pi_prefactor(&self) -> bool {
        match self {
            SeriesSpec::Pfq(p) => p.pi_prefactor,
            SeriesSpec::Binom(b) => b.pi_prefactor,
        }
    }
}

impl std::fmt::Display for SeriesSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.to_text())
    }
}
