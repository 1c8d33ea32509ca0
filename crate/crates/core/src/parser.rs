//! Text grammar for series specifications and closed forms.
//!
//! ```text
//! series    := ["pi*"] "pfq(" params ";" params ";" rational ")"
//!            | ["pi*"] "binom(" int ";" ratfunc ["; start=" int] ["; alt"] ")"
//! params    := param ("," param)*
//! param     := gauss | "{" gauss "}_" int
//! gauss     := signed sum of rational and rational-times-i parts, e.g. 1/2, -i, i-1, 2+3/4i
//! ratfunc   := arithmetic over integers, n, i with + - * / ^ ( ), implicit products like 2n
//! closed    := ["-"] term (("+"|"-") term)*
//! term      := factor ("*" factor)* ["/" int]
//! factor    := int ["/" int] | "(" gauss ")" | atom ["^" int]
//! ```

use rug::{Integer, Rational};

use crate::atom::{Atom, Part};
use crate::closedform::{ClosedForm, Monomial};
use crate::coeff::GaussianRational as G;
use crate::error::{Error, Result};
use crate::poly::{Poly, RatFunc};
use crate::series::{BinomSpec, PfqSpec, SeriesSpec};

struct Cursor<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn new(s: &'a str) -> Self {
        Cursor { s: s.as_bytes(), pos: 0 }
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.pos, msg: msg.into() })
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn eat_str(&mut self, t: &str) -> bool {
        self.ws();
        if self.s[self.pos..].starts_with(t.as_bytes()) {
            self.pos += t.len();
            true
        } else {
            false
        }
    }

    fn expect_str(&mut self, t: &str) -> Result<()> {
        if self.eat_str(t) {
            Ok(())
        } else {
            self.err(format!("expected '{t}'"))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    fn finish(&mut self) -> Result<()> {
        if self.at_end() {
            Ok(())
        } else {
            self.err("unexpected trailing input")
        }
    }

    fn uint(&mut self) -> Result<Integer> {
        self.ws();
        let st = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if st == self.pos {
            return self.err("expected integer");
        }
        let txt = std::str::from_utf8(&self.s[st..self.pos]).unwrap();
        Ok(txt.parse::<Integer>().unwrap())
    }

    fn int(&mut self) -> Result<Integer> {
        let neg = self.eat(b'-');
        if !neg {
            self.eat(b'+');
        }
        let v = self.uint()?;
        Ok(if neg { -v } else { v })
    }

    fn small_int(&mut self) -> Result<i64> {
        let p = self.pos;
        let v = self.int()?;
        v.to_i64().ok_or(Error::Syntax { pos: p, msg: "integer too large".into() })
    }

    fn rational(&mut self) -> Result<Rational> {
        let n = self.int()?;
        if self.peek() == Some(b'/') {
            self.pos += 1;
            let p = self.pos;
            let d = self.uint()?;
            if d == 0 {
                return Err(Error::Syntax { pos: p, msg: "zero denominator".into() });
            }
            return Ok(Rational::from((n, d)));
        }
        Ok(Rational::from(n))
    }

    fn ident(&mut self) -> Option<String> {
        self.ws();
        let st = self.pos;
        if self.pos < self.s.len() && self.s[self.pos].is_ascii_alphabetic() {
            while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
                self.pos += 1;
            }
            Some(String::from_utf8_lossy(&self.s[st..self.pos]).into_owned())
        } else {
            None
        }
    }

    fn int_list(&mut self, stop: u8) -> Result<Vec<i64>> {
        let mut v = vec![self.small_int()?];
        while self.peek() != Some(stop) {
            self.expect(b',')?;
            v.push(self.small_int()?);
        }
        Ok(v)
    }

    /// Gaussian literal terminated by one of `, ; } )`.
    fn gauss(&mut self) -> Result<G> {
        let mut acc = G::zero();
        let mut first = true;
        loop {
            let c = self.peek();
            if !first && !matches!(c, Some(b'+') | Some(b'-')) {
                break;
            }
            let neg = if self.eat(b'-') {
                true
            } else {
                self.eat(b'+');
                false
            };
            let mut mag = Rational::from(1);
            let mut has_num = false;
            if matches!(self.peek(), Some(b'0'..=b'9')) {
                mag = self.rational()?;
                has_num = true;
            }
            let mut t = G::real(mag);
            if self.peek() == Some(b'i') {
                self.pos += 1;
                t = &t * &G::i();
            } else if !has_num {
                return self.err("expected number or i");
            }
            if neg {
                t = -t;
            }
            acc += &t;
            first = false;
        }
        Ok(acc)
    }
}

fn sem<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Semantic(msg.into()))
}

fn parse_params(c: &mut Cursor, out: &mut Vec<G>) -> Result<()> {
    if c.peek() == Some(b';') {
        return Ok(());
    }
    loop {
        if c.eat(b'{') {
            let v = c.gauss()?;
            c.expect(b'}')?;
            c.expect(b'_')?;
            let p = c.pos;
            let r = c.uint()?.to_usize().ok_or(Error::Syntax { pos: p, msg: "repeat count too large".into() })?;
            if r == 0 {
                return Err(Error::Syntax { pos: p, msg: "repeat count must be positive".into() });
            }
            out.extend(std::iter::repeat(v).take(r));
        } else {
            out.push(c.gauss()?);
        }
        if !c.eat(b',') {
            return Ok(());
        }
    }
}

// ---- rational functions ----

fn rf_expr(c: &mut Cursor) -> Result<RatFunc> {
    let mut acc = if c.eat(b'-') {
        let t = rf_term(c)?;
        &RatFunc::constant(G::zero()) - &t
    } else {
        c.eat(b'+');
        rf_term(c)?
    };
    loop {
        if c.eat(b'+') {
            let t = rf_term(c)?;
            acc = &acc + &t;
        } else if c.eat(b'-') {
            let t = rf_term(c)?;
            acc = &acc - &t;
        } else {
            return Ok(acc);
        }
    }
}

fn rf_term(c: &mut Cursor) -> Result<RatFunc> {
    let mut acc = rf_factor(c)?;
    loop {
        match c.peek() {
            Some(b'*') => {
                c.pos += 1;
                let f = rf_factor(c)?;
                acc = &acc * &f;
            }
            Some(b'/') => {
                c.pos += 1;
                let p = c.pos;
                let f = rf_factor(c)?;
                if f.is_zero() {
                    return Err(Error::Syntax { pos: p, msg: "division by zero".into() });
                }
                acc = &acc / &f;
            }
            Some(b'n') | Some(b'i') | Some(b'(') | Some(b'0'..=b'9') => {
                let f = rf_factor(c)?;
                acc = &acc * &f;
            }
            _ => return Ok(acc),
        }
    }
}

fn rf_factor(c: &mut Cursor) -> Result<RatFunc> {
    let base = match c.peek() {
        Some(b'(') => {
            c.pos += 1;
            let e = rf_expr(c)?;
            c.expect(b')')?;
            e
        }
        Some(b'n') => {
            c.pos += 1;
            RatFunc::n()
        }
        Some(b'i') => {
            c.pos += 1;
            RatFunc::constant(G::i())
        }
        Some(b'0'..=b'9') => RatFunc::constant(G::from(c.uint()?)),
        _ => return c.err("expected n, i, integer or '('"),
    };
    if c.eat(b'^') {
        let p = c.pos;
        let e = c.small_int()?;
        if e.unsigned_abs() > 64 {
            return Err(Error::Syntax { pos: p, msg: "exponent too large".into() });
        }
        if e < 0 && base.is_zero() {
            return Err(Error::Syntax { pos: p, msg: "division by zero".into() });
        }
        return Ok(base.pow(e as i32));
    }
    Ok(base)
}

/// Parse a rational function in `n`.
pub fn parse_ratfunc(text: &str) -> Result<RatFunc> {
    let mut c = Cursor::new(text);
    let r = rf_expr(&mut c)?;
    c.finish()?;
    Ok(r)
}

/// Parse and validate a series specification.
pub fn parse_series(text: &str) -> Result<SeriesSpec> {
    let mut c = Cursor::new(text);
    let pi = c.eat_str("pi*");
    let spec = if c.eat_str("pfq(") {
        let mut top = Vec::new();
        let mut bottom = Vec::new();
        parse_params(&mut c, &mut top)?;
        c.expect(b';')?;
        parse_params(&mut c, &mut bottom)?;
        c.expect(b';')?;
        let z = c.rational()?;
        c.expect(b')')?;
        SeriesSpec::Pfq(PfqSpec { top, bottom, z, pi_prefactor: pi })
    } else if c.eat_str("binom(") {
        let k = c.small_int()?;
        c.expect(b';')?;
        let r = rf_expr(&mut c)?;
        let mut b = BinomSpec::new(k as i32, r);
        b.pi_prefactor = pi;
        while c.eat(b';') {
            if c.eat_str("start") {
                c.expect(b'=')?;
                let p = c.pos;
                b.start = c.uint()?.to_u32().ok_or(Error::Syntax { pos: p, msg: "start too large".into() })?;
            } else if c.eat_str("alt") {
                b.alternating = true;
            } else {
                return c.err("expected 'start=' or 'alt'");
            }
        }
        c.expect(b')')?;
        SeriesSpec::Binom(b)
    } else {
        return c.err("expected 'pfq(' or 'binom('");
    };
    c.finish()?;
    spec.validate()?;
    Ok(spec)
}

// ---- closed forms ----

fn cf_atom(c: &mut Cursor) -> Result<Option<Atom>> {
    let st = c.pos;
    let Some(id) = c.ident() else { return Ok(None) };
    let a = match id.as_str() {
        "pi" => Atom::Pi,
        "log2" => Atom::Log2,
        "sqrt2" => Atom::Sqrt2,
        "sqrtpi" => Atom::SqrtPi,
        "gamma14" => Atom::Gamma14,
        "gammaE" => Atom::EulerGamma,
        "C" => Atom::Beta(2),
        "zeta" | "beta" | "imli" => {
            c.expect(b'(')?;
            let n = c.small_int()?;
            c.expect(b')')?;
            if !(1..=64).contains(&n) {
                return sem(format!("{id} index {n} out of range"));
            }
            match id.as_str() {
                "zeta" => Atom::Zeta(n as u32),
                "beta" => Atom::Beta(n as u32),
                _ => Atom::ImLiHalfI(n as u32),
            }
        }
        "li" => {
            c.expect(b'(')?;
            let n = c.small_int()?;
            c.expect(b',')?;
            c.expect_str("1/2")?;
            c.expect(b')')?;
            if !(1..=64).contains(&n) {
                return sem(format!("li index {n} out of range"));
            }
            Atom::LiHalf(n as u32)
        }
        "hzeta" => {
            c.expect(b'(')?;
            c.expect_str("4")?;
            c.expect(b',')?;
            let o = if c.eat_str("1/4") {
                1
            } else if c.eat_str("3/4") {
                3
            } else {
                return c.err("expected 1/4 or 3/4");
            };
            c.expect(b')')?;
            Atom::Hurwitz4(o)
        }
        "mz" => {
            c.expect(b'(')?;
            let s = c.int_list(b';')?;
            c.expect(b';')?;
            let sg = c.int_list(b')')?;
            c.expect(b')')?;
            if s.iter().any(|&x| !(1..=64).contains(&x)) {
                return sem("mz index out of range");
            }
            Atom::Mz { s: s.iter().map(|&x| x as u32).collect(), signs: sg.iter().map(|&x| x as i8).collect() }
        }
        "reqmz" | "imqmz" => {
            c.expect(b'(')?;
            c.expect_str("4")?;
            c.expect(b',')?;
            let s = c.int_list(b';')?;
            c.expect(b';')?;
            let ch = c.int_list(b')')?;
            c.expect(b')')?;
            if s.iter().any(|&x| !(1..=64).contains(&x)) || ch.iter().any(|&x| !(0..=3).contains(&x)) {
                return sem("qmz index or character out of range");
            }
            Atom::Qmz {
                part: if id == "reqmz" { Part::Re } else { Part::Im },
                s: s.iter().map(|&x| x as u32).collect(),
                chars: ch.iter().map(|&x| x as u8).collect(),
            }
        }
        "qmz" => return sem("qmz is complex; use reqmz(...) or imqmz(...)"),
        _ => {
            c.pos = st;
            return c.err(format!("unknown atom '{id}'"));
        }
    };
    if let Err(e) = a.validate() {
        return sem(e);
    }
    Ok(Some(a))
}

fn cf_term(c: &mut Cursor) -> Result<ClosedForm> {
    let mut coef = G::one();
    let mut mono = ClosedForm::one();
    loop {
        match c.peek() {
            Some(b'0'..=b'9') => {
                let r = c.rational()?;
                coef = &coef * &G::real(r);
            }
            Some(b'(') => {
                c.pos += 1;
                let g = c.gauss()?;
                c.expect(b')')?;
                coef = &coef * &g;
            }
            _ => {
                let p = c.pos;
                let Some(a) = cf_atom(c)? else {
                    return c.err("expected coefficient or atom");
                };
                let mut e = 1i64;
                if c.eat(b'^') {
                    e = c.small_int()?;
                }
                if e < 0 && !(a.is_prefactor() || a == Atom::Pi) {
                    return Err(Error::Syntax { pos: p, msg: format!("negative power of {}", a.text()) });
                }
                if e.unsigned_abs() > 64 {
                    return Err(Error::Syntax { pos: p, msg: "exponent too large".into() });
                }
                mono = &mono * &ClosedForm::monomial(G::one(), Monomial::atom_pow(a, e as i32));
            }
        }
        if !c.eat(b'*') {
            break;
        }
    }
    if c.eat(b'/') {
        let p = c.pos;
        let d = c.uint()?;
        if d == 0 {
            return Err(Error::Syntax { pos: p, msg: "division by zero".into() });
        }
        coef = &coef / &G::from(d);
    }
    Ok(mono.scale(&coef))
}

/// Parse a closed form into canonical shape.
pub fn parse_closedform(text: &str) -> Result<ClosedForm> {
    let mut c = Cursor::new(text);
    let mut acc = ClosedForm::zero();
    let mut neg = c.eat(b'-');
    if !neg {
        c.eat(b'+');
    }
    loop {
        let t = cf_term(&mut c)?;
        if neg {
            acc -= &t;
        } else {
            acc += &t;
        }
        if c.eat(b'+') {
            neg = false;
        } else if c.eat(b'-') {
            neg = true;
        } else {
            break;
        }
    }
    c.finish()?;
    Ok(acc)
}

/// Parse a single parameter literal such as `1/2`, `i-1`, `-i`.
pub fn parse_gaussian(text: &str) -> Result<G> {
    let mut c = Cursor::new(text);
    let g = c.gauss()?;
    c.finish()?;
    Ok(g)
}

/// Build a polynomial from integer coefficients, low degree first.
pub fn poly_from_ints(c: &[i64]) -> Poly {
    Poly::new(c.iter().map(|&x| G::from_int(x)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pfq_repetition() {
        let s = parse_series("pfq({1}_9,3/2;{2}_9;1)").unwrap();
        let SeriesSpec::Pfq(p) = &s else { panic!() };
        assert_eq!(p.top.len(), 10);
        assert_eq!(p.bottom.len(), 9);
        assert_eq!(p.top[9], G::from_ratio(3, 2));
        assert_eq!(s.to_text(), "pfq({1}_9,3/2;{2}_9;1)");
    }

    #[test]
    fn binom_and_errors() {
        let s = parse_series("binom(1; 1/(2n+1))").unwrap();
        let SeriesSpec::Binom(b) = &s else { panic!() };
        assert_eq!(b.k, 1);
        assert_eq!(b.start, 0);
        assert!(matches!(parse_series("pfq(-1,1;2;1)"), Err(Error::Terminating(_))));
        assert!(matches!(parse_series("pfq(1,1;2"), Err(Error::Syntax { .. })));
        assert!(matches!(parse_series("binom(1; 1/n)"), Err(Error::PoleInRange(_))));
        assert!(parse_series("binom(1; 1/n; start=1)").is_ok());
    }

    #[test]
    fn implicit_products() {
        let r = parse_ratfunc("1/2n").unwrap();
        assert_eq!(r, parse_ratfunc("n/2").unwrap());
        let r = parse_ratfunc("(n+i)/((2n+1)(2n+3))").unwrap();
        assert_eq!(r.den.degree(), 2);
    }

    #[test]
    fn complex_params() {
        assert_eq!(parse_gaussian("i-1").unwrap(), &G::i() - &G::one());
        assert_eq!(parse_gaussian("-i").unwrap(), -G::i());
        assert_eq!(parse_gaussian("1/2+3/4i").unwrap().im, Rational::from((3, 4)));
    }

    #[test]
    fn closed_forms() {
        let f = parse_closedform("2/3*pi^2*zeta(3)^2 - 24*zeta(3)*zeta(5)").unwrap();
        assert_eq!(f.len(), 2);
        assert!(parse_closedform("0").unwrap().is_zero());
        let m = parse_closedform("mz(5,1;-1,1)").unwrap();
        assert_eq!(m.to_text(), "mz(5,1;-1,1)");
        let g = parse_closedform("(49/150-343/3600i)*C").unwrap();
        assert_eq!(parse_closedform(&g.to_text()).unwrap(), g);
        assert_eq!(parse_closedform("pi/2").unwrap().to_text(), "1/2*pi");
    }
}
