//! Partial fractions over a lattice of rational poles.

use std::collections::BTreeMap;

use rug::{Integer, Rational};

use crate::coeff::GaussianRational as G;
use crate::error::{Error, Result};
use crate::poly::{Poly, RatFunc};

/// `c / (d*n + j)^m`
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleTerm {
    pub j: i64,
    pub m: u32,
    pub c: G,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleDecomposition {
    pub d: u32,
    pub poly: Poly,
    pub terms: Vec<PoleTerm>,
}

impl PoleDecomposition {
    pub fn reassemble(&self) -> RatFunc {
        let mut r = RatFunc::poly(self.poly.clone());
        for t in &self.terms {
            r = &r + &unit(self.d, t.j, t.m, &t.c);
        }
        r
    }

    /// Map (j, m) -> coefficient.
    pub fn as_map(&self) -> BTreeMap<(i64, u32), G> {
        self.terms.iter().map(|t| ((t.j, t.m), t.c.clone())).collect()
    }
}

/// c / (d n + j)^m as a rational function.
pub fn unit(d: u32, j: i64, m: u32, c: &G) -> RatFunc {
    let lin = Poly::linear(G::from_int(d as i64), G::from_int(j));
    RatFunc::new(Poly::constant(c.clone()), lin.pow(m))
}

fn abs_f64(g: &G) -> f64 {
    g.norm_sqr().to_f64().sqrt()
}

/// Fujiwara bound on root moduli.
fn root_bound(p: &Poly) -> f64 {
    let c = p.coeffs();
    let deg = c.len() - 1;
    let lead = abs_f64(&c[deg]);
    let mut b: f64 = 0.0;
    for i in 1..=deg {
        let v = abs_f64(&c[deg - i]) / lead;
        let v = if i == deg { v / 2.0 } else { v };
        b = b.max(v.powf(1.0 / i as f64));
    }
    2.0 * b + 1.0
}

/// Roots n = -j/d with multiplicities; errors if some factor is off the lattice.
pub fn lattice_roots(den: &Poly, d: u32) -> Result<Vec<(i64, u32)>> {
    let mut p = den.clone();
    let mut out = Vec::new();
    if p.degree() <= 0 {
        return Ok(out);
    }
    let bound = (root_bound(&p) * d as f64).ceil() as i64 + 1;
    for j in -bound..=bound {
        if p.degree() <= 0 {
            break;
        }
        let x = G::real(Rational::from((-j, d as i64)));
        let mut mult = 0;
        while p.degree() > 0 && p.eval(&x).is_zero() {
            let (q, _) = p.divrem(&Poly::linear(G::from_int(d as i64), G::from_int(j)));
            p = q;
            mult += 1;
        }
        if mult > 0 {
            out.push((j, mult));
        }
    }
    if p.degree() > 0 {
        return Err(Error::PoleOffLattice(format!(
            "denominator factor {} has roots outside (1/{d})Z",
            p.to_text()
        )));
    }
    Ok(out)
}

/// Taylor coefficients of a/b at 0 up to order k.
fn taylor_div(a: &Poly, b: &Poly, k: usize) -> Vec<G> {
    let ac = a.coeffs();
    let bc = b.coeffs();
    let b0inv = bc[0].inv();
    let mut out: Vec<G> = Vec::with_capacity(k + 1);
    for m in 0..=k {
        let mut s = ac.get(m).cloned().unwrap_or_else(G::zero);
        for i in 1..=m {
            if let Some(bi) = bc.get(i) {
                s -= &(bi * &out[m - i]);
            }
        }
        out.push(&s * &b0inv);
    }
    out
}

/// Smallest d in {1, 2, 4} putting every root of `den` on (1/d)Z, if any.
pub fn lattice_for(den: &Poly) -> Option<u32> {
    [1, 2, 4].into_iter().find(|&d| lattice_roots(den, d).is_ok())
}

/// R = poly + sum c / (d n + j)^m.
pub fn partial_fractions(r: &RatFunc, d: u32) -> Result<PoleDecomposition> {
    let (poly, rem) = r.num.divrem(&r.den);
    let roots = lattice_roots(&r.den, d)?;
    let mut terms = Vec::new();
    for &(j, mu) in &roots {
        let lin = Poly::linear(G::from_int(d as i64), G::from_int(j));
        let (rest, _) = r.den.divrem(&lin.pow(mu));
        // rem / den = rem / (lin^mu * rest); in t = n + j/d, lin = d t
        let s = G::real(Rational::from((-j, d as i64)));
        let num_t = rem.shift(&s);
        let rest_t = rest.shift(&s);
        let e = taylor_div(&num_t, &rest_t, mu as usize - 1);
        for m in 1..=mu {
            let c = &e[(mu - m) as usize];
            if c.is_zero() {
                continue;
            }
            // c / t^m = c d^m / (d n + j)^m
            let dm = G::from(Integer::from(d).pow(m));
            // the d^mu from lin^mu is already in the denominator polynomial
            let scale = G::from(Integer::from(d).pow(mu));
            terms.push(PoleTerm { j, m, c: &(c * &dm) * &scale.inv() });
        }
    }
    Ok(PoleDecomposition { d, poly, terms })
}

use rug::ops::Pow;

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_ratfunc;

    fn pf(s: &str, d: u32) -> PoleDecomposition {
        partial_fractions(&parse_ratfunc(s).unwrap(), d).unwrap()
    }

    #[test]
    fn simple_examples() {
        let p = pf("1/((2n+1)(2n+2))", 2);
        assert_eq!(p.as_map(), BTreeMap::from([((1, 1), G::one()), ((2, 1), G::from_int(-1))]));
        let p = pf("1/(2n+1)^2", 2);
        assert_eq!(p.as_map(), BTreeMap::from([((1, 2), G::one())]));
    }

    #[test]
    fn gaussian_numerator_reassembles() {
        let r = parse_ratfunc("(n+i)/((2n+1)(2n+3))").unwrap();
        let p = partial_fractions(&r, 2).unwrap();
        assert_eq!(p.terms.len(), 2);
        assert!(p.terms.iter().all(|t| !t.c.is_real()));
        assert_eq!(p.reassemble(), r);
    }

    #[test]
    fn off_lattice_rejected() {
        let r = parse_ratfunc("1/(3n+1)").unwrap();
        assert!(matches!(partial_fractions(&r, 2), Err(Error::PoleOffLattice(_))));
        assert_eq!(lattice_for(&r.den), None);
        let q = parse_ratfunc("1/((4n+1)(n+2)^2)").unwrap();
        assert_eq!(lattice_for(&q.den), Some(4));
        assert_eq!(partial_fractions(&q, 4).unwrap().reassemble(), q);
    }
}
