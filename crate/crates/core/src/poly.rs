//! Dense univariate polynomials in `n` and rational functions over Gaussian rationals.

use std::fmt;

use crate::coeff::GaussianRational as G;

/// Coefficients from low to high degree; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly(Vec<G>);

impl Poly {
    pub fn new(mut c: Vec<G>) -> Self {
        while c.last().map_or(false, |x| x.is_zero()) {
            c.pop();
        }
        Poly(c)
    }

    pub fn zero() -> Self {
        Poly(vec![])
    }

    pub fn constant(c: G) -> Self {
        Poly::new(vec![c])
    }

    pub fn one() -> Self {
        Poly::constant(G::one())
    }

    /// `a*n + b`
    pub fn linear(a: G, b: G) -> Self {
        Poly::new(vec![b, a])
    }

    pub fn n() -> Self {
        Poly::linear(G::one(), G::zero())
    }

    pub fn coeffs(&self) -> &[G] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial reports -1.
    pub fn degree(&self) -> i32 {
        self.0.len() as i32 - 1
    }

    pub fn lead(&self) -> G {
        self.0.last().cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &G) -> G {
        let mut acc = G::zero();
        for c in self.0.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn scale(&self, c: &G) -> Poly {
        Poly::new(self.0.iter().map(|x| x * c).collect())
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * &G::from_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut r = Poly::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    /// p(n + s)
    pub fn shift(&self, s: &G) -> Poly {
        let mut r = Poly::zero();
        let lin = Poly::linear(G::one(), s.clone());
        for c in self.0.iter().rev() {
            r = &(&r * &lin) + &Poly::constant(c.clone());
        }
        r
    }

    /// p(a*n + b)
    pub fn compose_linear(&self, a: &G, b: &G) -> Poly {
        let mut r = Poly::zero();
        let lin = Poly::linear(a.clone(), b.clone());
        for c in self.0.iter().rev() {
            r = &(&r * &lin) + &Poly::constant(c.clone());
        }
        r
    }

    /// Euclidean division: self = q*d + r.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let mut r = self.0.clone();
        let dd = d.degree() as usize;
        let lead_inv = d.lead().inv();
        if self.degree() < d.degree() {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![G::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] * &lead_inv;
            if !c.is_zero() {
                for (j, dc) in d.0.iter().enumerate() {
                    let t = dc * &c;
                    r[i + j] -= &t;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(&self.lead().inv())
    }

    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, c) in self.0.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "n".into(),
                _ => format!("n^{i}"),
            };
            let t = if var.is_empty() {
                c.to_text()
            } else if c.is_one() {
                var
            } else if *c == G::from_int(-1) {
                format!("-{var}")
            } else {
                format!("{}*{var}", c.to_text())
            };
            parts.push(t);
        }
        let mut s = String::new();
        for (i, t) in parts.iter().enumerate() {
            if i == 0 {
                s.push_str(t);
            } else if let Some(rest) = t.strip_prefix('-') {
                s.push('-');
                s.push_str(rest);
            } else {
                s.push('+');
                s.push_str(t);
            }
        }
        s
    }
}

impl<'a> std::ops::Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.0.len().max(o.0.len());
        let mut v = vec![G::zero(); n];
        for (i, c) in self.0.iter().enumerate() {
            v[i] += c;
        }
        for (i, c) in o.0.iter().enumerate() {
            v[i] += c;
        }
        Poly::new(v)
    }
}

impl<'a> std::ops::Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        self + &o.scale(&G::from_int(-1))
    }
}

impl<'a> std::ops::Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![G::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                v[i + j] += &(a * b);
            }
        }
        Poly::new(v)
    }
}

/// Scalar turning `d` into a primitive Gaussian-integer polynomial whose
/// leading coefficient has positive real part and nonnegative imaginary part.
fn integral_normalizer(d: &Poly) -> G {
    use rug::{Integer, Rational};
    let mut l = Integer::from(1);
    for c in &d.0 {
        l = l.lcm(&c.denominator_lcm());
    }
    let mut g = Integer::new();
    for c in &d.0 {
        let s = c * &G::from(l.clone());
        g = g.gcd(s.re.numer()).gcd(s.im.numer());
    }
    let mut k = G::real(Rational::from((l, g)));
    let lead = &d.lead() * &k;
    // rotate by a unit so that re > 0 and im >= 0
    for u in [G::one(), G::i(), G::from_int(-1), -G::i()] {
        let t = &lead * &u;
        if t.re.cmp0().is_gt() && !t.im.cmp0().is_lt() {
            k = &k * &u;
            break;
        }
    }
    k
}

/// `num / den` in lowest terms; the denominator is a normalized primitive
/// Gaussian-integer polynomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RatFunc {
    pub num: Poly,
    pub den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "rational function with zero denominator");
        if num.is_zero() {
            return RatFunc { num, den: Poly::one() };
        }
        let g = Poly::gcd(&num, &den);
        let (n, _) = num.divrem(&g);
        let (d, _) = den.divrem(&g);
        let l = integral_normalizer(&d);
        RatFunc { num: n.scale(&l), den: d.scale(&l) }
    }

    pub fn poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn constant(c: G) -> Self {
        Self::poly(Poly::constant(c))
    }

    pub fn n() -> Self {
        Self::poly(Poly::n())
    }

    pub fn eval(&self, x: &G) -> Option<G> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(&self.num.eval(x) / &d)
        }
    }

    /// deg num - deg den
    pub fn degree_diff(&self) -> i32 {
        self.num.degree() - self.den.degree()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn inv(&self) -> Self {
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn pow(&self, e: i32) -> Self {
        if e < 0 {
            return self.inv().pow(-e);
        }
        RatFunc::new(self.num.pow(e as u32), self.den.pow(e as u32))
    }

    /// R(n + s)
    pub fn shift(&self, s: &G) -> Self {
        RatFunc::new(self.num.shift(s), self.den.shift(s))
    }

    pub fn to_text(&self) -> String {
        let n = self.num.to_text();
        if self.den.degree() == 0 && self.den.lead().is_one() {
            return n;
        }
        let nw = if self.num.0.iter().filter(|c| !c.is_zero()).count() > 1 {
            format!("({n})")
        } else {
            n
        };
        format!("{nw}/({})", self.den.to_text())
    }
}

impl<'a> std::ops::Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl<'a> std::ops::Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&(&self.num * &o.den) - &(&o.num * &self.den), &self.den * &o.den)
    }
}

impl<'a> std::ops::Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        RatFunc::new(&self.num * &o.num, &self.den * &o.den)
    }
}

impl<'a> std::ops::Div<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn div(self, o: &RatFunc) -> RatFunc {
        assert!(!o.is_zero(), "rational function division by zero");
        RatFunc::new(&self.num * &o.den, &self.den * &o.num)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
