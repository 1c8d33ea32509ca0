//! Finite linear combinations of atom monomials with Gaussian-rational coefficients.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rug::{Integer, Rational};

use crate::atom::Atom;
use crate::coeff::GaussianRational;
use crate::exact;

/// Product of atom powers. Only weight-0 atoms carry negative exponents
/// once canonical.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(pub BTreeMap<Atom, i32>);

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    pub fn atom(a: Atom) -> Self {
        Self::atom_pow(a, 1)
    }

    pub fn atom_pow(a: Atom, e: i32) -> Self {
        let mut m = BTreeMap::new();
        if e != 0 {
            m.insert(a, e);
        }
        Monomial(m)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> i32 {
        self.0.iter().map(|(a, e)| a.weight() * e).sum()
    }

    pub fn exponent(&self, a: &Atom) -> i32 {
        self.0.get(a).copied().unwrap_or(0)
    }

    /// Raw product without folding.
    fn mul_raw(&self, o: &Monomial) -> Monomial {
        let mut m = self.0.clone();
        for (a, e) in &o.0 {
            let v = m.entry(a.clone()).or_insert(0);
            *v += e;
            if *v == 0 {
                m.remove(a);
            }
        }
        Monomial(m)
    }

    /// Fold `pi`/`sqrtpi` and `sqrt2` powers into canonical shape; returns the
    /// rational factor pulled out of `sqrt2^2 = 2`.
    fn fold(mut self) -> (Rational, Monomial) {
        let h = 2 * self.0.remove(&Atom::Pi).unwrap_or(0) + self.0.remove(&Atom::SqrtPi).unwrap_or(0);
        if h >= 0 {
            if h / 2 != 0 {
                self.0.insert(Atom::Pi, h / 2);
            }
            if h % 2 != 0 {
                self.0.insert(Atom::SqrtPi, 1);
            }
        } else {
            self.0.insert(Atom::SqrtPi, h);
        }
        let mut factor = Rational::from(1);
        if let Some(e) = self.0.remove(&Atom::Sqrt2) {
            let q = e.div_euclid(2);
            let r = e.rem_euclid(2);
            if q >= 0 {
                factor = Rational::from(Integer::from(1) << q as u32);
            } else {
                factor = Rational::from((Integer::from(1), Integer::from(1) << (-q) as u32));
            }
            if r != 0 {
                self.0.insert(Atom::Sqrt2, r);
            }
        }
        (factor, self)
    }

    pub fn text(&self) -> String {
        self.0
            .iter()
            .map(|(a, e)| {
                if *e == 1 {
                    a.text()
                } else {
                    format!("{}^{}", a.text(), e)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Exact rewrite of an alias atom into canonical atoms, if one exists.
fn rewrite(a: &Atom) -> Option<ClosedForm> {
    let q = |n: i64, d: i64| GaussianRational::from_ratio(n, d);
    let pi_pow = |c: Rational, e: i32| ClosedForm::monomial(GaussianRational::real(c), Monomial::atom_pow(Atom::Pi, e));
    let mono = |c: GaussianRational, atoms: &[(Atom, i32)]| {
        let mut m = Monomial::one();
        for (a, e) in atoms {
            m = m.mul_raw(&Monomial::atom_pow(a.clone(), *e));
        }
        ClosedForm::monomial(c, m)
    };
    Some(match a {
        Atom::Zeta(n) if n % 2 == 0 => pi_pow(exact::zeta_even_over_pi(*n), *n as i32),
        Atom::Beta(n) if n % 2 == 1 => pi_pow(exact::beta_odd_over_pi(*n), *n as i32),
        Atom::Hurwitz4(o) => {
            let sign = if *o == 1 { 128 } else { -128 };
            mono(q(4, 3), &[(Atom::Pi, 4)]) + mono(q(sign, 1), &[(Atom::Beta(4), 1)])
        }
        Atom::LiHalf(1) => ClosedForm::atom(Atom::Log2),
        Atom::LiHalf(2) => mono(q(1, 12), &[(Atom::Pi, 2)]) + mono(q(-1, 2), &[(Atom::Log2, 2)]),
        Atom::LiHalf(3) => {
            mono(q(7, 8), &[(Atom::Zeta(3), 1)])
                + mono(q(-1, 12), &[(Atom::Pi, 2), (Atom::Log2, 1)])
                + mono(q(1, 6), &[(Atom::Log2, 3)])
        }
        Atom::ImLiHalfI(1) => mono(q(1, 4), &[(Atom::Pi, 1)]),
        Atom::ImLiHalfI(2) => {
            ClosedForm::atom(Atom::Beta(2)) + mono(q(-1, 8), &[(Atom::Pi, 1), (Atom::Log2, 1)])
        }
        Atom::Mz { s, signs } if s.len() == 1 => {
            let n = s[0];
            if signs[0] == 1 {
                ClosedForm::atom(Atom::Zeta(n))
            } else if n == 1 {
                mono(q(-1, 1), &[(Atom::Log2, 1)])
            } else {
                // sum (-1)^n / n^s = -(1 - 2^(1-s)) zeta(s)
                let c = Rational::from((Integer::from(1), Integer::from(1) << (n - 1))) - 1u32;
                ClosedForm::monomial(GaussianRational::real(c), Monomial::atom(Atom::Zeta(n)))
            }
        }
        _ => return None,
    })
}

/// Expand a raw monomial into canonical form.
fn canon_monomial(m: &Monomial) -> ClosedForm {
    for (a, e) in &m.0 {
        if let Some(r) = rewrite(a) {
            assert!(*e > 0, "negative power of non-prefactor atom {}", a.text());
            let mut rest = m.0.clone();
            rest.remove(a);
            let rest = canon_monomial(&Monomial(rest));
            // rewrite results are already canonical
            let r = r.canonical();
            return &rest * &r.pow(*e as u32);
        }
    }
    let (f, mm) = m.clone().fold();
    ClosedForm::monomial_raw(GaussianRational::real(f), mm)
}

/// A canonical sum of coefficient times monomial.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct ClosedForm {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl ClosedForm {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::monomial_raw(c, Monomial::one())
    }

    pub fn rational(n: i64, d: i64) -> Self {
        Self::constant(GaussianRational::from_ratio(n, d))
    }

    pub fn atom(a: Atom) -> Self {
        Self::monomial(GaussianRational::one(), Monomial::atom(a))
    }

    pub fn atom_pow(a: Atom, e: i32) -> Self {
        Self::monomial(GaussianRational::one(), Monomial::atom_pow(a, e))
    }

    /// Canonicalizing constructor.
    pub fn monomial(c: GaussianRational, m: Monomial) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        canon_monomial(&m).scale(&c)
    }

    fn monomial_raw(c: GaussianRational, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        ClosedForm { terms }
    }

    fn canonical(self) -> Self {
        let mut out = ClosedForm::zero();
        for (m, c) in self.terms {
            out += &ClosedForm::monomial(c, m);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &GaussianRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Constant term, if the form is a pure number.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        match self.terms.len() {
            0 => Some(GaussianRational::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn weight(&self) -> i32 {
        self.terms.keys().map(|m| m.weight()).max().unwrap_or(0)
    }

    pub fn atoms(&self) -> BTreeSet<Atom> {
        self.terms.keys().flat_map(|m| m.0.keys().cloned()).collect()
    }

    pub fn contains_atom(&self, a: &Atom) -> bool {
        self.terms.keys().any(|m| m.0.contains_key(a))
    }

    /// True if no alias atoms (Euler gamma, Hurwitz, even zeta, ...) remain.
    pub fn is_canonical_output(&self) -> bool {
        self.atoms()
            .iter()
            .all(|a| *a != Atom::EulerGamma && rewrite(a).is_none())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        ClosedForm {
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Complex conjugate of the coefficients.
    pub fn conj(&self) -> Self {
        ClosedForm {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c.conj())).collect(),
        }
    }

    fn add_term(&mut self, m: &Monomial, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        let remove = match self.terms.get_mut(m) {
            Some(x) => {
                *x += c;
                x.is_zero()
            }
            None => {
                self.terms.insert(m.clone(), c.clone());
                false
            }
        };
        if remove {
            self.terms.remove(m);
        }
    }

    pub fn to_text(&self) -> String {
        render(self.terms.iter().map(|(m, c)| (c.clone(), m.text())).collect())
    }

    /// Render with beta(4) expressed through the Hurwitz pair
    /// beta(4) = (hzeta(4,1/4) - hzeta(4,3/4)) / 256.
    pub fn to_text_hurwitz(&self) -> String {
        let mut out = Vec::new();
        for (m, c) in &self.terms {
            if m.exponent(&Atom::Beta(4)) == 1 {
                let mut rest = m.0.clone();
                rest.remove(&Atom::Beta(4));
                for (off, sign) in [(1u8, 1i64), (3, -1)] {
                    let mut mm = rest.clone();
                    mm.insert(Atom::Hurwitz4(off), 1);
                    out.push((c * &GaussianRational::from_ratio(sign, 256), Monomial(mm).text()));
                }
            } else {
                out.push((c.clone(), m.text()));
            }
        }
        render(out)
    }
}

fn render(terms: Vec<(GaussianRational, String)>) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    let mut s = String::new();
    for (i, (c, m)) in terms.iter().enumerate() {
        let t = if m.is_empty() {
            c.to_text()
        } else if c.is_one() {
            m.clone()
        } else if *c == GaussianRational::from_int(-1) {
            format!("-{m}")
        } else {
            format!("{}*{m}", c.to_text())
        };
        if i == 0 {
            s.push_str(&t);
        } else if let Some(rest) = t.strip_prefix('-') {
            s.push_str(" - ");
            s.push_str(rest);
        } else {
            s.push_str(" + ");
            s.push_str(&t);
        }
    }
    s
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl std::ops::AddAssign<&ClosedForm> for ClosedForm {
    fn add_assign(&mut self, o: &ClosedForm) {
        for (m, c) in &o.terms {
            self.add_term(m, c);
        }
    }
}

impl std::ops::SubAssign<&ClosedForm> for ClosedForm {
    fn sub_assign(&mut self, o: &ClosedForm) {
        for (m, c) in &o.terms {
            self.add_term(m, &-c);
        }
    }
}

impl std::ops::Add for ClosedForm {
    type Output = ClosedForm;
    fn add(mut self, o: ClosedForm) -> ClosedForm {
        self += &o;
        self
    }
}

impl std::ops::Sub for ClosedForm {
    type Output = ClosedForm;
    fn sub(mut self, o: ClosedForm) -> ClosedForm {
        self -= &o;
        self
    }
}

impl<'a> std::ops::Add<&'a ClosedForm> for &'a ClosedForm {
    type Output = ClosedForm;
    fn add(self, o: &ClosedForm) -> ClosedForm {
        let mut r = self.clone();
        r += o;
        r
    }
}

impl<'a> std::ops::Sub<&'a ClosedForm> for &'a ClosedForm {
    type Output = ClosedForm;
    fn sub(self, o: &ClosedForm) -> ClosedForm {
        let mut r = self.clone();
        r -= o;
        r
    }
}

impl std::ops::Neg for ClosedForm {
    type Output = ClosedForm;
    fn neg(self) -> ClosedForm {
        self.scale(&GaussianRational::from_int(-1))
    }
}

impl<'a> std::ops::Mul<&'a ClosedForm> for &'a ClosedForm {
    type Output = ClosedForm;
    fn mul(self, o: &ClosedForm) -> ClosedForm {
        let mut out = ClosedForm::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &o.terms {
                let (f, m) = ma.mul_raw(mb).fold();
                let c = &(ca * cb) * &GaussianRational::real(f);
                out.add_term(&m, &c);
            }
        }
        out
    }
}

impl std::ops::Mul for ClosedForm {
    type Output = ClosedForm;
    fn mul(self, o: ClosedForm) -> ClosedForm {
        &self * &o
    }
}

impl From<GaussianRational> for ClosedForm {
    fn from(c: GaussianRational) -> Self {
        ClosedForm::constant(c)
    }
}

impl From<Atom> for ClosedForm {
    fn from(a: Atom) -> Self {
        ClosedForm::atom(a)
    }
}
