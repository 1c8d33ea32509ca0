//! Midpoint-radius ("ball") arithmetic on top of MPFR.
//!
//! Every rounding of the midpoint adds one ulp to the radius; radius
//! arithmetic is rounded upward, so the true value always lies in the ball.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Round;
use rug::{Float, Rational};

use crate::coeff::GaussianRational;

const RAD_PREC: u32 = 32;

/// Bits of working precision for a requested number of decimal digits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 32
}

fn rzero() -> Float {
    Float::new(RAD_PREC)
}

fn rup<T>(v: T) -> Float
where
    Float: rug::Assign<T> + rug::ops::AssignRound<T, Round = Round, Ordering = Ordering>,
{
    Float::with_val_round(RAD_PREC, v, Round::Up).0
}

/// Upper bound of |x| in radius precision.
fn abs_up(x: &Float) -> Float {
    rup(&*x.as_abs())
}

/// One unit in the last place of `x` (zero if `x` is zero).
fn ulp(x: &Float) -> Float {
    match x.get_exp() {
        Some(e) if !x.is_zero() => {
            let mut u = Float::with_val(RAD_PREC, 1);
            u <<= e - x.prec() as i32;
            u
        }
        _ => rzero(),
    }
}

#[derive(Clone, Debug)]
pub struct BigReal {
    mid: Float,
    rad: Float,
}

impl BigReal {
    pub fn new(mid: Float, rad: Float) -> Self {
        assert!(!rad.is_sign_negative() || rad.is_zero());
        BigReal { mid, rad: rup(&rad) }
    }

    pub fn zero(prec: u32) -> Self {
        BigReal { mid: Float::new(prec), rad: rzero() }
    }

    /// A value known only to lie in `[mid - rad, mid + rad]`.
    pub fn with_error(mid: Float, rad: f64) -> Self {
        BigReal { mid, rad: rup(rad.abs()) }
    }

    /// Correctly rounded MPFR result: the exact value is within one ulp.
    pub fn from_rounded(mid: Float) -> Self {
        let rad = ulp(&mid);
        BigReal { mid, rad }
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        Self::from_rational(&Rational::from(n), prec)
    }

    pub fn from_rational(r: &Rational, prec: u32) -> Self {
        let (mid, o) = Float::with_val_round(prec, r, Round::Nearest);
        let rad = if o == Ordering::Equal { rzero() } else { ulp(&mid) };
        BigReal { mid, rad }
    }

    pub fn prec(&self) -> u32 {
        self.mid.prec()
    }

    pub fn mid(&self) -> &Float {
        &self.mid
    }

    pub fn rad(&self) -> &Float {
        &self.rad
    }

    pub fn rad_f64(&self) -> f64 {
        self.rad.to_f64()
    }

    pub fn to_f64(&self) -> f64 {
        self.mid.to_f64()
    }

    /// Inflate the radius by `e`.
    pub fn add_error(&mut self, e: &Float) {
        self.rad = rup(&self.rad + &abs_up(e));
    }

    pub fn add_error_f64(&mut self, e: f64) {
        self.rad = rup(&self.rad + e.abs());
    }

    /// Upper bound on |x|.
    pub fn mag(&self) -> Float {
        rup(&abs_up(&self.mid) + &self.rad)
    }

    /// Lower bound on |x| (zero if the ball contains zero).
    pub fn mig(&self) -> Float {
        let a = Float::with_val_round(RAD_PREC, &*self.mid.as_abs(), Round::Down).0;
        let d = Float::with_val_round(RAD_PREC, &a - &self.rad, Round::Down).0;
        if d.is_sign_negative() {
            rzero()
        } else {
            d
        }
    }

    pub fn contains_zero(&self) -> bool {
        self.mig().is_zero()
    }

    /// Whether both balls can contain the same real number.
    pub fn overlaps(&self, o: &BigReal) -> bool {
        let d = rup(Float::with_val(self.prec().max(o.prec()) + 8, &self.mid - &o.mid).abs());
        d <= rup(&self.rad + &o.rad)
    }

    /// Whether `o` lies entirely inside `self`.
    pub fn contains(&self, o: &BigReal) -> bool {
        let d = rup(Float::with_val(self.prec().max(o.prec()) + 8, &self.mid - &o.mid).abs());
        rup(&d + &o.rad) <= self.rad
    }

    /// Base-10 count of certified digits after the point: floor(-log10(rad)).
    pub fn certified_digits(&self) -> i64 {
        if self.rad.is_zero() {
            return i64::MAX;
        }
        let l = self.rad.clone().log10().to_f64();
        (-l).floor() as i64
    }

    /// Decimal rendering truncated to the certified digits (at most `max`).
    pub fn to_decimal(&self, max: u32) -> String {
        // one digit of margin absorbs the final decimal rounding
        let d = (self.certified_digits().saturating_sub(1)).clamp(0, max as i64) as usize;
        fixed_point(&self.mid, d)
    }
}

/// Round `x` to `d` digits after the decimal point.
pub fn fixed_point(x: &Float, d: usize) -> String {
    let p = (d as f64 * std::f64::consts::LOG2_10).ceil() as u32;
    let scaled = Float::with_val(x.prec() + p + 8, x * rug::Integer::from(rug::Integer::u_pow_u(10, d as u32)));
    let n = scaled.to_integer().unwrap_or_default();
    let neg = n.cmp0().is_lt();
    let digits = n.abs().to_string();
    let digits = if digits.len() <= d { format!("{}{}", "0".repeat(d + 1 - digits.len()), digits) } else { digits };
    let (ip, fp) = digits.split_at(digits.len() - d);
    let mut txt = String::new();
    if neg {
        txt.push('-');
    }
    txt.push_str(ip);
    if d > 0 {
        txt.push('.');
        txt.push_str(fp);
    }
    txt
}

impl BigReal {
    pub fn abs(&self) -> BigReal {
        BigReal { mid: self.mid.clone().abs(), rad: self.rad.clone() }
    }

    pub fn sqr(&self) -> BigReal {
        self * self
    }

    pub fn pow_u(&self, mut e: u32) -> BigReal {
        let mut acc = BigReal::from_int(1, self.prec());
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    pub fn powi(&self, e: i32) -> BigReal {
        if e >= 0 {
            self.pow_u(e as u32)
        } else {
            &BigReal::from_int(1, self.prec()) / &self.pow_u(e.unsigned_abs())
        }
    }

    pub fn sqrt(&self) -> BigReal {
        let lo = self.mig();
        assert!(!lo.is_zero() || self.rad.is_zero(), "sqrt of ball touching zero");
        let mid = Float::with_val(self.prec(), self.mid.sqrt_ref());
        // |sqrt(x) - sqrt(m)| <= r / sqrt(m - r)
        let rad = if self.rad.is_zero() {
            ulp(&mid)
        } else {
            let s = Float::with_val_round(RAD_PREC, lo.sqrt_ref(), Round::Down).0;
            rup(&rup(&self.rad / &s) + &ulp(&mid))
        };
        BigReal { mid, rad }
    }

    pub fn mul_rational(&self, r: &Rational) -> BigReal {
        self * &BigReal::from_rational(r, self.prec())
    }

    pub fn mul_i64(&self, n: i64) -> BigReal {
        let mid = Float::with_val(self.prec(), &self.mid * n);
        let rad = rup(&rup(&self.rad * n.unsigned_abs()) + &ulp(&mid));
        BigReal { mid, rad }
    }

    pub fn div_i64(&self, n: i64) -> BigReal {
        let mid = Float::with_val(self.prec(), &self.mid / n);
        let rad = rup(&rup(&self.rad / n.unsigned_abs()) + &ulp(&mid));
        BigReal { mid, rad }
    }

    /// Reset precision (rounding the midpoint).
    pub fn with_prec(&self, prec: u32) -> BigReal {
        let (mid, o) = Float::with_val_round(prec, &self.mid, Round::Nearest);
        let e = if o == Ordering::Equal { rzero() } else { ulp(&mid) };
        BigReal { mid, rad: rup(&self.rad + &e) }
    }
}

impl fmt::Display for BigReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} +/- {:.3e}", self.to_decimal(200), self.rad.to_f64())
    }
}

impl<'a> Add<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn add(self, o: &BigReal) -> BigReal {
        let mid = Float::with_val(self.prec().max(o.prec()), &self.mid + &o.mid);
        let rad = rup(&rup(&self.rad + &o.rad) + &ulp(&mid));
        BigReal { mid, rad }
    }
}

impl<'a> Sub<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn sub(self, o: &BigReal) -> BigReal {
        let mid = Float::with_val(self.prec().max(o.prec()), &self.mid - &o.mid);
        let rad = rup(&rup(&self.rad + &o.rad) + &ulp(&mid));
        BigReal { mid, rad }
    }
}

impl<'a> Mul<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn mul(self, o: &BigReal) -> BigReal {
        let mid = Float::with_val(self.prec().max(o.prec()), &self.mid * &o.mid);
        let a = rup(&abs_up(&self.mid) * &o.rad);
        let b = rup(&abs_up(&o.mid) * &self.rad);
        let c = rup(&self.rad * &o.rad);
        let rad = rup(&rup(&rup(&a + &b) + &c) + &ulp(&mid));
        BigReal { mid, rad }
    }
}

impl<'a> Div<&'a BigReal> for &'a BigReal {
    type Output = BigReal;
    fn div(self, o: &BigReal) -> BigReal {
        let lo = o.mig();
        assert!(!lo.is_zero(), "division by a ball containing zero");
        let mid = Float::with_val(self.prec().max(o.prec()), &self.mid / &o.mid);
        // |a/b - ma/mb| <= (|ma| rb + |mb| ra) / (|mb| (|mb| - rb))
        let num = rup(&rup(&abs_up(&self.mid) * &o.rad) + &rup(&abs_up(&o.mid) * &self.rad));
        let bm = Float::with_val_round(RAD_PREC, &*o.mid.as_abs(), Round::Down).0;
        let den = Float::with_val_round(RAD_PREC, &bm * &lo, Round::Down).0;
        let rad = rup(&rup(&num / &den) + &ulp(&mid));
        BigReal { mid, rad }
    }
}

impl Neg for &BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        BigReal { mid: Float::with_val(self.prec(), -&self.mid), rad: self.rad.clone() }
    }
}

macro_rules! owned_ops {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { (&self).$m(&o) }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, o: &$t) -> $t { (&self).$m(o) }
        }
    )*};
}
owned_ops!(BigReal, Add add, Sub sub, Mul mul, Div div);

impl Neg for BigReal {
    type Output = BigReal;
    fn neg(self) -> BigReal {
        -&self
    }
}

/// Complex ball as a pair of real balls.
#[derive(Clone, Debug)]
pub struct BigComplex {
    pub re: BigReal,
    pub im: BigReal,
}

impl BigComplex {
    pub fn new(re: BigReal, im: BigReal) -> Self {
        BigComplex { re, im }
    }

    pub fn real(re: BigReal) -> Self {
        let p = re.prec();
        BigComplex { re, im: BigReal::zero(p) }
    }

    pub fn zero(prec: u32) -> Self {
        BigComplex::real(BigReal::zero(prec))
    }

    pub fn from_int(n: i64, prec: u32) -> Self {
        BigComplex::real(BigReal::from_int(n, prec))
    }

    pub fn from_gaussian(g: &GaussianRational, prec: u32) -> Self {
        BigComplex {
            re: BigReal::from_rational(&g.re, prec),
            im: BigReal::from_rational(&g.im, prec),
        }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    pub fn conj(&self) -> Self {
        BigComplex { re: self.re.clone(), im: -&self.im }
    }

    pub fn scale(&self, r: &BigReal) -> Self {
        BigComplex { re: &self.re * r, im: &self.im * r }
    }

    pub fn mul_gaussian(&self, g: &GaussianRational) -> Self {
        self * &BigComplex::from_gaussian(g, self.prec())
    }

    pub fn norm_sqr(&self) -> BigReal {
        &self.re.sqr() + &self.im.sqr()
    }

    /// Larger of the two component radii.
    pub fn rad_f64(&self) -> f64 {
        self.re.rad_f64().max(self.im.rad_f64())
    }

    /// Upper bound of |z| in f64.
    pub fn mag_f64(&self) -> f64 {
        let a = self.re.mag().to_f64();
        let b = self.im.mag().to_f64();
        (a * a + b * b).sqrt()
    }

    pub fn overlaps(&self, o: &BigComplex) -> bool {
        self.re.overlaps(&o.re) && self.im.overlaps(&o.im)
    }

    pub fn pow_u(&self, mut e: u32) -> BigComplex {
        let mut acc = BigComplex::from_int(1, self.prec());
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &b;
            }
            e >>= 1;
            if e > 0 {
                b = &b * &b;
            }
        }
        acc
    }

    pub fn to_text(&self, max_digits: u32) -> String {
        let re = self.re.to_decimal(max_digits);
        if self.im.mid().is_zero() && self.im.rad().is_zero() {
            return re;
        }
        let im = self.im.to_decimal(max_digits);
        if let Some(s) = im.strip_prefix('-') {
            format!("{re} - {s}i")
        } else {
            format!("{re} + {im}i")
        }
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, o: &BigComplex) -> BigComplex {
        BigComplex { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, o: &BigComplex) -> BigComplex {
        BigComplex { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, o: &BigComplex) -> BigComplex {
        BigComplex {
            re: &(&self.re * &o.re) - &(&self.im * &o.im),
            im: &(&self.re * &o.im) + &(&self.im * &o.re),
        }
    }
}

impl<'a> Div<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn div(self, o: &BigComplex) -> BigComplex {
        let n = o.norm_sqr();
        let t = self * &o.conj();
        BigComplex { re: &t.re / &n, im: &t.im / &n }
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex { re: -&self.re, im: -&self.im }
    }
}

owned_ops!(BigComplex, Add add, Sub sub, Mul mul, Div div);

/// `x^y` for a positive real ball and rational exponent (used for prefactors).
pub fn pow_rational(x: &BigReal, e: &Rational) -> BigReal {
    let prec = x.prec();
    let lnx = Float::with_val(prec + 16, x.mid().ln_ref());
    let ef = Float::with_val(prec + 16, e);
    let mid = Float::with_val(prec, (lnx * ef).exp());
    // relative error of the input propagates with factor |e|
    let rel = x.rad().to_f64() / x.mig().to_f64().max(f64::MIN_POSITIVE);
    let mut b = BigReal::from_rounded(mid);
    let extra = Float::with_val(RAD_PREC, b.mag()) * (rel * e.to_f64().abs() * 1.01);
    b.add_error(&extra);
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_enclosure() {
        let p = 128;
        let third = BigReal::from_rational(&Rational::from((1, 3)), p);
        let one = &(&third + &third) + &third;
        assert!(one.overlaps(&BigReal::from_int(1, p)));
        let q = &BigReal::from_int(1, p) / &BigReal::from_int(3, p);
        assert!(q.overlaps(&third));
        assert!(q.rad_f64() < 1e-35);
    }

    #[test]
    fn complex_division() {
        let p = 128;
        let a = BigComplex::from_gaussian(&GaussianRational::new(Rational::from(1), Rational::from(2)), p);
        let b = BigComplex::from_gaussian(&GaussianRational::new(Rational::from(3), Rational::from(-1)), p);
        let q = &(&a / &b) * &b;
        assert!(q.overlaps(&a));
    }

    #[test]
    fn decimal_truncates_to_certified() {
        let mut x = BigReal::from_rational(&Rational::from((1, 7)), 200);
        x.add_error_f64(1e-10);
        let s = x.to_decimal(40);
        assert_eq!(s, "0.142857143");
    }
}
