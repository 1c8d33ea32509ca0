//! Exact Gaussian rationals `a + b i` with `a, b` rational.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::{Integer, Rational};

/// An exact complex number with rational real and imaginary parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn i() -> Self {
        GaussianRational::new(Rational::new(), Rational::from(1))
    }

    pub fn from_int(n: i64) -> Self {
        GaussianRational::new(Rational::from(n), Rational::new())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        GaussianRational::new(Rational::from((num, den)), Rational::new())
    }

    pub fn real(r: Rational) -> Self {
        GaussianRational::new(r, Rational::new())
    }

    pub fn is_zero(&self) -> bool {
        self.re.cmp0().is_eq() && self.im.cmp0().is_eq()
    }

    pub fn is_one(&self) -> bool {
        self.im.cmp0().is_eq() && self.re == 1
    }

    pub fn is_real(&self) -> bool {
        self.im.cmp0().is_eq()
    }

    /// Real rational value, if the imaginary part vanishes.
    pub fn as_real(&self) -> Option<&Rational> {
        self.is_real().then_some(&self.re)
    }

    /// Integer value, if this is a real integer.
    pub fn as_integer(&self) -> Option<Integer> {
        if self.is_real() && *self.re.denom() == 1 {
            Some(self.re.numer().clone())
        } else {
            None
        }
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn norm_sqr(&self) -> Rational {
        Rational::from(&self.re * &self.re) + Rational::from(&self.im * &self.im)
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero Gaussian rational");
        let n = self.norm_sqr();
        GaussianRational::new(
            Rational::from(&self.re / &n),
            -Rational::from(&self.im / &n),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn powi(&self, e: i32) -> Self {
        if e >= 0 {
            self.pow(e as u32)
        } else {
            self.pow(e.unsigned_abs()).inv()
        }
    }

    /// Least common multiple of the denominators of both parts.
    pub fn denominator_lcm(&self) -> Integer {
        self.re.denom().clone().lcm(self.im.denom())
    }

    /// Render as it appears inside a closed form or a parameter list.
    /// Purely real values print as a plain rational; others as `(a+bi)`.
    pub fn to_text(&self) -> String {
        if self.is_real() {
            rational_text(&self.re)
        } else {
            format!("({})", self.bare_text())
        }
    }

    /// Render without surrounding parentheses, e.g. `1/2+3i`, `-i`, `2-1/3i`.
    pub fn bare_text(&self) -> String {
        if self.is_real() {
            return rational_text(&self.re);
        }
        let im_abs = Rational::from(self.im.abs_ref());
        let im_part = if im_abs == 1 {
            "i".to_string()
        } else {
            format!("{}i", rational_text(&im_abs))
        };
        let neg = self.im.cmp0().is_lt();
        if self.re.cmp0().is_eq() {
            if neg {
                format!("-{im_part}")
            } else {
                im_part
            }
        } else {
            format!(
                "{}{}{}",
                rational_text(&self.re),
                if neg { "-" } else { "+" },
                im_part
            )
        }
    }
}

pub(crate) fn rational_text(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.bare_text())
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<Rational> for GaussianRational {
    fn from(r: Rational) -> Self {
        Self::real(r)
    }
}

impl From<Integer> for GaussianRational {
    fn from(n: Integer) -> Self {
        Self::real(Rational::from(n))
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            Rational::from(&self.re + &o.re),
            Rational::from(&self.im + &o.im),
        )
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            Rational::from(&self.re - &o.re),
            Rational::from(&self.im - &o.im),
        )
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.is_real() && o.is_real() {
            return GaussianRational::real(Rational::from(&self.re * &o.re));
        }
        let re = Rational::from(&self.re * &o.re) - Rational::from(&self.im * &o.im);
        let im = Rational::from(&self.re * &o.im) + Rational::from(&self.im * &o.re);
        GaussianRational::new(re, im)
    }
}

impl<'a> Div<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, o: &GaussianRational) -> GaussianRational {
        if o.is_real() {
            assert!(!o.is_zero(), "division by zero Gaussian rational");
            return GaussianRational::new(
                Rational::from(&self.re / &o.re),
                Rational::from(&self.im / &o.re),
            );
        }
        self * &o.inv()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: GaussianRational) -> GaussianRational {
                (&self).$m(&o)
            }
        }
        impl<'a> $tr<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $m(self, o: &GaussianRational) -> GaussianRational {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -self.clone()
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, o: &GaussianRational) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, o: &GaussianRational) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, o: &GaussianRational) {
        *self = &*self * o;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_operations_are_exact() {
        let a = GaussianRational::new(Rational::from((1, 2)), Rational::from((3, 4)));
        let b = GaussianRational::new(Rational::from((-2, 3)), Rational::from(5));
        let q = &a / &b;
        assert_eq!(&q * &b, a);
        assert_eq!(&(&a + &b) - &b, a);
        assert_eq!((&a * &a.inv()), GaussianRational::one());
        assert_eq!(&GaussianRational::i() * &GaussianRational::i(), GaussianRational::from_int(-1));
    }

    #[test]
    fn text_forms() {
        assert_eq!(GaussianRational::from_ratio(-3, 6).to_text(), "-1/2");
        assert_eq!(GaussianRational::i().bare_text(), "i");
        assert_eq!((-GaussianRational::i()).bare_text(), "-i");
        let z = GaussianRational::new(Rational::from((49, 150)), Rational::from((-343, 3600)));
        assert_eq!(z.to_text(), "(49/150-343/3600i)");
    }
}
