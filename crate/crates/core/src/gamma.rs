//! Exact polygamma values at quarter-integer points, Gamma ratios and
//! Beta log-moments.

use std::collections::HashMap;
use std::sync::OnceLock;

use rug::{Float, Integer, Rational};

use crate::atom::Atom;
use crate::atoms;
use crate::ball::{bits_for_digits, BigReal};
use crate::closedform::ClosedForm;
use crate::coeff::GaussianRational as G;
use crate::error::{Error, Result};
use crate::exact::{binomial, factorial};

fn cr(r: Rational) -> ClosedForm {
    ClosedForm::constant(G::real(r))
}

fn rpow(x: &Rational, e: i32) -> Rational {
    x.clone().pow(e)
}

fn q(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}

fn check_den(x: &Rational) -> Result<()> {
    let d = x.denom();
    if *d == 1 || *d == 2 || *d == 4 {
        Ok(())
    } else {
        Err(Error::Semantic(format!("argument {x} must have denominator 1, 2 or 4")))
    }
}

/// Split x into (x0, k) with x0 in (0, 1] and x = x0 + k.
fn reduce_arg(x: &Rational) -> (Rational, i64) {
    let c = Integer::from(x.ceil_ref());
    let k = c.to_i64().unwrap() - 1;
    (Rational::from(x - k), k)
}

fn is_pole(x: &Rational) -> bool {
    *x.denom() == 1 && x.cmp0().is_le()
}

/// zeta(s, x0) for s >= 2 and x0 in {1, 1/2, 1/4, 3/4}.
fn hurwitz_base(s: u32, x0: &Rational) -> ClosedForm {
    let z = ClosedForm::atom(Atom::Zeta(s));
    let two_s = Integer::from(1) << s;
    if *x0 == 1 {
        z
    } else if *x0 == q(1, 2) {
        z.scale(&G::from(two_s - 1u32))
    } else {
        // 4^s ((1 - 2^-s) zeta(s) +- beta(s)) / 2
        let four_s = Integer::from(1) << (2 * s);
        let c = Rational::from(1) - Rational::from((Integer::from(1), two_s));
        let zpart = z.scale(&G::real(c));
        let b = ClosedForm::atom(Atom::Beta(s));
        let inner = if *x0 == q(1, 4) { zpart + b } else { zpart - b };
        inner.scale(&G::real(Rational::from((four_s, 2))))
    }
}

/// digamma at x0 in {1, 1/2, 1/4, 3/4}.
fn digamma_base(x0: &Rational) -> ClosedForm {
    let g = -ClosedForm::atom(Atom::EulerGamma);
    let l = ClosedForm::atom(Atom::Log2);
    let p = ClosedForm::atom(Atom::Pi);
    if *x0 == 1 {
        g
    } else if *x0 == q(1, 2) {
        g - l.scale(&G::from_int(2))
    } else {
        let half_pi = p.scale(&G::from_ratio(1, 2));
        let t = g - l.scale(&G::from_int(3));
        if *x0 == q(1, 4) {
            t - half_pi
        } else {
            t + half_pi
        }
    }
}

fn polygamma_base_formula(j: u32, x0: &Rational) -> ClosedForm {
    if j == 0 {
        return digamma_base(x0);
    }
    // psi^(j)(x) = (-1)^(j+1) j! zeta(j+1, x)
    let f = factorial(j);
    let c = if j % 2 == 1 { f } else { -f };
    hurwitz_base(j + 1, x0).scale(&G::from(c))
}

const TABLE_ORDER: u32 = 6;

/// Numeric value of psi^(j)(x0), computed without the closed forms.
fn polygamma_numeric(j: u32, x0: &Rational, prec: u32) -> BigReal {
    if j == 0 {
        let x = Float::with_val(prec + 16, x0);
        return BigReal::from_rounded(Float::with_val(prec, x.digamma_ref()));
    }
    let h = atoms::hurwitz_em(j + 1, x0, prec);
    let f = factorial(j);
    let c = if j % 2 == 1 { f } else { -f };
    h.mul_rational(&Rational::from(c))
}

fn table() -> &'static HashMap<(u32, (i64, i64)), ClosedForm> {
    static T: OnceLock<HashMap<(u32, (i64, i64)), ClosedForm>> = OnceLock::new();
    T.get_or_init(|| {
        let mut t = HashMap::new();
        let prec = bits_for_digits(30);
        for j in 0..=TABLE_ORDER {
            for x0 in [q(1, 1), q(1, 2), q(1, 4), q(3, 4)] {
                let f = polygamma_base_formula(j, &x0);
                let v = atoms::eval_closedform(&f, 30).expect("atom evaluation");
                let w = polygamma_numeric(j, &x0, prec);
                assert!(
                    v.re.overlaps(&w) && v.re.rad_f64() < 1e-30,
                    "polygamma table entry ({j}, {x0}) failed certification"
                );
                let key = (x0.numer().to_i64().unwrap(), x0.denom().to_i64().unwrap());
                t.insert((j, key), f);
            }
        }
        t
    })
}

fn polygamma_base(j: u32, x0: &Rational) -> ClosedForm {
    if j <= TABLE_ORDER {
        let key = (x0.numer().to_i64().unwrap(), x0.denom().to_i64().unwrap());
        return table()[&(j, key)].clone();
    }
    polygamma_base_formula(j, x0)
}

/// psi^(j)(x) for x with denominator 1, 2 or 4, as an exact closed form.
pub fn polygamma(j: u32, x: &Rational) -> Result<ClosedForm> {
    check_den(x)?;
    if is_pole(x) {
        return Err(Error::PoleInRange(format!("polygamma pole at {x}")));
    }
    let (x0, k) = reduce_arg(x);
    let mut f = polygamma_base(j, &x0);
    // psi^(j)(y+1) = psi^(j)(y) + (-1)^j j! / y^(j+1)
    let jf = Rational::from(factorial(j));
    let sgn = if j % 2 == 0 { 1 } else { -1 };
    let term = |y: &Rational| -> Rational {
        let p = rpow(y, j as i32 + 1);
        Rational::from(&jf / &p) * sgn
    };
    let mut corr = Rational::new();
    if k > 0 {
        for i in 0..k {
            corr += term(&Rational::from(&x0 + i));
        }
    } else {
        for i in 1..=(-k) {
            corr -= term(&Rational::from(&x0 - i));
        }
    }
    f += &cr(corr);
    Ok(f)
}

/// Hurwitz zeta(s, x) for s >= 2 and x with denominator 1, 2 or 4.
pub fn hurwitz(s: u32, x: &Rational) -> Result<ClosedForm> {
    assert!(s >= 2);
    check_den(x)?;
    if is_pole(x) {
        return Err(Error::PoleInRange(format!("Hurwitz zeta pole at {x}")));
    }
    let (x0, k) = reduce_arg(x);
    let mut f = hurwitz_base(s, &x0);
    // zeta(s, y+1) = zeta(s, y) - y^-s
    let mut corr = Rational::new();
    if k > 0 {
        for i in 0..k {
            corr -= rpow(&Rational::from(&x0 + i), -(s as i32));
        }
    } else {
        for i in 1..=(-k) {
            corr += rpow(&Rational::from(&x0 - i), -(s as i32));
        }
    }
    f += &cr(corr);
    Ok(f)
}

/// Gamma(x) for x with denominator 1, 2 or 4, in terms of pi, sqrt2,
/// sqrtpi and gamma14.
pub fn gamma_value(x: &Rational) -> Result<ClosedForm> {
    check_den(x)?;
    if is_pole(x) {
        return Err(Error::PoleInRange(format!("Gamma pole at {x}")));
    }
    let (x0, k) = reduce_arg(x);
    let base = if x0 == 1 {
        ClosedForm::one()
    } else if x0 == q(1, 2) {
        ClosedForm::atom(Atom::SqrtPi)
    } else if x0 == q(1, 4) {
        ClosedForm::atom(Atom::Gamma14)
    } else {
        // Gamma(3/4) = pi sqrt2 / Gamma(1/4)
        ClosedForm::atom(Atom::Pi) * ClosedForm::atom(Atom::Sqrt2) * ClosedForm::atom_pow(Atom::Gamma14, -1)
    };
    let mut c = Rational::from(1);
    if k > 0 {
        for i in 0..k {
            c *= Rational::from(&x0 + i);
        }
    } else {
        for i in 1..=(-k) {
            c /= Rational::from(&x0 - i);
        }
    }
    Ok(base.scale(&G::real(c)))
}

/// B(a, b) = Gamma(a) Gamma(b) / Gamma(a+b).
pub fn beta_function(a: &Rational, b: &Rational) -> Result<ClosedForm> {
    let ga = gamma_value(a)?;
    let gb = gamma_value(b)?;
    let ab = Rational::from(a + b);
    let gab = gamma_value(&ab)?;
    // Gamma(a+b) is a monomial, so its inverse is too
    let (m, c) = gab.terms().next().map(|(m, c)| (m.clone(), c.clone())).unwrap();
    let mut inv = ClosedForm::constant(c.inv());
    for (at, e) in &m.0 {
        inv = inv * ClosedForm::atom_pow(at.clone(), -e);
    }
    Ok(&(&ga * &gb) * &inv)
}

/// int_0^1 t^p (1-t)^q log^n(t) dt, the n-th p-derivative of B(p+1, q+1).
pub fn beta_log_moment(p: &Rational, q_: &Rational, n: u32) -> Result<ClosedForm> {
    check_den(p)?;
    check_den(q_)?;
    if *p <= -1 || *q_ <= -1 {
        return Err(Error::Divergent(format!("beta moment needs p, q > -1, got p={p}, q={q_}")));
    }
    let p1 = Rational::from(p + 1);
    let pq2 = Rational::from(p + q_) + 2;
    let b = beta_function(&p1, &Rational::from(q_ + 1))?;
    // kappa_i = psi^(i-1)(p+1) - psi^(i-1)(p+q+2)
    let mut kappa = Vec::with_capacity(n as usize);
    for i in 1..=n {
        kappa.push(polygamma(i - 1, &p1)? - polygamma(i - 1, &pq2)?);
    }
    // complete Bell polynomials: Y_{m+1} = sum_i C(m,i) Y_{m-i} kappa_{i+1}
    let mut y = vec![ClosedForm::one()];
    for m in 0..n {
        let mut acc = ClosedForm::zero();
        for i in 0..=m {
            let c = G::from(binomial(m, i));
            acc += &(&y[(m - i) as usize] * &kappa[i as usize]).scale(&c);
        }
        y.push(acc);
    }
    Ok(&b * &y[n as usize])
}

/// a_n = binom(2n, n) / 4^n as an exact rational.
pub fn central(n: u64) -> Rational {
    let b = Integer::from(Integer::binomial_u(2 * n as u32, n as u32));
    Rational::from((b, Integer::from(1) << (2 * n as u32)))
}

/// sum_{n >= start} a_n / (d n + j)^m for d in {1, 2, 4} and j > 0, via
/// (-1)^(m-1) / ((m-1)! d^m) * beta_log_moment(j/d - 1, -1/2, m-1).
pub fn base_sum_k1(d: u32, j: i64, m: u32, start: u32) -> Result<ClosedForm> {
    if ![1, 2, 4].contains(&d) {
        return Err(Error::Semantic(format!("d={d} must be 1, 2 or 4")));
    }
    if m == 0 {
        return Err(Error::Divergent("m = 0 gives a divergent sum".into()));
    }
    if j == 0 && start >= 1 {
        // sum_{n>=1} a_n/(d n)^m = d^-m sum_{n>=0} a_n [1/(n+1)^m - 1/(2 (n+1)^(m+1))]
        let a = base_sum_k1(1, 1, m, 0)?;
        let b = base_sum_k1(1, 1, m + 1, 0)?;
        let dm = Rational::from((Integer::from(1), Integer::from(d).pow(m)));
        let mut f = (a - b.scale(&G::from_ratio(1, 2))).scale(&G::real(dm));
        let mut init = Rational::new();
        for n in 1..start as u64 {
            init += central(n) / Integer::from(d as u64 * n).pow(m);
        }
        f -= &cr(init);
        return Ok(f);
    }
    if j <= 0 {
        return Err(Error::PoleInRange(format!("pole at n = {}/{d} for the n >= {start} base sum", -j)));
    }
    let p = Rational::from((j, d as i64)) - 1;
    let blm = beta_log_moment(&p, &q(-1, 2), m - 1)?;
    let mut c = Rational::from((Integer::from(1), factorial(m - 1) * Integer::from(d).pow(m)));
    if m % 2 == 0 {
        c = -c;
    }
    let mut f = blm.scale(&G::real(c));
    let mut init = Rational::new();
    for n in 0..start as u64 {
        let den = Integer::from(d as i64 * n as i64 + j).pow(m);
        init += central(n) / den;
    }
    f -= &cr(init);
    Ok(f)
}

/// sum_{n >= 0} 1 / (d n + j)^m = d^-m zeta(m, j/d) for m >= 2.
pub fn rational_power_sum(d: u32, j: i64, m: u32) -> Result<ClosedForm> {
    let x = Rational::from((j, d as i64));
    let h = hurwitz(m, &x)?;
    Ok(h.scale(&G::real(Rational::from((Integer::from(1), Integer::from(d).pow(m))))))
}

use rug::ops::Pow;
