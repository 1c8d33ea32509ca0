//! Small exact number-theory helpers.

use std::sync::Mutex;

use rug::{Integer, Rational};

pub fn factorial(n: u32) -> Integer {
    Integer::from(Integer::factorial(n))
}

pub fn binomial(n: u32, k: u32) -> Integer {
    Integer::from(Integer::binomial_u(n, k))
}

static BERNOULLI: Mutex<Vec<Rational>> = Mutex::new(Vec::new());

/// Bernoulli numbers B_0..=B_n with B_1 = -1/2.
pub fn bernoulli_upto(n: u32) -> Vec<Rational> {
    let mut t = BERNOULLI.lock().unwrap();
    if t.is_empty() {
        t.push(Rational::from(1));
    }
    while t.len() <= n as usize {
        // sum_{k=0}^{m} C(m+1, k) B_k = 0
        let m = t.len() as u32;
        let mut s = Rational::new();
        for (k, b) in t.iter().enumerate() {
            if k > 1 && k % 2 == 1 {
                continue;
            }
            s += Rational::from(binomial(m + 1, k as u32) * b);
        }
        t.push(-s / (m + 1));
    }
    t[..=n as usize].to_vec()
}

/// Bernoulli number B_n with B_1 = -1/2.
pub fn bernoulli(n: u32) -> Rational {
    let t = bernoulli_upto(n);
    t[n as usize].clone()
}

/// zeta(-m) for m >= 0, exact.
pub fn zeta_nonpositive(m: u32) -> Rational {
    // zeta(-m) = (-1)^m B_{m+1} / (m+1)
    let b = bernoulli(m + 1) / (m + 1);
    if m % 2 == 1 {
        -b
    } else {
        b
    }
}

/// Euler (secant) number E_n: E_0 = 1, E_2 = -1, E_4 = 5, odd ones vanish.
pub fn euler_number(n: u32) -> Integer {
    if n % 2 == 1 {
        return Integer::new();
    }
    let k = n / 2;
    let mut e: Vec<Integer> = vec![Integer::from(1)];
    for kk in 1..=k {
        let mut s = Integer::new();
        for j in 0..kk {
            s += binomial(2 * kk, 2 * j) * &e[j as usize];
        }
        e.push(-s);
    }
    e[k as usize].clone()
}

/// zeta(2n) / pi^(2n) as an exact rational.
pub fn zeta_even_over_pi(two_n: u32) -> Rational {
    assert!(two_n >= 2 && two_n % 2 == 0);
    let n = two_n / 2;
    let b = bernoulli(two_n);
    let mut r = b * Integer::from(Integer::u_pow_u(2, two_n));
    r /= factorial(two_n) * 2u32;
    if n % 2 == 0 {
        -r
    } else {
        r
    }
}

/// beta(2k+1) / pi^(2k+1) as an exact rational.
pub fn beta_odd_over_pi(two_k_plus_1: u32) -> Rational {
    assert!(two_k_plus_1 % 2 == 1);
    let k = two_k_plus_1 / 2;
    let e = euler_number(2 * k);
    let mut r = Rational::from(e);
    r /= Integer::from(Integer::u_pow_u(4, k + 1)) * factorial(2 * k);
    if k % 2 == 1 {
        -r
    } else {
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_values() {
        assert_eq!(bernoulli(1), Rational::from((-1, 2)));
        assert_eq!(bernoulli(12), Rational::from((-691, 2730)));
        assert_eq!(euler_number(6), -61);
        assert_eq!(zeta_nonpositive(0), Rational::from((-1, 2)));
        assert_eq!(zeta_nonpositive(1), Rational::from((-1, 12)));
        assert_eq!(zeta_nonpositive(2), Rational::new());
        assert_eq!(zeta_even_over_pi(2), Rational::from((1, 6)));
        assert_eq!(zeta_even_over_pi(4), Rational::from((1, 90)));
        assert_eq!(zeta_even_over_pi(8), Rational::from((1, 9450)));
        assert_eq!(beta_odd_over_pi(1), Rational::from((1, 4)));
        assert_eq!(beta_odd_over_pi(3), Rational::from((1, 32)));
        assert_eq!(beta_odd_over_pi(5), Rational::from((5, 1536)));
    }
}
