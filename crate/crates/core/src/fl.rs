//! Numeric Fourier-Legendre toolkit on [0, 1] in shifted Legendre
//! polynomials P_n(2x-1): coefficient extraction, the lift
//! f -> int_0^x f(t)/t dt, Dixon-type weight expansions and the
//! Parseval pairing check. Double precision throughout.

use crate::atom::Atom;
use crate::atoms::eval_atom;
use crate::exact::zeta_nonpositive;

/// P_n(2x - 1)
pub fn legendre_shifted(n: usize, x: f64) -> f64 {
    let t = 2.0 * x - 1.0;
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return p0;
    }
    for k in 1..n {
        let p2 = ((2 * k + 1) as f64 * t * p1 - k as f64 * p0) / (k + 1) as f64;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Gauss-Legendre rule on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(m: usize) -> Self {
        let mut nodes = vec![0.0; m];
        let mut weights = vec![0.0; m];
        for i in 0..m.div_ceil(2) {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (m as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 1..m {
                    let p2 = ((2 * k + 1) as f64 * x * p1 - k as f64 * p0) / (k + 1) as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = m as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            nodes[i] = -x;
            nodes[m - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[m - 1 - i] = w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn apply(&self, f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        self.apply_abs(f, a, b).0
    }

    /// The rule applied to f and to |f|.
    pub fn apply_abs(&self, f: &dyn Fn(f64) -> f64, a: f64, b: f64) -> (f64, f64) {
        let (h, c) = ((b - a) / 2.0, (b + a) / 2.0);
        let (mut s, mut t) = (0.0, 0.0);
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = w * f(c + h * x);
            s += v;
            t += v.abs();
        }
        (s * h, t * h.abs())
    }
}

/// Adaptive bisection on a fixed Gauss-Legendre rule.
pub fn integrate(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    thread_local! {
        static RULE: GaussLegendre = GaussLegendre::new(30);
    }
    RULE.with(|g| adapt(g, f, a, b, g.apply(f, a, b), tol, 0))
}

fn adapt(g: &GaussLegendre, f: &dyn Fn(f64) -> f64, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = (a + b) / 2.0;
    let ((l, la), (r, ra)) = (g.apply_abs(f, a, m), g.apply_abs(f, m, b));
    if !(l + r).is_finite() {
        // nodes rounded onto an integrable endpoint singularity
        return if b - a < 1e-12 { 0.0 } else { adapt(g, f, a, m, f64::NAN, tol, depth + 1) + adapt(g, f, m, b, f64::NAN, tol, depth + 1) };
    }
    let floor = 64.0 * f64::EPSILON * (la + ra);
    if (l + r - whole).abs() <= tol.max(floor) || depth >= 30 {
        return l + r;
    }
    adapt(g, f, a, m, l, tol / 2.0, depth + 1) + adapt(g, f, m, b, r, tol / 2.0, depth + 1)
}

/// zeta(s) for s >= 2.
pub fn zeta_f64(s: u32) -> f64 {
    static TABLE: std::sync::OnceLock<Vec<f64>> = std::sync::OnceLock::new();
    let t = TABLE.get_or_init(|| {
        (0..16u32)
            .map(|j| if j < 2 { f64::NAN } else { eval_atom(&Atom::Zeta(j), 20).expect("zeta value").to_f64() })
            .collect()
    });
    match t.get(s as usize) {
        Some(v) => *v,
        None => eval_atom(&Atom::Zeta(s), 20).expect("zeta value").to_f64(),
    }
}

/// Li_s(x) for 0 <= x <= 1 (x < 1 when s = 1).
pub fn polylog(s: u32, x: f64) -> f64 {
    if s == 1 {
        return -(-x).ln_1p();
    }
    if x <= 0.5 {
        let (mut acc, mut p) = (0.0, x);
        for k in 1..200 {
            let t = p / (k as f64).powi(s as i32);
            acc += t;
            if t.abs() < 1e-18 {
                break;
            }
            p *= x;
        }
        return acc;
    }
    // Li_s(e^mu) = sum_{k != s-1} zeta(s-k) mu^k/k! + mu^(s-1)/(s-1)! (H_{s-1} - log(-mu))
    static NEG: std::sync::OnceLock<Vec<f64>> = std::sync::OnceLock::new();
    let neg = NEG.get_or_init(|| (0..64).map(|m| zeta_nonpositive(m).to_f64()).collect());
    let mu = x.ln();
    let mut acc = 0.0;
    let mut pk = 1.0; // mu^k / k!
    for k in 0..60u32 {
        if k > 0 {
            pk *= mu / k as f64;
        }
        if k + 1 == s {
            let h: f64 = (1..s).map(|j| 1.0 / j as f64).sum();
            let lg = if mu == 0.0 { 0.0 } else { (-mu).ln() };
            acc += pk * (h - lg);
            continue;
        }
        let z = if k + 2 <= s { zeta_f64(s - k) } else { neg[(k - s) as usize] };
        acc += z * pk;
    }
    acc
}

/// Finite prefix c_0..c_{N-1} of a Fourier-Legendre expansion.
#[derive(Clone, Debug)]
pub struct FLSeries {
    pub tag: String,
    pub coeffs: Vec<f64>,
}

impl FLSeries {
    pub fn eval(&self, x: f64) -> f64 {
        self.coeffs.iter().enumerate().map(|(n, c)| c * legendre_shifted(n, x)).sum()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// c_n = (2n+1) int_0^1 f(x) P_n(2x-1) dx for n < count.
pub fn fl_coefficients(f: &dyn Fn(f64) -> f64, count: usize, tag: &str) -> FLSeries {
    let coeffs = (0..count)
        .map(|n| (2 * n + 1) as f64 * integrate(&|x| f(x) * legendre_shifted(n, x), 0.0, 1.0, 1e-17))
        .collect();
    FLSeries { tag: tag.into(), coeffs }
}

/// Partial sums before averaging, and averaging rounds, for alternating tails.
const TAIL_SPAN: usize = 30;
const TAIL_ROUNDS: usize = 30;

/// Terms the tail accelerator reads beyond its start index.
pub const TAIL_WINDOW: usize = TAIL_SPAN + TAIL_ROUNDS + 1;

/// sum_{k >= n} t_k for an alternating sequence with smooth magnitude,
/// by repeated averaging of partial sums. Reads t[n .. n + TAIL_WINDOW].
pub fn alt_tail(t: &dyn Fn(usize) -> f64, n: usize) -> f64 {
    let mut s = 0.0;
    let mut sums = Vec::with_capacity(TAIL_ROUNDS + 1);
    for k in n..n + TAIL_WINDOW {
        s += t(k);
        if k >= n + TAIL_SPAN {
            sums.push(s);
        }
    }
    while sums.len() > 1 {
        sums = sums.windows(2).map(|w| (w[0] + w[1]) / 2.0).collect();
    }
    sums[0]
}

/// Coefficients of int_0^x f(t)/t dt, with `boundary` = int_0^1 f(t)(1-t)/t dt
/// as the constant term. The output is shorter than the input by the tail window.
pub fn fl_lift(f: &FLSeries, boundary: f64) -> FLSeries {
    let sgn = |k: usize| if k % 2 == 0 { 1.0 } else { -1.0 };
    let c = &f.coeffs;
    let out_len = c.len().saturating_sub(TAIL_WINDOW).max(1);
    let mut coeffs = vec![boundary];
    for n in 1..out_len {
        let tail = alt_tail(&|k| sgn(k) * c[k], n);
        let nf = n as f64;
        coeffs.push(sgn(n) * (1.0 / nf + 1.0 / (nf + 1.0)) * tail - c[n] / (nf + 1.0));
    }
    FLSeries { tag: format!("lift({})", f.tag), coeffs }
}

/// int_0^1 Li_s(t)(1-t)/t dt = zeta(s+1) - sum_{j=2}^s (-1)^(s-j) zeta(j) - (-1)^(s-1).
pub fn polylog_boundary(s: u32) -> f64 {
    let mut v = zeta_f64(s + 1);
    for j in 2..=s {
        let sign = if (s - j) % 2 == 0 { 1.0 } else { -1.0 };
        v -= sign * zeta_f64(j);
    }
    v - if s % 2 == 1 { 1.0 } else { -1.0 }
}

pub fn beta_f64(a: f64, b: f64) -> f64 {
    use rug::Float;
    let g = |x: f64| Float::with_val(80, x).gamma().to_f64();
    g(a) * g(b) / g(a + b)
}

/// (x(1-x))^(s-1) = B(s,s) sum_n w_n P_{2n}(2x-1) with
/// w_n = (5/4)_n (1-s)_n (1/2)_n / ((1/4)_n (1/2+s)_n n!).
/// Returned with full indexing (odd coefficients zero), B(s,s) included.
pub fn dixon_coefficients(s: f64, n_max: usize) -> FLSeries {
    let b = beta_f64(s, s);
    let mut w = 1.0;
    let mut coeffs = vec![0.0; 2 * n_max + 1];
    for n in 0..=n_max {
        coeffs[2 * n] = b * w;
        let nf = n as f64;
        w *= (1.25 + nf) * (1.0 - s + nf) * (0.5 + nf) / ((0.25 + nf) * (0.5 + s + nf) * (nf + 1.0));
    }
    FLSeries { tag: format!("dixon({s})"), coeffs }
}

/// max |int_0^1 P_i P_j - delta_ij/(2i+1)| over i, j <= n.
pub fn orthogonality_error(n: usize) -> f64 {
    let g = GaussLegendre::new(n + 2);
    let mut worst: f64 = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            let v = g.apply(&|x| legendre_shifted(i, x) * legendre_shifted(j, x), 0.0, 1.0);
            let want = if i == j { 1.0 / (2 * i + 1) as f64 } else { 0.0 };
            worst = worst.max((v - want).abs());
        }
    }
    worst
}

/// Nested alternating tails appearing in the printed Li_4 / Li_5 coefficients,
/// tabulated for 1 <= n <= N by backward recurrence from asymptotic starts.
pub struct NestedTails {
    /// sum_{k>=n} (-1)^k / k^p for p = 2, 3, 4
    pub alt: [Vec<f64>; 3],
    /// sum_{k>=n} 1/k sum_{j>=k} (-1)^j/j^2
    pub h1a2: Vec<f64>,
    /// sum_{k>=n} 1/k sum_{j>=k} (-1)^j/j^3
    pub h1a3: Vec<f64>,
    /// sum_{k>=n} 1/k^2 sum_{j>=k} (-1)^j/j^2
    pub h2a2: Vec<f64>,
    /// sum_{k>=n} 1/k sum_{j>=k} 1/j sum_{l>=j} (-1)^l/l^2
    pub h11a2: Vec<f64>,
}

impl NestedTails {
    pub fn new(n_max: usize) -> Self {
        let top = n_max.max(200_000) + 64;
        let nf = top as f64;
        let sg = if top % 2 == 0 { 1.0 } else { -1.0 };
        let boole = |p: i32| sg * (0.5 / nf.powi(p) + p as f64 / (4.0 * nf.powi(p + 1)));
        let mut alt = [vec![0.0; top + 1], vec![0.0; top + 1], vec![0.0; top + 1]];
        for (i, p) in (2..=4).enumerate() {
            alt[i][top] = boole(p);
            for k in (1..top).rev() {
                let s = if k % 2 == 0 { 1.0 } else { -1.0 };
                alt[i][k] = alt[i][k + 1] + s / (k as f64).powi(p);
            }
        }
        let nest = |inner: &[f64], q: i32, start: f64| {
            let mut v = vec![0.0; top + 1];
            v[top] = start;
            for k in (1..top).rev() {
                v[k] = v[k + 1] + inner[k] / (k as f64).powi(q);
            }
            v
        };
        let h1a2 = nest(&alt[0], 1, sg / (4.0 * nf.powi(3)));
        let h1a3 = nest(&alt[1], 1, sg / (4.0 * nf.powi(4)));
        let h2a2 = nest(&alt[0], 2, sg / (4.0 * nf.powi(4)));
        let h11a2 = nest(&h1a2, 1, sg / (8.0 * nf.powi(4)));
        NestedTails { alt, h1a2, h1a3, h2a2, h11a2 }
    }

    /// Printed coefficient of P_n in the Li_4 expansion, n >= 1.
    pub fn li4_coeff(&self, n: usize) -> f64 {
        let (x, y) = (n as f64, n as f64 + 1.0);
        let s = if n % 2 == 0 { 1.0 } else { -1.0 };
        -2.0 * s * (1.0 / x + 1.0 / y) * self.alt[1][n]
            - 2.0 * s * (1.0 / (x * x) + 1.0 / (y * y) + 2.0 / x - 2.0 / y) * self.alt[0][n]
            + 4.0 * s * (1.0 / x + 1.0 / y) * self.h1a2[n]
            + 1.0 / x.powi(4) + 2.0 / x.powi(3) - 2.0 / x + 2.0 / y + 2.0 / (y * y) - 1.0 / y.powi(4)
    }

    /// Printed coefficient of P_n in the Li_5 expansion, n >= 1.
    pub fn li5_coeff(&self, n: usize) -> f64 {
        let (x, y) = (n as f64, n as f64 + 1.0);
        let s = if n % 2 == 0 { 1.0 } else { -1.0 };
        s * (-4.0 / y - 4.0 / x) * self.h1a3[n]
            + s * (-4.0 / y - 4.0 / x) * self.h2a2[n]
            + s * (-4.0 / (x * x) + 8.0 / y - 4.0 / (y * y) - 8.0 / x) * self.h1a2[n]
            + s * (8.0 / y + 8.0 / x) * self.h11a2[n]
            + s * (2.0 / y + 2.0 / x) * self.alt[2][n]
            + s * (2.0 / (x * x) - 4.0 / y + 2.0 / (y * y) + 4.0 / x) * self.alt[1][n]
            + s * (2.0 / x.powi(3) + 4.0 / (x * x) - 4.0 / (y * y) + 2.0 / y.powi(3)) * self.alt[0][n]
            - 1.0 / x.powi(5) - 2.0 / x.powi(4) - 2.0 / y - 2.0 / (y * y) - 2.0 / y.powi(3)
            + 1.0 / y.powi(5)
            + 2.0 / x
    }
}

/// Outcome of the Parseval pairing of Li_5 against (x(1-x))^(-1/4).
#[derive(Clone, Debug)]
pub struct ParsevalReport {
    pub lhs: f64,
    pub rhs: f64,
    pub residual: f64,
    pub terms: usize,
}

/// Li_5 constant term: zeta(3) + zeta(5) - zeta(2) - zeta(4) + 1.
pub fn li5_constant() -> f64 {
    zeta_f64(3) + zeta_f64(5) - zeta_f64(2) - zeta_f64(4) + 1.0
}

/// (1/B(3/4,3/4)) int_0^1 Li_5(x) (x(1-x))^(-1/4) dx, with x = sin^2(theta).
pub fn parseval_lhs() -> f64 {
    let f = |t: f64| {
        let (s, c) = t.sin_cos();
        2.0 * polylog(5, s * s) * (s * c).sqrt()
    };
    integrate(&f, 0.0, std::f64::consts::FRAC_PI_2, 1e-15) / beta_f64(0.75, 0.75)
}

/// Pairs the printed Li_5 coefficients with the Dixon weights of (x(1-x))^(-1/4)
/// over `terms` even indices. `with_constant = false` drops the constant term.
pub fn parseval_check(terms: usize, with_constant: bool) -> ParsevalReport {
    let tails = NestedTails::new(2 * terms);
    let mut w = 1.0;
    let mut rhs = if with_constant { li5_constant() } else { 0.0 };
    for n in 1..=terms {
        w *= (n as f64 - 0.5) / n as f64;
        rhs += w * tails.li5_coeff(2 * n) / (4 * n + 1) as f64;
    }
    let lhs = parseval_lhs();
    ParsevalReport { lhs, rhs, residual: (lhs - rhs).abs(), terms }
}

/// Li_3 coefficients by quadrature, lifted twice.
pub fn lifted_chain(count: usize) -> (FLSeries, FLSeries, FLSeries) {
    let li3 = fl_coefficients(&|x| polylog(3, x), count, "Li3");
    let li4 = fl_lift(&li3, polylog_boundary(3));
    let li5 = fl_lift(&li4, polylog_boundary(4));
    (li3, li4, li5)
}

/// Exact check that (1/(4n+1)) (1/m + 1/(m+1)) at m = 2n equals 1/(2n) - 1/(2n+1).
pub fn pairing_weight_identity() -> bool {
    use crate::coeff::GaussianRational as G;
    use crate::poly::{Poly, RatFunc};
    let lin = |a: i64, b: i64| RatFunc::poly(Poly::linear(G::from_int(a), G::from_int(b)));
    let one = RatFunc::constant(G::from_int(1));
    let lhs = &(&(&one / &lin(2, 0)) + &(&one / &lin(2, 1))) / &lin(4, 1);
    let rhs = &(&one / &lin(2, 0)) - &(&one / &lin(2, 1));
    (&lhs - &rhs).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orthogonality() {
        assert!(orthogonality_error(20) < 1e-12);
    }

    #[test]
    fn polylog_values() {
        let z2 = zeta_f64(2);
        // Li2(1/2) = zeta(2)/2 - log^2(2)/2
        let l2 = std::f64::consts::LN_2;
        assert!((polylog(2, 0.5) - (z2 / 2.0 - l2 * l2 / 2.0)).abs() < 1e-15);
        for s in 2..6 {
            assert!((polylog(s, 1.0) - zeta_f64(s)).abs() < 1e-14, "s={s}");
            // both branches agree just above the switch point
            let x: f64 = 0.5 + 1e-9;
            let direct: f64 = (1..200).map(|k| x.powi(k) / (k as f64).powi(s as i32)).sum();
            assert!((polylog(s, x) - direct).abs() < 1e-14, "s={s}");
        }
    }

    #[test]
    fn li1_constant_weight_pairing() {
        // Parseval of -log(1-x) against the constant weight keeps only c_0
        let c0 = integrate(&|x| polylog(1, x), 0.0, 1.0, 1e-15);
        assert!((c0 - 1.0).abs() < 1e-12);
        let d = dixon_coefficients(1.0, 3);
        assert!((d.coeffs[0] - 1.0).abs() < 1e-14);
        assert!(d.coeffs[1..].iter().all(|c| c.abs() < 1e-15));
    }

    #[test]
    fn dixon_matches_quadrature() {
        let d = dixon_coefficients(0.75, 3);
        let g = |t: f64| {
            let (s, c) = t.sin_cos();
            (s * c).sqrt() * 2.0
        };
        for n in 0..=3 {
            let q = (4 * n + 1) as f64
                * integrate(
                    &|t| g(t) * legendre_shifted(2 * n, t.sin().powi(2)),
                    0.0,
                    std::f64::consts::FRAC_PI_2,
                    1e-15,
                );
            assert!((q - d.coeffs[2 * n]).abs() < 1e-10, "n={n}: {q} vs {}", d.coeffs[2 * n]);
        }
    }

    #[test]
    fn lift_of_li2_is_li3() {
        let li2 = fl_coefficients(&|x| polylog(2, x), 80, "Li2");
        let li3 = fl_lift(&li2, polylog_boundary(2));
        let direct = fl_coefficients(&|x| polylog(3, x), li3.len(), "Li3");
        for n in 0..li3.len() {
            assert!((li3.coeffs[n] - direct.coeffs[n]).abs() < 1e-12, "n={n}");
        }
    }

    #[test]
    fn lifts_match_printed_coefficients() {
        let (_, li4, li5) = lifted_chain(10 + 2 * TAIL_WINDOW + 1);
        let tails = NestedTails::new(20);
        assert!((li4.coeffs[0] - (-zeta_f64(3) + zeta_f64(4) + zeta_f64(2) - 1.0)).abs() < 1e-14);
        assert!((li5.coeffs[0] - li5_constant()).abs() < 1e-14);
        for n in 1..=10 {
            assert!((li4.coeffs[n] - tails.li4_coeff(n)).abs() < 1e-12, "a_{n}");
            assert!((li5.coeffs[n] - tails.li5_coeff(n)).abs() < 1e-12, "b_{n}");
        }
    }

    #[test]
    fn parseval_closes() {
        let r = parseval_check(10_000, true);
        assert!(r.residual < 1e-8, "{r:?}");
        let bare = parseval_check(10_000, false);
        assert!((bare.residual - li5_constant()).abs() < 1e-8);
    }

    #[test]
    fn pairing_weight() {
        assert!(pairing_weight_identity());
    }
}
