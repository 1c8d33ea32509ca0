//! The fixed set of transcendental constants that closed forms are built from.

use std::fmt;

/// Real or imaginary part selector for complex-valued nested sums.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Part {
    Re,
    Im,
}

/// A basis constant.
///
/// `Beta(2)` is Catalan's constant and prints as `C`.
/// `Mz { s, signs }` is `sum_{n1>...>nk>0} prod signs_j^{n_j} / n_j^{s_j}` with signs in {1,-1}.
/// `Qmz { part, s, chars }` is the real or imaginary part of
/// `sum_{n1>...>nk>0} prod i^{chars_j n_j} / n_j^{s_j}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Atom {
    Pi,
    Log2,
    Sqrt2,
    SqrtPi,
    Gamma14,
    EulerGamma,
    Zeta(u32),
    Beta(u32),
    /// Li_n(1/2)
    LiHalf(u32),
    /// Im Li_n((1+i)/2)
    ImLiHalfI(u32),
    /// zeta(4, offset/4) with offset 1 or 3
    Hurwitz4(u8),
    Mz { s: Vec<u32>, signs: Vec<i8> },
    Qmz { part: Part, s: Vec<u32>, chars: Vec<u8> },
}

impl Atom {
    pub fn catalan() -> Atom {
        Atom::Beta(2)
    }

    pub fn weight(&self) -> i32 {
        match self {
            Atom::Pi | Atom::Log2 | Atom::EulerGamma => 1,
            Atom::Sqrt2 | Atom::SqrtPi | Atom::Gamma14 => 0,
            Atom::Zeta(n) | Atom::Beta(n) | Atom::LiHalf(n) | Atom::ImLiHalfI(n) => *n as i32,
            Atom::Hurwitz4(_) => 4,
            Atom::Mz { s, .. } | Atom::Qmz { s, .. } => s.iter().sum::<u32>() as i32,
        }
    }

    /// Smallest level among {1, 2, 4} whose constants contain this atom.
    /// Weight-0 prefactors report 0.
    pub fn level(&self) -> u8 {
        match self {
            Atom::Sqrt2 | Atom::SqrtPi | Atom::Gamma14 => 0,
            Atom::Pi | Atom::Zeta(_) | Atom::EulerGamma => 1,
            Atom::Log2 | Atom::LiHalf(_) | Atom::Mz { .. } => 2,
            Atom::Beta(_) | Atom::ImLiHalfI(_) | Atom::Hurwitz4(_) | Atom::Qmz { .. } => 4,
        }
    }

    pub fn is_prefactor(&self) -> bool {
        self.weight() == 0
    }

    /// Canonical text form, as accepted by the closed-form parser.
    pub fn text(&self) -> String {
        fn join<T: ToString>(v: &[T]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
        }
        match self {
            Atom::Pi => "pi".into(),
            Atom::Log2 => "log2".into(),
            Atom::Sqrt2 => "sqrt2".into(),
            Atom::SqrtPi => "sqrtpi".into(),
            Atom::Gamma14 => "gamma14".into(),
            Atom::EulerGamma => "gammaE".into(),
            Atom::Zeta(n) => format!("zeta({n})"),
            Atom::Beta(2) => "C".into(),
            Atom::Beta(n) => format!("beta({n})"),
            Atom::LiHalf(n) => format!("li({n},1/2)"),
            Atom::ImLiHalfI(n) => format!("imli({n})"),
            Atom::Hurwitz4(o) => format!("hzeta(4,{o}/4)"),
            Atom::Mz { s, signs } => format!("mz({};{})", join(s), join(signs)),
            Atom::Qmz { part, s, chars } => format!(
                "{}qmz(4,{};{})",
                match part {
                    Part::Re => "re",
                    Part::Im => "im",
                },
                join(s),
                join(chars)
            ),
        }
    }

    /// Structural validity (indices in range, vectors consistent, convergent).
    pub fn validate(&self) -> Result<(), String> {
        match self {
            Atom::Zeta(n) if *n < 2 => Err("zeta needs n >= 2".into()),
            Atom::Beta(n) if *n < 1 => Err("beta needs n >= 1".into()),
            Atom::LiHalf(n) | Atom::ImLiHalfI(n) if *n < 1 => Err("polylog index must be >= 1".into()),
            Atom::Hurwitz4(o) if *o != 1 && *o != 3 => Err("hzeta offset must be 1/4 or 3/4".into()),
            Atom::Mz { s, signs } => {
                if s.is_empty() || s.len() != signs.len() {
                    return Err("mz needs equal nonempty index and sign lists".into());
                }
                if signs.iter().any(|&e| e != 1 && e != -1) {
                    return Err("mz signs must be 1 or -1".into());
                }
                if s.iter().any(|&x| x == 0) {
                    return Err("mz indices must be positive".into());
                }
                if s[0] == 1 && signs[0] == 1 {
                    return Err("mz diverges (leading 1 with sign 1)".into());
                }
                Ok(())
            }
            Atom::Qmz { s, chars, .. } => {
                if s.is_empty() || s.len() != chars.len() {
                    return Err("qmz needs equal nonempty index and character lists".into());
                }
                if chars.iter().any(|&c| c > 3) {
                    return Err("qmz characters must lie in 0..=3".into());
                }
                if s.iter().any(|&x| x == 0) {
                    return Err("qmz indices must be positive".into());
                }
                if s[0] == 1 && chars[0] == 0 {
                    return Err("qmz diverges (leading 1 with trivial character)".into());
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text())
    }
}
