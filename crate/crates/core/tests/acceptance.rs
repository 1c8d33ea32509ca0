//! One PASS/FAIL line per acceptance criterion.

mod common;

use common::criteria::{self, Outcome};

fn main() {
    let checks: [(&str, fn() -> Outcome); 8] = [
        ("1 corpus reproduction", criteria::corpus),
        ("2 reducer equivalence", criteria::random_sums),
        ("3 weight-8 symbolic pin", criteria::weight_eight_pin),
        ("4 gamma engine", criteria::beta_moments),
        ("5 fitter recovery", criteria::fitter_recovery),
        ("6 atoms", criteria::atoms),
        ("7 Fourier-Legendre", criteria::fourier_legendre),
        ("8 property suites", criteria::properties),
    ];
    let mut failed = 0;
    for (name, check) in checks {
        let o = check();
        println!("[{}] criterion {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {}/8 criteria pass", 8 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
