mod common;

use hyp2mzv::fl;

#[test]
fn fourier_legendre_targets() {
    let o = common::criteria::fourier_legendre();
    assert!(o.pass, "{}", o.detail);
}

#[test]
fn lift_of_quadrature_li2_matches_li3() {
    let li2 = fl::fl_coefficients(&|x| fl::polylog(2, x), 100, "Li2");
    let li3 = fl::fl_lift(&li2, fl::polylog_boundary(2));
    let direct = fl::fl_coefficients(&|x| fl::polylog(3, x), li3.len(), "Li3");
    for n in 0..li3.len() {
        assert!((li3.coeffs[n] - direct.coeffs[n]).abs() < 1e-12, "n={n}");
    }
}
