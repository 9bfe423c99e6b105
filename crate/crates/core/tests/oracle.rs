//! Gröbner-side Milnor numbers and critical values against the resultant
//! brute force.

mod common;

use brieskorn::local_algebra::{critical_spectrum, milnor_algebra};
use brieskorn::poly::{parse_polynomial, MultiPoly, Scalar, UniPoly};
use common::*;
use proptest::prelude::*;

fn p(s: &str) -> MultiPoly {
    parse_polynomial(s, &["x", "y"]).unwrap()
}

fn assert_agrees(f: &MultiPoly) {
    let spectrum = critical_spectrum(&milnor_algebra(f).unwrap());
    let oracle = resultant_spectrum(f);
    assert_eq!(spectrum.mu, oracle.mu, "mu of {f}");
    assert_eq!(spectrum.charpoly, oracle.charpoly, "critical values of {f} (shear {})", oracle.shear);
    let total: usize = spectrum
        .values
        .iter()
        .map(|v| v.mu_c * v.minpoly.degree().unwrap())
        .sum();
    assert_eq!(total, spectrum.mu);
}

#[test]
fn determinant_and_interpolation_helpers() {
    let m = vec![vec![q(2), q(1), q(0)], vec![q(1), q(3), q(1)], vec![q(0), q(1), q(4)]];
    assert_eq!(det(m), q(18));
    let xs: Vec<_> = (0..4).map(q).collect();
    let ys: Vec<_> = xs.iter().map(|x| x * x * x - q(2) * x + q(5)).collect();
    assert_eq!(interpolate(&xs, &ys), vec![q(5), q(-2), q(0), q(1)]);
    // Res_y(y^2 - 2, y - 1) = -1
    assert_eq!(sylvester_resultant(&[q(-2), q(0), q(1)], &[q(-1), q(1)]), q(-1));
}

#[test]
fn cusp_values_match() {
    let f = p("y^2 + x^3 - 3*x");
    let oracle = resultant_spectrum(&f);
    assert_eq!(oracle.charpoly, UniPoly::from_ints(&[-4, 0, 1]));
    assert_agrees(&f);
}

#[test]
fn named_examples_match() {
    for s in [
        "x^2 + y^2",
        "x^2*y^2 + 2*x*y + x",
        "x^4*y^2 + 2*x^2*y + x*y^2",
        "x^3 - 6*x + y^2",
        "x^3 + y^3 - 3*x*y",
        "x^4 + y^4 - x^2 - y^2",
    ] {
        assert_agrees(&p(s));
    }
}

#[test]
fn coordinate_function_has_no_critical_points() {
    let f = p("x");
    assert_eq!(resultant_spectrum(&f).mu, 0);
    assert_eq!(milnor_algebra(&f).unwrap().mu(), 0);
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, ..ProptestConfig::default() })]

    #[test]
    fn random_quartics_match(seed in any::<u64>(), degree in 2u32..=4) {
        let (f, _) = random_isolated(&mut rng(seed), degree);
        assert_agrees(&f);
    }

    #[test]
    fn linear_perturbation_matches(seed in any::<u64>(), lambda in 1i64..=5) {
        let (f, _) = random_isolated(&mut rng(seed), 3);
        let x = MultiPoly::var_in(vars(), "x").unwrap();
        let g = &f + &x.scale(&Scalar::from_frac(lambda, 7));
        if milnor_algebra(&g).is_ok() {
            assert_agrees(&g);
        }
    }
}
