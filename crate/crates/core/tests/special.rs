use std::f64::consts::PI;

use proptest::prelude::*;
use ringspec::special::{bessel_j, bessel_jy, cross_product, cross_product_roots};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn wronskian(m in 0u32..80, x in 0.05f64..400.0) {
        let (j, y) = bessel_jy(m, x).unwrap();
        let (jp, yp) = bessel_jy(m + 1, x).unwrap();
        prop_assume!(yp.is_finite());
        let w = jp * y - j * yp;
        let expected = 2.0 / (PI * x);
        let scale = expected.max((jp * y).abs()).max((j * yp).abs());
        prop_assert!((w - expected).abs() <= 1e-9 * scale, "m={m} x={x}: {w} vs {expected}");
    }

    #[test]
    fn three_term_recurrence(m in 1u32..80, x in 0.05f64..400.0) {
        let (jm, ym) = bessel_jy(m - 1, x).unwrap();
        let (j, y) = bessel_jy(m, x).unwrap();
        let (jp, yp) = bessel_jy(m + 1, x).unwrap();
        let c = 2.0 * m as f64 / x;
        let scale_j = jm.abs().max(jp.abs()).max((c * j).abs());
        prop_assert!((jm + jp - c * j).abs() <= 1e-9 * scale_j, "J: m={m} x={x}");
        prop_assume!(yp.is_finite());
        let scale_y = ym.abs().max(yp.abs()).max((c * y).abs());
        prop_assert!((ym + yp - c * y).abs() <= 1e-9 * scale_y, "Y: m={m} x={x}");
    }

    #[test]
    fn cross_product_roots_are_zeros(m in 0u32..30, beta in 1.05f64..50.0) {
        let roots = cross_product_roots(m, beta, 4).unwrap();
        prop_assert!(roots.windows(2).all(|w| w[1] > w[0]));
        for k in roots {
            // residual within a 1e-11 relative step in k
            let h = 1e-7 * k;
            let slope = (cross_product(m, k + h, beta).unwrap() - cross_product(m, k - h, beta).unwrap()) / (2.0 * h);
            prop_assert!(cross_product(m, k, beta).unwrap().abs() <= 1e-11 * k * slope.abs(), "m={m} beta={beta} k={k}");
        }
    }
}

#[test]
fn small_argument_limits() {
    assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
    assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
    let x = 1e-4;
    // J_2(x) ~ x^2/8
    assert!((bessel_j(2, x).unwrap() / (x * x / 8.0) - 1.0).abs() < 1e-8);
}

#[test]
fn thin_annulus_roots_approach_dirichlet_strip() {
    // beta -> 1: k (beta - 1) -> n pi for fixed m
    let beta = 1.001;
    let roots = cross_product_roots(0, beta, 3).unwrap();
    for (n, k) in roots.iter().enumerate() {
        let expected = (n + 1) as f64 * PI / (beta - 1.0);
        assert!((k - expected).abs() < 1e-3 * expected, "{k} vs {expected}");
    }
}
