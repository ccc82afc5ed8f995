use std::f64::consts::{PI, TAU};

use dimwit_core::optimizer::max_over_restarts;
use dimwit_core::sphere::{
    analytic_tn, discretize_sphere_expression, limit_ratio, limit_tn, limit_tn_product, SIntegrals,
    SphereDim,
};
use dimwit_core::{OptimizerConfig, Sequential};

#[test]
fn product_identity_and_monotone_ratios() {
    let s = SIntegrals::up_to(10_000);
    let mut prev = 0.0;
    for n in 1..=10_000 {
        let prod = n as f64 * s.get(n) * s.get(n - 1);
        assert!((prod - TAU).abs() <= 1e-12 * TAU, "n={n}: {prod}");
        let r = s.ratio(n);
        assert!(r > prev, "ratio not increasing at n={n}");
        prev = r;
    }
}

#[test]
fn wallis_forms_match_recurrence() {
    for n in 1..=100 {
        let a = limit_tn(n).unwrap();
        let b = limit_tn_product(n).unwrap();
        assert!((a - b).abs() <= 1e-12, "n={n}: {a} vs {b}");
    }
}

#[test]
fn known_limit_ratios() {
    assert!((limit_ratio(2).unwrap() - PI * PI / 8.0).abs() <= 1e-12);
    assert!((limit_ratio(3).unwrap() - 4.0 / 3.0).abs() <= 1e-12);
    assert!((limit_ratio(5).unwrap() - 64.0 / 45.0).abs() <= 1e-12);
}

#[test]
fn finite_m_profile_increases_to_one() {
    for m in 2..=12 {
        let mut prev = 0.0;
        for n in 1..m {
            let t = analytic_tn(SphereDim::Finite(m), n).unwrap();
            assert!(t > prev && t < 1.0);
            prev = t;
        }
        assert_eq!(analytic_tn(SphereDim::Finite(m), m).unwrap(), 1.0);
    }
}

/// Mean absolute error of the see-saw value against the closed form over
/// five samples of `K` points.
fn mean_error(points: usize, n: usize) -> f64 {
    let cfg = OptimizerConfig {
        restarts: 1,
        ..OptimizerConfig::default()
    };
    let exact = analytic_tn(SphereDim::Finite(3), n).unwrap();
    let mut total = 0.0;
    for seed in 1..=5 {
        let s = discretize_sphere_expression(3, points, seed).unwrap();
        let r = max_over_restarts(&s.expr, n, &cfg, &Sequential).unwrap();
        total += (r.value - exact).abs();
    }
    total / 5.0
}

#[test]
fn discretization_error_shrinks_with_points() {
    for n in [1, 2] {
        let errs: Vec<f64> = [100, 400, 1600].iter().map(|&k| mean_error(k, n)).collect();
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "n={n}: {errs:?}");
    }
}
