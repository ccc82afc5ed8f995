use dimwit_core::optimizer::random_bob;
use dimwit_core::tsirelson::{clifford_generators, local_dim, realize, verify_realization};
use dimwit_core::{
    bgamma_matrix, evaluate_strategy, max_over_restarts, optimal_alice, BellExpression,
    OptimizerConfig, Sequential, Strategy,
};

#[test]
fn random_strategies_are_realized() {
    for m in 2..=7 {
        let expr = BellExpression::new(m, m, vec![1.0; m * m]).unwrap();
        for trial in 0..100 {
            let alice = random_bob(m, m, 11, 2 * trial);
            let bob = random_bob(m, m, 11, 2 * trial + 1);
            let s = Strategy::new(alice, bob).unwrap();
            let q = realize(&s.alice, &s.bob).unwrap();
            let rep = verify_realization(&q, &expr, &s).unwrap();
            assert_eq!(rep.local_dim, local_dim(m));
            assert!(rep.max_correlation_error < 1e-10, "m={m}: {rep:?}");
            assert!(rep.max_anticommutator_residual < 1e-12);
            assert!(rep.max_involution_residual < 1e-12);
            assert!(rep.passed);
            assert!((rep.realized_value - evaluate_strategy(&expr, &s).unwrap()).abs() < 1e-10);
        }
    }
}

#[test]
fn generators_are_exact_involutions() {
    for m in 1..=12 {
        for g in clifford_generators(m).unwrap() {
            assert_eq!(
                g.mul(&g)
                    .max_diff(&dimwit_core::tsirelson::CMatrix::identity(g.dim())),
                0.0
            );
        }
    }
}

#[test]
fn bgamma_optimum_on_one_qubit_pair() {
    let expr = bgamma_matrix(3, 1.0).unwrap();
    let cfg = OptimizerConfig {
        restarts: 10,
        ..OptimizerConfig::default()
    };
    let run = max_over_restarts(&expr, 3, &cfg, &Sequential).unwrap();
    let alice = optimal_alice(&expr, &run.bob).unwrap();
    let s = Strategy::new(alice, run.bob).unwrap();
    let rep = verify_realization(&realize(&s.alice, &s.bob).unwrap(), &expr, &s).unwrap();
    assert_eq!(rep.local_dim, 2);
    assert!(rep.passed);
    assert!(
        (rep.realized_value - 6.0).abs() < 1e-9,
        "{}",
        rep.realized_value
    );
}
