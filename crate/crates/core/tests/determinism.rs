use dimwit_core::{
    bgamma_matrix, dimension_profile, max_over_restarts, Executor, OptimizerConfig, Sequential,
};

/// Evaluates jobs from last to first.
struct Backwards;

impl Executor for Backwards {
    fn map<T, F>(&self, count: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        let mut out: Vec<T> = (0..count).rev().map(f).collect();
        out.reverse();
        out
    }
}

#[test]
fn results_do_not_depend_on_job_order() {
    let expr = bgamma_matrix(5, 1.3).unwrap();
    let cfg = OptimizerConfig {
        restarts: 12,
        seed: 42,
        ..OptimizerConfig::default()
    };
    let a = max_over_restarts(&expr, 3, &cfg, &Sequential).unwrap();
    let b = max_over_restarts(&expr, 3, &cfg, &Backwards).unwrap();
    assert_eq!(a, b);
    let pa = dimension_profile(&expr, 5, &cfg, &Sequential).unwrap();
    let pb = dimension_profile(&expr, 5, &cfg, &Backwards).unwrap();
    assert_eq!(pa, pb);
}

#[test]
fn seed_changes_starting_points() {
    let expr = bgamma_matrix(4, 1.0).unwrap();
    let c1 = OptimizerConfig {
        restarts: 1,
        seed: 1,
        ..OptimizerConfig::default()
    };
    let c2 = OptimizerConfig { seed: 2, ..c1 };
    let a = max_over_restarts(&expr, 3, &c1, &Sequential).unwrap();
    let b = max_over_restarts(&expr, 3, &c2, &Sequential).unwrap();
    assert_ne!(a.bob, b.bob);
}
