use dimwit_core::{bgamma_classical, bgamma_matrix, classical_max, BellExpression};

const GAMMAS: [f64; 9] = [0.1, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 7.5, 12.0];

/// Every sign vector, no Gray code and no symmetry reduction.
fn brute_force(expr: &BellExpression) -> f64 {
    let mb = expr.cols();
    let mut best = f64::NEG_INFINITY;
    for bits in 0u32..1 << mb {
        let mut total = 0.0;
        for i in 0..expr.rows() {
            let s: f64 = (0..mb)
                .map(|j| {
                    if bits >> j & 1 == 1 {
                        -expr.get(i, j)
                    } else {
                        expr.get(i, j)
                    }
                })
                .sum();
            total += s.abs();
        }
        best = best.max(total);
    }
    best
}

#[test]
fn enumeration_matches_closed_form() {
    for mb in 2..=10 {
        for gamma in GAMMAS
            .iter()
            .copied()
            .chain([(mb as f64 / 2.0).sqrt(), mb as f64])
        {
            let expr = bgamma_matrix(mb, gamma).unwrap();
            let closed = bgamma_classical(mb, gamma).unwrap();
            let found = classical_max(&expr).unwrap();
            assert!(
                (found.value - closed.value).abs() <= 1e-12 * closed.value,
                "mb={mb} gamma={gamma}: {} vs {}",
                found.value,
                closed.value
            );
            let z: Vec<f64> = closed.argmax.iter().map(|&s| f64::from(s)).collect();
            let at_argmax: f64 = (0..expr.rows())
                .map(|i| {
                    expr.row(i)
                        .iter()
                        .zip(&z)
                        .map(|(m, s)| m * s)
                        .sum::<f64>()
                        .abs()
                })
                .sum();
            assert!((at_argmax - closed.value).abs() <= 1e-12 * closed.value);
        }
    }
}

#[test]
fn brute_force_agrees_for_small_families() {
    for mb in 2..=7 {
        for gamma in GAMMAS {
            let expr = bgamma_matrix(mb, gamma).unwrap();
            let b = brute_force(&expr);
            assert!((classical_max(&expr).unwrap().value - b).abs() <= 1e-12 * b);
        }
    }
}

#[test]
fn large_gamma_regime() {
    for mb in 2..=10 {
        for gamma in [mb as f64 + 0.5, 2.0 * mb as f64, 40.0] {
            let closed = bgamma_classical(mb, gamma).unwrap();
            assert!((closed.value - gamma * mb as f64).abs() <= 1e-12 * closed.value);
            let found = classical_max(&bgamma_matrix(mb, gamma).unwrap()).unwrap();
            assert!((found.value - closed.value).abs() <= 1e-12 * closed.value);
        }
    }
}

#[test]
fn random_integer_matrices_against_brute_force() {
    let mut state = 0x2545_f491_4f6c_dd1du64;
    let mut next = || {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        (state % 5) as f64 - 2.0
    };
    for shape in [(3, 4), (5, 6), (2, 9), (6, 12)] {
        for _ in 0..10 {
            let e: Vec<f64> = (0..shape.0 * shape.1).map(|_| next()).collect();
            let Ok(expr) = BellExpression::new(shape.0, shape.1, e) else {
                continue;
            };
            assert_eq!(classical_max(&expr).unwrap().value, brute_force(&expr));
        }
    }
}
