//! Exact classical (one-dimensional) maxima.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bell::BellExpression;
use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};

/// Largest number of Bob settings handled by exhaustive enumeration.
pub const ENUMERATION_CAP: usize = 30;

/// Sign vectors within this (relative) distance of the best value count as
/// tied; the lexicographically smallest one is kept.
const TIE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ClassicalResult {
    pub value: f64,
    /// Bob's signs, `z[0] = +1` for enumeration results.
    pub argmax: Vec<i8>,
    /// Closed-form extras for the B_gamma family.
    pub k_max: Option<usize>,
    pub delta: Option<f64>,
}

/// `sum_i |sum_j M_ij z_j|`.
pub fn sign_value(expr: &BellExpression, z: &[i8]) -> f64 {
    (0..expr.rows())
        .map(|i| {
            expr.row(i)
                .iter()
                .zip(z)
                .map(|(m, &s)| m * f64::from(s))
                .sum::<f64>()
                .abs()
        })
        .sum()
}

/// `true` when `a` precedes `b` with `-1 < +1`.
fn lex_less(a: &[i8], b: &[i8]) -> bool {
    a < b
}

struct Best {
    value: f64,
    z: Vec<i8>,
}

impl Best {
    fn offer(&mut self, value: f64, z: &[i8]) {
        let tol = TIE_TOL * self.value.abs().max(1.0);
        if value > self.value + tol || ((value - self.value).abs() <= tol && lex_less(z, &self.z)) {
            self.value = self.value.max(value);
            self.z.copy_from_slice(z);
        }
    }
}

/// Exhausts one block of sign vectors: `z_0 = +1`, the `high_bits` signs just
/// after it fixed by `prefix`, the remaining ones traversed in Gray-code order
/// with incremental row-sum updates.
fn enumerate_block(expr: &BellExpression, high_bits: usize, prefix: usize) -> Best {
    let mb = expr.cols();
    let ma = expr.rows();
    let mut z = vec![1i8; mb];
    for b in 0..high_bits {
        if prefix >> (high_bits - 1 - b) & 1 == 1 {
            z[1 + b] = -1;
        }
    }
    let free_start = 1 + high_bits;
    let free = mb - free_start;

    let mut sums: Vec<f64> = (0..ma)
        .map(|i| {
            expr.row(i)
                .iter()
                .zip(&z)
                .map(|(m, &s)| m * f64::from(s))
                .sum()
        })
        .collect();
    let value = |sums: &[f64]| sums.iter().map(|s| s.abs()).sum::<f64>();
    let mut best = Best {
        value: value(&sums),
        z: z.clone(),
    };

    for step in 1u64..(1u64 << free) {
        // Gray code flips the bit at the position of the lowest set bit.
        let bit = step.trailing_zeros() as usize;
        let col = mb - 1 - bit;
        let old = f64::from(z[col]);
        z[col] = -z[col];
        for (i, s) in sums.iter_mut().enumerate() {
            *s -= 2.0 * old * expr.get(i, col);
        }
        best.offer(value(&sums), &z);
    }
    best
}

/// Exact maximum of `sum_i |sum_j M_ij z_j|` over `z in {+-1}^{m_B}`.
pub fn classical_max(expr: &BellExpression) -> Result<ClassicalResult> {
    classical_max_with(expr, &Sequential)
}

/// [`classical_max`] with the search space split into blocks by the leading
/// free signs, evaluated on `exec` and reduced deterministically.
pub fn classical_max_with<E: Executor>(expr: &BellExpression, exec: &E) -> Result<ClassicalResult> {
    let mb = expr.cols();
    if mb > ENUMERATION_CAP {
        return Err(Error::Capacity(format!(
            "{mb} Bob settings exceed the enumeration cap of {ENUMERATION_CAP}; \
             use the heuristic optimizer at n = 1"
        )));
    }
    let high_bits = (mb - 1).min(6).min((mb - 1).saturating_sub(10));
    let blocks = exec.map(1 << high_bits, |prefix| {
        enumerate_block(expr, high_bits, prefix)
    });

    let mut iter = blocks.into_iter();
    let mut best = iter.next().expect("at least one block");
    for b in iter {
        best.offer(b.value, &b.z);
    }
    // Report the value of the stored argmax, not the incrementally updated sum.
    Ok(ClassicalResult {
        value: sign_value(expr, &best.z),
        argmax: best.z,
        k_max: None,
        delta: None,
    })
}

/// Closed-form classical bound of the B_gamma family,
/// `(m_B^2 + gamma^2 - 4 Delta^2) / 2`, with `k_max` the non-negative integer
/// nearest to `(m_B - gamma)/2` (halves rounded down) and
/// `Delta = |(m_B - gamma)/2 - k_max|`. For `gamma > m_B` this is `gamma m_B`.
pub fn bgamma_classical(mb: usize, gamma: f64) -> Result<ClassicalResult> {
    if mb < 2 {
        return Err(Error::Domain("B_gamma needs m_B >= 2".into()));
    }
    if !(gamma >= 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!(
            "gamma must be finite and >= 0, got {gamma}"
        )));
    }
    let m = mb as f64;
    let center = (m - gamma) / 2.0;
    let k_max = if center <= 0.0 {
        0
    } else {
        libm::ceil(center - 0.5) as usize
    };
    let delta = (center - k_max as f64).abs();
    let value = (m * m + gamma * gamma - 4.0 * delta * delta) / 2.0;

    // k_max of the signs are -1; the first entry stays +1.
    let mut argmax = vec![1i8; mb];
    for s in argmax.iter_mut().rev().take(k_max) {
        *s = -1;
    }
    Ok(ClassicalResult {
        value,
        argmax,
        k_max: Some(k_max),
        delta: Some(delta),
    })
}
