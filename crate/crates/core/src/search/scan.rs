//! Scanning class representatives for dimension gaps.

use alloc::vec::Vec;

use super::canonical::{canonical_entries, Coef};
use super::enumerate::{is_rank_one, ClassRep};
use crate::bell::{witness_dimension, BellExpression, Field};
use crate::classical::classical_max;
use crate::error::Result;
use crate::exec::{Executor, Sequential};
use crate::optimizer::{dimension_profile, OptimizerConfig, ValueSource};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ProfilePoint {
    pub n: usize,
    pub value: f64,
    pub converged: bool,
}

/// A representative whose designated gap exceeds the tolerance.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SearchHit {
    pub lower: usize,
    pub upper: usize,
    pub gap: f64,
    pub witness_dim: usize,
}

/// Scan outcome for one class, hit or not.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ScanRecord {
    pub key: Vec<f64>,
    pub matrix: BellExpression,
    pub rank_one: bool,
    pub profile: Vec<ProfilePoint>,
    pub hit: Option<SearchHit>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanConfig {
    /// Dimensions reported per class.
    pub n_list: Vec<usize>,
    /// The `(n, n+1)` pair tested for a gap.
    pub flag: (usize, usize),
    pub optimizer: OptimizerConfig,
}

impl ScanConfig {
    pub fn qubit_insufficiency(optimizer: OptimizerConfig) -> Self {
        Self {
            n_list: alloc::vec![1, 2, 3, 4],
            flag: (3, 4),
            optimizer,
        }
    }
}

pub fn canonical_key(expr: &BellExpression) -> Vec<f64> {
    let data: Vec<Coef> = expr.entries().iter().map(|&x| Coef::new(x)).collect();
    canonical_entries(expr.rows(), expr.cols(), &data)
        .into_iter()
        .map(|c| c.0)
        .collect()
}

fn scan_one(expr: &BellExpression, rank_one: bool, config: &ScanConfig) -> Result<ScanRecord> {
    let n_max = config
        .n_list
        .iter()
        .copied()
        .chain([config.flag.1])
        .max()
        .unwrap_or(1);
    let (values, converged): (Vec<f64>, Vec<bool>) = if rank_one {
        // T^n = T^1 for every n when M factorizes
        let c = classical_max(expr)?.value;
        ((0..n_max).map(|_| c).collect(), alloc::vec![true; n_max])
    } else {
        let p = dimension_profile(expr, n_max, &config.optimizer, &Sequential)?;
        debug_assert!(p
            .entries
            .iter()
            .skip(1)
            .all(|e| e.source == ValueSource::Heuristic));
        p.entries.iter().map(|e| (e.value, e.converged)).unzip()
    };

    let (lo, hi) = config.flag;
    let hit = (lo >= 1 && hi == lo + 1 && converged[lo - 1] && converged[hi - 1])
        .then(|| (values[lo - 1], values[hi - 1]))
        .filter(|(a, b)| a + config.optimizer.gap_tol < *b)
        .map(|(a, b)| SearchHit {
            lower: lo,
            upper: hi,
            gap: b - a,
            witness_dim: witness_dimension(lo, Field::Complex).expect("lo >= 1"),
        });

    let mut n_list = config.n_list.clone();
    n_list.sort_unstable();
    n_list.dedup();
    let profile = n_list
        .iter()
        .filter(|&&n| n >= 1 && n <= n_max)
        .map(|&n| ProfilePoint {
            n,
            value: values[n - 1],
            converged: converged[n - 1],
        })
        .collect();
    Ok(ScanRecord {
        key: canonical_key(expr),
        matrix: expr.clone(),
        rank_one,
        profile,
        hit,
        seed: config.optimizer.seed,
    })
}

/// Profiles every class (in parallel over classes on `exec`) and flags the
/// designated gap.
pub fn scan_expressions<E: Executor>(
    classes: &[BellExpression],
    config: &ScanConfig,
    exec: &E,
) -> Result<Vec<ScanRecord>> {
    exec.map(classes.len(), |k| {
        let e = &classes[k];
        let rank_one = expression_rank_one(e);
        scan_one(e, rank_one, config)
    })
    .into_iter()
    .collect()
}

pub fn scan_for_witnesses<E: Executor>(
    classes: &[ClassRep],
    config: &ScanConfig,
    exec: &E,
) -> Result<Vec<ScanRecord>> {
    let exprs: Vec<(BellExpression, bool)> = classes
        .iter()
        .filter_map(|c| c.to_expression().ok().map(|e| (e, c.rank_one)))
        .collect();
    exec.map(exprs.len(), |k| scan_one(&exprs[k].0, exprs[k].1, config))
        .into_iter()
        .collect()
}

fn expression_rank_one(e: &BellExpression) -> bool {
    let ints: Option<Vec<i8>> = e
        .entries()
        .iter()
        .map(|&x| (x == libm::trunc(x) && x.abs() <= 127.0).then_some(x as i8))
        .collect();
    match ints {
        Some(m) => is_rank_one(e.rows(), e.cols(), &m),
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{bgamma_matrix, chsh_matrix};

    fn cfg() -> ScanConfig {
        ScanConfig::qubit_insufficiency(OptimizerConfig {
            restarts: 20,
            ..Default::default()
        })
    }

    #[test]
    fn chsh_hits_only_at_one_two() {
        let r = scan_expressions(&[chsh_matrix()], &cfg(), &Sequential).unwrap();
        assert!(r[0].hit.is_none());
        let mut c = cfg();
        c.flag = (1, 2);
        let r = scan_expressions(&[chsh_matrix()], &c, &Sequential).unwrap();
        assert_eq!(r[0].hit.unwrap().witness_dim, 1);
    }

    #[test]
    fn all_ones_never_hits() {
        let ones = BellExpression::new(5, 5, alloc::vec![1.0; 25]).unwrap();
        for flag in [(1, 2), (2, 3), (3, 4)] {
            let mut c = cfg();
            c.flag = flag;
            let r = scan_expressions(&[ones.clone()], &c, &Sequential).unwrap();
            assert!(r[0].rank_one);
            assert!(r[0].hit.is_none());
            assert!(r[0].profile.iter().all(|p| p.value == 25.0));
        }
    }

    #[test]
    fn bgamma_four_is_a_qubit_witness() {
        let r = scan_expressions(&[bgamma_matrix(4, 1.0).unwrap()], &cfg(), &Sequential).unwrap();
        let hit = r[0].hit.expect("gap at (3,4)");
        assert_eq!((hit.lower, hit.upper, hit.witness_dim), (3, 4, 2));
    }
}
