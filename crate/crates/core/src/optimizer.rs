//! Heuristic `T^n` by alternating exact block maximization.
//!
//! With Bob fixed, Alice's best response is `a_i ∝ sum_j M_ij b_j`; with
//! Alice fixed, Bob's is `b_j ∝ sum_i M_ij a_i`. Alternating the two never
//! decreases the objective. Restarts draw Bob's initial vectors from
//! normalized Gaussian coordinates on a per-restart ChaCha stream, so every
//! restart is reproducible on its own and the merged result does not depend
//! on execution order.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::bell::{self, BellExpression, Field, VectorSet};
use crate::classical::{classical_max, ENUMERATION_CAP};
use crate::error::{Error, Result};
use crate::exec::{Executor, Sequential};
use crate::linalg;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_sweeps: usize,
    /// Stop once a sweep improves the value by less than this fraction.
    pub conv_tol: f64,
    /// Gaps must exceed `max(gap_tol, gap_tol * T^{n+1})`.
    pub gap_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 50,
            max_sweeps: 10_000,
            conv_tol: 1e-11,
            gap_tol: 1e-5,
            seed: 1,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.conv_tol > 0.0) || !(self.gap_tol > 0.0) {
            return Err(Error::Domain("tolerances must be positive".into()));
        }
        if self.max_sweeps == 0 {
            return Err(Error::Domain("max_sweeps must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OptRun {
    pub n: usize,
    pub value: f64,
    pub bob: VectorSet,
    pub converged: bool,
    pub sweeps: usize,
    pub restart_index: usize,
}

/// Allowed per-sweep decrease, relative to the objective scale.
pub const MONOTONE_SLACK: f64 = 1e-12;

/// Runs the see-saw from `init`, recording the value after every sweep in
/// `trace` (the first element is the starting value).
pub fn seesaw_traced(
    expr: &BellExpression,
    init: &VectorSet,
    config: &OptimizerConfig,
    trace: &mut Vec<f64>,
) -> Result<OptRun> {
    if init.len() != expr.cols() {
        return Err(Error::Dimension(format!(
            "expression has {} Bob settings, got {} vectors",
            expr.cols(),
            init.len()
        )));
    }
    let n = init.dim();
    let mut bob = init.as_flat().to_vec();
    let mut alice = vec![0.0; expr.rows() * n];

    let alice_step = |bob: &[f64], alice: &mut [f64]| {
        bell::combine(expr, bob, n, false, alice);
        bell::normalize_blocks(alice, n)
    };

    let mut value = alice_step(&bob, &mut alice);
    trace.clear();
    trace.push(value);
    let mut converged = false;
    let mut sweeps = 0;
    while sweeps < config.max_sweeps {
        sweeps += 1;
        bell::combine(expr, &alice, n, true, &mut bob);
        bell::normalize_blocks(&mut bob, n);
        let next = alice_step(&bob, &mut alice);
        trace.push(next);
        let improvement = next - value;
        value = next;
        if improvement <= config.conv_tol * value.abs() {
            converged = true;
            break;
        }
    }

    let bob = VectorSet::new_unchecked(n, bob)?;
    let value = bell::bob_value(expr, &bob)?;
    Ok(OptRun {
        n,
        value,
        bob,
        converged,
        sweeps,
        restart_index: 0,
    })
}

pub fn seesaw(expr: &BellExpression, init: &VectorSet, config: &OptimizerConfig) -> Result<OptRun> {
    seesaw_traced(expr, init, config, &mut Vec::new())
}

/// Bob's initial vectors for one restart: normalized standard-normal
/// coordinates from the ChaCha stream `restart` of `seed`.
pub fn random_bob(cols: usize, n: usize, seed: u64, restart: usize) -> VectorSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    random_unit_vectors(&mut rng, cols, n)
}

pub(crate) fn random_unit_vectors<R: Rng>(rng: &mut R, count: usize, n: usize) -> VectorSet {
    let mut data = Vec::with_capacity(count * n);
    for _ in 0..count {
        loop {
            let mut v: Vec<f64> = (0..n).map(|_| rng.sample(StandardNormal)).collect();
            if linalg::normalize_in_place(&mut v, 1e-150) {
                data.extend_from_slice(&v);
                break;
            }
        }
    }
    VectorSet::new_unchecked(n, data).expect("n >= 1")
}

/// Best of `config.restarts` independent see-saw runs in `R^n`; ties go to
/// the lowest restart index.
pub fn max_over_restarts<E: Executor>(
    expr: &BellExpression,
    n: usize,
    config: &OptimizerConfig,
    exec: &E,
) -> Result<OptRun> {
    if n == 0 {
        return Err(Error::Domain("dimension n must be at least 1".into()));
    }
    config.validate()?;
    let restarts = config.restarts.max(1);
    let runs = exec.map(restarts, |k| {
        let init = random_bob(expr.cols(), n, config.seed, k);
        seesaw(expr, &init, config).map(|mut r| {
            r.restart_index = k;
            r
        })
    });
    let mut best: Option<OptRun> = None;
    for run in runs {
        let run = run?;
        if best.as_ref().is_none_or(|b| run.value > b.value) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

/// Where a profile value comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ValueSource {
    /// Exhaustive enumeration (n = 1).
    Exact,
    /// Closed-form value injected by a caller.
    Analytic,
    /// Best see-saw value found; a lower bound on `T^n`.
    Heuristic,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ProfileEntry {
    pub n: usize,
    pub value: f64,
    pub converged: bool,
    pub restarts: usize,
    pub source: ValueSource,
    pub bob: VectorSet,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct DimensionProfile {
    pub entries: Vec<ProfileEntry>,
    pub warnings: Vec<String>,
}

impl DimensionProfile {
    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn get(&self, n: usize) -> Option<&ProfileEntry> {
        self.entries.iter().find(|e| e.n == n)
    }

    /// Replaces the value at `n` by a closed-form one.
    pub fn inject_analytic(&mut self, n: usize, value: f64) -> Result<()> {
        let e = self
            .entries
            .iter_mut()
            .find(|e| e.n == n)
            .ok_or_else(|| Error::Domain(format!("profile has no entry for n = {n}")))?;
        e.value = value;
        e.converged = true;
        e.source = ValueSource::Analytic;
        Ok(())
    }
}

/// Default profile length: Bob's span suffices and Alice follows Bob.
pub fn default_n_max(expr: &BellExpression) -> usize {
    expr.rows().min(expr.cols())
}

/// `T^1 .. T^{n_max}`. Each `n >= 2` takes the better of the random restarts
/// and a warm start from the `(n-1)`-dimensional optimum padded with a zero
/// coordinate, so the profile is nondecreasing. `n = 1` is exact whenever
/// enumeration is feasible.
pub fn dimension_profile<E: Executor>(
    expr: &BellExpression,
    n_max: usize,
    config: &OptimizerConfig,
    exec: &E,
) -> Result<DimensionProfile> {
    if n_max == 0 {
        return Err(Error::Domain("n_max must be at least 1".into()));
    }
    config.validate()?;
    let mut entries: Vec<ProfileEntry> = Vec::with_capacity(n_max);
    let mut warnings = Vec::new();

    if expr.cols() <= ENUMERATION_CAP {
        let c = classical_max(expr)?;
        let bob = VectorSet::new(1, c.argmax.iter().map(|&s| f64::from(s)).collect())?;
        entries.push(ProfileEntry {
            n: 1,
            value: c.value,
            converged: true,
            restarts: 0,
            source: ValueSource::Exact,
            bob,
        });
    } else {
        warnings.push(format!(
            "{} Bob settings exceed the enumeration cap; T^1 is a heuristic lower bound",
            expr.cols()
        ));
        let run = max_over_restarts(expr, 1, config, exec)?;
        entries.push(ProfileEntry {
            n: 1,
            value: run.value,
            converged: run.converged,
            restarts: config.restarts.max(1),
            source: ValueSource::Heuristic,
            bob: run.bob,
        });
    }

    for n in 2..=n_max {
        let prev = entries.last().expect("n = 1 entry present");
        let padded = prev.bob.padded(n);
        let mut best = max_over_restarts(expr, n, config, exec)?;
        let warm = seesaw(expr, &padded, config)?;
        if warm.value > best.value {
            best = warm;
        }
        let entry = if best.value >= prev.value {
            ProfileEntry {
                n,
                value: best.value,
                converged: best.converged,
                restarts: config.restarts.max(1) + 1,
                source: ValueSource::Heuristic,
                bob: best.bob,
            }
        } else {
            ProfileEntry {
                n,
                value: prev.value,
                converged: prev.converged && best.converged,
                restarts: config.restarts.max(1) + 1,
                source: ValueSource::Heuristic,
                bob: padded,
            }
        };
        entries.push(entry);
    }
    Ok(DimensionProfile { entries, warnings })
}

/// [`dimension_profile`] on the calling thread.
pub fn dimension_profile_seq(
    expr: &BellExpression,
    n_max: usize,
    config: &OptimizerConfig,
) -> Result<DimensionProfile> {
    dimension_profile(expr, n_max, config, &Sequential)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Grade {
    Analytic,
    Heuristic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ProfileSummary {
    pub n: usize,
    pub value: f64,
    pub converged: bool,
    pub restarts: usize,
    pub source: ValueSource,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Gap {
    pub lower: usize,
    pub upper: usize,
    pub size: f64,
    /// Systems of local (complex) dimension `witness_dim` cannot exceed
    /// `threshold`.
    pub witness_dim: usize,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct WitnessReport {
    pub profile: Vec<ProfileSummary>,
    pub gaps: Vec<Gap>,
    /// Largest dimension certified insufficient by any gap.
    pub witness_dim: Option<usize>,
    pub grade: Grade,
    /// `W^d` belonging to `witness_dim`.
    pub threshold: Option<f64>,
}

/// Whether `upper - lower` is a gap under `gap_tol`.
pub fn is_gap(lower: f64, upper: f64, gap_tol: f64) -> bool {
    upper - lower > gap_tol.max(gap_tol * upper)
}

pub fn detect_gaps(profile: &DimensionProfile, config: &OptimizerConfig) -> WitnessReport {
    let summary: Vec<ProfileSummary> = profile
        .entries
        .iter()
        .map(|e| ProfileSummary {
            n: e.n,
            value: e.value,
            converged: e.converged,
            restarts: e.restarts,
            source: e.source,
        })
        .collect();

    let mut gaps = Vec::new();
    let mut involved_heuristic = false;
    for w in summary.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        if lo.converged && hi.converged && is_gap(lo.value, hi.value, config.gap_tol) {
            involved_heuristic |=
                lo.source == ValueSource::Heuristic || hi.source == ValueSource::Heuristic;
            gaps.push(Gap {
                lower: lo.n,
                upper: hi.n,
                size: hi.value - lo.value,
                witness_dim: bell::witness_dimension(lo.n, Field::Complex).expect("n >= 1"),
                threshold: lo.value,
            });
        }
    }
    if gaps.is_empty() {
        involved_heuristic = summary.iter().any(|e| e.source == ValueSource::Heuristic);
    }
    let top = gaps.iter().max_by_key(|g| (g.witness_dim, g.lower));
    WitnessReport {
        witness_dim: top.map(|g| g.witness_dim),
        threshold: top.map(|g| g.threshold),
        grade: if involved_heuristic {
            Grade::Heuristic
        } else {
            Grade::Analytic
        },
        gaps,
        profile: summary,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classical::classical_max;
    use crate::families::{bgamma_matrix, chsh_matrix};
    use core::f64::consts::SQRT_2;

    fn fast() -> OptimizerConfig {
        OptimizerConfig {
            restarts: 10,
            ..Default::default()
        }
    }

    #[test]
    fn chsh_planar_optimum() {
        let init = random_bob(2, 2, 7, 0);
        let r = seesaw(&chsh_matrix(), &init, &fast()).unwrap();
        assert!((r.value - 2.0 * SQRT_2).abs() < 1e-9);
        assert!(r.converged);
    }

    #[test]
    fn one_dimension_never_beats_classical() {
        let e = bgamma_matrix(4, 1.3).unwrap();
        let c = classical_max(&e).unwrap().value;
        for k in 0..20 {
            let r = seesaw(&e, &random_bob(4, 1, 3, k), &fast()).unwrap();
            assert!(r.value <= c + 1e-12);
        }
    }

    #[test]
    fn trace_is_monotone() {
        let e = bgamma_matrix(4, 1.4153).unwrap();
        let mut trace = Vec::new();
        for k in 0..10 {
            seesaw_traced(&e, &random_bob(4, 3, 11, k), &fast(), &mut trace).unwrap();
            let scale = trace.last().unwrap().abs().max(1.0);
            assert!(trace
                .windows(2)
                .all(|w| w[1] >= w[0] - MONOTONE_SLACK * scale));
        }
    }

    #[test]
    fn run_value_is_bob_value() {
        let e = bgamma_matrix(3, 1.0).unwrap();
        let r = max_over_restarts(&e, 2, &fast(), &Sequential).unwrap();
        assert!((r.value - bell::bob_value(&e, &r.bob).unwrap()).abs() < 1e-10);
    }

    #[test]
    fn single_entry_is_one_in_any_dimension() {
        let e = BellExpression::new(1, 1, vec![1.0]).unwrap();
        for n in 1..=4 {
            let r = max_over_restarts(&e, n, &fast(), &Sequential).unwrap();
            assert!((r.value - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn zero_dimension_rejected() {
        assert!(max_over_restarts(&chsh_matrix(), 0, &fast(), &Sequential).is_err());
        assert!(dimension_profile_seq(&chsh_matrix(), 0, &fast()).is_err());
    }

    #[test]
    fn restart_streams_are_reproducible_and_distinct() {
        assert_eq!(random_bob(3, 4, 9, 2), random_bob(3, 4, 9, 2));
        assert_ne!(random_bob(3, 4, 9, 2), random_bob(3, 4, 9, 3));
        assert_ne!(random_bob(3, 4, 9, 2), random_bob(3, 4, 10, 2));
    }

    #[test]
    fn chsh_profile_and_gap() {
        let p = dimension_profile_seq(&chsh_matrix(), 3, &fast()).unwrap();
        assert_eq!(p.entries[0].value, 2.0);
        assert_eq!(p.entries[0].source, ValueSource::Exact);
        assert!((p.entries[1].value - 2.0 * SQRT_2).abs() < 1e-9);
        assert!((p.entries[2].value - p.entries[1].value).abs() < 1e-8);
        let report = detect_gaps(&p, &fast());
        assert_eq!(report.gaps.len(), 1);
        assert_eq!((report.gaps[0].lower, report.gaps[0].upper), (1, 2));
        assert_eq!(report.witness_dim, Some(1));
        assert_eq!(report.threshold, Some(2.0));
        assert_eq!(report.grade, Grade::Heuristic);
    }

    fn synthetic(values: &[f64], source: ValueSource) -> DimensionProfile {
        DimensionProfile {
            entries: values
                .iter()
                .enumerate()
                .map(|(k, &value)| ProfileEntry {
                    n: k + 1,
                    value,
                    converged: true,
                    restarts: 0,
                    source,
                    bob: VectorSet::new(1, vec![1.0]).unwrap(),
                })
                .collect(),
            warnings: Vec::new(),
        }
    }

    #[test]
    fn gap_mapping_arithmetic() {
        let r = detect_gaps(
            &synthetic(&[5.0, 5.8894, 6.0], ValueSource::Heuristic),
            &fast(),
        );
        let dims: Vec<_> = r.gaps.iter().map(|g| (g.lower, g.witness_dim)).collect();
        assert_eq!(dims, vec![(1, 1), (2, 1)]);

        let r = detect_gaps(
            &synthetic(&[8.0, 10.0, 10.47, 10.583], ValueSource::Heuristic),
            &fast(),
        );
        let last = r.gaps.last().unwrap();
        assert_eq!((last.lower, last.upper, last.witness_dim), (3, 4, 2));
        assert_eq!(r.witness_dim, Some(2));
        assert_eq!(r.threshold, Some(10.47));
    }

    #[test]
    fn gap_tolerance_and_convergence_gate() {
        let r = detect_gaps(
            &synthetic(&[1.0, 1.0 + 5e-6], ValueSource::Heuristic),
            &fast(),
        );
        assert!(r.gaps.is_empty());
        let mut p = synthetic(&[1.0, 2.0], ValueSource::Heuristic);
        p.entries[1].converged = false;
        assert!(detect_gaps(&p, &fast()).gaps.is_empty());
    }

    #[test]
    fn analytic_entries_give_analytic_grade() {
        let r = detect_gaps(
            &synthetic(&[0.75, 0.925, 1.0], ValueSource::Analytic),
            &fast(),
        );
        assert_eq!(r.grade, Grade::Analytic);
        let mut p = synthetic(&[0.75, 0.925, 1.0], ValueSource::Heuristic);
        p.inject_analytic(3, 1.0).unwrap();
        assert_eq!(detect_gaps(&p, &fast()).grade, Grade::Heuristic);
    }

    #[test]
    fn exhausted_budget_is_not_reported_as_converged() {
        let cfg = OptimizerConfig {
            restarts: 2,
            max_sweeps: 1,
            ..OptimizerConfig::default()
        };
        let p = dimension_profile_seq(&bgamma_matrix(5, 1.3).unwrap(), 5, &cfg).unwrap();
        assert!(p.entries[0].converged);
        assert!(p.entries[1..].iter().all(|e| !e.converged));
    }
}
