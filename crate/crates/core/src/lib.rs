//! Dimension witnesses for bipartite correlation Bell expressions.
//!
//! A correlation Bell expression `sum_ij M_ij E(a_i, b_j)` evaluated on unit
//! vectors in `R^n` has maximum `T^n`. Local complex dimension `d` cannot
//! beat `T^{2d-1}` (real: `T^d`), so a strict gap `T^n < T^{n+1}` makes the
//! expression a witness for dimension `floor((n+1)/2)`.
//!
//! The crate is `no_std` with `alloc`. Parallel execution, IO and the
//! command-line interface live in the `dimwit` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod bell;
pub mod classical;
pub mod error;
pub mod exec;
pub mod families;
pub mod gram;
pub mod linalg;
pub mod optimizer;
pub mod search;
pub mod sphere;
pub mod tsirelson;

pub use bell::{
    bob_value, evaluate_strategy, optimal_alice, witness_dimension, BellExpression, Field,
    Strategy, VectorSet,
};
pub use classical::{bgamma_classical, classical_max, ClassicalResult};
pub use error::{Error, Result};
pub use exec::{Executor, Sequential};
pub use families::{bgamma_analytic, bgamma_matrix, chsh_matrix, zn_matrix, FamilyAnalytic};
pub use gram::{
    bob_value_from_gram, constant_gram_determinant, effective_rank, gram_of, vectors_from_gram,
    GramMatrix,
};
pub use optimizer::{
    detect_gaps, dimension_profile, dimension_profile_seq, max_over_restarts, seesaw,
    DimensionProfile, OptRun, OptimizerConfig, WitnessReport,
};
