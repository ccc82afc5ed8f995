//! The B_gamma family, its gamma = 0 ancestor Z_n, and CHSH.

use alloc::format;
use alloc::vec;

use crate::bell::BellExpression;
use crate::error::{Error, Result};
use crate::gram::pair_from_index;

/// Full-dimension optimum of B_gamma.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct FamilyAnalytic {
    pub mb: usize,
    pub gamma: f64,
    /// `m_B sqrt(gamma^2 + m_B (m_B - 1) / 2)`.
    pub t_max: f64,
    /// Common off-diagonal of the optimal Gram matrix.
    pub x_star: f64,
}

fn difference_rows(mb: usize, extra: usize) -> (usize, vec::Vec<f64>) {
    let pairs = mb * (mb - 1) / 2;
    let mut entries = vec![0.0; (pairs + extra) * mb];
    for nu in 1..=pairs {
        let (i, j) = pair_from_index(nu);
        let row = &mut entries[(nu - 1) * mb..nu * mb];
        row[j - 1] = 1.0;
        row[i - 1] = -1.0;
    }
    (pairs, entries)
}

/// One row `b_j - b_i` per pair `i > j` in pair-index order, then a final
/// row with every entry `gamma`.
pub fn bgamma_matrix(mb: usize, gamma: f64) -> Result<BellExpression> {
    if mb < 2 {
        return Err(Error::Domain("B_gamma needs m_B >= 2".into()));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::Domain(format!(
            "B_gamma needs gamma > 0 (got {gamma}); use zn_matrix for gamma = 0"
        )));
    }
    let (pairs, mut entries) = difference_rows(mb, 1);
    entries[pairs * mb..].iter_mut().for_each(|x| *x = gamma);
    BellExpression::new(pairs + 1, mb, entries)
}

/// The `m_B (m_B - 1) / 2` difference rows of B_gamma without the sum row.
pub fn zn_matrix(mb: usize) -> Result<BellExpression> {
    if mb < 2 {
        return Err(Error::Domain("Z_n needs m_B >= 2".into()));
    }
    let (pairs, entries) = difference_rows(mb, 0);
    BellExpression::new(pairs, mb, entries)
}

pub fn chsh_matrix() -> BellExpression {
    BellExpression::new(2, 2, vec![1.0, 1.0, 1.0, -1.0]).expect("valid fixture")
}

pub fn bgamma_analytic(mb: usize, gamma: f64) -> Result<FamilyAnalytic> {
    if mb < 2 {
        return Err(Error::Domain("B_gamma needs m_B >= 2".into()));
    }
    let m = mb as f64;
    let pairs = m * (m - 1.0) / 2.0;
    let g2 = gamma * gamma;
    Ok(FamilyAnalytic {
        mb,
        gamma,
        t_max: m * libm::sqrt(g2 + pairs),
        x_star: (2.0 * g2 - m) / (2.0 * g2 + m * (m - 1.0)),
    })
}
