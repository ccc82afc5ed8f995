//! Gram matrices of Bob's vectors and the Gram form of the Bob value.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::bell::{BellExpression, VectorSet};
use crate::error::{Error, Result};
use crate::linalg::{self, SymmetricEigen};

pub const SYMMETRY_TOL: f64 = 1e-12;
pub const PSD_TOL: f64 = -1e-9;
pub const RADICAND_CLAMP: f64 = -1e-12;
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Symmetric, unit-diagonal, positive semidefinite matrix `X_ij = b_i . b_j`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GramMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl GramMatrix {
    /// Validates symmetry (1e-12), a unit diagonal and PSD-ness (smallest
    /// eigenvalue at least -1e-9). The diagonal is stored as exactly 1.
    pub fn new(size: usize, mut entries: Vec<f64>) -> Result<Self> {
        if size == 0 || entries.len() != size * size {
            return Err(Error::Dimension(format!(
                "{} entries for a {size}x{size} Gram matrix",
                entries.len()
            )));
        }
        for i in 0..size {
            let d = entries[i * size + i];
            if (d - 1.0).abs() > SYMMETRY_TOL {
                return Err(Error::Domain(format!("diagonal entry {i} is {d}, not 1")));
            }
            entries[i * size + i] = 1.0;
            for j in 0..i {
                let (a, b) = (entries[i * size + j], entries[j * size + i]);
                if !a.is_finite() || (a - b).abs() > SYMMETRY_TOL {
                    return Err(Error::Domain(format!(
                        "entries ({i},{j}) and ({j},{i}) differ"
                    )));
                }
            }
        }
        let eig = SymmetricEigen::new(&entries, size);
        let min = eig.values.last().copied().unwrap_or(0.0);
        if min < PSD_TOL {
            return Err(Error::Domain(format!(
                "not positive semidefinite: eigenvalue {min}"
            )));
        }
        Ok(Self { size, entries })
    }

    /// Matrix with unit diagonal and every off-diagonal entry equal to `x`.
    pub fn constant(size: usize, x: f64) -> Result<Self> {
        let mut e = vec![x; size * size];
        for i in 0..size {
            e[i * size + i] = 1.0;
        }
        Self::new(size, e)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Off-diagonal entries in pair-index order, `x[nu - 1]` for
    /// `nu = pair_index(i, j)`.
    pub fn pair_values(&self) -> Vec<f64> {
        let mut x = vec![0.0; self.size * (self.size - 1) / 2];
        for i in 2..=self.size {
            for j in 1..i {
                x[pair_index(i, j) - 1] = self.get(i - 1, j - 1);
            }
        }
        x
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        SymmetricEigen::new(&self.entries, self.size).values
    }
}

/// Single index of the pair `i > j >= 1` (1-based): `(i-1)(i-2)/2 + j`.
pub fn pair_index(i: usize, j: usize) -> usize {
    assert!(i > j && j >= 1, "pair index needs i > j >= 1");
    (i - 1) * (i - 2) / 2 + j
}

/// Inverse of [`pair_index`].
pub fn pair_from_index(nu: usize) -> (usize, usize) {
    assert!(nu >= 1);
    let mut i = 2;
    while (i - 1) * i / 2 < nu {
        i += 1;
    }
    (i, nu - (i - 1) * (i - 2) / 2)
}

pub fn gram_of(vectors: &VectorSet) -> Result<GramMatrix> {
    let m = vectors.len();
    let mut e = vec![0.0; m * m];
    for i in 0..m {
        e[i * m + i] = 1.0;
        for j in 0..i {
            let d = linalg::dot(vectors.get(i), vectors.get(j));
            e[i * m + j] = d;
            e[j * m + i] = d;
        }
    }
    GramMatrix::new(m, e)
}

/// Eigenvalues above `tol` times the largest one.
pub fn effective_rank(g: &GramMatrix, tol: f64) -> usize {
    let values = g.eigenvalues();
    let top = values.first().copied().unwrap_or(0.0);
    if top <= 0.0 {
        return 0;
    }
    values.iter().filter(|&&v| v > tol * top).count()
}

/// Factors `G = B B^T` with unit rows in `R^dim` through the
/// eigen-decomposition, which also handles rank-deficient matrices.
pub fn vectors_from_gram(g: &GramMatrix, dim: usize) -> Result<VectorSet> {
    if dim == 0 {
        return Err(Error::Domain("dimension must be at least 1".into()));
    }
    let rank = effective_rank(g, DEFAULT_RANK_TOL);
    if rank > dim {
        return Err(Error::Rank { rank, dim });
    }
    let m = g.size();
    let eig = SymmetricEigen::new(g.entries(), m);
    let used = dim.min(m);
    let mut data = vec![0.0; m * dim];
    for row in 0..m {
        for k in 0..used {
            data[row * dim + k] = libm::sqrt(eig.values[k].max(0.0)) * eig.vector_entry(row, k);
        }
        let v = &mut data[row * dim..(row + 1) * dim];
        if !linalg::normalize_in_place(v, 1e-300) {
            return Err(Error::Numerical(format!(
                "vector {row} vanished in the factorization"
            )));
        }
    }
    VectorSet::new(dim, data)
}

/// Bob value as a function of the Gram matrix:
/// `sum_k sqrt(C_k + 2 sum_nu Y_k,nu x_nu)` with `C_k = sum_i M_ki^2` and
/// `Y_k,nu = M_ki M_kj` for the pair `nu = (i, j)`.
pub fn bob_value_from_gram(expr: &BellExpression, g: &GramMatrix) -> Result<f64> {
    if g.size() != expr.cols() {
        return Err(Error::Dimension(format!(
            "Gram matrix of size {} for {} Bob settings",
            g.size(),
            expr.cols()
        )));
    }
    let x = g.pair_values();
    let mb = expr.cols();
    let mut total = 0.0;
    for k in 0..expr.rows() {
        let row = expr.row(k);
        let c: f64 = row.iter().map(|m| m * m).sum();
        let mut cross = 0.0;
        for (nu, xv) in x.iter().enumerate() {
            let (i, j) = pair_from_index(nu + 1);
            cross += row[i - 1] * row[j - 1] * xv;
        }
        let radicand = c + 2.0 * cross;
        if radicand < RADICAND_CLAMP * c.max(1.0) {
            return Err(Error::Numerical(format!(
                "negative radicand {radicand} in row {k} (m_B = {mb})"
            )));
        }
        total += libm::sqrt(radicand.max(0.0));
    }
    Ok(total)
}

/// Determinant of the `k x k` matrix with `p` on the diagonal and `q`
/// elsewhere: `[p + (k-1) q] (p - q)^(k-1)`.
pub fn constant_gram_determinant(p: f64, q: f64, k: usize) -> f64 {
    assert!(k >= 1);
    (p + (k as f64 - 1.0) * q) * libm::pow(p - q, (k - 1) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bell::bob_value;
    use core::f64::consts::SQRT_2;

    fn bgamma31() -> BellExpression {
        BellExpression::from_rows(&[
            [1.0, -1.0, 0.0],
            [1.0, 0.0, -1.0],
            [0.0, 1.0, -1.0],
            [1.0, 1.0, 1.0],
        ])
        .unwrap()
    }

    #[test]
    fn pair_index_layout() {
        assert_eq!(pair_index(2, 1), 1);
        assert_eq!(pair_index(3, 1), 2);
        assert_eq!(pair_index(3, 2), 3);
        assert_eq!(pair_index(4, 1), 4);
        for nu in 1..=45 {
            let (i, j) = pair_from_index(nu);
            assert_eq!(pair_index(i, j), nu);
        }
    }

    #[test]
    fn identity_gram_gives_chsh_optimum() {
        let e = BellExpression::from_rows(&[[1.0, 1.0], [1.0, -1.0]]).unwrap();
        let g = GramMatrix::constant(2, 0.0).unwrap();
        assert!((bob_value_from_gram(&e, &g).unwrap() - 2.0 * SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn stationary_gram_of_bgamma_gives_six() {
        let g = GramMatrix::constant(3, -0.125).unwrap();
        assert!((bob_value_from_gram(&bgamma31(), &g).unwrap() - 6.0).abs() < 1e-13);
        let b = vectors_from_gram(&g, 3).unwrap();
        assert!((bob_value(&bgamma31(), &b).unwrap() - 6.0).abs() < 1e-12);
    }

    #[test]
    fn rank_one_gram_sums_column_combinations() {
        let e = bgamma31();
        let g = GramMatrix::constant(3, 1.0).unwrap();
        let expected: f64 = (0..e.rows())
            .map(|k| e.row(k).iter().sum::<f64>().abs())
            .sum();
        assert!((bob_value_from_gram(&e, &g).unwrap() - expected).abs() < 1e-12);
        assert_eq!(effective_rank(&g, DEFAULT_RANK_TOL), 1);
        let b = vectors_from_gram(&g, 1).unwrap();
        assert_eq!(b.dim(), 1);
    }

    #[test]
    fn eigenvalues_of_stationary_gram() {
        let g = GramMatrix::constant(3, -0.125).unwrap();
        let ev = g.eigenvalues();
        // constant off-diagonal q: 1 + 2q once, 1 - q twice
        assert!((ev[0] - 1.125).abs() < 1e-14);
        assert!((ev[1] - 1.125).abs() < 1e-14);
        assert!((ev[2] - 0.75).abs() < 1e-14);
        assert_eq!(effective_rank(&g, DEFAULT_RANK_TOL), 3);
    }

    #[test]
    fn identity_gram_factors_orthonormally() {
        let g = GramMatrix::constant(4, 0.0).unwrap();
        let b = vectors_from_gram(&g, 4).unwrap();
        let back = gram_of(&b).unwrap();
        for (x, y) in back.entries().iter().zip(g.entries()) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_error_when_dimension_too_small() {
        let g = GramMatrix::constant(3, 0.0).unwrap();
        assert_eq!(
            vectors_from_gram(&g, 2),
            Err(Error::Rank { rank: 3, dim: 2 })
        );
    }

    #[test]
    fn rejects_non_psd_and_asymmetric() {
        assert!(GramMatrix::constant(3, -0.6).is_err());
        assert!(GramMatrix::new(2, vec![1.0, 0.5, 0.4, 1.0]).is_err());
        assert!(GramMatrix::new(2, vec![2.0, 0.0, 0.0, 1.0]).is_err());
    }

    #[test]
    fn constant_determinant_examples() {
        assert_eq!(constant_gram_determinant(1.0, 0.0, 5), 1.0);
        assert_eq!(constant_gram_determinant(1.0, 1.0, 2), 0.0);
        assert!((constant_gram_determinant(1.0, -0.125, 3) - 243.0 / 256.0).abs() < 1e-15);
    }
}
