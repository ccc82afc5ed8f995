//! Correlation Bell expressions and unit-vector strategies.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg;

/// Tolerance on the Euclidean norm of strategy vectors.
pub const UNIT_TOL: f64 = 1e-12;

/// Below this norm an Alice (or Bob) combination is treated as zero and the
/// vector is resolved to the first basis vector.
pub const ZERO_COMBINATION: f64 = 1e-14;

/// Coefficient matrix `M` of `sum_ij M_ij a_i . b_j`, `rows` = Alice's
/// settings, `cols` = Bob's settings, row-major.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct BellExpression {
    rows: usize,
    cols: usize,
    entries: Vec<f64>,
}

impl BellExpression {
    pub fn new(rows: usize, cols: usize, entries: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty shape {rows}x{cols}")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} expression",
                entries.len()
            )));
        }
        if let Some(pos) = entries.iter().position(|x| !x.is_finite()) {
            return Err(Error::Domain(format!(
                "entry ({}, {}) is not finite",
                pos / cols + 1,
                pos % cols + 1
            )));
        }
        if entries.iter().all(|&x| x == 0.0) {
            return Err(Error::Domain("all-zero expression".into()));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let entries = rows
            .iter()
            .flat_map(|r| r.as_ref().iter().copied())
            .collect();
        Self::new(rows.len(), cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.cols + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// `sum_ij |M_ij|`, the trivial upper bound on any strategy value.
    pub fn abs_sum(&self) -> f64 {
        self.entries.iter().map(|x| x.abs()).sum()
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }
}

/// An ordered set of vectors of a common dimension, stored contiguously.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct VectorSet {
    dim: usize,
    data: Vec<f64>,
}

impl VectorSet {
    /// Builds a set of unit vectors; fails if any norm is off by more than
    /// [`UNIT_TOL`].
    pub fn new(dim: usize, data: Vec<f64>) -> Result<Self> {
        let set = Self::new_unchecked(dim, data)?;
        for (k, v) in set.iter().enumerate() {
            let n = linalg::norm(v);
            if (n - 1.0).abs() > UNIT_TOL {
                return Err(Error::Domain(format!("vector {k} has norm {n}")));
            }
        }
        Ok(set)
    }

    pub fn from_vectors<V: AsRef<[f64]>>(vectors: &[V]) -> Result<Self> {
        let dim = vectors.first().map_or(0, |v| v.as_ref().len());
        if vectors.iter().any(|v| v.as_ref().len() != dim) {
            return Err(Error::Dimension("vectors of differing dimension".into()));
        }
        Self::new(
            dim,
            vectors
                .iter()
                .flat_map(|v| v.as_ref().iter().copied())
                .collect(),
        )
    }

    pub(crate) fn new_unchecked(dim: usize, data: Vec<f64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Domain("vector dimension must be at least 1".into()));
        }
        if data.len() % dim != 0 {
            return Err(Error::Dimension(format!(
                "{} coordinates do not split into vectors of dimension {dim}",
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn get(&self, k: usize) -> &[f64] {
        &self.data[k * self.dim..(k + 1) * self.dim]
    }

    #[cfg(test)]
    pub(crate) fn get_mut(&mut self, k: usize) -> &mut [f64] {
        &mut self.data[k * self.dim..(k + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// Embeds every vector into `dim` dimensions by appending zeros.
    pub fn padded(&self, dim: usize) -> Self {
        assert!(dim >= self.dim);
        let mut data = Vec::with_capacity(self.len() * dim);
        for v in self.iter() {
            data.extend_from_slice(v);
            data.extend(core::iter::repeat_n(0.0, dim - self.dim));
        }
        Self { dim, data }
    }
}

/// Alice's and Bob's vectors in a common `R^n`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Strategy {
    pub alice: VectorSet,
    pub bob: VectorSet,
}

impl Strategy {
    pub fn new(alice: VectorSet, bob: VectorSet) -> Result<Self> {
        if alice.dim() != bob.dim() {
            return Err(Error::Dimension(format!(
                "Alice vectors live in R^{}, Bob vectors in R^{}",
                alice.dim(),
                bob.dim()
            )));
        }
        Ok(Self { alice, bob })
    }

    pub fn dim(&self) -> usize {
        self.bob.dim()
    }
}

fn check_bob(expr: &BellExpression, bob: &VectorSet) -> Result<()> {
    if bob.len() != expr.cols() {
        return Err(Error::Dimension(format!(
            "expression has {} Bob settings, got {} vectors",
            expr.cols(),
            bob.len()
        )));
    }
    Ok(())
}

/// `sum_ij M_ij (a_i . b_j)`.
pub fn evaluate_strategy(expr: &BellExpression, s: &Strategy) -> Result<f64> {
    check_bob(expr, &s.bob)?;
    if s.alice.len() != expr.rows() {
        return Err(Error::Dimension(format!(
            "expression has {} Alice settings, got {} vectors",
            expr.rows(),
            s.alice.len()
        )));
    }
    let mut total = 0.0;
    for (i, a) in s.alice.iter().enumerate() {
        for (j, b) in s.bob.iter().enumerate() {
            total += expr.get(i, j) * linalg::dot(a, b);
        }
    }
    Ok(total)
}

/// Accumulates `out_i = sum_j M_ij v_j` (or the transposed product) into a
/// flat buffer of `dim`-vectors.
pub(crate) fn combine(
    expr: &BellExpression,
    vectors: &[f64],
    dim: usize,
    transpose: bool,
    out: &mut [f64],
) {
    out.iter_mut().for_each(|x| *x = 0.0);
    for i in 0..expr.rows() {
        for j in 0..expr.cols() {
            let m = expr.get(i, j);
            if m == 0.0 {
                continue;
            }
            let (src, dst) = if transpose { (i, j) } else { (j, i) };
            let v = &vectors[src * dim..(src + 1) * dim];
            let o = &mut out[dst * dim..(dst + 1) * dim];
            for (o, x) in o.iter_mut().zip(v) {
                *o += m * x;
            }
        }
    }
}

/// Normalizes every block of `buf` into a unit vector, resolving vanishing
/// combinations to `e_1`. Returns the sum of the pre-normalization norms.
pub(crate) fn normalize_blocks(buf: &mut [f64], dim: usize) -> f64 {
    let mut total = 0.0;
    for v in buf.chunks_exact_mut(dim) {
        let n = linalg::norm(v);
        if n < ZERO_COMBINATION {
            v.iter_mut().for_each(|x| *x = 0.0);
            v[0] = 1.0;
        } else {
            total += n;
            v.iter_mut().for_each(|x| *x /= n);
        }
    }
    total
}

/// Alice's best response `a_i = normalize(sum_j M_ij b_j)`.
pub fn optimal_alice(expr: &BellExpression, bob: &VectorSet) -> Result<VectorSet> {
    check_bob(expr, bob)?;
    let dim = bob.dim();
    let mut buf = vec![0.0; expr.rows() * dim];
    combine(expr, bob.as_flat(), dim, false, &mut buf);
    normalize_blocks(&mut buf, dim);
    Ok(VectorSet { dim, data: buf })
}

/// Value with Alice playing her best response: `sum_i |sum_j M_ij b_j|`.
pub fn bob_value(expr: &BellExpression, bob: &VectorSet) -> Result<f64> {
    check_bob(expr, bob)?;
    let dim = bob.dim();
    let mut buf = vec![0.0; expr.rows() * dim];
    combine(expr, bob.as_flat(), dim, false, &mut buf);
    Ok(buf.chunks_exact(dim).map(linalg::norm).sum())
}

/// Whether the Hilbert space in the witness mapping is real or complex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Field {
    Real,
    Complex,
}

/// Local Hilbert dimension `d` whose systems cannot exceed `T^n`.
///
/// Complex systems of dimension `d` are bounded by `T^{2d-1}`, real ones by
/// `T^d`; a gap `T^n < T^{n+1}` therefore witnesses local dimension above
/// `d = floor((n+1)/2)` (complex) or `d = n` (real).
pub fn witness_dimension(n: usize, field: Field) -> Result<usize> {
    if n == 0 {
        return Err(Error::Domain("witness dimension needs n >= 1".into()));
    }
    Ok(match field {
        Field::Complex => (n + 1) / 2,
        Field::Real => n,
    })
}
