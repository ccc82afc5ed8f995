//! Small dense helpers: vector arithmetic and a symmetric eigensolver.
//!
//! Matrices here are at most a few hundred rows, so everything is plain
//! row-major `Vec<f64>` storage with straightforward loops.

use alloc::vec;
use alloc::vec::Vec;

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    libm::sqrt(dot(a, a))
}

/// Normalizes `v` in place. Returns `false` (leaving `v` untouched) when the
/// norm is below `floor`.
pub fn normalize_in_place(v: &mut [f64], floor: f64) -> bool {
    let n = norm(v);
    if n < floor {
        return false;
    }
    v.iter_mut().for_each(|x| *x /= n);
    true
}

/// Eigen-decomposition of a symmetric matrix.
///
/// Eigenvalues are sorted in descending order; `vectors` is row-major with
/// eigenvector `k` stored in column `k`.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub size: usize,
    pub values: Vec<f64>,
    pub vectors: Vec<f64>,
}

impl SymmetricEigen {
    /// Cyclic Jacobi rotations. `a` is a row-major `size x size` symmetric
    /// matrix; only its values are read.
    pub fn new(a: &[f64], size: usize) -> Self {
        assert_eq!(a.len(), size * size);
        let mut m = a.to_vec();
        let mut v = vec![0.0; size * size];
        for i in 0..size {
            v[i * size + i] = 1.0;
        }

        let scale: f64 = m.iter().map(|x| x * x).sum::<f64>();
        for _sweep in 0..100 {
            let off: f64 = (0..size)
                .flat_map(|i| (0..size).filter(move |&j| j != i).map(move |j| (i, j)))
                .map(|(i, j)| m[i * size + j] * m[i * size + j])
                .sum();
            if off <= 1e-30 * scale || off == 0.0 {
                break;
            }
            for p in 0..size {
                for q in (p + 1)..size {
                    let apq = m[p * size + q];
                    if apq == 0.0 {
                        continue;
                    }
                    let app = m[p * size + p];
                    let aqq = m[q * size + q];
                    let theta = (aqq - app) / (2.0 * apq);
                    let t = theta.signum() / (theta.abs() + libm::sqrt(theta * theta + 1.0));
                    let t = if theta == 0.0 { 1.0 } else { t };
                    let c = 1.0 / libm::sqrt(t * t + 1.0);
                    let s = t * c;
                    for k in 0..size {
                        let akp = m[k * size + p];
                        let akq = m[k * size + q];
                        m[k * size + p] = c * akp - s * akq;
                        m[k * size + q] = s * akp + c * akq;
                    }
                    for k in 0..size {
                        let apk = m[p * size + k];
                        let aqk = m[q * size + k];
                        m[p * size + k] = c * apk - s * aqk;
                        m[q * size + k] = s * apk + c * aqk;
                    }
                    for k in 0..size {
                        let vkp = v[k * size + p];
                        let vkq = v[k * size + q];
                        v[k * size + p] = c * vkp - s * vkq;
                        v[k * size + q] = s * vkp + c * vkq;
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..size).collect();
        order.sort_by(|&a, &b| m[b * size + b].total_cmp(&m[a * size + a]));
        let values = order.iter().map(|&k| m[k * size + k]).collect();
        let mut vectors = vec![0.0; size * size];
        for (new, &old) in order.iter().enumerate() {
            for r in 0..size {
                vectors[r * size + new] = v[r * size + old];
            }
        }
        Self {
            size,
            values,
            vectors,
        }
    }

    pub fn vector_entry(&self, row: usize, k: usize) -> f64 {
        self.vectors[row * self.size + k]
    }
}
