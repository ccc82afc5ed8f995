//! The continuum expression `M(x, y) = m <x, y>` on `S^{m-1}`: closed-form
//! maxima and a Monte-Carlo discretization.

use alloc::vec::Vec;
use core::f64::consts::{FRAC_2_PI, PI};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::bell::{BellExpression, VectorSet};
use crate::error::{Error, Result};
use crate::linalg;
use crate::optimizer::random_unit_vectors;

/// Dimension of the index sphere: points live on `S^{m-1}`, or `m -> inf`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SphereDim {
    Finite(usize),
    Infinite,
}

/// Memoized `s_i = int_0^pi sin^i(phi) dphi`, built by
/// `s_i = s_{i-2} (i-1)/i` from `s_0 = pi`, `s_1 = 2`.
#[derive(Debug, Clone)]
pub struct SIntegrals {
    values: Vec<f64>,
}

impl SIntegrals {
    pub fn up_to(max_index: usize) -> Self {
        let mut values = Vec::with_capacity(max_index.max(1) + 1);
        values.push(PI);
        values.push(2.0);
        for i in 2..=max_index {
            let v = values[i - 2] * (i as f64 - 1.0) / i as f64;
            values.push(v);
        }
        values.truncate(max_index + 1);
        Self { values }
    }

    pub fn get(&self, i: usize) -> f64 {
        self.values[i]
    }

    /// `s_n / s_{n-1}`: the `m -> inf` value of `T^n`.
    pub fn ratio(&self, n: usize) -> f64 {
        self.values[n] / self.values[n - 1]
    }
}

pub fn s_integral(i: usize) -> f64 {
    SIntegrals::up_to(i.max(1)).get(i)
}

/// `T^n` of the sphere expression: 1 for `n >= m`, otherwise
/// `(s_{m-1}/s_m)(s_n/s_{n-1})`.
pub fn analytic_tn(m: SphereDim, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    match m {
        SphereDim::Infinite => limit_tn(n),
        SphereDim::Finite(0) => Err(Error::Domain("m must be at least 1".into())),
        SphereDim::Finite(m) if n >= m => Ok(1.0),
        SphereDim::Finite(m) => {
            let s = SIntegrals::up_to(m);
            Ok(s.get(m - 1) / s.get(m) * s.ratio(n))
        }
    }
}

/// `T^n` for `m -> inf`: `s_n / s_{n-1}` (`2/pi` at `n = 1`).
pub fn limit_tn(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    Ok(SIntegrals::up_to(n).ratio(n))
}

/// Quantum-over-classical ratio for `m -> inf`: `(pi/2) s_n / s_{n-1}`.
pub fn limit_ratio(n: usize) -> Result<f64> {
    Ok(PI / 2.0 * limit_tn(n)?)
}

/// `s_n / s_{n-1}` from the Wallis-type products: for even `n`
/// `(pi/4) prod_{i=1}^{n/2-1} (2i+1)^2 / ((2i+1)^2 - 1)`, for odd `n`
/// `(2/pi) prod_{i=1}^{(n-1)/2} (2i)^2 / ((2i)^2 - 1)`.
pub fn limit_tn_product(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    let factor = |k: f64| k * k / (k * k - 1.0);
    Ok(if n % 2 == 0 {
        (1..n / 2).fold(PI / 4.0, |acc, i| acc * factor(2.0 * i as f64 + 1.0))
    } else {
        (1..=(n - 1) / 2).fold(FRAC_2_PI, |acc, i| acc * factor(2.0 * i as f64))
    })
}

/// `lambda = s_{m-1} / (n s_{n-1})`, the common length of the optimal
/// strategy's response components.
pub fn lambda_value(m: usize, n: usize) -> Result<f64> {
    if n == 0 || n > m {
        return Err(Error::Domain("lambda needs 1 <= n <= m".into()));
    }
    let s = SIntegrals::up_to(m);
    Ok(s.get(m - 1) / (n as f64 * s.get(n - 1)))
}

/// Monte-Carlo estimate of `int dsigma(y) <e_{m-n+i}, y> b_i(y)` for the
/// normalized-projection strategy (`component` is 1-based).
pub fn lambda_monte_carlo(
    m: usize,
    n: usize,
    component: usize,
    samples: usize,
    seed: u64,
) -> Result<f64> {
    if n == 0 || n > m || component == 0 || component > n {
        return Err(Error::Domain("need 1 <= component <= n <= m".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let y = random_unit_vectors(&mut rng, samples, m);
    let b = analytic_sphere_strategy(m, n, &y)?;
    let axis = m - n + component - 1;
    let total: f64 = y
        .iter()
        .zip(b.iter())
        .map(|(y, b)| y[axis] * b[component - 1])
        .sum();
    Ok(total / samples as f64)
}

/// A discretized sphere expression together with its sample points.
#[derive(Debug, Clone)]
pub struct SphereSample {
    pub m: usize,
    pub expr: BellExpression,
    pub alice_points: VectorSet,
    pub bob_points: VectorSet,
}

/// `K` uniform points `x_k` for Alice and `K` for Bob on `S^{m-1}`, with
/// `M_kl = m <x_k, y_l> / K^2` (the normalized measure of each pair).
pub fn discretize_sphere_expression(m: usize, points: usize, seed: u64) -> Result<SphereSample> {
    if m == 0 || points == 0 {
        return Err(Error::Domain("need m >= 1 and at least one point".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let x = random_unit_vectors(&mut rng, points, m);
    let y = random_unit_vectors(&mut rng, points, m);
    let scale = m as f64 / (points as f64 * points as f64);
    let mut entries = Vec::with_capacity(points * points);
    for xk in x.iter() {
        for yl in y.iter() {
            entries.push(scale * linalg::dot(xk, yl));
        }
    }
    let expr = BellExpression::new(points, points, entries)?;
    Ok(SphereSample {
        m,
        expr,
        alice_points: x,
        bob_points: y,
    })
}

/// The optimal strategy `b(y) = P_n y / |P_n y|`, projecting onto the last
/// `n` coordinates; returned in the coordinates of that subspace. Points
/// (numerically) orthogonal to the subspace map to its first basis vector.
pub fn analytic_sphere_strategy(m: usize, n: usize, points: &VectorSet) -> Result<VectorSet> {
    if n == 0 || n > m {
        return Err(Error::Domain("strategy needs 1 <= n <= m".into()));
    }
    if points.dim() != m {
        return Err(Error::Dimension("points do not live in R^m".into()));
    }
    let mut data = Vec::with_capacity(points.len() * n);
    for y in points.iter() {
        let mut p = y[m - n..].to_vec();
        if !linalg::normalize_in_place(&mut p, 1e-12) {
            p.iter_mut().for_each(|x| *x = 0.0);
            p[0] = 1.0;
        }
        data.extend_from_slice(&p);
    }
    VectorSet::new(n, data)
}
