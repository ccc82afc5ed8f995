//! Quantum realizations of vector strategies.
//!
//! Anticommuting involutions `Gamma_1..Gamma_m` on `k = floor(m/2)` qubits
//! turn a unit vector `a` into the ±1-valued observable
//! `A = sum_k a_k Gamma_k`. On the maximally entangled state
//! `(1/sqrt D) sum_t |t>|t>` one has `<A (x) B> = Tr(A B^T) / D`, so taking
//! Bob's observables as entrywise transposes reproduces every dot product.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::bell::{evaluate_strategy, BellExpression, Strategy, VectorSet, UNIT_TOL};
use crate::error::{Error, Result};

/// Largest number of generators (local dimension `2^6 = 64`).
pub const MAX_GENERATORS: usize = 12;

/// Residual bound for a realization to pass verification.
pub const VERIFY_TOL: f64 = 1e-10;

/// Dense square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    fn from_real(dim: usize, re: &[f64]) -> Self {
        Self {
            dim,
            data: re.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Complex64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    out.data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        out
    }

    pub fn kron(&self, other: &Self) -> Self {
        let (a, b) = (self.dim, other.dim);
        let d = a * b;
        let mut out = Self::zeros(d);
        for i in 0..a {
            for j in 0..a {
                let x = self.data[i * a + j];
                for k in 0..b {
                    for l in 0..b {
                        out.data[(i * b + k) * d + j * b + l] = x * other.data[k * b + l];
                    }
                }
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let d = self.dim;
        let mut out = Self::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out.data[j * d + i] = self.data[i * d + j];
            }
        }
        out
    }

    pub fn add_scaled(&mut self, s: f64, other: &Self) {
        for (x, y) in self.data.iter_mut().zip(&other.data) {
            *x += y * s;
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_diff(&self, other: &Self) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }
}

fn pauli_x() -> CMatrix {
    CMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])
}

fn pauli_y() -> CMatrix {
    let mut y = CMatrix::zeros(2);
    y.set(0, 1, Complex64::new(0.0, -1.0));
    y.set(1, 0, Complex64::new(0.0, 1.0));
    y
}

fn pauli_z() -> CMatrix {
    CMatrix::from_real(2, &[1.0, 0.0, 0.0, -1.0])
}

/// Local dimension `2^floor(m/2)` used for `m` generators.
pub fn local_dim(m: usize) -> usize {
    1 << (m / 2)
}

/// `m` pairwise anticommuting Hermitian involutions of size `2^floor(m/2)`:
/// `Z^(j-1) X I^(k-j)`, `Z^(j-1) Y I^(k-j)` for `j = 1..k`, then `Z^k`.
pub fn clifford_generators(m: usize) -> Result<Vec<CMatrix>> {
    if m == 0 || m > MAX_GENERATORS {
        return Err(Error::Capacity(format!(
            "need 1..={MAX_GENERATORS} generators, asked for {m}"
        )));
    }
    let k = m / 2;
    let string = |j: usize, middle: &CMatrix| {
        let mut out = CMatrix::identity(1);
        for q in 0..k {
            let factor = match q.cmp(&j) {
                core::cmp::Ordering::Less => pauli_z(),
                core::cmp::Ordering::Equal => middle.clone(),
                core::cmp::Ordering::Greater => CMatrix::identity(2),
            };
            out = out.kron(&factor);
        }
        out
    };
    let mut gens = Vec::with_capacity(2 * k + 1);
    for j in 0..k {
        gens.push(string(j, &pauli_x()));
        gens.push(string(j, &pauli_y()));
    }
    let mut last = CMatrix::identity(1);
    for _ in 0..k {
        last = last.kron(&pauli_z());
    }
    gens.push(last);
    gens.truncate(m);
    Ok(gens)
}

/// Observables and a maximally entangled state reproducing a vector
/// strategy.
#[derive(Debug, Clone)]
pub struct QuantumRealization {
    pub local_dim: usize,
    pub generators: Vec<CMatrix>,
    pub alice_obs: Vec<CMatrix>,
    pub bob_obs: Vec<CMatrix>,
    /// Amplitudes on the `D^2`-dimensional product basis `|s>|t>`, index
    /// `s * D + t`.
    pub state: Vec<Complex64>,
}

fn observable(gens: &[CMatrix], v: &[f64]) -> CMatrix {
    let mut out = CMatrix::zeros(gens[0].dim());
    for (g, &c) in gens.iter().zip(v) {
        if c != 0.0 {
            out.add_scaled(c, g);
        }
    }
    out
}

pub fn realize(alice: &VectorSet, bob: &VectorSet) -> Result<QuantumRealization> {
    if alice.dim() != bob.dim() {
        return Err(Error::Dimension(
            "Alice and Bob vectors differ in dimension".into(),
        ));
    }
    for v in alice.iter().chain(bob.iter()) {
        let n = crate::linalg::norm(v);
        if (n - 1.0).abs() > UNIT_TOL {
            return Err(Error::Domain(format!(
                "vector of norm {n} is not a unit vector"
            )));
        }
    }
    let m = alice.dim();
    let generators = clifford_generators(m)?;
    let d = local_dim(m);
    let alice_obs = alice.iter().map(|a| observable(&generators, a)).collect();
    let bob_obs = bob
        .iter()
        .map(|b| observable(&generators, b).transpose())
        .collect();
    let amp = Complex64::new(1.0 / libm::sqrt(d as f64), 0.0);
    let mut state = vec![Complex64::new(0.0, 0.0); d * d];
    for t in 0..d {
        state[t * d + t] = amp;
    }
    Ok(QuantumRealization {
        local_dim: d,
        generators,
        alice_obs,
        bob_obs,
        state,
    })
}

/// `<psi| A (x) B |psi>` on the product basis `|s>|t>`, skipping zero
/// amplitudes.
pub fn expectation(state: &[Complex64], a: &CMatrix, b: &CMatrix) -> Complex64 {
    let d = a.dim();
    let support: Vec<(usize, usize, Complex64)> = state
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() != 0.0)
        .map(|(idx, &z)| (idx / d, idx % d, z))
        .collect();
    let mut total = Complex64::new(0.0, 0.0);
    for &(s, t, left) in &support {
        for &(u, v, right) in &support {
            total += left.conj() * a.get(s, u) * b.get(t, v) * right;
        }
    }
    total
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct VerificationReport {
    pub local_dim: usize,
    /// `max |<A_i (x) B_j> - a_i . b_j|`.
    pub max_correlation_error: f64,
    /// `max |O^2 - I|` over generators and observables.
    pub max_involution_residual: f64,
    /// `max |G_k G_l + G_l G_k - 2 delta_kl I|`.
    pub max_anticommutator_residual: f64,
    /// Imaginary parts of the correlations, which must vanish.
    pub max_imaginary_part: f64,
    pub state_norm_error: f64,
    pub realized_value: f64,
    pub vector_value: f64,
    pub passed: bool,
}

pub fn verify_realization(
    r: &QuantumRealization,
    expr: &BellExpression,
    target: &Strategy,
) -> Result<VerificationReport> {
    if r.alice_obs.len() != expr.rows() || r.bob_obs.len() != expr.cols() {
        return Err(Error::Dimension(
            "realization does not match the expression".into(),
        ));
    }
    let d = r.local_dim;
    let id = CMatrix::identity(d);

    let mut anti: f64 = 0.0;
    for (k, gk) in r.generators.iter().enumerate() {
        for (l, gl) in r.generators.iter().enumerate().skip(k) {
            let mut sum = gk.mul(gl);
            sum.add_scaled(1.0, &gl.mul(gk));
            let expected = if k == l { 2.0 } else { 0.0 };
            let mut target_m = CMatrix::zeros(d);
            target_m.add_scaled(expected, &id);
            anti = anti.max(sum.max_diff(&target_m));
        }
    }

    let involution = r
        .generators
        .iter()
        .chain(&r.alice_obs)
        .chain(&r.bob_obs)
        .map(|o| o.mul(o).max_diff(&id))
        .fold(0.0, f64::max);

    let norm2: f64 = r.state.iter().map(|z| z.norm_sqr()).sum();

    let mut corr_err: f64 = 0.0;
    let mut imag: f64 = 0.0;
    let mut realized = 0.0;
    for (i, a) in r.alice_obs.iter().enumerate() {
        for (j, b) in r.bob_obs.iter().enumerate() {
            let e = expectation(&r.state, a, b);
            let dot = crate::linalg::dot(target.alice.get(i), target.bob.get(j));
            corr_err = corr_err.max((e.re - dot).abs());
            imag = imag.max(e.im.abs());
            realized += expr.get(i, j) * e.re;
        }
    }
    let vector_value = evaluate_strategy(expr, target)?;
    let state_norm_error = (libm::sqrt(norm2) - 1.0).abs();
    let passed = [
        corr_err,
        involution,
        anti,
        imag,
        state_norm_error,
        (realized - vector_value).abs(),
    ]
    .iter()
    .all(|&x| x < VERIFY_TOL);
    Ok(VerificationReport {
        local_dim: d,
        max_correlation_error: corr_err,
        max_involution_residual: involution,
        max_anticommutator_residual: anti,
        max_imaginary_part: imag,
        state_norm_error,
        realized_value: realized,
        vector_value,
        passed,
    })
}

/// Alice's reduced state `Tr_B |psi><psi|`.
pub fn reduced_state(r: &QuantumRealization) -> CMatrix {
    let d = r.local_dim;
    let mut rho = CMatrix::zeros(d);
    for s in 0..d {
        for u in 0..d {
            let v: Complex64 = (0..d)
                .map(|t| r.state[s * d + t] * r.state[u * d + t].conj())
                .sum();
            rho.set(s, u, v);
        }
    }
    rho
}
