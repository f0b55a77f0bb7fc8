//! Pure and mixed N-qubit states.
//!
//! Qubit 1 is the most significant bit of a computational-basis index.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::pauli::{PauliSpectrum, PauliString, SPECTRUM_MAX_QUBITS};
use crate::transform::pauli_table;

/// Largest pure register (two-copy Bell sampling of 12-qubit states).
pub const MAX_STATE_QUBITS: usize = 24;

/// Largest density matrix.
pub const MAX_DENSITY_QUBITS: usize = 8;

const NORM_TOL: f64 = 1e-10;
const RESIDUE_TOL: f64 = 1e-8;

fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

/// Anything a Pauli-spectrum quantity can be evaluated on.
pub trait QuantumState {
    fn n_qubits(&self) -> usize;

    /// `<sigma>` (pure) or `tr(rho sigma)` (mixed).
    fn expectation(&self, sigma: &PauliString) -> Result<f64>;

    /// All 4^N expectation values, indexed by the interleaved word `r`.
    fn pauli_expectations(&self) -> Result<Vec<f64>>;
}

fn real_parts(table: Vec<Complex64>) -> Result<Vec<f64>> {
    let mut worst = 0.0f64;
    let out = table
        .into_iter()
        .map(|c| {
            worst = worst.max(c.im.abs());
            c.re
        })
        .collect();
    if worst > RESIDUE_TOL {
        return Err(Error::Consistency(format!(
            "Pauli expectation has imaginary part {worst:e}"
        )));
    }
    Ok(out)
}

fn checked_real(c: Complex64) -> Result<f64> {
    if c.im.abs() > RESIDUE_TOL {
        return Err(Error::Consistency(format!(
            "Pauli expectation has imaginary part {:e}",
            c.im
        )));
    }
    Ok(c.re)
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    fn check_n(n_qubits: usize) -> Result<()> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("a state needs at least one qubit".into()));
        }
        Error::check_capacity("state vector", n_qubits, MAX_STATE_QUBITS)
    }

    /// Takes ownership of `amplitudes`; the vector must have length 2^N and unit norm.
    pub fn from_amplitudes(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_n(n_qubits)?;
        Error::check_match(1usize << n_qubits, amplitudes.len())?;
        let s = StateVector {
            n_qubits,
            amplitudes,
        };
        let norm = s.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidArgument(format!(
                "amplitudes have squared norm {norm}, expected 1"
            )));
        }
        Ok(s)
    }

    /// Normalizes `amplitudes` before wrapping them.
    pub fn from_unnormalized(n_qubits: usize, mut amplitudes: Vec<Complex64>) -> Result<Self> {
        Self::check_n(n_qubits)?;
        Error::check_match(1usize << n_qubits, amplitudes.len())?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(Error::InvalidArgument("zero or non-finite amplitude vector".into()));
        }
        let scale = 1.0 / norm.sqrt();
        for a in &mut amplitudes {
            *a *= scale;
        }
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    pub(crate) fn from_raw(n_qubits: usize, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 1 << n_qubits);
        StateVector {
            n_qubits,
            amplitudes,
        }
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        Self::check_n(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidArgument(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![zero(); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// `|0>^N`.
    pub fn zero_state(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    /// `|+>^N`.
    pub fn plus_state(n_qubits: usize) -> Result<Self> {
        Self::check_n(n_qubits)?;
        let dim = 1usize << n_qubits;
        let a = Complex64::new(1.0 / (dim as f64).sqrt(), 0.0);
        Ok(StateVector {
            n_qubits,
            amplitudes: vec![a; dim],
        })
    }

    /// `(|0> + e^{i phi}|1>)/sqrt(2)` on every qubit.
    pub fn phase_product(n_qubits: usize, phi: f64) -> Result<Self> {
        let one = Self::single_qubit(
            Complex64::new(1.0, 0.0),
            Complex64::from_polar(1.0, phi),
        )?;
        one.power(n_qubits)
    }

    /// `|T>^N` with `|T> = (|0> + e^{i pi/4}|1>)/sqrt(2)`.
    pub fn t_state(n_qubits: usize) -> Result<Self> {
        Self::phase_product(n_qubits, core::f64::consts::FRAC_PI_4)
    }

    /// Normalized single-qubit state `a|0> + b|1>`.
    pub fn single_qubit(a: Complex64, b: Complex64) -> Result<Self> {
        Self::from_unnormalized(1, vec![a, b])
    }

    /// Haar-random state from a normalized complex Gaussian vector.
    pub fn haar_random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<Self> {
        Self::check_n(n_qubits)?;
        let dim = 1usize << n_qubits;
        let amplitudes: Vec<Complex64> = (0..dim)
            .map(|_| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                Complex64::new(re, im)
            })
            .collect();
        Self::from_unnormalized(n_qubits, amplitudes)
    }

    /// Haar-random product of single-qubit states.
    pub fn random_product<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<Self> {
        Self::check_n(n_qubits)?;
        let mut out = Self::haar_random(1, rng)?;
        for _ in 1..n_qubits {
            out = out.tensor(&Self::haar_random(1, rng)?)?;
        }
        Ok(out)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub(crate) fn amplitudes_mut(&mut self) -> &mut [Complex64] {
        &mut self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Element-wise complex conjugate in the computational basis.
    pub fn conjugate(&self) -> StateVector {
        StateVector {
            n_qubits: self.n_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a.conj()).collect(),
        }
    }

    /// `self ⊗ other`, with `self` on the leading qubits.
    pub fn tensor(&self, other: &StateVector) -> Result<StateVector> {
        let n = self.n_qubits + other.n_qubits;
        Self::check_n(n)?;
        let mut amplitudes = Vec::with_capacity(1 << n);
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        Ok(StateVector {
            n_qubits: n,
            amplitudes,
        })
    }

    /// `self^{⊗k}`.
    pub fn power(&self, k: usize) -> Result<StateVector> {
        if k == 0 {
            return Err(Error::InvalidArgument("tensor power must be positive".into()));
        }
        Self::check_n(self.n_qubits * k)?;
        let mut out = self.clone();
        for _ in 1..k {
            out = out.tensor(self)?;
        }
        Ok(out)
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        Error::check_match(self.n_qubits, other.n_qubits)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Computational-basis probabilities `|<k|psi>|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Distance after removing the relative global phase.
    pub fn distance_up_to_phase(&self, other: &StateVector) -> Result<f64> {
        let ov = self.inner(other)?;
        let phase = if ov.norm() > 0.0 { ov / ov.norm() } else { Complex64::new(1.0, 0.0) };
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a * phase - b).norm_sqr())
            .sum::<f64>()
            .sqrt())
    }

    /// Projects the listed qubits (1-based) onto `outcome` (bit `i` of
    /// `outcome` for `qubits[i]`, most significant first) and returns the
    /// probability with the normalized post-measurement state.
    pub fn measure_outcome(&self, qubits: &[usize], outcome: usize) -> Result<(f64, Option<StateVector>)> {
        let n = self.n_qubits;
        let m = qubits.len();
        let mut mask = 0usize;
        let mut want = 0usize;
        for (i, &q) in qubits.iter().enumerate() {
            if q == 0 || q > n {
                return Err(Error::QubitIndex {
                    index: q,
                    n_qubits: n,
                });
            }
            let pos = n - q;
            mask |= 1 << pos;
            if outcome >> (m - 1 - i) & 1 == 1 {
                want |= 1 << pos;
            }
        }
        let projected: Vec<Complex64> = self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(k, a)| if k & mask == want { *a } else { zero() })
            .collect();
        let p: f64 = projected.iter().map(|a| a.norm_sqr()).sum();
        if p <= 0.0 {
            return Ok((0.0, None));
        }
        Ok((p, Some(Self::from_unnormalized(n, projected)?)))
    }

    pub fn pauli_spectrum(&self) -> Result<PauliSpectrum> {
        let e = self.pauli_expectations()?;
        Ok(PauliSpectrum::from_expectations(self.n_qubits, &e))
    }

    /// `<self|sigma_r|other>` for every `r`, indexed by the interleaved word.
    pub fn transition_table(&self, other: &StateVector) -> Result<Vec<Complex64>> {
        Error::check_match(self.n_qubits, other.n_qubits)?;
        Error::check_capacity("Pauli table", self.n_qubits, SPECTRUM_MAX_QUBITS)?;
        let a = &self.amplitudes;
        let b = &other.amplitudes;
        Ok(pauli_table(self.n_qubits, |x, k| a[k ^ x].conj() * b[k]))
    }
}

impl QuantumState for StateVector {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn expectation(&self, sigma: &PauliString) -> Result<f64> {
        Error::check_match(self.n_qubits, sigma.n_qubits())?;
        let mut scratch = self.amplitudes.clone();
        sigma.apply(&mut scratch)?;
        let v: Complex64 = self
            .amplitudes
            .iter()
            .zip(&scratch)
            .map(|(a, b)| a.conj() * b)
            .sum();
        checked_real(v)
    }

    fn pauli_expectations(&self) -> Result<Vec<f64>> {
        real_parts(self.transition_table(self)?)
    }
}

/// Row-major 2^N x 2^N density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    data: Vec<Complex64>,
}

impl DensityMatrix {
    fn check_n(n_qubits: usize) -> Result<()> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("a state needs at least one qubit".into()));
        }
        Error::check_capacity("density matrix", n_qubits, MAX_DENSITY_QUBITS)
    }

    pub fn from_pure(psi: &StateVector) -> Result<Self> {
        Self::check_n(psi.n_qubits)?;
        let a = &psi.amplitudes;
        let dim = a.len();
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(a[i] * a[j].conj());
            }
        }
        Ok(DensityMatrix {
            n_qubits: psi.n_qubits,
            data,
        })
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        Self::check_n(n_qubits)?;
        let dim = 1usize << n_qubits;
        let mut data = vec![zero(); dim * dim];
        for i in 0..dim {
            data[i * dim + i] = Complex64::new(1.0 / dim as f64, 0.0);
        }
        Ok(DensityMatrix { n_qubits, data })
    }

    /// Validates trace, Hermiticity and positivity.
    pub fn from_matrix(n_qubits: usize, matrix: &DMatrix<Complex64>) -> Result<Self> {
        Self::check_n(n_qubits)?;
        let dim = 1usize << n_qubits;
        Error::check_match(dim, matrix.nrows())?;
        Error::check_match(dim, matrix.ncols())?;
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(matrix[(i, j)]);
            }
        }
        let rho = DensityMatrix { n_qubits, data };
        rho.validate(1e-9)?;
        Ok(rho)
    }

    #[cfg(test)]
    pub(crate) fn from_raw(n_qubits: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), 1 << (2 * n_qubits));
        DensityMatrix { n_qubits, data }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.data[row * self.dim() + col]
    }

    /// Row-major entries.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub(crate) fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let dim = self.dim();
        DMatrix::from_row_slice(dim, dim, &self.data)
    }

    pub fn trace(&self) -> f64 {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i].re).sum()
    }

    /// `tr(rho^2)`.
    pub fn purity(&self) -> f64 {
        // rho is Hermitian, so tr(rho^2) = sum |rho_ij|^2
        self.data.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn max_hermiticity_error(&self) -> f64 {
        let dim = self.dim();
        let mut worst = 0.0f64;
        for i in 0..dim {
            for j in i..dim {
                worst = worst.max((self.data[i * dim + j] - self.data[j * dim + i].conj()).norm());
            }
        }
        worst
    }

    pub fn min_eigenvalue(&self) -> f64 {
        let eig = self.to_matrix().symmetric_eigen();
        eig.eigenvalues.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn validate(&self, tol: f64) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > tol {
            return Err(Error::InvalidArgument(format!("trace {tr} differs from 1")));
        }
        let herm = self.max_hermiticity_error();
        if herm > tol {
            return Err(Error::NotHermitian(herm));
        }
        let min = self.min_eigenvalue();
        if min < -tol {
            return Err(Error::InvalidArgument(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// `self ⊗ other`.
    pub fn tensor(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        let n = self.n_qubits + other.n_qubits;
        Self::check_n(n)?;
        let (da, db) = (self.dim(), other.dim());
        let dim = da * db;
        let mut data = vec![zero(); dim * dim];
        for ia in 0..da {
            for ja in 0..da {
                let a = self.data[ia * da + ja];
                if a == zero() {
                    continue;
                }
                for ib in 0..db {
                    for jb in 0..db {
                        data[(ia * db + ib) * dim + ja * db + jb] = a * other.data[ib * db + jb];
                    }
                }
            }
        }
        Ok(DensityMatrix { n_qubits: n, data })
    }

    /// Computational-basis probabilities (the diagonal).
    pub fn probabilities(&self) -> Vec<f64> {
        let dim = self.dim();
        (0..dim).map(|i| self.data[i * dim + i].re).collect()
    }
}

impl QuantumState for DensityMatrix {
    fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    fn expectation(&self, sigma: &PauliString) -> Result<f64> {
        Error::check_match(self.n_qubits, sigma.n_qubits())?;
        // tr(sigma rho) = sum_m i^y (-1)^{z.m} rho[m, m^x]
        let dim = self.dim();
        let x = sigma.x_mask() as usize;
        let z = sigma.z_mask() as usize;
        let mut acc = zero();
        for m in 0..dim {
            let v = self.data[m * dim + (m ^ x)];
            if (z & m).count_ones() % 2 == 0 {
                acc += v;
            } else {
                acc -= v;
            }
        }
        checked_real(crate::transform::times_i_pow(acc, sigma.y_count()))
    }

    fn pauli_expectations(&self) -> Result<Vec<f64>> {
        Error::check_capacity("Pauli table", self.n_qubits, SPECTRUM_MAX_QUBITS)?;
        let dim = self.dim();
        let data = &self.data;
        real_parts(pauli_table(self.n_qubits, |x, m| data[m * dim + (m ^ x)]))
    }
}
