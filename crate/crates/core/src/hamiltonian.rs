//! Hamiltonians and time evolution: GUE matrices, random Pauli sums and the
//! disordered XXZ chain.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::kernels;
use crate::pauli::{Pauli, PauliString};
use crate::state::StateVector;

/// Largest register for Hamiltonian dynamics.
pub const MAX_HAMILTONIAN_QUBITS: usize = 10;

const HERMITIAN_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub enum Hamiltonian {
    Dense {
        n_qubits: usize,
        matrix: DMatrix<Complex64>,
    },
    PauliSum {
        n_qubits: usize,
        terms: Vec<(f64, PauliString)>,
    },
}

fn check_n(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::InvalidArgument("a Hamiltonian needs at least one qubit".into()));
    }
    Error::check_capacity("Hamiltonian", n_qubits, MAX_HAMILTONIAN_QUBITS)
}

fn hermiticity_error(m: &DMatrix<Complex64>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..m.nrows() {
        for j in i..m.ncols() {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

impl Hamiltonian {
    pub fn from_dense(n_qubits: usize, matrix: DMatrix<Complex64>) -> Result<Self> {
        check_n(n_qubits)?;
        let dim = 1usize << n_qubits;
        Error::check_match(dim, matrix.nrows())?;
        Error::check_match(dim, matrix.ncols())?;
        let err = hermiticity_error(&matrix);
        if err > HERMITIAN_TOL {
            return Err(Error::NotHermitian(err));
        }
        Ok(Hamiltonian::Dense { n_qubits, matrix })
    }

    pub fn from_pauli_sum(n_qubits: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        check_n(n_qubits)?;
        for (g, sigma) in &terms {
            Error::check_match(n_qubits, sigma.n_qubits())?;
            if !g.is_finite() {
                return Err(Error::InvalidArgument(format!(
                    "coefficient of {sigma} is not finite"
                )));
            }
        }
        Ok(Hamiltonian::PauliSum { n_qubits, terms })
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            Hamiltonian::Dense { n_qubits, .. } | Hamiltonian::PauliSum { n_qubits, .. } => *n_qubits,
        }
    }

    pub fn to_dense(&self) -> DMatrix<Complex64> {
        match self {
            Hamiltonian::Dense { matrix, .. } => matrix.clone(),
            Hamiltonian::PauliSum { n_qubits, terms } => {
                let dim = 1usize << n_qubits;
                let mut m = DMatrix::zeros(dim, dim);
                for (g, sigma) in terms {
                    m += sigma.to_matrix() * Complex64::new(*g, 0.0);
                }
                m
            }
        }
    }

    /// `tr(H^2) / 2^N`.
    pub fn normalized_square_trace(&self) -> f64 {
        let m = self.to_dense();
        m.iter().map(|c| c.norm_sqr()).sum::<f64>() / m.nrows() as f64
    }

    pub fn propagator(&self) -> Result<SpectralPropagator> {
        SpectralPropagator::new(self)
    }
}

/// GUE matrix `(G + G^dagger)/2 * 2^{-N/2}` with standard complex Gaussian
/// `G` (real and imaginary parts each N(0,1)); the spectrum fills `[-2, 2]`
/// for large N.
pub fn gue_hamiltonian<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<Hamiltonian> {
    check_n(n_qubits)?;
    let dim = 1usize << n_qubits;
    let g = DMatrix::from_fn(dim, dim, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex64::new(re, im)
    });
    let scale = Complex64::new(0.5 / (dim as f64).sqrt(), 0.0);
    let matrix = (&g + g.adjoint()) * scale;
    Ok(Hamiltonian::Dense { n_qubits, matrix })
}

/// `K` distinct uniformly drawn non-identity Pauli strings with standard
/// normal coefficients, rescaled so that `tr(H^2)/2^N = K`.
pub fn random_pauli_hamiltonian<R: Rng + ?Sized>(n_qubits: usize, k: usize, rng: &mut R) -> Result<Hamiltonian> {
    check_n(n_qubits)?;
    let available = (1usize << (2 * n_qubits)) - 1;
    if k == 0 || k > available {
        return Err(Error::InvalidArgument(format!(
            "K = {k} must lie in 1..={available} for {n_qubits} qubits"
        )));
    }
    let mut chosen = BTreeSet::new();
    let mut terms = Vec::with_capacity(k);
    while terms.len() < k {
        let r = rng.random_range(1..=available as u64);
        if chosen.insert(r) {
            let g: f64 = rng.sample(StandardNormal);
            terms.push((g, PauliString::from_index(n_qubits, r)?));
        }
    }
    let sum_sq: f64 = terms.iter().map(|(g, _)| g * g).sum();
    let scale = (k as f64 / sum_sq).sqrt();
    for (g, _) in &mut terms {
        *g *= scale;
    }
    Ok(Hamiltonian::PauliSum { n_qubits, terms })
}

/// Open XXZ chain `sum_k (X_k X_{k+1} + Y_k Y_{k+1} + delta Z_k Z_{k+1}) +
/// sum_k h_k Z_k` with `h_k` uniform in `[-w, w]`.
pub fn ising_hamiltonian<R: Rng + ?Sized>(n_qubits: usize, delta: f64, w: f64, rng: &mut R) -> Result<Hamiltonian> {
    check_n(n_qubits)?;
    if n_qubits < 2 {
        return Err(Error::InvalidArgument("the chain needs at least two qubits".into()));
    }
    if !(w >= 0.0) || !delta.is_finite() {
        return Err(Error::InvalidArgument("disorder width must be nonnegative and delta finite".into()));
    }
    let pair = |k: usize, p: Pauli| -> Result<PauliString> {
        PauliString::single(n_qubits, k, p)?.product(&PauliString::single(n_qubits, k + 1, p)?)
    };
    let mut terms = Vec::new();
    for k in 1..n_qubits {
        terms.push((1.0, pair(k, Pauli::X)?));
        terms.push((1.0, pair(k, Pauli::Y)?));
        terms.push((delta, pair(k, Pauli::Z)?));
    }
    for k in 1..=n_qubits {
        let h = if w > 0.0 { rng.random_range(-w..=w) } else { 0.0 };
        terms.push((h, PauliString::single(n_qubits, k, Pauli::Z)?));
    }
    Ok(Hamiltonian::PauliSum { n_qubits, terms })
}

/// Eigendecomposition of a Hamiltonian, reused across evolution times.
#[derive(Clone, Debug)]
pub struct SpectralPropagator {
    n_qubits: usize,
    eigenvalues: DVector<f64>,
    eigenvectors: DMatrix<Complex64>,
}

impl SpectralPropagator {
    pub fn new(h: &Hamiltonian) -> Result<Self> {
        let n_qubits = h.n_qubits();
        check_n(n_qubits)?;
        let m = h.to_dense();
        let err = hermiticity_error(&m);
        if err > HERMITIAN_TOL {
            return Err(Error::NotHermitian(err));
        }
        let eig = m.symmetric_eigen();
        Ok(SpectralPropagator {
            n_qubits,
            eigenvalues: eig.eigenvalues,
            eigenvectors: eig.eigenvectors,
        })
    }

    pub fn eigenvalues(&self) -> &[f64] {
        self.eigenvalues.as_slice()
    }

    /// Dense `exp(-i H t)`.
    pub fn unitary(&self, t: f64) -> DMatrix<Complex64> {
        let mut scaled = self.eigenvectors.clone();
        for (mut col, lambda) in scaled.column_iter_mut().zip(self.eigenvalues.iter()) {
            col *= Complex64::from_polar(1.0, -lambda * t);
        }
        scaled * self.eigenvectors.adjoint()
    }

    /// `exp(-i H t)|input>`.
    pub fn evolve(&self, t: f64, input: &StateVector) -> Result<StateVector> {
        Error::check_match(self.n_qubits, input.n_qubits())?;
        let psi = DVector::from_column_slice(input.amplitudes());
        let mut coeffs = self.eigenvectors.adjoint() * psi;
        for (c, lambda) in coeffs.iter_mut().zip(self.eigenvalues.iter()) {
            *c *= Complex64::from_polar(1.0, -lambda * t);
        }
        let out = &self.eigenvectors * coeffs;
        Ok(StateVector::from_raw(self.n_qubits, out.as_slice().to_vec()))
    }
}

pub fn evolve(h: &Hamiltonian, t: f64, input: &StateVector) -> Result<StateVector> {
    SpectralPropagator::new(h)?.evolve(t, input)
}

/// Greedy partition of the terms into mutually commuting groups.
fn commuting_groups(terms: &[(f64, PauliString)]) -> Vec<Vec<(f64, PauliString)>> {
    let mut groups: Vec<Vec<(f64, PauliString)>> = Vec::new();
    for term in terms {
        let slot = groups
            .iter_mut()
            .find(|g| g.iter().all(|(_, s)| s.symplectic(&term.1) == 0));
        match slot {
            Some(g) => g.push(*term),
            None => groups.push(alloc::vec![*term]),
        }
    }
    groups
}

/// First-order product formula with `steps` slices, one factor per
/// commuting group.
pub fn trotter_evolve(h: &Hamiltonian, t: f64, steps: usize, input: &StateVector) -> Result<StateVector> {
    let (n_qubits, terms) = match h {
        Hamiltonian::PauliSum { n_qubits, terms } => (*n_qubits, terms),
        Hamiltonian::Dense { .. } => {
            return Err(Error::InvalidArgument(
                "Trotter evolution needs a Pauli-sum Hamiltonian".into(),
            ))
        }
    };
    if steps == 0 {
        return Err(Error::InvalidArgument("Trotter step count must be at least 1".into()));
    }
    Error::check_match(n_qubits, input.n_qubits())?;
    let dt = t / steps as f64;
    let groups = commuting_groups(terms);
    let mut out = input.clone();
    let buf = out.amplitudes_mut();
    for _ in 0..steps {
        for group in &groups {
            for (g, sigma) in group {
                if sigma.is_identity() {
                    continue;
                }
                // exp(-i g sigma dt) is a rotation by 2 g dt
                kernels::apply_pauli_rotation(
                    buf,
                    sigma.x_mask() as usize,
                    sigma.z_mask() as usize,
                    2.0 * g * dt,
                    false,
                );
            }
        }
    }
    Ok(out)
}
