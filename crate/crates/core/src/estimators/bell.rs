//! Two-copy Bell measurements.
//!
//! The 2N-qubit register interleaves the copies: copy `a` qubit `j` sits
//! right before copy `b` qubit `j`. Measuring each pair in the Bell basis
//! (CNOT from `a_j` to `b_j`, then H on `a_j`) yields the bit pair
//! `(r_{2j-1}, r_{2j})`, so the 2N-bit outcome is the interleaved Pauli index.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{Error, Result};
use crate::kernels;
use crate::state::{DensityMatrix, StateVector, MAX_DENSITY_QUBITS, MAX_STATE_QUBITS};
use crate::transform::interleave;

fn bell_pairs(buf: &mut [Complex64], n_qubits: usize, base: usize) {
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let hm = [
        [Complex64::new(h, 0.0), Complex64::new(h, 0.0)],
        [Complex64::new(h, 0.0), Complex64::new(-h, 0.0)],
    ];
    for j in 0..n_qubits {
        let b = base + 2 * j;
        let a = b + 1;
        kernels::apply_cnot(buf, a, b);
        kernels::apply_1q(buf, a, &hm);
    }
}

/// Outcome distribution of Bell measurements on `a ⊗ b`, indexed by `r`.
pub fn bell_distribution(a: &StateVector, b: &StateVector) -> Result<Vec<f64>> {
    let n = a.n_qubits();
    Error::check_match(n, b.n_qubits())?;
    Error::check_capacity("two-copy register", 2 * n, MAX_STATE_QUBITS)?;
    let dim = 1usize << n;
    let mut buf = vec![Complex64::new(0.0, 0.0); dim * dim];
    for (ia, &va) in a.amplitudes().iter().enumerate() {
        for (ib, &vb) in b.amplitudes().iter().enumerate() {
            buf[interleave(ib as u64, ia as u64) as usize] = va * vb;
        }
    }
    bell_pairs(&mut buf, n, 0);
    Ok(buf.iter().map(|c| c.norm_sqr()).collect())
}

/// Outcome distribution of Bell measurements on `rho_a ⊗ rho_b`.
pub fn bell_distribution_mixed(a: &DensityMatrix, b: &DensityMatrix) -> Result<Vec<f64>> {
    let n = a.n_qubits();
    Error::check_match(n, b.n_qubits())?;
    Error::check_capacity("two-copy density matrix", 2 * n, MAX_DENSITY_QUBITS)?;
    let dim = 1usize << n;
    let big = dim * dim;
    // vectorized 2N-qubit density matrix: row bits above column bits
    let mut buf = vec![Complex64::new(0.0, 0.0); big * big];
    let da = a.data();
    let db = b.data();
    for ia in 0..dim {
        for ib in 0..dim {
            let row = interleave(ib as u64, ia as u64) as usize;
            for ja in 0..dim {
                let va = da[ia * dim + ja];
                if va == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for jb in 0..dim {
                    let col = interleave(jb as u64, ja as u64) as usize;
                    buf[row * big + col] = va * db[ib * dim + jb];
                }
            }
        }
    }
    // the Bell circuit is real, so rows and columns get the same gates
    bell_pairs(&mut buf, n, 2 * n);
    bell_pairs(&mut buf, n, 0);
    Ok((0..big).map(|k| buf[k * big + k].re.max(0.0)).collect())
}

/// Draws Bell outcomes `r` from a fixed distribution.
#[derive(Clone, Debug)]
pub struct BellSampler {
    n_qubits: usize,
    probabilities: Vec<f64>,
    index: WeightedIndex<f64>,
}

impl BellSampler {
    pub fn new(n_qubits: usize, probabilities: Vec<f64>) -> Result<Self> {
        Error::check_match(1usize << (2 * n_qubits), probabilities.len())?;
        let index = WeightedIndex::new(&probabilities)
            .map_err(|e| Error::InvalidArgument(alloc::format!("bad outcome distribution: {e}")))?;
        Ok(BellSampler {
            n_qubits,
            probabilities,
            index,
        })
    }

    /// Bell measurements on `psi ⊗ psi`.
    pub fn two_copies(psi: &StateVector) -> Result<Self> {
        Self::new(psi.n_qubits(), bell_distribution(psi, psi)?)
    }

    /// Bell measurements on `psi* ⊗ psi`, distributed as the Pauli spectrum.
    pub fn with_conjugate(psi: &StateVector) -> Result<Self> {
        Self::new(psi.n_qubits(), bell_distribution(&psi.conjugate(), psi)?)
    }

    pub fn two_copies_mixed(rho: &DensityMatrix) -> Result<Self> {
        Self::new(rho.n_qubits(), bell_distribution_mixed(rho, rho)?)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        self.index.sample(rng) as u64
    }
}
