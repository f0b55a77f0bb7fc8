//! Pure stabilizer states by orbit closure of `|0>^N` under H, S and CNOT.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::circuit::Gate;
use crate::error::{Error, Result};
use crate::state::StateVector;

/// Largest register for exhaustive enumeration (36720 states at N = 4).
pub const MAX_ENUMERATION_QUBITS: usize = 4;

const KEY_SCALE: f64 = 1e6;

/// `2^N prod_{k=1}^N (2^k + 1)`.
pub fn stabilizer_count(n_qubits: usize) -> u64 {
    let mut c = 1u64 << n_qubits;
    for k in 1..=n_qubits {
        c *= (1u64 << k) + 1;
    }
    c
}

/// Global phase fixed so the first nonzero amplitude is real positive.
fn canonical(amps: &[Complex64]) -> Vec<Complex64> {
    let lead = amps
        .iter()
        .find(|a| a.norm() > 1e-9)
        .copied()
        .unwrap_or(Complex64::new(1.0, 0.0));
    let phase = lead.conj() / lead.norm();
    amps.iter().map(|a| a * phase).collect()
}

fn key(amps: &[Complex64]) -> Vec<(i64, i64)> {
    amps.iter()
        .map(|a| ((a.re * KEY_SCALE).round() as i64, (a.im * KEY_SCALE).round() as i64))
        .collect()
}

#[derive(Clone, Debug)]
pub struct StabilizerSet {
    n_qubits: usize,
    states: Vec<StateVector>,
}

impl StabilizerSet {
    pub fn enumerate(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("need at least one qubit".into()));
        }
        Error::check_capacity("stabilizer enumeration", n_qubits, MAX_ENUMERATION_QUBITS)?;
        let mut generators = Vec::new();
        for q in 1..=n_qubits {
            generators.push(Gate::H { qubit: q });
            generators.push(Gate::S { qubit: q });
            for t in 1..=n_qubits {
                if t != q {
                    generators.push(Gate::Cnot {
                        control: q,
                        target: t,
                    });
                }
            }
        }
        let start = StateVector::zero_state(n_qubits)?;
        let mut seen = BTreeSet::new();
        seen.insert(key(start.amplitudes()));
        let mut states = alloc::vec![start];
        let mut frontier_start = 0;
        while frontier_start < states.len() {
            let frontier_end = states.len();
            for i in frontier_start..frontier_end {
                for g in &generators {
                    let mut amps = states[i].amplitudes().to_vec();
                    g.apply_to_buffer(&mut amps, n_qubits, 0, n_qubits, false);
                    let amps = canonical(&amps);
                    if seen.insert(key(&amps)) {
                        states.push(StateVector::from_raw(n_qubits, amps));
                    }
                }
            }
            frontier_start = frontier_end;
        }
        Ok(StabilizerSet { n_qubits, states })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn states(&self) -> &[StateVector] {
        &self.states
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    /// `max_phi |<phi|psi>|^2`.
    pub fn fidelity(&self, psi: &StateVector) -> Result<f64> {
        Error::check_match(self.n_qubits, psi.n_qubits())?;
        let mut best = 0.0f64;
        for phi in &self.states {
            best = best.max(phi.fidelity(psi)?);
        }
        Ok(best)
    }

    /// `-ln F_STAB`.
    pub fn d_min(&self, psi: &StateVector) -> Result<f64> {
        Ok(-self.fidelity(psi)?.ln())
    }
}

pub fn stabilizer_fidelity(psi: &StateVector) -> Result<f64> {
    StabilizerSet::enumerate(psi.n_qubits())?.fidelity(psi)
}

pub fn d_min(psi: &StateVector) -> Result<f64> {
    StabilizerSet::enumerate(psi.n_qubits())?.d_min(psi)
}
