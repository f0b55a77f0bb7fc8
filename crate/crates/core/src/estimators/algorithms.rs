use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::state::{DensityMatrix, QuantumState, StateVector};
use crate::transform::deinterleave;

use super::bell::BellSampler;
use super::EstimatorResult;

fn check_shots(shots: u64) -> Result<()> {
    if shots == 0 {
        return Err(Error::InvalidArgument("at least one repetition is required".into()));
    }
    Ok(())
}

fn check_parity_order(n: u32, allow_even: bool) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("the order n must be at least 1".into()));
    }
    if n % 2 == 0 && !allow_even {
        return Err(Error::EvenOrderRefused(n as usize));
    }
    Ok(())
}

/// Per-repetition value of `n` Bell outcomes.
///
/// With `nu1` (`nu2`) the parity of the odd (even) bits of qubit `l` over
/// the `n` outcomes, each qubit contributes `1 - 2 nu1 nu2` for odd `n` and
/// `2 (nu1 - 1)(nu2 - 1)` for even `n`.
pub fn parity_value(outcomes: &[u64], n_qubits: usize) -> f64 {
    let combined = outcomes.iter().fold(0u64, |acc, r| acc ^ r);
    let (x, z) = deinterleave(combined);
    if outcomes.len() % 2 == 1 {
        if (x & z).count_ones() % 2 == 0 {
            1.0
        } else {
            -1.0
        }
    } else if x | z == 0 {
        (1u64 << n_qubits) as f64
    } else {
        0.0
    }
}

/// Two-copy Bell-sampling estimator of `A_n` from an arbitrary outcome sampler.
pub fn algorithm1_with_sampler<R: Rng + ?Sized>(
    sampler: &BellSampler,
    n: u32,
    shots: u64,
    allow_even: bool,
    rng: &mut R,
) -> Result<EstimatorResult> {
    check_parity_order(n, allow_even)?;
    check_shots(shots)?;
    let nq = sampler.n_qubits();
    let mut outcomes = Vec::with_capacity(n as usize);
    let values: Vec<f64> = (0..shots)
        .map(|_| {
            outcomes.clear();
            outcomes.extend((0..n).map(|_| sampler.sample(rng)));
            parity_value(&outcomes, nq)
        })
        .collect();
    Ok(EstimatorResult::from_values(&values, 2 * shots * n as u64))
}

/// Estimates `A_n` from `n` Bell measurements of `psi ⊗ psi` per repetition,
/// without the complex conjugate. Even `n` has exponential variance and is
/// refused unless `allow_even` is set; `n = 1` estimates the purity.
pub fn algorithm1<R: Rng + ?Sized>(
    psi: &StateVector,
    n: u32,
    shots: u64,
    allow_even: bool,
    rng: &mut R,
) -> Result<EstimatorResult> {
    check_parity_order(n, allow_even)?;
    algorithm1_with_sampler(&BellSampler::two_copies(psi)?, n, shots, allow_even, rng)
}

/// [`algorithm1`] on two copies of a mixed state.
pub fn algorithm1_mixed<R: Rng + ?Sized>(
    rho: &DensityMatrix,
    n: u32,
    shots: u64,
    allow_even: bool,
    rng: &mut R,
) -> Result<EstimatorResult> {
    check_parity_order(n, allow_even)?;
    algorithm1_with_sampler(&BellSampler::two_copies_mixed(rho)?, n, shots, allow_even, rng)
}

/// `tr(rho^2)` from single Bell measurements on two copies.
pub fn purity_estimator<R: Rng + ?Sized>(rho: &DensityMatrix, shots: u64, rng: &mut R) -> Result<EstimatorResult> {
    algorithm1_mixed(rho, 1, shots, false, rng)
}

/// Estimates `A_n` for any `n >= 2` using the conjugate state: sample
/// `sigma_r` from the Pauli spectrum with a Bell measurement of
/// `psi* ⊗ psi`, then multiply `2n - 2` fresh single-copy `±1` outcomes of
/// `sigma_r`.
pub fn algorithm2<R: Rng + ?Sized>(psi: &StateVector, n: u32, shots: u64, rng: &mut R) -> Result<EstimatorResult> {
    if n < 2 {
        return Err(Error::InvalidArgument("the conjugate-copy estimator needs n >= 2".into()));
    }
    check_shots(shots)?;
    let sampler = BellSampler::with_conjugate(psi)?;
    let expectations = psi.pauli_expectations()?;
    let extra = 2 * n - 2;
    let values: Vec<f64> = (0..shots)
        .map(|_| {
            let r = sampler.sample(rng) as usize;
            let p_plus = 0.5 * (1.0 + expectations[r]);
            let mut b = 1.0;
            for _ in 0..extra {
                if rng.random::<f64>() >= p_plus {
                    b = -b;
                }
            }
            b
        })
        .collect();
    Ok(EstimatorResult::from_values(&values, 2 * n as u64 * shots))
}

fn shifted_states(circuit: &Circuit, theta: &[f64], k: usize) -> Result<(StateVector, StateVector, StateVector)> {
    let slots = circuit.parameter_gates();
    if k >= slots.len() {
        return Err(Error::InvalidArgument(format!(
            "parameter {k} is not a rotation gate; the circuit has {} rotation parameters",
            slots.len()
        )));
    }
    let base = circuit.with_parameters(theta)?;
    let half_pi = core::f64::consts::FRAC_PI_2;
    Ok((
        base.state()?,
        base.shifted(k, half_pi)?.state()?,
        base.shifted(k, -half_pi)?.state()?,
    ))
}

/// Parameter-shift gradient `dA_n/dtheta_k = n (B_+ - B_-)` with
/// `B_± = 2^{-N} sum_sigma <sigma>_± <sigma>^{2n-1}` evaluated exactly.
pub fn shift_rule_gradient(circuit: &Circuit, theta: &[f64], k: usize, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("the order n must be at least 1".into()));
    }
    let (psi, plus, minus) = shifted_states(circuit, theta, k)?;
    let e = psi.pauli_expectations()?;
    let ep = plus.pauli_expectations()?;
    let em = minus.pauli_expectations()?;
    let nq = psi.n_qubits();
    let mixed_moment = |shift: &[f64]| -> f64 {
        let k = 2 * n as i32 - 1;
        let dim = (1u64 << nq) as f64;
        shift.iter().zip(&e).map(|(s, v)| s * v.powi(k)).sum::<f64>() / dim
    };
    Ok(n as f64 * (mixed_moment(&ep) - mixed_moment(&em)))
}

/// Sampled parameter-shift gradient. Each repetition takes, for each shift
/// sign, one Bell measurement of `psi_± ⊗ psi` and `n - 1` of `psi ⊗ psi`,
/// combined by the parity rule; the value is `n (b_+ - b_-)`.
pub fn gradient_a_n<R: Rng + ?Sized>(
    circuit: &Circuit,
    theta: &[f64],
    k: usize,
    n: u32,
    shots: u64,
    allow_even: bool,
    rng: &mut R,
) -> Result<EstimatorResult> {
    check_parity_order(n, allow_even)?;
    check_shots(shots)?;
    let (psi, plus, minus) = shifted_states(circuit, theta, k)?;
    let nq = psi.n_qubits();
    let same = BellSampler::two_copies(&psi)?;
    let up = BellSampler::new(nq, super::bell_distribution(&plus, &psi)?)?;
    let down = BellSampler::new(nq, super::bell_distribution(&minus, &psi)?)?;
    let nf = n as f64;
    let mut outcomes = Vec::with_capacity(n as usize);
    let mut run = |first: &BellSampler, rng: &mut R| -> f64 {
        outcomes.clear();
        outcomes.push(first.sample(rng));
        outcomes.extend((1..n).map(|_| same.sample(rng)));
        parity_value(&outcomes, nq)
    };
    let values: Vec<f64> = (0..shots)
        .map(|_| {
            let bp = run(&up, rng);
            let bm = run(&down, rng);
            nf * (bp - bm)
        })
        .collect();
    Ok(EstimatorResult::from_values(&values, 4 * n as u64 * shots))
}

/// Bell-magic estimator: two Bell-difference samples `q1 = r1 ^ r2`,
/// `q2 = r3 ^ r4` per repetition, scoring 2 when `sigma_q1` and `sigma_q2`
/// anticommute.
pub fn bell_magic_estimator<R: Rng + ?Sized>(psi: &StateVector, shots: u64, rng: &mut R) -> Result<EstimatorResult> {
    check_shots(shots)?;
    let sampler = BellSampler::two_copies(psi)?;
    let values: Vec<f64> = (0..shots)
        .map(|_| {
            let q1 = sampler.sample(rng) ^ sampler.sample(rng);
            let q2 = sampler.sample(rng) ^ sampler.sample(rng);
            let (x1, z1) = deinterleave(q1);
            let (x2, z2) = deinterleave(q2);
            let omega = ((x1 & z2).count_ones() + (z1 & x2).count_ones()) % 2;
            2.0 * omega as f64
        })
        .collect();
    Ok(EstimatorResult::from_values(&values, 8 * shots))
}
