//! Exact, exponential-cost reference values.
//!
//! Every quantity here is evaluated by brute force over the full Pauli
//! group or the full computational basis. The estimators in
//! [`crate::estimators`] are checked against these.

mod bell_magic;
mod bounds;
mod stabilizer;

pub use bell_magic::{bell_magic_exact, BellMagic};
pub use bounds::{bounds_report, BoundsReport};
pub use stabilizer::{
    d_min, stabilizer_count, stabilizer_fidelity, StabilizerSet, MAX_ENUMERATION_QUBITS,
};

use alloc::format;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Float;

use crate::circuit::{choi_state, Circuit};
use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::state::{QuantumState, StateVector};
use crate::transform::{pauli_table, times_i_pow};

/// Largest operator (2n qubits) built by [`gamma_operator`].
pub const MAX_GAMMA_ORDER: u32 = 4;

/// Largest register for dense-unitary OTOC evaluation.
pub const MAX_OTOC_QUBITS: usize = 6;

/// Largest register for the double Pauli sum in [`pauli_avg_otoc`].
pub const MAX_PAULI_AVG_OTOC_QUBITS: usize = 5;

fn check_order(n: u32) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("the order n must be at least 1".into()));
    }
    Ok(())
}

/// `A_n = 2^{-N} sum_r e_r^{2n}` from a table of expectation values.
pub fn moment_from_expectations(n_qubits: usize, expectations: &[f64], n: u32) -> f64 {
    let dim = (1u64 << n_qubits) as f64;
    let k = 2 * n as i32;
    expectations.iter().map(|e| e.powi(k)).sum::<f64>() / dim
}

/// `A_n = 2^{-N} sum_sigma <sigma>^{2n}`; for mixed inputs `tr(rho sigma)`
/// replaces `<sigma>`.
pub fn exact_a_n<S: QuantumState + ?Sized>(state: &S, n: u32) -> Result<f64> {
    check_order(n)?;
    let e = state.pauli_expectations()?;
    Ok(moment_from_expectations(state.n_qubits(), &e, n))
}

/// Rényi stabilizer entropy from a moment, `ln(A_n)/(1-n)`.
pub fn renyi_from_moment(a_n: f64, n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("the closed form needs n >= 2".into()));
    }
    if !(a_n > 0.0) {
        return Err(Error::Domain(format!("A_n = {a_n} is not positive")));
    }
    Ok(a_n.ln() / (1.0 - n as f64))
}

/// Tsallis stabilizer entropy from a moment, `(A_n - 1)/(1-n)`.
pub fn tsallis_from_moment(a_n: f64, n: u32) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("the closed form needs n >= 2".into()));
    }
    Ok((a_n - 1.0) / (1.0 - n as f64))
}

/// `M_n`; `n = 1` gives the von Neumann entropy.
pub fn renyi_se<S: QuantumState + ?Sized>(state: &S, n: u32) -> Result<f64> {
    check_order(n)?;
    if n == 1 {
        return von_neumann_se(state);
    }
    renyi_from_moment(exact_a_n(state, n)?, n)
}

/// `T_n`; `n = 1` gives the von Neumann entropy.
pub fn tsallis_se<S: QuantumState + ?Sized>(state: &S, n: u32) -> Result<f64> {
    check_order(n)?;
    if n == 1 {
        return von_neumann_se(state);
    }
    tsallis_from_moment(exact_a_n(state, n)?, n)
}

/// `M_1 = -2^{-N} sum_sigma <sigma>^2 ln <sigma>^2`.
pub fn von_neumann_se<S: QuantumState + ?Sized>(state: &S) -> Result<f64> {
    let e = state.pauli_expectations()?;
    let dim = (1u64 << state.n_qubits()) as f64;
    let s: f64 = e
        .iter()
        .map(|v| v * v)
        .filter(|&w| w > 0.0)
        .map(|w| w * w.ln())
        .sum();
    Ok(-s / dim)
}

/// Rényi entropy of real order `alpha > 0` (including fractional orders),
/// `(1 - alpha)^{-1} ln(2^{-N} sum |<sigma>|^{2 alpha})`.
pub fn fractional_renyi_se<S: QuantumState + ?Sized>(state: &S, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("order {alpha} must be positive")));
    }
    if (alpha - 1.0).abs() < 1e-12 {
        return von_neumann_se(state);
    }
    let e = state.pauli_expectations()?;
    let dim = (1u64 << state.n_qubits()) as f64;
    let a: f64 = e.iter().map(|v| v.abs().powf(2.0 * alpha)).sum::<f64>() / dim;
    Ok(a.ln() / (1.0 - alpha))
}

/// `Gamma_n = 1/2 sum_{sigma in {I,X,Y,Z}} sigma^{⊗2n}` on 2n qubits.
pub fn gamma_operator(n: u32) -> Result<DMatrix<Complex64>> {
    check_order(n)?;
    Error::check_capacity("replica operator order", n as usize, MAX_GAMMA_ORDER as usize)?;
    let m = 2 * n as usize;
    let dim = 1usize << m;
    let full = (dim - 1) as u64;
    let mut out = DMatrix::zeros(dim, dim);
    for (x, z) in [(0u64, 0u64), (full, 0), (0, full), (full, full)] {
        let sigma = PauliString::from_masks(m, x, z)?;
        out += sigma.to_matrix() * Complex64::new(0.5, 0.0);
    }
    Ok(out)
}

/// Participation entropy `I_q = sum_k |<k|psi>|^{2q}`.
pub fn participation_entropy(state: &StateVector, q: f64) -> Result<f64> {
    if !(q > 0.0) {
        return Err(Error::InvalidArgument(format!("q = {q} must be positive")));
    }
    Ok(state.probabilities().iter().map(|p| p.powf(q)).sum())
}

/// Multifractal flatness `I_3 - I_2^2`.
pub fn flatness(state: &StateVector) -> f64 {
    let mut i2 = 0.0;
    let mut i3 = 0.0;
    for p in state.probabilities() {
        i2 += p * p;
        i3 += p * p * p;
    }
    i3 - i2 * i2
}

/// Clifford-averaged flatness `2(1 - A_2)/((2^N + 1)(2^N + 2))`.
pub fn clifford_avg_flatness(state: &StateVector) -> Result<f64> {
    let a2 = exact_a_n(state, 2)?;
    Ok(clifford_avg_flatness_from_a2(a2, state.n_qubits()))
}

pub fn clifford_avg_flatness_from_a2(a2: f64, n_qubits: usize) -> f64 {
    let d = (1u64 << n_qubits) as f64;
    2.0 * (1.0 - a2) / ((d + 1.0) * (d + 2.0))
}

/// `tr(sigma W)` for a dense operator `W`.
fn pauli_trace(w: &DMatrix<Complex64>, sigma: &PauliString) -> Complex64 {
    let x = sigma.x_mask() as usize;
    let z = sigma.z_mask() as usize;
    let mut acc = Complex64::new(0.0, 0.0);
    for m in 0..w.nrows() {
        let v = w[(m, m ^ x)];
        if (z & m).count_ones() % 2 == 0 {
            acc += v;
        } else {
            acc -= v;
        }
    }
    times_i_pow(acc, (sigma.x_mask() & sigma.z_mask()).count_ones())
}

fn heisenberg(u: &DMatrix<Complex64>, sigma: &PauliString) -> DMatrix<Complex64> {
    u * sigma.to_matrix() * u.adjoint()
}

/// `(2^{-N} tr(sigma U sigma' U^dagger))^{2n}`.
pub fn otoc_4n(u: &Circuit, sigma: &PauliString, sigma_prime: &PauliString, n: u32) -> Result<f64> {
    check_order(n)?;
    let nq = u.n_qubits();
    Error::check_match(nq, sigma.n_qubits())?;
    Error::check_match(nq, sigma_prime.n_qubits())?;
    Error::check_capacity("OTOC", nq, MAX_OTOC_QUBITS)?;
    otoc_4n_unitary(&u.unitary()?, sigma, sigma_prime, n)
}

/// [`otoc_4n`] for a dense unitary.
pub fn otoc_4n_unitary(
    u: &DMatrix<Complex64>,
    sigma: &PauliString,
    sigma_prime: &PauliString,
    n: u32,
) -> Result<f64> {
    check_order(n)?;
    let nq = sigma.n_qubits();
    Error::check_match(nq, sigma_prime.n_qubits())?;
    Error::check_match(1usize << nq, u.nrows())?;
    Error::check_capacity("OTOC", nq, MAX_OTOC_QUBITS)?;
    let w = heisenberg(u, sigma_prime);
    let t = pauli_trace(&w, sigma).re / (1u64 << nq) as f64;
    Ok(t.powi(2 * n as i32))
}

/// Clifford-averaged OTOC `(A_n(|U>) 4^N - 1)/(4^N - 1)^2`.
pub fn clifford_avg_otoc(u: &Circuit, n: u32) -> Result<f64> {
    check_order(n)?;
    let a = exact_a_n(&choi_state(u)?, n)?;
    Ok(clifford_avg_otoc_from_choi(a, u.n_qubits()))
}

pub fn clifford_avg_otoc_from_choi(a_n_choi: f64, n_qubits: usize) -> f64 {
    let d2 = (1u64 << (2 * n_qubits)) as f64;
    (a_n_choi * d2 - 1.0) / ((d2 - 1.0) * (d2 - 1.0))
}

/// `4^{-N} sum_{sigma, sigma'} otoc_4n(U, sigma, sigma')` by direct summation.
pub fn pauli_avg_otoc(u: &Circuit, n: u32) -> Result<f64> {
    check_order(n)?;
    let nq = u.n_qubits();
    Error::check_capacity("Pauli-averaged OTOC", nq, MAX_PAULI_AVG_OTOC_QUBITS)?;
    let um = u.unitary()?;
    let dim = 1usize << nq;
    let k = 2 * n as i32;
    let mut total = 0.0;
    for sigma_prime in PauliString::all(nq)? {
        let w = heisenberg(&um, &sigma_prime);
        let table = pauli_table(nq, |x, m| w[(m, m ^ x)]);
        total += table
            .iter()
            .map(|t| (t.re / dim as f64).powi(k))
            .sum::<f64>();
    }
    Ok(total / (dim * dim) as f64)
}

/// `T_n(psi) - sum_lambda p_lambda T_n(psi_lambda)` over computational-basis
/// outcomes on `measured` (1-based qubits).
pub fn delta_tsallis(state: &StateVector, measured: &[usize], n: u32) -> Result<f64> {
    if measured.is_empty() {
        return Err(Error::InvalidArgument("measured qubit set is empty".into()));
    }
    let mut sorted: Vec<usize> = measured.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != measured.len() {
        return Err(Error::InvalidArgument("measured qubits repeat".into()));
    }
    let before = tsallis_se(state, n)?;
    let mut after = 0.0;
    for outcome in 0..1usize << measured.len() {
        let (p, post) = state.measure_outcome(measured, outcome)?;
        if p < 1e-12 {
            continue;
        }
        if let Some(post) = post {
            after += p * tsallis_se(&post, n)?;
        }
    }
    Ok(before - after)
}
