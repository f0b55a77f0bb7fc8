//! Monte-Carlo estimators driven by simulated measurements.
//!
//! Every estimator consumes a caller-supplied RNG sequentially, so a seeded
//! generator gives bit-identical results.

mod algorithms;
mod basis;
mod bell;

pub use algorithms::{
    algorithm1, algorithm1_mixed, algorithm1_with_sampler, algorithm2, bell_magic_estimator,
    gradient_a_n, parity_value, purity_estimator, shift_rule_gradient,
};
pub use basis::{flatness_estimator, participation_estimator};
pub use bell::{bell_distribution, bell_distribution_mixed, BellSampler};

use alloc::format;

use num_traits::Float;

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EstimatorResult {
    pub value: f64,
    /// Sample standard deviation of the per-repetition values over `sqrt(shots)`.
    pub std_error: f64,
    /// Number of repetitions `L`.
    pub shots: u64,
    /// State copies prepared in total.
    pub copies_consumed: u64,
}

impl EstimatorResult {
    /// Mean and standard error of `values`, accumulated in order.
    pub fn from_values(values: &[f64], copies_consumed: u64) -> Self {
        let l = values.len();
        let mean = values.iter().sum::<f64>() / l as f64;
        let std_error = if l > 1 {
            let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (l - 1) as f64;
            (var / l as f64).sqrt()
        } else {
            0.0
        };
        EstimatorResult {
            value: mean,
            std_error,
            shots: l as u64,
            copies_consumed,
        }
    }

    /// `ln(value)/(1-n)` with the first-order propagated error.
    pub fn renyi(&self, n: u32) -> Result<(f64, f64)> {
        if n < 2 {
            return Err(Error::InvalidArgument("the Rényi form needs n >= 2".into()));
        }
        if !(self.value > 0.0) {
            return Err(Error::Domain(format!("estimated A_n = {} is not positive", self.value)));
        }
        let k = (n - 1) as f64;
        Ok((-self.value.ln() / k, self.std_error / (k * self.value)))
    }

    /// `(value - 1)/(1-n)` with its error.
    pub fn tsallis(&self, n: u32) -> Result<(f64, f64)> {
        if n < 2 {
            return Err(Error::InvalidArgument("the Tsallis form needs n >= 2".into()));
        }
        let k = (n - 1) as f64;
        Ok(((1.0 - self.value) / k, self.std_error / k))
    }
}

/// Hoeffding repetition count `ceil((dw^2/(2 eps^2)) ln(2/delta))`.
pub fn hoeffding_budget(epsilon: f64, delta: f64, delta_omega: f64) -> Result<u64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidArgument(format!("epsilon = {epsilon} must lie in (0, 1)")));
    }
    hoeffding_unchecked(epsilon, delta, delta_omega)
}

fn hoeffding_unchecked(epsilon: f64, delta: f64, delta_omega: f64) -> Result<u64> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidArgument(format!("delta = {delta} must lie in (0, 1)")));
    }
    if !(delta_omega > 0.0) || !delta_omega.is_finite() {
        return Err(Error::InvalidArgument(format!("range {delta_omega} must be positive")));
    }
    let l = (delta_omega * delta_omega / (2.0 * epsilon * epsilon)) * (2.0 / delta).ln();
    // absorb rounding noise such as 2951.9999999
    let rounded = l.round();
    let l = if (l - rounded).abs() < 1e-9 { rounded } else { l.ceil() };
    Ok((l as u64).max(1))
}

/// Precision on `A_n` needed for precision `epsilon_m` on `M_n`, and the
/// Hoeffding budget for the odd-n two-copy estimator (range 2).
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SampleCost {
    pub epsilon: f64,
    pub shots: u64,
    /// `2 L n` state copies.
    pub copies: u64,
}

pub fn renyi_sample_cost(m_n: f64, n: u32, epsilon_m: f64, delta: f64) -> Result<SampleCost> {
    if n < 2 {
        return Err(Error::InvalidArgument("the Rényi cost needs n >= 2".into()));
    }
    if !(m_n >= 0.0) || !(epsilon_m > 0.0) {
        return Err(Error::InvalidArgument("M_n must be nonnegative and epsilon_M positive".into()));
    }
    let k = (n - 1) as f64;
    let epsilon = k * (-m_n * k).exp() * epsilon_m;
    let shots = hoeffding_unchecked(epsilon, delta, 2.0)?;
    Ok(SampleCost {
        epsilon,
        shots,
        copies: 2 * shots * n as u64,
    })
}
