use alloc::format;
use alloc::vec::Vec;

use num_traits::Float;
use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;

use crate::error::{Error, Result};
use crate::state::StateVector;

use super::EstimatorResult;

fn basis_sampler(psi: &StateVector) -> Result<WeightedIndex<f64>> {
    WeightedIndex::new(psi.probabilities())
        .map_err(|e| Error::InvalidArgument(format!("bad basis distribution: {e}")))
}

fn coincidences<R: Rng + ?Sized>(sampler: &WeightedIndex<f64>, q: u32, groups: u64, rng: &mut R) -> Vec<f64> {
    (0..groups)
        .map(|_| {
            let first = sampler.sample(rng);
            let mut same = true;
            for _ in 1..q {
                // keep drawing so every group consumes exactly q shots
                same &= sampler.sample(rng) == first;
            }
            if same {
                1.0
            } else {
                0.0
            }
        })
        .collect()
}

/// Estimates `I_q` from `shots` computational-basis samples split into
/// `floor(shots/q)` groups; a group scores 1 when all its outcomes agree.
pub fn participation_estimator<R: Rng + ?Sized>(
    psi: &StateVector,
    q: u32,
    shots: u64,
    rng: &mut R,
) -> Result<EstimatorResult> {
    if q < 2 {
        return Err(Error::InvalidArgument("q must be at least 2".into()));
    }
    if shots < q as u64 {
        return Err(Error::InvalidArgument(format!(
            "{shots} shots cannot fill a group of {q}"
        )));
    }
    let groups = shots / q as u64;
    let sampler = basis_sampler(psi)?;
    let values = coincidences(&sampler, q, groups, rng);
    Ok(EstimatorResult::from_values(&values, groups * q as u64))
}

/// Flatness `I_3 - I_2^2` from two independent runs of `shots` samples each,
/// with the delta-method error `sqrt(se_3^2 + 4 I_2^2 se_2^2)`.
pub fn flatness_estimator<R: Rng + ?Sized>(psi: &StateVector, shots: u64, rng: &mut R) -> Result<EstimatorResult> {
    let i2 = participation_estimator(psi, 2, shots, rng)?;
    let i3 = participation_estimator(psi, 3, shots, rng)?;
    let value = i3.value - i2.value * i2.value;
    let std_error = (i3.std_error.powi(2) + 4.0 * i2.value.powi(2) * i2.std_error.powi(2)).sqrt();
    Ok(EstimatorResult {
        value,
        std_error,
        shots: i2.shots + i3.shots,
        copies_consumed: i2.copies_consumed + i3.copies_consumed,
    })
}
