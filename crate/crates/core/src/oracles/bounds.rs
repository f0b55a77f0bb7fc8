use num_traits::Float;

use crate::error::{Error, Result};
use crate::state::StateVector;

use super::exact_a_n;

/// Efficient bounds on stabilizer fidelity, extent, robustness and
/// min-relative entropy of magic, all functions of one moment `A_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BoundsReport {
    pub n: u32,
    pub a_n: f64,
    /// `A_n^{1/(2n)}`.
    pub fstab_upper: f64,
    /// `(A_n - 2^{1-n})/(1 - 2^{1-n})`; negative values carry no information.
    pub fstab_lower: f64,
    pub fstab_lower_vacuous: bool,
    /// `A_n^{-1/(2n)}`.
    pub xi_lower: f64,
    /// `max(A_n^{1/(2(1-n))}, xi_lower)`.
    pub robustness_lower: f64,
    /// `-ln(A_n)/(2n)`.
    pub d_min_upper: f64,
}

impl BoundsReport {
    pub fn from_a_n(a_n: f64, n: u32) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidArgument("bounds need an integer n >= 2".into()));
        }
        if !(a_n > 0.0) {
            return Err(Error::Domain(alloc::format!("A_n = {a_n} is not positive")));
        }
        let nf = n as f64;
        let floor = 2f64.powf(1.0 - nf);
        let fstab_lower = (a_n - floor) / (1.0 - floor);
        let xi_lower = a_n.powf(-1.0 / (2.0 * nf));
        Ok(BoundsReport {
            n,
            a_n,
            fstab_upper: a_n.powf(1.0 / (2.0 * nf)),
            fstab_lower,
            fstab_lower_vacuous: fstab_lower <= 0.0,
            xi_lower,
            robustness_lower: a_n.powf(1.0 / (2.0 * (1.0 - nf))).max(xi_lower),
            d_min_upper: -a_n.ln() / (2.0 * nf),
        })
    }
}

pub fn bounds_report(state: &StateVector, n: u32) -> Result<BoundsReport> {
    if n < 2 {
        return Err(Error::InvalidArgument("bounds need an integer n >= 2".into()));
    }
    BoundsReport::from_a_n(exact_a_n(state, n)?, n)
}
