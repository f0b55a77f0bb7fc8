use alloc::vec::Vec;

use num_traits::Float;

use crate::error::{Error, Result};
use crate::state::StateVector;
use crate::transform::{deinterleave, fwht_real, interleave};

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BellMagic {
    pub b: f64,
    /// `-log2(1 - B)`.
    pub b_additive: f64,
}

/// Bell magic from the Bell-difference distribution
/// `Q(q) = sum_r P(r) P(r xor q)` with `P(r) = 2^{-N} |<psi|sigma_r|psi*>|^2`:
/// `B = sum_{r,q} Q(r) Q(q) ||[sigma_r, sigma_q]||`.
pub fn bell_magic_exact(psi: &StateVector) -> Result<BellMagic> {
    let n = psi.n_qubits();
    let dim = (1u64 << n) as f64;
    let table = psi.transition_table(&psi.conjugate())?;
    let mut q: Vec<f64> = table.iter().map(|t| t.norm_sqr() / dim).collect();

    // XOR convolution: transform, square, transform back
    fwht_real(&mut q);
    for v in &mut q {
        *v *= *v;
    }
    fwht_real(&mut q);
    let len = q.len() as f64;
    for v in &mut q {
        *v /= len;
    }
    let qdist = q.clone();

    // sum_q Q(q) (-1)^{omega(r,q)} is the Walsh transform at r with x and z swapped
    let mut walsh = q;
    fwht_real(&mut walsh);
    let mut b = 0.0;
    for (r, &qr) in qdist.iter().enumerate() {
        let (x, z) = deinterleave(r as u64);
        let swapped = interleave(z, x) as usize;
        b += qr * (1.0 - walsh[swapped]);
    }
    if b >= 1.0 {
        return Err(Error::Domain(alloc::format!("Bell magic B = {b} leaves no additive form")));
    }
    Ok(BellMagic {
        b,
        b_additive: -(1.0 - b).log2(),
    })
}
