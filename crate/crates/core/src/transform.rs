//! Bit interleaving and Walsh-Hadamard transforms over the Pauli index space.
//!
//! A Pauli string on N qubits is addressed either by its masks `(x, z)`
//! (bit `N - j` belongs to qubit `j`) or by the interleaved 2N-bit word `r`
//! in which qubit `j` owns bits `2(N-j)+1` (z) and `2(N-j)` (x).

use alloc::vec;
use alloc::vec::Vec;
use num_complex::Complex64;

/// Moves bit `p` of `v` to bit `2p`.
#[inline]
pub(crate) fn spread(v: u64) -> u64 {
    let mut v = v & 0xffff_ffff;
    v = (v | (v << 16)) & 0x0000_ffff_0000_ffff;
    v = (v | (v << 8)) & 0x00ff_00ff_00ff_00ff;
    v = (v | (v << 4)) & 0x0f0f_0f0f_0f0f_0f0f;
    v = (v | (v << 2)) & 0x3333_3333_3333_3333;
    v = (v | (v << 1)) & 0x5555_5555_5555_5555;
    v
}

/// Inverse of [`spread`]: collects the even bits.
#[inline]
pub(crate) fn compact(v: u64) -> u64 {
    let mut v = v & 0x5555_5555_5555_5555;
    v = (v | (v >> 1)) & 0x3333_3333_3333_3333;
    v = (v | (v >> 2)) & 0x0f0f_0f0f_0f0f_0f0f;
    v = (v | (v >> 4)) & 0x00ff_00ff_00ff_00ff;
    v = (v | (v >> 8)) & 0x0000_ffff_0000_ffff;
    v = (v | (v >> 16)) & 0x0000_0000_ffff_ffff;
    v
}

#[inline]
pub(crate) fn interleave(x: u64, z: u64) -> u64 {
    (spread(z) << 1) | spread(x)
}

#[inline]
pub(crate) fn deinterleave(r: u64) -> (u64, u64) {
    (compact(r), compact(r >> 1))
}

/// Multiplies by `i^k`.
#[inline]
pub(crate) fn times_i_pow(c: Complex64, k: u32) -> Complex64 {
    match k & 3 {
        0 => c,
        1 => Complex64::new(-c.im, c.re),
        2 => -c,
        _ => Complex64::new(c.im, -c.re),
    }
}

/// In-place unnormalized Walsh-Hadamard transform: `out[z] = sum_k (-1)^{z.k} in[k]`.
pub(crate) fn fwht(buf: &mut [Complex64]) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let a = buf[i];
                let b = buf[i + h];
                buf[i] = a + b;
                buf[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

pub(crate) fn fwht_real(buf: &mut [f64]) {
    let n = buf.len();
    debug_assert!(n.is_power_of_two());
    let mut h = 1;
    while h < n {
        for block in (0..n).step_by(2 * h) {
            for i in block..block + h {
                let a = buf[i];
                let b = buf[i + h];
                buf[i] = a + b;
                buf[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Evaluates `sum_k f(x, k) <k|X^x Z^z|...>`-type Pauli tables.
///
/// For every x-mask the row `v_x[k] = entry(x, k)` is transformed over `k`,
/// giving `sum_k (-1)^{z.k} v_x[k]` for every z-mask; the Y phase `i^{|x&z|}`
/// is applied and the result stored at the interleaved index.
///
/// With `entry(x, k) = conj(a[k^x]) * b[k]` this yields `<a|sigma_r|b>`.
pub(crate) fn pauli_table<F>(n_qubits: usize, mut entry: F) -> Vec<Complex64>
where
    F: FnMut(usize, usize) -> Complex64,
{
    let dim = 1usize << n_qubits;
    let mut out = vec![Complex64::new(0.0, 0.0); dim * dim];
    let mut row = vec![Complex64::new(0.0, 0.0); dim];
    for x in 0..dim {
        for (k, slot) in row.iter_mut().enumerate() {
            *slot = entry(x, k);
        }
        fwht(&mut row);
        let sx = spread(x as u64);
        for (z, value) in row.iter().enumerate() {
            let y = ((x & z) as u64).count_ones();
            let r = (spread(z as u64) << 1) | sx;
            out[r as usize] = times_i_pow(*value, y);
        }
    }
    out
}
