//! Amplitude-buffer kernels. Qubits are addressed by bit position (LSB = 0).

use num_complex::Complex64;
use num_traits::Float;

use crate::transform::times_i_pow;

pub(crate) type Mat2 = [[Complex64; 2]; 2];

pub(crate) fn apply_1q(buf: &mut [Complex64], pos: usize, m: &Mat2) {
    let stride = 1usize << pos;
    let n = buf.len();
    let mut base = 0;
    while base < n {
        for i in base..base + stride {
            let a = buf[i];
            let b = buf[i + stride];
            buf[i] = m[0][0] * a + m[0][1] * b;
            buf[i + stride] = m[1][0] * a + m[1][1] * b;
        }
        base += 2 * stride;
    }
}

/// Diagonal single-qubit gate `diag(1, phase)`.
pub(crate) fn apply_phase(buf: &mut [Complex64], pos: usize, phase: Complex64) {
    let bit = 1usize << pos;
    for (i, a) in buf.iter_mut().enumerate() {
        if i & bit != 0 {
            *a *= phase;
        }
    }
}

pub(crate) fn apply_cnot(buf: &mut [Complex64], control: usize, target: usize) {
    let c = 1usize << control;
    let t = 1usize << target;
    for i in 0..buf.len() {
        if i & c != 0 && i & t == 0 {
            buf.swap(i, i | t);
        }
    }
}

/// `buf <- sigma buf` for the Pauli with masks `(x, z)`;
/// `sigma |k> = i^{|x&z|} (-1)^{z.k} |k^x>`.
pub(crate) fn apply_pauli(buf: &mut [Complex64], x: usize, z: usize) {
    let y = (x & z).count_ones();
    if x == 0 {
        for (k, a) in buf.iter_mut().enumerate() {
            let s = (z & k).count_ones();
            *a = times_i_pow(*a, y + 2 * s);
        }
        return;
    }
    for k in 0..buf.len() {
        let j = k ^ x;
        if k < j {
            let ak = buf[k];
            let aj = buf[j];
            // new[j] = phase(k) a[k], new[k] = phase(j) a[j]
            buf[j] = times_i_pow(ak, y + 2 * (z & k).count_ones());
            buf[k] = times_i_pow(aj, y + 2 * (z & j).count_ones());
        }
    }
}

/// `exp(-i angle/2 sigma)`; with `conjugate` the complex conjugate operator.
pub(crate) fn apply_pauli_rotation(
    buf: &mut [Complex64],
    x: usize,
    z: usize,
    angle: f64,
    conjugate: bool,
) {
    let c = (angle / 2.0).cos();
    let s = (angle / 2.0).sin();
    let y = (x & z).count_ones();
    // conj(c - i s sigma) = c + i s conj(sigma), and conj(sigma) = (-1)^y sigma
    let factor = match (conjugate, y % 2) {
        (false, _) => Complex64::new(0.0, -s),
        (true, 0) => Complex64::new(0.0, s),
        (true, _) => Complex64::new(0.0, -s),
    };
    let n = buf.len();
    let phase = |k: usize| -> u32 { y + 2 * (z & k).count_ones() };
    if x == 0 {
        for (k, a) in buf.iter_mut().enumerate() {
            let sa = times_i_pow(*a, phase(k));
            *a = *a * c + factor * sa;
        }
        return;
    }
    for k in 0..n {
        let j = k ^ x;
        if k < j {
            let ak = buf[k];
            let aj = buf[j];
            let sigma_k = times_i_pow(aj, phase(j)); // (sigma psi)[k]
            let sigma_j = times_i_pow(ak, phase(k)); // (sigma psi)[j]
            buf[k] = ak * c + factor * sigma_k;
            buf[j] = aj * c + factor * sigma_j;
        }
    }
}

pub(crate) fn conj2(m: &Mat2) -> Mat2 {
    [
        [m[0][0].conj(), m[0][1].conj()],
        [m[1][0].conj(), m[1][1].conj()],
    ]
}

pub(crate) fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[Complex64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}
