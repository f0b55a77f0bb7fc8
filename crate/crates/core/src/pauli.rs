//! Phase-free Pauli strings and their action on amplitude vectors.
//!
//! Per qubit the two-bit code `(r_{2j-1}, r_{2j})` selects
//! `00 -> I`, `01 -> X`, `10 -> Z`, `11 -> Y`. Qubit 1 is written leftmost in
//! text form and is the most significant bit of a computational-basis index.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernels;
use crate::transform::{deinterleave, interleave, times_i_pow};

/// Largest register a [`PauliString`] can address (2N bits in one word).
pub const MAX_PAULI_QUBITS: usize = 32;

/// Largest register for which full 4^N Pauli tables are materialized.
pub const SPECTRUM_MAX_QUBITS: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// `(x, z)` components.
    fn components(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Z => (false, true),
            Pauli::Y => (true, true),
        }
    }
}

/// An N-qubit Pauli operator without phase.
///
/// Stored as x/z masks aligned with the computational-basis index
/// (qubit `j` at bit `N - j`); [`PauliString::index`] gives the interleaved
/// 2N-bit word `r`, which is also the Bell-measurement outcome labelling.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    x: u64,
    z: u64,
    n_qubits: usize,
}

impl PauliString {
    fn check_n(n_qubits: usize) -> Result<()> {
        if n_qubits == 0 {
            return Err(Error::Encoding("Pauli string on zero qubits".to_string()));
        }
        Error::check_capacity("Pauli string", n_qubits, MAX_PAULI_QUBITS)
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::check_n(n_qubits)?;
        Ok(PauliString { x: 0, z: 0, n_qubits })
    }

    /// Decodes the 2N-bit vector `r` (first element is `r_1`).
    pub fn from_bits(bits: &[bool]) -> Result<Self> {
        if bits.is_empty() || bits.len() % 2 != 0 {
            return Err(Error::Encoding(alloc::format!(
                "bit vector length {} is not a positive even number",
                bits.len()
            )));
        }
        let n = bits.len() / 2;
        Self::check_n(n)?;
        let mut x = 0u64;
        let mut z = 0u64;
        for (j, pair) in bits.chunks(2).enumerate() {
            let pos = n - 1 - j;
            if pair[0] {
                z |= 1 << pos;
            }
            if pair[1] {
                x |= 1 << pos;
            }
        }
        Ok(PauliString { x, z, n_qubits: n })
    }

    /// Decodes the interleaved word `r` (bit `2N-1` is `r_1`).
    pub fn from_index(n_qubits: usize, r: u64) -> Result<Self> {
        Self::check_n(n_qubits)?;
        if n_qubits < 32 && r >> (2 * n_qubits) != 0 {
            return Err(Error::Encoding(alloc::format!(
                "index {r} has bits beyond 2N = {}",
                2 * n_qubits
            )));
        }
        let (x, z) = deinterleave(r);
        Ok(PauliString { x, z, n_qubits })
    }

    /// Builds from masks; bit `N - j` of each mask belongs to qubit `j`.
    pub fn from_masks(n_qubits: usize, x: u64, z: u64) -> Result<Self> {
        Self::check_n(n_qubits)?;
        let limit = if n_qubits == 64 { u64::MAX } else { (1u64 << n_qubits) - 1 };
        if x & !limit != 0 || z & !limit != 0 {
            return Err(Error::Encoding("mask exceeds qubit count".to_string()));
        }
        Ok(PauliString { x, z, n_qubits })
    }

    /// Single-qubit Pauli `p` on qubit `qubit` (1-based).
    pub fn single(n_qubits: usize, qubit: usize, p: Pauli) -> Result<Self> {
        Self::check_n(n_qubits)?;
        if qubit == 0 || qubit > n_qubits {
            return Err(Error::QubitIndex { index: qubit, n_qubits });
        }
        let pos = n_qubits - qubit;
        let (hx, hz) = p.components();
        Ok(PauliString {
            x: (hx as u64) << pos,
            z: (hz as u64) << pos,
            n_qubits,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Interleaved 2N-bit word `r`.
    pub fn index(&self) -> u64 {
        interleave(self.x, self.z)
    }

    pub fn bits(&self) -> Vec<bool> {
        let mut out = Vec::with_capacity(2 * self.n_qubits);
        for j in 1..=self.n_qubits {
            let pos = self.n_qubits - j;
            out.push(self.z >> pos & 1 == 1);
            out.push(self.x >> pos & 1 == 1);
        }
        out
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        let pos = self.n_qubits - qubit;
        match (self.x >> pos & 1, self.z >> pos & 1) {
            (0, 0) => Pauli::I,
            (1, 0) => Pauli::X,
            (0, 1) => Pauli::Z,
            _ => Pauli::Y,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub(crate) fn y_count(&self) -> u32 {
        (self.x & self.z).count_ones()
    }

    /// Phase-free product: bits `r xor q`.
    pub fn product(&self, other: &PauliString) -> Result<PauliString> {
        Error::check_match(self.n_qubits, other.n_qubits)?;
        Ok(PauliString {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            n_qubits: self.n_qubits,
        })
    }

    /// Symplectic inner product of the two bit vectors, mod 2.
    pub fn symplectic(&self, other: &PauliString) -> u32 {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) & 1
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        Error::check_match(self.n_qubits, other.n_qubits)?;
        Ok(self.symplectic(other) == 0)
    }

    /// In-place `amps <- sigma amps`; `amps` must span exactly this register.
    pub fn apply(&self, amps: &mut [Complex64]) -> Result<()> {
        Error::check_match(1usize << self.n_qubits, amps.len())?;
        kernels::apply_pauli(amps, self.x as usize, self.z as usize);
        Ok(())
    }

    /// Dense 2^N x 2^N matrix.
    pub fn to_matrix(&self) -> DMatrix<Complex64> {
        let dim = 1usize << self.n_qubits;
        let y = self.y_count();
        let x = self.x as usize;
        let z = self.z as usize;
        DMatrix::from_fn(dim, dim, |row, col| {
            if row == col ^ x {
                let s = (z & col).count_ones();
                times_i_pow(Complex64::new(1.0, 0.0), y + 2 * s)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }

    /// All 4^N strings in interleaved-index order.
    pub fn all(n_qubits: usize) -> Result<impl Iterator<Item = PauliString>> {
        Self::check_n(n_qubits)?;
        Error::check_capacity("Pauli enumeration", n_qubits, SPECTRUM_MAX_QUBITS)?;
        Ok((0..1u64 << (2 * n_qubits)).map(move |r| {
            let (x, z) = deinterleave(r);
            PauliString { x, z, n_qubits }
        }))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: String = (1..=self.n_qubits).map(|q| self.get(q).symbol()).collect();
        f.write_str(&s)
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let n = s.chars().count();
        Self::check_n(n)?;
        let mut x = 0u64;
        let mut z = 0u64;
        for (j, ch) in s.chars().enumerate() {
            let pos = n - 1 - j;
            let p = match ch.to_ascii_uppercase() {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                other => {
                    return Err(Error::Encoding(alloc::format!(
                        "unexpected character {other:?} in Pauli string"
                    )))
                }
            };
            let (hx, hz) = p.components();
            x |= (hx as u64) << pos;
            z |= (hz as u64) << pos;
        }
        Ok(PauliString { x, z, n_qubits: n })
    }
}

#[cfg(feature = "serde")]
impl serde::Serialize for PauliString {
    fn serialize<S: serde::Serializer>(&self, s: S) -> core::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(feature = "serde")]
impl<'de> serde::Deserialize<'de> for PauliString {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> core::result::Result<Self, D::Error> {
        let s = <String as serde::Deserialize>::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Full Pauli spectrum `Xi(sigma) = 2^{-N} <sigma>^2` of a pure state.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliSpectrum {
    n_qubits: usize,
    probabilities: Vec<f64>,
}

impl PauliSpectrum {
    pub(crate) fn from_expectations(n_qubits: usize, expectations: &[f64]) -> Self {
        let norm = 1.0 / (1u64 << n_qubits) as f64;
        PauliSpectrum {
            n_qubits,
            probabilities: expectations.iter().map(|e| e * e * norm).collect(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn get(&self, sigma: &PauliString) -> f64 {
        self.probabilities[sigma.index() as usize]
    }

    /// Probabilities indexed by the interleaved word `r`.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    pub fn support(&self, tol: f64) -> usize {
        self.probabilities.iter().filter(|p| **p > tol).count()
    }
}
