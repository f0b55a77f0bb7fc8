//! Stabilizer entropies, Bell-measurement estimators and related magic and
//! scrambling diagnostics for small quantum systems.
//!
//! Everything here works on dense state vectors and density matrices, so
//! costs are exponential in the qubit count. Each module documents its
//! capacity guard; requests beyond it fail with [`Error::Capacity`].
//!
//! Pauli strings use the two-bit code `00 -> I`, `01 -> X`, `10 -> Z`,
//! `11 -> Y` per qubit, qubit 1 first.

#![no_std]
// `num_traits::Float` supplies float math under no_std; it goes unused
// whenever std is linked somewhere in the dependency graph.
#![allow(unused_imports)]

extern crate alloc;

pub mod circuit;
pub mod error;
pub mod estimators;
pub mod exec;
pub mod experiments;
pub mod hamiltonian;
pub mod noise;
pub mod oracles;
pub mod pauli;
pub mod state;

mod kernels;
mod transform;

pub use circuit::{Circuit, Gate};
pub use error::{Error, Result};
pub use pauli::{Pauli, PauliSpectrum, PauliString};
pub use state::{DensityMatrix, QuantumState, StateVector};
