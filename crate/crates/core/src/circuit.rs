//! Gate lists, their action on states, and the random circuit families used
//! by the experiments.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::kernels::{self, Mat2};
use crate::pauli::{Pauli, PauliString};
use crate::state::{DensityMatrix, StateVector, MAX_STATE_QUBITS};

/// Largest register for plain circuit simulation.
pub const MAX_CIRCUIT_QUBITS: usize = 12;

/// Largest register for which a dense unitary is built.
pub const MAX_UNITARY_QUBITS: usize = 10;

/// The 24 single-qubit Cliffords modulo phase, as H/S words in time order.
const CLIFFORD_WORDS: [&str; 24] = [
    "", "H", "S", "HS", "SH", "SS", "HSH", "HSS", "SHS", "SSH", "SSS", "HSHS", "HSSH", "HSSS",
    "SHSS", "SSHS", "HSHSS", "HSSHS", "SHSSH", "SHSSS", "SSHSS", "HSHSSH", "HSHSSS", "HSSHSS",
];

pub const SINGLE_QUBIT_CLIFFORDS: usize = CLIFFORD_WORDS.len();

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn h_matrix() -> Mat2 {
    let h = c(FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

fn s_matrix() -> Mat2 {
    [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(0.0, 1.0)]]
}

fn t_matrix() -> Mat2 {
    [
        [c(1.0, 0.0), c(0.0, 0.0)],
        [c(0.0, 0.0), Complex64::from_polar(1.0, FRAC_PI_4)],
    ]
}

/// Matrix of the `index`-th single-qubit Clifford.
pub(crate) fn clifford_matrix(index: u8) -> Mat2 {
    let mut m = [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]];
    for g in CLIFFORD_WORDS[index as usize].bytes() {
        let gm = if g == b'H' { h_matrix() } else { s_matrix() };
        m = kernels::mul2(&gm, &m);
    }
    m
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "gate", rename_all = "snake_case"))]
pub enum Gate {
    /// One of the 24 single-qubit Cliffords, `index` in `0..24`.
    Clifford1 { qubit: usize, index: u8 },
    H { qubit: usize },
    S { qubit: usize },
    /// `diag(1, e^{i pi/4})`.
    T { qubit: usize },
    Cnot { control: usize, target: usize },
    /// `exp(-i angle/2 axis)`.
    Rotation { axis: PauliString, angle: f64 },
}

impl Gate {
    /// Qubits acted on (1-based).
    pub fn qubits(&self) -> Vec<usize> {
        match self {
            Gate::Clifford1 { qubit, .. } | Gate::H { qubit } | Gate::S { qubit } | Gate::T { qubit } => {
                vec![*qubit]
            }
            Gate::Cnot { control, target } => vec![*control, *target],
            Gate::Rotation { axis, .. } => (1..=axis.n_qubits())
                .filter(|&q| axis.get(q) != Pauli::I)
                .collect(),
        }
    }

    pub fn is_clifford(&self) -> bool {
        !matches!(self, Gate::T { .. } | Gate::Rotation { .. })
    }

    fn single_matrix(&self) -> Option<(usize, Mat2)> {
        match self {
            Gate::Clifford1 { qubit, index } => Some((*qubit, clifford_matrix(*index))),
            Gate::H { qubit } => Some((*qubit, h_matrix())),
            Gate::S { qubit } => Some((*qubit, s_matrix())),
            Gate::T { qubit } => Some((*qubit, t_matrix())),
            _ => None,
        }
    }

    fn validate(&self, n_qubits: usize) -> Result<()> {
        for q in self.qubits() {
            if q == 0 || q > n_qubits {
                return Err(Error::QubitIndex { index: q, n_qubits });
            }
        }
        match self {
            Gate::Clifford1 { index, .. } if *index as usize >= SINGLE_QUBIT_CLIFFORDS => {
                Err(Error::InvalidArgument(format!(
                    "single-qubit Clifford index {index} is not in 0..24"
                )))
            }
            Gate::Cnot { control, target } if control == target => Err(Error::InvalidArgument(
                format!("CNOT control and target coincide ({control})"),
            )),
            Gate::Rotation { axis, angle } => {
                Error::check_match(n_qubits, axis.n_qubits())?;
                if axis.is_identity() {
                    return Err(Error::InvalidArgument("rotation axis is the identity".into()));
                }
                if !angle.is_finite() {
                    return Err(Error::InvalidArgument("rotation angle is not finite".into()));
                }
                Ok(())
            }
            _ => Ok(()),
        }
    }

    /// Applies the gate to the `n_qubits`-qubit block starting at qubit
    /// `offset + 1` of a `total`-qubit buffer; `conjugate` applies the
    /// entry-wise conjugate operator.
    pub(crate) fn apply_to_buffer(
        &self,
        buf: &mut [Complex64],
        total: usize,
        offset: usize,
        n_qubits: usize,
        conjugate: bool,
    ) {
        let pos = |q: usize| total - (offset + q);
        if let Some((q, m)) = self.single_matrix() {
            match self {
                Gate::T { .. } | Gate::S { .. } => {
                    let phase = if conjugate { m[1][1].conj() } else { m[1][1] };
                    kernels::apply_phase(buf, pos(q), phase);
                }
                _ => {
                    let m = if conjugate { kernels::conj2(&m) } else { m };
                    kernels::apply_1q(buf, pos(q), &m);
                }
            }
            return;
        }
        match self {
            Gate::Cnot { control, target } => kernels::apply_cnot(buf, pos(*control), pos(*target)),
            Gate::Rotation { axis, angle } => {
                let shift = total - offset - n_qubits;
                let x = (axis.x_mask() as usize) << shift;
                let z = (axis.z_mask() as usize) << shift;
                kernels::apply_pauli_rotation(buf, x, z, *angle, conjugate);
            }
            _ => unreachable!(),
        }
    }

    /// `rho <- G rho G^dagger` on an N-qubit density matrix.
    pub(crate) fn apply_to_density(&self, rho: &mut DensityMatrix) {
        let n = rho.n_qubits();
        let buf = rho.data_mut();
        self.apply_to_buffer(buf, 2 * n, 0, n, false);
        self.apply_to_buffer(buf, 2 * n, n, n, true);
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidArgument("a circuit needs at least one qubit".into()));
        }
        Error::check_capacity("circuit", n_qubits, MAX_CIRCUIT_QUBITS)?;
        Ok(Circuit {
            n_qubits,
            gates: Vec::new(),
        })
    }

    pub fn from_gates(n_qubits: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Circuit::new(n_qubits)?;
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of `other`.
    pub fn extend(&mut self, other: &Circuit) -> Result<()> {
        Error::check_match(self.n_qubits, other.n_qubits)?;
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn t_count(&self) -> usize {
        self.gates.iter().filter(|g| matches!(g, Gate::T { .. })).count()
    }

    pub fn is_clifford(&self) -> bool {
        self.gates.iter().all(Gate::is_clifford)
    }

    /// Gate positions of the rotation parameters, in order.
    pub fn parameter_gates(&self) -> Vec<usize> {
        self.gates
            .iter()
            .enumerate()
            .filter(|(_, g)| matches!(g, Gate::Rotation { .. }))
            .map(|(i, _)| i)
            .collect()
    }

    pub fn parameters(&self) -> Vec<f64> {
        self.gates
            .iter()
            .filter_map(|g| match g {
                Gate::Rotation { angle, .. } => Some(*angle),
                _ => None,
            })
            .collect()
    }

    pub fn with_parameters(&self, theta: &[f64]) -> Result<Circuit> {
        let slots = self.parameter_gates();
        Error::check_match(slots.len(), theta.len())?;
        let mut out = self.clone();
        for (slot, value) in slots.into_iter().zip(theta) {
            if let Gate::Rotation { angle, .. } = &mut out.gates[slot] {
                *angle = *value;
            }
        }
        Ok(out)
    }

    /// Copy with parameter `k` shifted by `delta`.
    pub fn shifted(&self, k: usize, delta: f64) -> Result<Circuit> {
        let slots = self.parameter_gates();
        let slot = *slots.get(k).ok_or_else(|| {
            Error::InvalidArgument(format!(
                "parameter {k} does not exist; the circuit has {} rotation gates",
                slots.len()
            ))
        })?;
        let mut out = self.clone();
        if let Gate::Rotation { angle, .. } = &mut out.gates[slot] {
            *angle += delta;
        }
        Ok(out)
    }

    pub(crate) fn apply_to_buffer(&self, buf: &mut [Complex64], total: usize, offset: usize, conjugate: bool) {
        for g in &self.gates {
            g.apply_to_buffer(buf, total, offset, self.n_qubits, conjugate);
        }
    }

    pub fn apply(&self, input: &StateVector) -> Result<StateVector> {
        Error::check_match(self.n_qubits, input.n_qubits())?;
        let mut out = input.clone();
        let n = self.n_qubits;
        self.apply_to_buffer(out.amplitudes_mut(), n, 0, false);
        Ok(out)
    }

    /// Output state on `|0>^N`.
    pub fn state(&self) -> Result<StateVector> {
        self.apply(&StateVector::zero_state(self.n_qubits)?)
    }

    pub fn apply_to_density(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        Error::check_match(self.n_qubits, rho.n_qubits())?;
        let mut out = rho.clone();
        for g in &self.gates {
            g.apply_to_density(&mut out);
        }
        Ok(out)
    }

    /// Dense unitary, column `k` = image of `|k>`.
    pub fn unitary(&self) -> Result<DMatrix<Complex64>> {
        Error::check_capacity("dense unitary", self.n_qubits, MAX_UNITARY_QUBITS)?;
        let dim = 1usize << self.n_qubits;
        let mut u = DMatrix::zeros(dim, dim);
        let mut col = vec![c(0.0, 0.0); dim];
        for k in 0..dim {
            col.iter_mut().for_each(|a| *a = c(0.0, 0.0));
            col[k] = c(1.0, 0.0);
            self.apply_to_buffer(&mut col, self.n_qubits, 0, false);
            for (i, a) in col.iter().enumerate() {
                u[(i, k)] = *a;
            }
        }
        Ok(u)
    }
}

/// Choi state `(I ⊗ U)|Phi>` on 2N qubits.
pub fn choi_state(u: &Circuit) -> Result<StateVector> {
    let n = u.n_qubits();
    Error::check_capacity("Choi state", 2 * n, MAX_STATE_QUBITS)?;
    let dim = 1usize << n;
    let mut amps = vec![c(0.0, 0.0); dim * dim];
    let a = 1.0 / (dim as f64).sqrt();
    for i in 0..dim {
        amps[i * dim + i] = c(a, 0.0);
    }
    u.apply_to_buffer(&mut amps, 2 * n, n, false);
    Ok(StateVector::from_raw(2 * n, amps))
}

/// Choi state of a dense unitary, amplitude `U[j, i]/sqrt(2^N)` at `|i>|j>`.
pub fn choi_from_unitary(u: &DMatrix<Complex64>) -> Result<StateVector> {
    let dim = u.nrows();
    if dim != u.ncols() || !dim.is_power_of_two() || dim < 2 {
        return Err(Error::InvalidArgument("unitary must be square with a power-of-two size".into()));
    }
    let n = dim.trailing_zeros() as usize;
    Error::check_capacity("Choi state", 2 * n, MAX_STATE_QUBITS)?;
    let a = 1.0 / (dim as f64).sqrt();
    let mut amps = Vec::with_capacity(dim * dim);
    for i in 0..dim {
        for j in 0..dim {
            amps.push(u[(j, i)] * a);
        }
    }
    Ok(StateVector::from_raw(2 * n, amps))
}

/// `d` layers of uniform single-qubit Cliffords followed by the CNOT chain
/// on `(1,2), (2,3), ..., (N-1,N)`.
pub fn random_clifford_circuit<R: Rng + ?Sized>(n_qubits: usize, depth: usize, rng: &mut R) -> Result<Circuit> {
    let mut c = Circuit::new(n_qubits)?;
    for _ in 0..depth {
        push_clifford_layer(&mut c, rng, &[])?;
    }
    Ok(c)
}

fn push_clifford_layer<R: Rng + ?Sized>(c: &mut Circuit, rng: &mut R, t_after: &[usize]) -> Result<()> {
    let n = c.n_qubits();
    for q in 1..=n {
        let index = rng.random_range(0..SINGLE_QUBIT_CLIFFORDS) as u8;
        c.push(Gate::Clifford1 { qubit: q, index })?;
        for _ in t_after.iter().filter(|&&t| t == q) {
            c.push(Gate::T { qubit: q })?;
        }
    }
    push_cnot_chain(c)
}

/// Nearest-neighbour CNOTs on the pairs `(1,2), (2,3), ..., (N-1,N)`, each
/// controlled by the higher qubit, so X on qubit 1 is left in place.
fn push_cnot_chain(c: &mut Circuit) -> Result<()> {
    for q in 1..c.n_qubits() {
        c.push(Gate::Cnot {
            control: q + 1,
            target: q,
        })?;
    }
    Ok(())
}

/// Default depth of the Clifford blocks in doped circuits.
pub fn default_clifford_depth(n_qubits: usize) -> usize {
    10 * n_qubits
}

/// `U_C^(0) T U_C^(1) ... T U_C^(N_T)`: `N_T + 1` random Clifford blocks
/// separated by T gates on uniformly random qubits.
pub fn doped_clifford_circuit<R: Rng + ?Sized>(
    n_qubits: usize,
    n_t: usize,
    clifford_depth: usize,
    rng: &mut R,
) -> Result<Circuit> {
    let mut c = random_clifford_circuit(n_qubits, clifford_depth, rng)?;
    for _ in 0..n_t {
        let q = rng.random_range(1..=n_qubits);
        c.push(Gate::T { qubit: q })?;
        c.extend(&random_clifford_circuit(n_qubits, clifford_depth, rng)?)?;
    }
    Ok(c)
}

pub fn doped_clifford_state<R: Rng + ?Sized>(
    n_qubits: usize,
    n_t: usize,
    clifford_depth: usize,
    rng: &mut R,
) -> Result<StateVector> {
    doped_clifford_circuit(n_qubits, n_t, clifford_depth, rng)?.state()
}

/// `d` Clifford layers with `N_T` T gates placed at uniformly random
/// (layer, qubit) slots, drawn with replacement; a T gate follows the
/// single-qubit Clifford of its slot.
pub fn doped_layered_circuit<R: Rng + ?Sized>(
    n_qubits: usize,
    depth: usize,
    n_t: usize,
    rng: &mut R,
) -> Result<Circuit> {
    if depth == 0 {
        return Err(Error::InvalidArgument("layered circuit depth must be at least 1".into()));
    }
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); depth];
    for _ in 0..n_t {
        let layer = rng.random_range(0..depth);
        let q = rng.random_range(1..=n_qubits);
        slots[layer].push(q);
    }
    let mut c = Circuit::new(n_qubits)?;
    for layer in &slots {
        push_clifford_layer(&mut c, rng, layer)?;
    }
    Ok(c)
}

/// Layers of single-qubit rotations about random X/Y/Z axes followed by a
/// CNOT chain; angles uniform in `[0, 2 pi)`.
pub fn random_rotation_circuit<R: Rng + ?Sized>(n_qubits: usize, layers: usize, rng: &mut R) -> Result<Circuit> {
    let mut c = Circuit::new(n_qubits)?;
    for _ in 0..layers {
        for q in 1..=n_qubits {
            let p = [Pauli::X, Pauli::Y, Pauli::Z][rng.random_range(0..3)];
            let angle = rng.random_range(0.0..core::f64::consts::TAU);
            c.push(Gate::Rotation {
                axis: PauliString::single(n_qubits, q, p)?,
                angle,
            })?;
        }
        push_cnot_chain(&mut c)?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::QuantumState;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn to_dmat(m: &Mat2) -> DMatrix<Complex64> {
        DMatrix::from_row_slice(2, 2, &[m[0][0], m[0][1], m[1][0], m[1][1]])
    }

    fn equal_up_to_phase(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> bool {
        let ov = (a.adjoint() * b).trace();
        if ov.norm() < 1e-9 {
            return false;
        }
        let ph = ov / ov.norm();
        (a * ph - b).norm() < 1e-9
    }

    #[test]
    fn clifford_table_has_24_distinct_elements() {
        let mats: Vec<_> = (0..24u8).map(|i| to_dmat(&clifford_matrix(i))).collect();
        for i in 0..24 {
            assert!(((&mats[i].adjoint() * &mats[i]) - DMatrix::identity(2, 2)).norm() < 1e-12);
            for j in 0..i {
                assert!(!equal_up_to_phase(&mats[i], &mats[j]), "{i} {j}");
            }
        }
        // closed under multiplication by H and S
        for m in &mats {
            for g in [h_matrix(), s_matrix()] {
                let p = to_dmat(&g) * m;
                assert!(mats.iter().any(|x| equal_up_to_phase(x, &p)));
            }
        }
    }

    #[test]
    fn h_then_t_gives_t_state() {
        let c = Circuit::from_gates(1, vec![Gate::H { qubit: 1 }, Gate::T { qubit: 1 }]).unwrap();
        let out = c.state().unwrap();
        let x: PauliString = "X".parse().unwrap();
        assert!((out.expectation(&x).unwrap() - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(out.distance_up_to_phase(&StateVector::t_state(1).unwrap()).unwrap() < 1e-12);
        let plus = Circuit::from_gates(1, vec![Gate::H { qubit: 1 }]).unwrap().state().unwrap();
        assert!(plus.distance_up_to_phase(&StateVector::plus_state(1).unwrap()).unwrap() < 1e-12);
        let empty = Circuit::new(2).unwrap();
        let psi = StateVector::t_state(2).unwrap();
        assert_eq!(empty.apply(&psi).unwrap(), psi);
    }

    #[test]
    fn rejects_bad_gates() {
        let mut c = Circuit::new(2).unwrap();
        assert!(matches!(c.push(Gate::H { qubit: 3 }), Err(Error::QubitIndex { .. })));
        assert!(c.push(Gate::Cnot { control: 1, target: 1 }).is_err());
        assert!(c
            .push(Gate::Rotation {
                axis: "II".parse().unwrap(),
                angle: 0.3
            })
            .is_err());
        assert!(c.push(Gate::Clifford1 { qubit: 1, index: 24 }).is_err());
    }

    #[test]
    fn unitary_matches_kronecker_construction() {
        // CNOT(1,2) with qubit 1 as the most significant bit
        let c = Circuit::from_gates(2, vec![Gate::Cnot { control: 1, target: 2 }]).unwrap();
        let u = c.unitary().unwrap();
        let o = Complex64::new(1.0, 0.0);
        let z = Complex64::new(0.0, 0.0);
        let expected = DMatrix::from_row_slice(
            4,
            4,
            &[o, z, z, z, z, o, z, z, z, z, z, o, z, z, o, z],
        );
        assert_eq!(u, expected);
        // H on qubit 2 = I ⊗ H
        let c = Circuit::from_gates(2, vec![Gate::H { qubit: 2 }]).unwrap();
        let expected = DMatrix::<Complex64>::identity(2, 2).kronecker(&to_dmat(&h_matrix()));
        assert!((c.unitary().unwrap() - expected).norm() < 1e-12);
    }

    #[test]
    fn rotation_matches_matrix_exponential() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let r = rng.random_range(1..16u64);
            let axis = PauliString::from_index(2, r).unwrap();
            let angle = rng.random_range(-3.0..3.0);
            let c = Circuit::from_gates(2, vec![Gate::Rotation { axis, angle }]).unwrap();
            let s = axis.to_matrix();
            let expected = DMatrix::<Complex64>::identity(4, 4) * Complex64::new((angle / 2.0).cos(), 0.0)
                - s * Complex64::new(0.0, (angle / 2.0).sin());
            assert!((c.unitary().unwrap() - expected).norm() < 1e-12);
        }
    }

    #[test]
    fn density_application_matches_conjugation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let c = random_rotation_circuit(3, 2, &mut rng).unwrap();
        let mut c2 = doped_clifford_circuit(3, 2, 2, &mut rng).unwrap();
        c2.extend(&c).unwrap();
        let psi = StateVector::haar_random(3, &mut rng).unwrap();
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        let out = c2.apply_to_density(&rho).unwrap();
        let u = c2.unitary().unwrap();
        let expected = &u * rho.to_matrix() * u.adjoint();
        assert!((out.to_matrix() - expected).norm() < 1e-12);
    }

    #[test]
    fn random_clifford_counts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert!(random_clifford_circuit(3, 0, &mut rng).unwrap().is_empty());
        let c = random_clifford_circuit(4, 3, &mut rng).unwrap();
        let singles = c.gates().iter().filter(|g| matches!(g, Gate::Clifford1 { .. })).count();
        let cnots = c.gates().iter().filter(|g| matches!(g, Gate::Cnot { .. })).count();
        assert_eq!((singles, cnots), (12, 9));
        let d = doped_layered_circuit(4, 40, 16, &mut rng).unwrap();
        assert_eq!(d.t_count(), 16);
        assert_eq!(doped_clifford_circuit(3, 5, 2, &mut rng).unwrap().t_count(), 5);
    }

    #[test]
    fn cnot_chain_keeps_x_on_qubit_one() {
        let mut c = Circuit::new(4).unwrap();
        push_cnot_chain(&mut c).unwrap();
        let x1 = PauliString::single(4, 1, Pauli::X).unwrap();
        let z1 = PauliString::single(4, 1, Pauli::Z).unwrap();
        assert!((crate::oracles::otoc_4n(&c, &x1, &x1, 1).unwrap() - 1.0).abs() < 1e-12);
        assert!(crate::oracles::otoc_4n(&c, &z1, &z1, 1).unwrap() < 1e-12);
    }

    #[test]
    fn choi_state_and_ricochet() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let u = random_rotation_circuit(2, 2, &mut rng).unwrap();
        let choi = choi_state(&u).unwrap();
        let um = u.unitary().unwrap();
        let dim = 4;
        for i in 0..dim {
            for j in 0..dim {
                let expected = um[(j, i)] * 0.5;
                assert!((choi.amplitudes()[i * dim + j] - expected).norm() < 1e-12);
            }
        }
        // (I ⊗ U*)|Phi> = (U^dagger ⊗ I)|Phi>
        let phi: Vec<Complex64> = (0..16)
            .map(|k| if k / 4 == k % 4 { Complex64::new(0.5, 0.0) } else { Complex64::new(0.0, 0.0) })
            .collect();
        let phi = nalgebra::DVector::from_vec(phi);
        let id = DMatrix::<Complex64>::identity(4, 4);
        let lhs = id.kronecker(&um.map(|x| x.conj())) * &phi;
        let rhs = um.adjoint().kronecker(&id) * &phi;
        assert!((lhs - rhs).norm() < 1e-10);
        let dense = choi_from_unitary(&um).unwrap();
        assert!(dense.distance_up_to_phase(&choi).unwrap() < 1e-12);
        assert!(choi_from_unitary(&DMatrix::identity(3, 3)).is_err());
    }
}
