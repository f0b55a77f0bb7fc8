//! Noise channels on density matrices and global-depolarization mitigation
//! of the Pauli-spectrum moments.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::circuit::{doped_layered_circuit, Circuit};
use crate::error::{Error, Result};
use crate::exec::{task_rng, try_run, Executor};
use crate::oracles::{exact_a_n, renyi_from_moment};
use crate::state::{DensityMatrix, MAX_DENSITY_QUBITS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum NoiseKind {
    /// `(1-p) rho + p I/2^N` on the whole register.
    GlobalDepolarizing,
    /// `(1-p) rho + (p/2) I` on each touched qubit, via partial-trace replacement.
    LocalDepolarizing,
    /// `(1-p) rho + p Z rho Z`.
    Dephasing,
    /// Two-Kraus amplitude damping with decay probability `p`.
    AmplitudeDamping,
}

impl NoiseKind {
    pub const ALL: [NoiseKind; 4] = [
        NoiseKind::GlobalDepolarizing,
        NoiseKind::LocalDepolarizing,
        NoiseKind::Dephasing,
        NoiseKind::AmplitudeDamping,
    ];

    pub fn name(self) -> &'static str {
        match self {
            NoiseKind::GlobalDepolarizing => "global_depolarizing",
            NoiseKind::LocalDepolarizing => "local_depolarizing",
            NoiseKind::Dephasing => "dephasing",
            NoiseKind::AmplitudeDamping => "amplitude_damping",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

impl core::fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NoiseModel {
    kind: NoiseKind,
    p: f64,
}

impl NoiseModel {
    pub fn new(kind: NoiseKind, p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::InvalidArgument(format!("noise strength p = {p} is outside [0, 1]")));
        }
        Ok(NoiseModel { kind, p })
    }

    pub fn kind(&self) -> NoiseKind {
        self.kind
    }

    pub fn p(&self) -> f64 {
        self.p
    }
}

/// Visits every 2x2 block `(rho[i0,j0], rho[i0,j1], rho[i1,j0], rho[i1,j1])`
/// of the qubit at bit position `bit`.
fn for_each_block(data: &mut [Complex64], dim: usize, bit: usize, mut f: impl FnMut([Complex64; 4]) -> [Complex64; 4]) {
    let m = 1usize << bit;
    for i in (0..dim).filter(|i| i & m == 0) {
        for j in (0..dim).filter(|j| j & m == 0) {
            let idx = [i * dim + j, i * dim + (j | m), (i | m) * dim + j, (i | m) * dim + (j | m)];
            let out = f(idx.map(|k| data[k]));
            for (k, v) in idx.into_iter().zip(out) {
                data[k] = v;
            }
        }
    }
}

/// Applies `model` to `rho` on each listed qubit (1-based); the global model
/// ignores the qubit list and acts once.
pub fn apply_channel(rho: &DensityMatrix, model: &NoiseModel, qubits: &[usize]) -> Result<DensityMatrix> {
    let n = rho.n_qubits();
    for &q in qubits {
        if q == 0 || q > n {
            return Err(Error::QubitIndex { index: q, n_qubits: n });
        }
    }
    let mut out = rho.clone();
    apply_in_place(&mut out, model, qubits);
    Ok(out)
}

fn apply_in_place(rho: &mut DensityMatrix, model: &NoiseModel, qubits: &[usize]) {
    let p = model.p;
    if p == 0.0 {
        return;
    }
    let n = rho.n_qubits();
    let dim = rho.dim();
    let data = rho.data_mut();
    if model.kind == NoiseKind::GlobalDepolarizing {
        let keep = 1.0 - p;
        data.iter_mut().for_each(|v| *v *= keep);
        let add = p / dim as f64;
        for i in 0..dim {
            data[i * dim + i] += add;
        }
        return;
    }
    for &q in qubits {
        let bit = n - q;
        match model.kind {
            NoiseKind::LocalDepolarizing => for_each_block(data, dim, bit, |[a00, a01, a10, a11]| {
                let half = (a00 + a11) * (p / 2.0);
                let k = 1.0 - p;
                [a00 * k + half, a01 * k, a10 * k, a11 * k + half]
            }),
            NoiseKind::Dephasing => for_each_block(data, dim, bit, |[a00, a01, a10, a11]| {
                let k = 1.0 - 2.0 * p;
                [a00, a01 * k, a10 * k, a11]
            }),
            NoiseKind::AmplitudeDamping => for_each_block(data, dim, bit, |[a00, a01, a10, a11]| {
                let s = (1.0 - p).sqrt();
                [a00 + a11 * p, a01 * s, a10 * s, a11 * (1.0 - p)]
            }),
            NoiseKind::GlobalDepolarizing => unreachable!(),
        }
    }
}

/// Runs `circuit` on `|0><0|`, applying `model` after every gate to the
/// qubits that gate touched.
pub fn noisy_circuit_state(circuit: &Circuit, model: &NoiseModel) -> Result<DensityMatrix> {
    Error::check_capacity("noisy circuit", circuit.n_qubits(), MAX_DENSITY_QUBITS)?;
    let psi = crate::state::StateVector::zero_state(circuit.n_qubits())?;
    let mut rho = DensityMatrix::from_pure(&psi)?;
    for g in circuit.gates() {
        g.apply_to_density(&mut rho);
        apply_in_place(&mut rho, model, &g.qubits());
    }
    Ok(rho)
}

/// Global-depolarizing strength reproducing `purity` on `n_qubits` qubits.
pub fn estimate_p_from_purity(purity: f64, n_qubits: usize) -> Result<f64> {
    let d = (n_qubits as f64).exp2();
    let floor = 1.0 / d;
    if !(purity <= 1.0 + 1e-12) {
        return Err(Error::Domain(format!("purity {purity} exceeds 1")));
    }
    if !(purity >= floor - 1e-12) {
        return Err(Error::Domain(format!(
            "purity {purity} is below the maximally mixed value {floor}"
        )));
    }
    let inner = ((d - 1.0) * (d * purity - 1.0)).max(0.0);
    Ok((1.0 - inner.sqrt() / (d - 1.0)).max(0.0))
}

fn check_mitigation(p: f64, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("the order n must be at least 1".into()));
    }
    if !(0.0..1.0).contains(&p) {
        return Err(Error::Domain(format!(
            "depolarizing strength p = {p} cannot be inverted; it must lie in [0, 1)"
        )));
    }
    Ok((1.0 - p).powi(2 * n as i32))
}

/// Inverts the global-depolarizing map on `A_n`. Not clamped.
pub fn mitigate_a_n(a_n_noisy: f64, p: f64, n: u32, n_qubits: usize) -> Result<f64> {
    let q = check_mitigation(p, n)?;
    let d = (n_qubits as f64).exp2();
    Ok(a_n_noisy / q - (1.0 / q - 1.0) / d)
}

/// Mitigated Tsallis entropy from a depolarized one.
pub fn mitigate_t_n(t_n_noisy: f64, p: f64, n: u32, n_qubits: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("the Tsallis form needs n >= 2".into()));
    }
    let q = check_mitigation(p, n)?;
    let d = (n_qubits as f64).exp2();
    let k = 1.0 - n as f64;
    Ok((t_n_noisy - (1.0 - q) * (1.0 / d - 1.0) / k) / q)
}

/// Mitigated Rényi entropy; a nonpositive mitigated moment is a domain error.
pub fn mitigate_m_n(a_n_noisy: f64, p: f64, n: u32, n_qubits: usize) -> Result<f64> {
    if n < 2 {
        return Err(Error::InvalidArgument("the Rényi form needs n >= 2".into()));
    }
    let a = mitigate_a_n(a_n_noisy, p, n, n_qubits)?;
    if !(a > 0.0) {
        return Err(Error::Domain(format!("mitigated A_{n} = {a} is not positive")));
    }
    Ok(a.ln() / (1.0 - n as f64))
}

/// Layered circuits doped with T gates, one per instance.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StudySpec {
    pub kind: NoiseKind,
    pub n_qubits: usize,
    pub depth: usize,
    pub n_t: usize,
    pub n: u32,
    pub instances: usize,
    pub p_grid: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StudyRecord {
    pub kind: NoiseKind,
    pub p: f64,
    pub n_qubits: usize,
    pub n: u32,
    pub instance: usize,
    /// `1 - tr(rho^2)` of the noisy state.
    pub impurity: f64,
    pub err_unmtg: f64,
    /// `None` when the mitigated moment left the domain of the logarithm.
    pub err_mtg: Option<f64>,
    /// `err_mtg / err_unmtg`, `None` when either is missing or `err_unmtg` is
    /// at rounding level.
    pub ratio: Option<f64>,
}

impl StudySpec {
    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidArgument("the study needs n >= 2".into()));
        }
        if self.instances == 0 || self.p_grid.is_empty() {
            return Err(Error::InvalidArgument("the study needs instances and a p grid".into()));
        }
        Error::check_capacity("noise study", self.n_qubits, MAX_DENSITY_QUBITS)?;
        for &p in &self.p_grid {
            NoiseModel::new(self.kind, p)?;
        }
        Ok(())
    }

    /// Circuit of instance `i`, shared across the p grid.
    pub fn circuit(&self, seed: u64, instance: usize) -> Result<Circuit> {
        doped_layered_circuit(self.n_qubits, self.depth, self.n_t, &mut task_rng(seed, instance as u64))
    }
}

/// Compares the unmitigated and mitigated Rényi entropy of noisy circuit
/// outputs against the noiseless value. The depolarizing strength used for
/// mitigation is inferred from the noisy purity.
pub fn relative_error_study<E: Executor>(spec: &StudySpec, seed: u64, exec: &E) -> Result<Vec<StudyRecord>> {
    spec.validate()?;
    let per_instance = try_run(exec, spec.instances, |i| -> Result<Vec<StudyRecord>> {
        let circuit = spec.circuit(seed, i)?;
        let pure = renyi_from_moment(exact_a_n(&circuit.state()?, spec.n)?, spec.n)?;
        spec.p_grid
            .iter()
            .map(|&p| study_point(spec, &circuit, pure, p, i))
            .collect()
    })?;
    // p-major order
    let mut records = Vec::with_capacity(spec.instances * spec.p_grid.len());
    for k in 0..spec.p_grid.len() {
        records.extend(per_instance.iter().map(|r| r[k].clone()));
    }
    Ok(records)
}

fn study_point(spec: &StudySpec, circuit: &Circuit, pure: f64, p: f64, instance: usize) -> Result<StudyRecord> {
    let rho = noisy_circuit_state(circuit, &NoiseModel::new(spec.kind, p)?)?;
    let purity = rho.purity();
    let a_noisy = exact_a_n(&rho, spec.n)?;
    let err_unmtg = (renyi_from_moment(a_noisy, spec.n)? - pure).abs();
    let p_est = estimate_p_from_purity(purity, spec.n_qubits)?;
    let err_mtg = mitigate_m_n(a_noisy, p_est, spec.n, spec.n_qubits)
        .ok()
        .map(|m| (m - pure).abs());
    // below this the noise has not moved M_n past rounding
    let ratio = err_mtg.filter(|_| err_unmtg > 1e-12).map(|e| e / err_unmtg);
    Ok(StudyRecord {
        kind: spec.kind,
        p,
        n_qubits: spec.n_qubits,
        n: spec.n,
        instance,
        impurity: 1.0 - purity,
        err_unmtg,
        err_mtg,
        ratio,
    })
}

/// Noise strength giving `target` impurity on `circuit`. The search halves
/// `p_max` down to the smallest power-of-two fraction still reaching the
/// target, then bisects, so it returns the first crossing even when
/// impurity is not monotone in `p`.
pub fn calibrate_p(circuit: &Circuit, kind: NoiseKind, target: f64, p_max: f64) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) || !(p_max > 0.0 && p_max <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "cannot calibrate impurity {target} on p in [0, {p_max}]"
        )));
    }
    let impurity = |p: f64| -> Result<f64> {
        Ok(1.0 - noisy_circuit_state(circuit, &NoiseModel::new(kind, p)?)?.purity())
    };
    let mut hi = p_max;
    while impurity(hi)? < target {
        hi *= 0.5;
        if hi < 1e-9 {
            return Err(Error::Domain(format!(
                "impurity {target} is not reached for p <= {p_max}"
            )));
        }
    }
    while hi > 1e-9 && impurity(0.5 * hi)? >= target {
        hi *= 0.5;
    }
    let mut lo = 0.5 * hi;
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if impurity(mid)? < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}
