//! Named sweeps that tabulate ensemble means and standard deviations of the
//! exact and estimated quantities.
//!
//! Each sweep point and instance draws from its own RNG stream derived from
//! the configured seed, and aggregation runs in index order, so tables do
//! not depend on the executor.

mod presets;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;
use rand::Rng;

use crate::circuit::default_clifford_depth;
use crate::error::{Error, Result};
use crate::exec::Executor;
use crate::noise::{NoiseKind, StudyRecord};
use crate::oracles::{exact_a_n, tsallis_from_moment};
use crate::state::StateVector;

pub use presets::spot_check;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Preset {
    /// Random Clifford circuits doped with `N_T` T gates; sweeps `N_T`.
    DopedCliffordSweep,
    /// Fixed-depth layered Clifford circuits with injected T gates; sweeps `d`.
    ScramblingDepthSweep,
    /// Evolution under GUE Hamiltonians; sweeps `t`.
    GueTimeSweep,
    /// Evolution under `K` random Pauli strings; sweeps `t`.
    RandomPauliSweep,
    /// Evolution under a disordered XXZ chain; sweeps `t`.
    IsingSweep,
    /// Layers of random single-qubit rotations and CNOT chains; sweeps `d`.
    RandomCircuitDepth,
    /// Product states `(|0> + e^{i pi s/4}|1>)^N`; sweeps `s`.
    MonotoneRelationSweep,
    /// Noisy layered circuits with global-depolarization mitigation; sweeps `p`.
    NoiseMitigationStudy,
}

impl Preset {
    pub const ALL: [Preset; 8] = [
        Preset::DopedCliffordSweep,
        Preset::ScramblingDepthSweep,
        Preset::GueTimeSweep,
        Preset::RandomPauliSweep,
        Preset::IsingSweep,
        Preset::RandomCircuitDepth,
        Preset::MonotoneRelationSweep,
        Preset::NoiseMitigationStudy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Preset::DopedCliffordSweep => "doped_clifford_sweep",
            Preset::ScramblingDepthSweep => "scrambling_depth_sweep",
            Preset::GueTimeSweep => "gue_time_sweep",
            Preset::RandomPauliSweep => "random_pauli_sweep",
            Preset::IsingSweep => "ising_sweep",
            Preset::RandomCircuitDepth => "random_circuit_depth",
            Preset::MonotoneRelationSweep => "monotone_relation_sweep",
            Preset::NoiseMitigationStudy => "noise_mitigation_study",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }

    /// Name of the swept variable.
    pub fn sweep_variable(self) -> &'static str {
        match self {
            Preset::DopedCliffordSweep => "n_t",
            Preset::ScramblingDepthSweep | Preset::RandomCircuitDepth => "depth",
            Preset::GueTimeSweep | Preset::RandomPauliSweep | Preset::IsingSweep => "time",
            Preset::MonotoneRelationSweep => "s",
            Preset::NoiseMitigationStudy => "p",
        }
    }
}

impl core::fmt::Display for Preset {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Flat experiment description. Fields a preset does not use are ignored.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ExperimentConfig {
    pub preset: Preset,
    pub n_qubits: usize,
    /// Sweep values; integer sweeps (`N_T`, `d`) are rounded.
    pub grid: Vec<f64>,
    pub instances: usize,
    /// Repetitions per estimator call.
    pub shots: u64,
    /// Orders `n` of the moments, entropies and `4n`-point OTOCs.
    pub orders: Vec<u32>,
    pub seed: u64,
    /// Clifford block depth for the doped sweep, circuit depth for the noise study.
    pub depth: usize,
    /// T gates in the layered and noisy circuits.
    pub n_t: usize,
    /// Pauli strings in the random Pauli Hamiltonian.
    pub k_terms: usize,
    /// ZZ anisotropy of the XXZ chain.
    pub delta: f64,
    /// Disorder strength `W`; fields are uniform in `[-W, W]`.
    pub disorder: f64,
    pub noise_models: Vec<NoiseKind>,
    /// Read the noise grid as target impurities and calibrate `p` on the
    /// first instance.
    pub target_impurity: bool,
    /// Haar-random samples for the reference line of the doped sweep.
    pub haar_samples: usize,
    /// When nonzero, the random Pauli sweep also reports the infidelity of a
    /// Trotterized evolution with this many steps.
    pub trotter_steps: usize,
}

/// `per_decade` log-spaced points from `10^lo` to `10^hi` inclusive.
pub fn log_grid(lo: i32, hi: i32, per_decade: usize) -> Vec<f64> {
    let count = (hi - lo) as usize * per_decade;
    (0..=count)
        .map(|k| 10f64.powf(lo as f64 + k as f64 / per_decade as f64))
        .collect()
}

fn int_grid(range: core::ops::RangeInclusive<usize>) -> Vec<f64> {
    range.map(|v| v as f64).collect()
}

impl ExperimentConfig {
    /// Desk-scale defaults mirroring the figure setups.
    pub fn defaults(preset: Preset) -> Self {
        let base = ExperimentConfig {
            preset,
            n_qubits: 4,
            grid: Vec::new(),
            instances: 200,
            shots: 1000,
            orders: vec![2],
            seed: 0,
            depth: 0,
            n_t: 0,
            k_terms: 70,
            delta: 0.2,
            disorder: 1.0,
            noise_models: vec![
                NoiseKind::LocalDepolarizing,
                NoiseKind::Dephasing,
                NoiseKind::AmplitudeDamping,
            ],
            target_impurity: false,
            haar_samples: 2000,
            trotter_steps: 0,
        };
        match preset {
            Preset::DopedCliffordSweep => ExperimentConfig {
                n_qubits: 3,
                grid: int_grid(0..=6),
                instances: 6,
                orders: vec![3],
                depth: default_clifford_depth(3),
                ..base
            },
            Preset::ScramblingDepthSweep | Preset::RandomCircuitDepth => ExperimentConfig {
                grid: int_grid(1..=40),
                ..base
            },
            Preset::GueTimeSweep => ExperimentConfig {
                n_qubits: 3,
                grid: log_grid(-1, 3, 8),
                instances: 2000,
                ..base
            },
            Preset::RandomPauliSweep | Preset::IsingSweep => ExperimentConfig {
                grid: log_grid(-1, 3, 8),
                ..base
            },
            Preset::MonotoneRelationSweep => ExperimentConfig {
                n_qubits: 2,
                grid: (0..=20).map(|k| k as f64 / 20.0).collect(),
                instances: 1,
                orders: vec![2, 3],
                ..base
            },
            Preset::NoiseMitigationStudy => ExperimentConfig {
                n_qubits: 6,
                grid: vec![0.01, 0.03, 0.1, 0.3],
                instances: 20,
                depth: 20,
                target_impurity: true,
                ..base
            },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::InvalidArgument("the sweep grid is empty".into()));
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("the sweep grid has a non-finite value".into()));
        }
        if self.instances == 0 {
            return Err(Error::InvalidArgument("instances must be at least 1".into()));
        }
        if self.orders.is_empty() || self.orders.iter().any(|&n| n < 2) {
            return Err(Error::InvalidArgument("orders must be nonempty with every n >= 2".into()));
        }
        if self.n_qubits == 0 {
            return Err(Error::InvalidArgument("n_qubits must be at least 1".into()));
        }
        presets::validate(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum RecordKind {
    Exact,
    Estimated,
}

impl RecordKind {
    pub fn name(self) -> &'static str {
        match self {
            RecordKind::Exact => "exact",
            RecordKind::Estimated => "estimated",
        }
    }
}

/// One aggregated quantity at one sweep point.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RecordRow {
    pub sweep: f64,
    pub quantity: String,
    pub mean: f64,
    /// Sample standard deviation across instances (0 for one instance).
    pub std: f64,
    pub instances: usize,
    pub kind: RecordKind,
}

/// Exact-versus-estimate comparison at one sweep point.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpotCheck {
    pub sweep: f64,
    pub quantity: String,
    pub exact: f64,
    pub estimate: f64,
    /// Shot-noise standard error of the ensemble-mean estimate.
    pub std_error: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ExperimentOutput {
    pub rows: Vec<RecordRow>,
    pub checks: Vec<SpotCheck>,
    /// Per-instance records of the noise study.
    pub study: Vec<StudyRecord>,
}

impl ExperimentOutput {
    /// Row for `quantity` at the sweep value closest to `sweep`.
    pub fn row(&self, sweep: f64, quantity: &str) -> Option<&RecordRow> {
        self.rows
            .iter()
            .filter(|r| r.quantity == quantity)
            .min_by(|a, b| (a.sweep - sweep).abs().total_cmp(&(b.sweep - sweep).abs()))
    }

    /// All rows for `quantity` in sweep order.
    pub fn series(&self, quantity: &str) -> Vec<&RecordRow> {
        self.rows.iter().filter(|r| r.quantity == quantity).collect()
    }
}

/// Mean and sample standard deviation, summed in order.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let l = values.len();
    if l == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / l as f64;
    if l == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (l - 1) as f64;
    (mean, var.sqrt())
}

pub fn run_preset<E: Executor>(config: &ExperimentConfig, exec: &E) -> Result<ExperimentOutput> {
    config.validate()?;
    presets::run(config, exec)
}

/// Haar-random reference values of `A_n` and `T_n`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct HaarReference {
    pub samples: usize,
    pub a_n: f64,
    pub a_n_std_error: f64,
    pub t_n: f64,
    pub t_n_std: f64,
    pub t_n_std_error: f64,
}

pub fn haar_reference<R: Rng + ?Sized>(n_qubits: usize, n: u32, samples: usize, rng: &mut R) -> Result<HaarReference> {
    if samples == 0 {
        return Err(Error::InvalidArgument("the Haar reference needs at least one sample".into()));
    }
    if n < 2 {
        return Err(Error::InvalidArgument(format!("the Haar reference needs n >= 2, got {n}")));
    }
    let mut a = Vec::with_capacity(samples);
    let mut t = Vec::with_capacity(samples);
    for _ in 0..samples {
        let value = exact_a_n(&StateVector::haar_random(n_qubits, rng)?, n)?;
        a.push(value);
        t.push(tsallis_from_moment(value, n)?);
    }
    let (a_mean, a_std) = mean_std(&a);
    let (t_mean, t_std) = mean_std(&t);
    let root = (samples as f64).sqrt();
    Ok(HaarReference {
        samples,
        a_n: a_mean,
        a_n_std_error: a_std / root,
        t_n: t_mean,
        t_n_std: t_std,
        t_n_std_error: t_std / root,
    })
}
