use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Float;
use rand::seq::SliceRandom;

use super::{haar_reference, mean_std, ExperimentConfig, ExperimentOutput, Preset, RecordKind, RecordRow, SpotCheck};
use crate::circuit::{choi_from_unitary, doped_clifford_circuit, doped_layered_circuit, random_rotation_circuit};
use crate::error::{Error, Result};
use crate::estimators::{algorithm1, algorithm2};
use crate::exec::{task_rng, try_run, Executor};
use crate::hamiltonian::{
    gue_hamiltonian, ising_hamiltonian, random_pauli_hamiltonian, trotter_evolve, Hamiltonian,
    MAX_HAMILTONIAN_QUBITS,
};
use crate::noise::{calibrate_p, relative_error_study, StudyRecord, StudySpec};
use crate::oracles::{
    bell_magic_exact, clifford_avg_flatness_from_a2, clifford_avg_otoc_from_choi, exact_a_n, flatness,
    moment_from_expectations, otoc_4n_unitary, renyi_from_moment, tsallis_from_moment, BoundsReport, StabilizerSet,
    MAX_ENUMERATION_QUBITS, MAX_OTOC_QUBITS,
};
use crate::pauli::{Pauli, PauliString, SPECTRUM_MAX_QUBITS};
use crate::state::{QuantumState, StateVector, MAX_DENSITY_QUBITS};

/// Stream reserved for the Haar reference of order `n`.
const HAAR_STREAM: u64 = 1 << 62;
/// Stream for choosing spot-check points.
const CHECK_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq)]
enum Reduce {
    /// Mean and sample standard deviation.
    Mean,
    /// `sqrt(sum v^2)/count`: standard error of a mean of independent estimates.
    RootSumSquare,
}

#[derive(Clone, Debug)]
struct Sample {
    quantity: String,
    kind: RecordKind,
    reduce: Reduce,
    value: f64,
}

fn exact(quantity: String, value: f64) -> Sample {
    Sample {
        quantity,
        kind: RecordKind::Exact,
        reduce: Reduce::Mean,
        value,
    }
}

fn estimated(quantity: String, value: f64, reduce: Reduce) -> Sample {
    Sample {
        quantity,
        kind: RecordKind::Estimated,
        reduce,
        value,
    }
}

/// Collapses per-instance sample lists, which share one layout, into rows.
fn aggregate(sweep: f64, instances: &[Vec<Sample>]) -> Result<Vec<RecordRow>> {
    let first = instances
        .first()
        .ok_or_else(|| Error::Consistency("no instances to aggregate".into()))?;
    let mut rows = Vec::with_capacity(first.len());
    let mut column = Vec::with_capacity(instances.len());
    for (k, head) in first.iter().enumerate() {
        column.clear();
        for inst in instances {
            let s = inst
                .get(k)
                .filter(|s| s.quantity == head.quantity)
                .ok_or_else(|| Error::Consistency(format!("instance layouts differ at {}", head.quantity)))?;
            column.push(s.value);
        }
        let (mean, std) = match head.reduce {
            Reduce::Mean => mean_std(&column),
            Reduce::RootSumSquare => {
                let ss: f64 = column.iter().map(|v| v * v).sum();
                (ss.sqrt() / column.len() as f64, 0.0)
            }
        };
        rows.push(RecordRow {
            sweep,
            quantity: head.quantity.clone(),
            mean,
            std,
            instances: column.len(),
            kind: head.kind,
        });
    }
    Ok(rows)
}

fn integer_point(v: f64, min: usize, what: &str) -> Result<usize> {
    let r = v.round();
    if r < min as f64 || (v - r).abs() > 1e-9 {
        return Err(Error::InvalidArgument(format!(
            "{what} grid value {v} must be an integer >= {min}"
        )));
    }
    Ok(r as usize)
}

pub(super) fn validate(c: &ExperimentConfig) -> Result<()> {
    let n = c.n_qubits;
    match c.preset {
        Preset::DopedCliffordSweep => {
            Error::check_capacity("doped Clifford sweep", n, SPECTRUM_MAX_QUBITS)?;
            for &v in &c.grid {
                integer_point(v, 0, "N_T")?;
            }
            if c.shots == 0 || c.haar_samples == 0 {
                return Err(Error::InvalidArgument("shots and haar_samples must be positive".into()));
            }
        }
        Preset::ScramblingDepthSweep | Preset::RandomCircuitDepth => {
            Error::check_capacity("unitary sweep", n, MAX_OTOC_QUBITS)?;
            for &v in &c.grid {
                integer_point(v, 1, "depth")?;
            }
        }
        Preset::GueTimeSweep | Preset::RandomPauliSweep | Preset::IsingSweep => {
            Error::check_capacity("Hamiltonian sweep", n, MAX_OTOC_QUBITS.min(MAX_HAMILTONIAN_QUBITS))?;
            if c.preset == Preset::IsingSweep && n < 2 {
                return Err(Error::InvalidArgument("the spin chain needs at least 2 qubits".into()));
            }
            if c.preset == Preset::RandomPauliSweep {
                let max = (1usize << (2 * n)) - 1;
                if c.k_terms == 0 || c.k_terms > max {
                    return Err(Error::InvalidArgument(format!(
                        "k_terms = {} must lie in 1..={max}",
                        c.k_terms
                    )));
                }
            }
        }
        Preset::MonotoneRelationSweep => {
            Error::check_capacity("stabilizer enumeration", n, MAX_ENUMERATION_QUBITS)?;
        }
        Preset::NoiseMitigationStudy => {
            Error::check_capacity("noise study", n, MAX_DENSITY_QUBITS)?;
            if c.depth == 0 {
                return Err(Error::InvalidArgument("the noise study needs depth >= 1".into()));
            }
            if c.noise_models.is_empty() {
                return Err(Error::InvalidArgument("noise_models is empty".into()));
            }
            for &v in &c.grid {
                let ok = if c.target_impurity { v > 0.0 && v < 1.0 } else { (0.0..=1.0).contains(&v) };
                if !ok {
                    return Err(Error::InvalidArgument(format!("noise grid value {v} is out of range")));
                }
            }
        }
    }
    Ok(())
}

pub(super) fn run<E: Executor>(c: &ExperimentConfig, exec: &E) -> Result<ExperimentOutput> {
    match c.preset {
        Preset::DopedCliffordSweep => doped_sweep(c, exec),
        Preset::ScramblingDepthSweep | Preset::RandomCircuitDepth => circuit_sweep(c, exec),
        Preset::GueTimeSweep | Preset::RandomPauliSweep | Preset::IsingSweep => hamiltonian_sweep(c, exec),
        Preset::MonotoneRelationSweep => monotone_sweep(c),
        Preset::NoiseMitigationStudy => noise_study(c, exec),
    }
}

fn tabulate(rows: Vec<RecordRow>) -> ExperimentOutput {
    ExperimentOutput {
        rows,
        checks: Vec::new(),
        study: Vec::new(),
    }
}

/// Runs `points x instances` tasks and aggregates per point.
fn grid_tasks<E, F>(c: &ExperimentConfig, exec: &E, task: F) -> Result<Vec<RecordRow>>
where
    E: Executor,
    F: Fn(usize, &mut rand_chacha::ChaCha8Rng) -> Result<Vec<Sample>> + Sync + Send,
{
    let inst = c.instances;
    let samples = try_run(exec, c.grid.len() * inst, |idx| {
        task(idx / inst, &mut task_rng(c.seed, idx as u64))
    })?;
    let mut rows = Vec::new();
    for (k, chunk) in samples.chunks(inst).enumerate() {
        rows.extend(aggregate(c.grid[k], chunk)?);
    }
    Ok(rows)
}

fn doped_sweep<E: Executor>(c: &ExperimentConfig, exec: &E) -> Result<ExperimentOutput> {
    let nq = c.n_qubits;
    let stabilizers = if nq <= 3 { Some(StabilizerSet::enumerate(nq)?) } else { None };
    let mut rows = grid_tasks(c, exec, |k, rng| {
        let n_t = integer_point(c.grid[k], 0, "N_T")?;
        let psi = doped_clifford_circuit(nq, n_t, c.depth, rng)?.state()?;
        let mut out = Vec::new();
        let a2 = exact_a_n(&psi, 2)?;
        for &n in &c.orders {
            let a = exact_a_n(&psi, n)?;
            out.push(exact(format!("A_{n}"), a));
            out.push(exact(format!("T_{n}"), tsallis_from_moment(a, n)?));
            out.push(exact(format!("M_{n}"), renyi_from_moment(a, n)?));
            let est = if n % 2 == 1 {
                algorithm1(&psi, n, c.shots, false, rng)?
            } else {
                algorithm2(&psi, n, c.shots, rng)?
            };
            let (t, t_err) = est.tsallis(n)?;
            out.push(estimated(format!("T_{n}:estimated"), t, Reduce::Mean));
            out.push(estimated(format!("T_{n}:estimated:shot_se"), t_err, Reduce::RootSumSquare));
            let b = BoundsReport::from_a_n(a, n)?;
            out.push(exact(format!("fstab_upper_{n}"), b.fstab_upper));
            out.push(exact(format!("fstab_lower_{n}"), b.fstab_lower));
        }
        if let Some(set) = &stabilizers {
            out.push(exact("fstab".into(), set.fidelity(&psi)?));
        }
        out.push(exact("flatness".into(), flatness(&psi)));
        out.push(exact("flatness:clifford_avg".into(), clifford_avg_flatness_from_a2(a2, nq)));
        let bm = bell_magic_exact(&psi)?;
        out.push(exact("B".into(), bm.b));
        out.push(exact("B_a".into(), bm.b_additive));
        Ok(out)
    })?;

    // constant Haar reference line at every sweep point
    let mut reference = Vec::new();
    for &n in &c.orders {
        let h = haar_reference(nq, n, c.haar_samples, &mut task_rng(c.seed, HAAR_STREAM + n as u64))?;
        for &sweep in &c.grid {
            reference.push(RecordRow {
                sweep,
                quantity: format!("T_{n}:haar"),
                mean: h.t_n,
                std: h.t_n_std,
                instances: h.samples,
                kind: RecordKind::Estimated,
            });
        }
    }
    rows.extend(reference);
    let checks = spot_check(&rows, c.seed);
    Ok(ExperimentOutput {
        rows,
        checks,
        study: Vec::new(),
    })
}

/// Compares every `Q:estimated` row with its exact `Q` row at up to five
/// randomly chosen sweep points, within three shot-noise standard errors.
pub fn spot_check(rows: &[RecordRow], seed: u64) -> Vec<SpotCheck> {
    let mut points: Vec<f64> = Vec::new();
    for r in rows {
        if !points.contains(&r.sweep) {
            points.push(r.sweep);
        }
    }
    points.shuffle(&mut task_rng(seed, CHECK_STREAM));
    points.truncate(5);
    let mut checks = Vec::new();
    for &sweep in &points {
        for r in rows.iter().filter(|r| r.sweep == sweep) {
            let Some(base) = r.quantity.strip_suffix(":estimated") else {
                continue;
            };
            let find = |q: &str| rows.iter().find(|x| x.sweep == sweep && x.quantity == q);
            let se_name = format!("{}:shot_se", r.quantity);
            let (Some(ex), Some(se)) = (find(base), find(&se_name)) else {
                continue;
            };
            let diff = (r.mean - ex.mean).abs();
            let passed = if se.mean > 0.0 { diff <= 3.0 * se.mean } else { diff < 1e-9 };
            checks.push(SpotCheck {
                sweep,
                quantity: String::from(base),
                exact: ex.mean,
                estimate: r.mean,
                std_error: se.mean,
                passed,
            });
        }
    }
    checks
}

/// Quantities of a unitary: Choi-state moments and entropies, `4n`-point
/// OTOCs with their Clifford averages, and the flatness of `U|0>`.
fn unitary_samples(u: &DMatrix<Complex64>, nq: usize, orders: &[u32]) -> Result<Vec<Sample>> {
    let choi = choi_from_unitary(u)?;
    let column: Vec<Complex64> = u.column(0).iter().copied().collect();
    let psi = StateVector::from_unnormalized(nq, column)?;
    let x1 = PauliString::single(nq, 1, Pauli::X)?;
    let zn = PauliString::single(nq, nq, Pauli::Z)?;
    let xn = PauliString::single(nq, nq, Pauli::X)?;
    let choi_expectations = choi.pauli_expectations()?;
    let mut out = Vec::new();
    for &n in orders {
        let a = moment_from_expectations(2 * nq, &choi_expectations, n);
        let k = 4 * n;
        out.push(exact(format!("A_{n}:choi"), a));
        out.push(exact(format!("M_{n}:choi"), renyi_from_moment(a, n)?));
        out.push(exact(format!("otoc_{k}:x1x1"), otoc_4n_unitary(u, &x1, &x1, n)?));
        out.push(exact(format!("otoc_{k}:x1z{nq}"), otoc_4n_unitary(u, &x1, &zn, n)?));
        out.push(exact(format!("otoc_{k}:x1x{nq}"), otoc_4n_unitary(u, &x1, &xn, n)?));
        out.push(exact(format!("otoc_{k}:clifford_avg"), clifford_avg_otoc_from_choi(a, nq)));
    }
    out.push(exact("flatness".into(), flatness(&psi)));
    out.push(exact(
        "flatness:clifford_avg".into(),
        clifford_avg_flatness_from_a2(exact_a_n(&psi, 2)?, nq),
    ));
    Ok(out)
}

fn circuit_sweep<E: Executor>(c: &ExperimentConfig, exec: &E) -> Result<ExperimentOutput> {
    let nq = c.n_qubits;
    let rows = grid_tasks(c, exec, |k, rng| {
        let d = integer_point(c.grid[k], 1, "depth")?;
        let circuit = match c.preset {
            Preset::ScramblingDepthSweep => doped_layered_circuit(nq, d, c.n_t, rng)?,
            _ => random_rotation_circuit(nq, d, rng)?,
        };
        unitary_samples(&circuit.unitary()?, nq, &c.orders)
    })?;
    Ok(tabulate(rows))
}

fn hamiltonian_sweep<E: Executor>(c: &ExperimentConfig, exec: &E) -> Result<ExperimentOutput> {
    let nq = c.n_qubits;
    // one Hamiltonian per instance, evolved over the whole time grid
    let per_instance = try_run(exec, c.instances, |i| -> Result<Vec<Vec<Sample>>> {
        let rng = &mut task_rng(c.seed, i as u64);
        let h: Hamiltonian = match c.preset {
            Preset::GueTimeSweep => gue_hamiltonian(nq, rng)?,
            Preset::RandomPauliSweep => random_pauli_hamiltonian(nq, c.k_terms, rng)?,
            _ => ising_hamiltonian(nq, c.delta, c.disorder, rng)?,
        };
        let prop = h.propagator()?;
        let zero = StateVector::zero_state(nq)?;
        c.grid
            .iter()
            .map(|&t| {
                let mut s = unitary_samples(&prop.unitary(t), nq, &c.orders)?;
                if c.preset == Preset::RandomPauliSweep && c.trotter_steps > 0 {
                    let exact_state = prop.evolve(t, &zero)?;
                    let trotter = trotter_evolve(&h, t, c.trotter_steps, &zero)?;
                    s.push(exact("trotter_infidelity".into(), 1.0 - exact_state.fidelity(&trotter)?));
                }
                Ok(s)
            })
            .collect()
    })?;
    let mut rows = Vec::new();
    let mut column = Vec::with_capacity(c.instances);
    for (k, &t) in c.grid.iter().enumerate() {
        column.clear();
        column.extend(per_instance.iter().map(|inst| inst[k].clone()));
        rows.extend(aggregate(t, &column)?);
    }
    Ok(tabulate(rows))
}

fn monotone_sweep(c: &ExperimentConfig) -> Result<ExperimentOutput> {
    let nq = c.n_qubits;
    let set = StabilizerSet::enumerate(nq)?;
    let mut rows = Vec::new();
    for &s in &c.grid {
        let psi = StateVector::phase_product(nq, core::f64::consts::FRAC_PI_4 * s)?;
        let mut out = Vec::new();
        for &n in &c.orders {
            out.push(exact(format!("M_{n}"), renyi_from_moment(exact_a_n(&psi, n)?, n)?));
        }
        out.push(exact("D_min".into(), set.d_min(&psi)?));
        let bm = bell_magic_exact(&psi)?;
        out.push(exact("B".into(), bm.b));
        out.push(exact("B_a".into(), bm.b_additive));
        rows.extend(aggregate(s, &[out])?);
    }
    Ok(tabulate(rows))
}

fn noise_study<E: Executor>(c: &ExperimentConfig, exec: &E) -> Result<ExperimentOutput> {
    let mut rows = Vec::new();
    let mut study = Vec::new();
    for &kind in &c.noise_models {
        for &n in &c.orders {
            let mut spec = StudySpec {
                kind,
                n_qubits: c.n_qubits,
                depth: c.depth,
                n_t: c.n_t,
                n,
                instances: c.instances,
                p_grid: c.grid.clone(),
            };
            if c.target_impurity {
                let reference = spec.circuit(c.seed, 0)?;
                spec.p_grid = c
                    .grid
                    .iter()
                    .map(|&target| calibrate_p(&reference, kind, target, 1.0))
                    .collect::<Result<_>>()?;
            }
            let records = relative_error_study(&spec, c.seed, exec)?;
            for chunk in records.chunks(c.instances) {
                rows.extend(study_rows(kind.name(), n, chunk));
            }
            study.extend(records);
        }
    }
    Ok(ExperimentOutput {
        rows,
        checks: Vec::new(),
        study,
    })
}

fn study_rows(kind: &str, n: u32, chunk: &[StudyRecord]) -> Vec<RecordRow> {
    let p = chunk[0].p;
    let row = |name: &str, values: &[f64]| {
        let (mean, std) = mean_std(values);
        RecordRow {
            sweep: p,
            quantity: format!("{kind}:M_{n}:{name}"),
            mean,
            std,
            instances: values.len(),
            kind: RecordKind::Exact,
        }
    };
    let impurity: Vec<f64> = chunk.iter().map(|r| r.impurity).collect();
    let unmtg: Vec<f64> = chunk.iter().map(|r| r.err_unmtg).collect();
    let mtg: Vec<f64> = chunk.iter().filter_map(|r| r.err_mtg).collect();
    let mut ratio: Vec<f64> = chunk.iter().filter_map(|r| r.ratio).collect();
    let mut out = vec![
        row("impurity", &impurity),
        row("err_unmtg", &unmtg),
        row("err_mtg", &mtg),
        row("ratio", &ratio),
    ];
    ratio.sort_by(f64::total_cmp);
    let median = match ratio.len() {
        0 => f64::NAN,
        l if l % 2 == 1 => ratio[l / 2],
        l => 0.5 * (ratio[l / 2 - 1] + ratio[l / 2]),
    };
    out.push(RecordRow {
        mean: median,
        std: 0.0,
        ..row("ratio_median", &ratio)
    });
    out
}
