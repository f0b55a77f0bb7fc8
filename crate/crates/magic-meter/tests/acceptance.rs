//! Acceptance suite: twelve end-to-end criteria at their stated tolerances.
//!
//! Runs without the libtest harness and prints one PASS/FAIL line per
//! criterion. Pass criterion numbers as arguments to run a subset, e.g.
//! `cargo test --test acceptance -- 4 7`.

use std::time::{Duration, Instant};

use magic_meter::output::{write_bundle_json, write_rows_csv};
use magic_meter::parallel::Rayon;
use magic_meter_core::circuit::{random_clifford_circuit, random_rotation_circuit};
use magic_meter_core::estimators::{
    algorithm1, algorithm1_mixed, algorithm2, bell_magic_estimator, flatness_estimator, gradient_a_n,
    participation_estimator, purity_estimator, shift_rule_gradient, EstimatorResult,
};
use magic_meter_core::exec::task_rng;
use magic_meter_core::experiments::{run_preset, ExperimentConfig, ExperimentOutput, Preset};
use magic_meter_core::noise::{
    apply_channel, estimate_p_from_purity, mitigate_a_n, NoiseKind, NoiseModel, StudyRecord,
};
use magic_meter_core::oracles::{
    bell_magic_exact, bounds_report, clifford_avg_flatness, clifford_avg_otoc, exact_a_n, flatness,
    gamma_operator, otoc_4n, renyi_se, tsallis_se, StabilizerSet,
};
use magic_meter_core::{Circuit, DensityMatrix, Gate, PauliString, StateVector};
use rand::Rng;

struct Outcome {
    passed: bool,
    detail: String,
}

impl Outcome {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

/// A check with a wall-clock limit.
struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn mean_se(values: &[f64]) -> (f64, f64) {
    let l = values.len() as f64;
    let mean = values.iter().sum::<f64>() / l;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (l - 1.0);
    (mean, (var / l).sqrt())
}

/// `|a - b| <= k * se`, or exact agreement to 1e-9 when `se` is 0.
fn within(a: f64, b: f64, se: f64, k: f64) -> bool {
    if se == 0.0 {
        (a - b).abs() < 1e-9
    } else {
        (a - b).abs() <= k * se
    }
}

fn haar(n_qubits: usize, seed: u64, index: u64) -> StateVector {
    StateVector::haar_random(n_qubits, &mut task_rng(seed, index)).unwrap()
}

fn stabilizer_sets(max: usize) -> Vec<StabilizerSet> {
    (1..=max).map(|n| StabilizerSet::enumerate(n).unwrap()).collect()
}

fn executor() -> Rayon {
    Rayon::new(None).unwrap()
}

fn c1_faithfulness() -> Outcome {
    let mut worst = 0.0f64;
    let mut stabilizers = 0;
    for set in stabilizer_sets(2) {
        for psi in set.states() {
            stabilizers += 1;
            for n in [2, 3] {
                worst = worst.max(renyi_se(psi, n).unwrap().abs());
                worst = worst.max(tsallis_se(psi, n).unwrap().abs());
            }
        }
    }
    for i in 0..200u64 {
        let nq = 1 + (i % 6) as usize;
        let psi = random_clifford_circuit(nq, 10 * nq, &mut task_rng(101, i))
            .unwrap()
            .state()
            .unwrap();
        for n in [2, 3] {
            worst = worst.max(renyi_se(&psi, n).unwrap().abs());
            worst = worst.max(tsallis_se(&psi, n).unwrap().abs());
        }
    }
    let min_haar = (0..200u64)
        .map(|i| renyi_se(&haar(2 + (i % 5) as usize, 102, i), 2).unwrap())
        .fold(f64::INFINITY, f64::min);
    Outcome::new(
        worst <= 1e-10 && min_haar > 1e-3,
        format!("{stabilizers} stabilizer + 200 Clifford states, max |M_n|,|T_n| = {worst:.1e}; min Haar M_2 = {min_haar:.4}"),
    )
}

fn c2_algorithm1() -> Outcome {
    let config = ExperimentConfig::defaults(Preset::DopedCliffordSweep);
    let out = run_preset(&config, &executor()).unwrap();
    let mut bad = Vec::new();
    for &nt in &config.grid {
        let exact = out.row(nt, "T_3").unwrap().mean;
        let est = out.row(nt, "T_3:estimated").unwrap().mean;
        let se = out.row(nt, "T_3:estimated:shot_se").unwrap().mean;
        if !within(est, exact, se, 3.0) {
            bad.push(format!("N_T={nt}: {est:.4} vs {exact:.4} ± {se:.4}"));
        }
    }
    let t = |nt: f64| out.row(nt, "T_3").unwrap();
    let rises = t(0.0).mean.abs() < 1e-10 && t(1.0).mean > 0.0 && t(6.0).mean > t(1.0).mean;
    let haar = out.row(6.0, "T_3:haar").unwrap().mean;
    let near_haar = (t(6.0).mean - haar).abs() <= 2.0 * t(6.0).std;
    Outcome::new(
        bad.is_empty() && rises && near_haar,
        format!(
            "7 points within 3σ{}; T_3: {:.1e} -> {:.4} -> {:.4} (Haar {:.4}, ensemble std {:.4})",
            if bad.is_empty() { String::new() } else { format!(" except {bad:?}") },
            t(0.0).mean,
            t(1.0).mean,
            t(6.0).mean,
            haar,
            t(6.0).std
        ),
    )
}

fn c3_algorithm2() -> Outcome {
    let mut misses = Vec::new();
    for i in 0..20u64 {
        let psi = haar(1 + (i % 3) as usize, 301, i);
        for n in [2, 3, 4] {
            let exact = exact_a_n(&psi, n).unwrap();
            let est = algorithm2(&psi, n, 10_000, &mut task_rng(302, i * 8 + n as u64)).unwrap();
            if !within(est.value, exact, est.std_error, 3.0) {
                misses.push((i, n));
            }
        }
    }
    let psi = haar(2, 303, 0);
    let exact = exact_a_n(&psi, 3).unwrap();
    let covered = (0..200u64)
        .filter(|&r| {
            let est = algorithm2(&psi, 3, 10_000, &mut task_rng(304, r)).unwrap();
            (est.value - exact).abs() <= 2.0 * est.std_error
        })
        .count();
    let coverage = covered as f64 / 200.0;
    Outcome::new(
        misses.is_empty() && coverage >= 0.9,
        format!("60 cases, outside 3σ: {misses:?}; ±2σ coverage {coverage:.3}"),
    )
}

fn c4_gamma_spectrum() -> Outcome {
    let g1 = gamma_operator(1).unwrap();
    let mut swap_err = 0.0f64;
    for i in 0..4 {
        for j in 0..4 {
            let target = if j == ((i & 1) << 1 | i >> 1) { 1.0 } else { 0.0 };
            let e = g1[(i, j)];
            swap_err = swap_err.max((e.re - target).abs().max(e.im.abs()));
        }
    }
    let spectrum_err = |n: u32, allowed: &[f64]| -> f64 {
        gamma_operator(n)
            .unwrap()
            .symmetric_eigenvalues()
            .iter()
            .map(|&l| allowed.iter().map(|a| (l - a).abs()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    let e2 = spectrum_err(2, &[0.0, 2.0]);
    let e3 = spectrum_err(3, &[-1.0, 1.0]);
    Outcome::new(
        swap_err <= 1e-12 && e2 <= 1e-9 && e3 <= 1e-9,
        format!("|Γ1 - SWAP| = {swap_err:.1e}; Γ2 off {{0,2}} by {e2:.1e}; Γ3 off {{±1}} by {e3:.1e}"),
    )
}

fn c5_bound_sandwich() -> Outcome {
    let sets = stabilizer_sets(3);
    let mut violations = 0;
    for i in 0..1000u64 {
        let nq = 1 + (i % 3) as usize;
        let psi = haar(nq, 501, i);
        let f = sets[nq - 1].fidelity(&psi).unwrap();
        for n in [2, 3] {
            let b = bounds_report(&psi, n).unwrap();
            if f < b.fstab_lower - 1e-9 || f > b.fstab_upper + 1e-9 {
                violations += 1;
            }
        }
    }
    let t = StateVector::t_state(1).unwrap();
    let b = bounds_report(&t, 2).unwrap();
    let f = sets[0].fidelity(&t).unwrap();
    let triple = [b.fstab_lower, f, b.fstab_upper];
    let triple_ok = triple
        .iter()
        .zip([0.5, 0.85355, 0.93060])
        .all(|(v, e)| (v - e).abs() <= 1e-4);
    Outcome::new(
        violations == 0 && triple_ok,
        format!("{violations} violations over 2000 checks; |T> triple ({:.5}, {:.5}, {:.5})", triple[0], triple[1], triple[2]),
    )
}

/// Gates of `first`, then `u`, then `last`: the operator `last · u · first`.
fn sandwich(first: &Circuit, u: &Circuit, last: &Circuit) -> Circuit {
    let gates: Vec<Gate> = first
        .gates()
        .iter()
        .chain(u.gates())
        .chain(last.gates())
        .cloned()
        .collect();
    Circuit::from_gates(u.n_qubits(), gates).unwrap()
}

fn c6_clifford_averages() -> Outcome {
    let nq = 2;
    let depth = 10 * nq;
    let u = random_rotation_circuit(nq, 3, &mut task_rng(601, 0)).unwrap();
    let mut parts = Vec::new();
    let mut ok = true;
    for n in [2u32, 3] {
        let rng = &mut task_rng(602, n as u64);
        let samples: Vec<f64> = (0..200)
            .map(|_| {
                let c_in = random_clifford_circuit(nq, depth, rng).unwrap();
                let c_out = random_clifford_circuit(nq, depth, rng).unwrap();
                let s = PauliString::from_index(nq, rng.random_range(1..16)).unwrap();
                let sp = PauliString::from_index(nq, rng.random_range(1..16)).unwrap();
                otoc_4n(&sandwich(&c_in, &u, &c_out), &s, &sp, n).unwrap()
            })
            .collect();
        let (m, se) = mean_se(&samples);
        let rhs = clifford_avg_otoc(&u, n).unwrap();
        ok &= within(m, rhs, se, 3.0);
        parts.push(format!("otoc_{}: {m:.5} ± {se:.5} vs {rhs:.5}", 4 * n));
    }
    let psi = StateVector::t_state(1)
        .unwrap()
        .tensor(&StateVector::zero_state(1).unwrap())
        .unwrap();
    let rng = &mut task_rng(603, 0);
    let samples: Vec<f64> = (0..500)
        .map(|_| flatness(&random_clifford_circuit(nq, depth, rng).unwrap().apply(&psi).unwrap()))
        .collect();
    let (m, se) = mean_se(&samples);
    let rhs = clifford_avg_flatness(&psi).unwrap();
    ok &= within(m, rhs, se, 3.0) && (rhs - 1.0 / 60.0).abs() < 1e-12;
    parts.push(format!("flatness: {m:.5} ± {se:.5} vs {rhs:.5}"));
    Outcome::new(ok, parts.join("; "))
}

fn c7_mitigation() -> Outcome {
    let nq = 3;
    let all: Vec<usize> = (1..=nq).collect();
    let mut worst = 0.0f64;
    let mut misses = 0;
    let mut cases = 0;
    for i in 0..20u64 {
        let psi = haar(nq, 701, i);
        let rho0 = DensityMatrix::from_pure(&psi).unwrap();
        for (j, p) in [0.05, 0.1, 0.2].into_iter().enumerate() {
            let model = NoiseModel::new(NoiseKind::GlobalDepolarizing, p).unwrap();
            let rho = apply_channel(&rho0, &model, &all).unwrap();
            let p_hat = estimate_p_from_purity(rho.purity(), nq).unwrap();
            for n in [2, 3] {
                let pure = exact_a_n(&psi, n).unwrap();
                let noisy = exact_a_n(&rho, n).unwrap();
                worst = worst.max((mitigate_a_n(noisy, p, n, nq).unwrap() - pure).abs());
                worst = worst.max((mitigate_a_n(noisy, p_hat, n, nq).unwrap() - pure).abs());
            }
            let est = algorithm1_mixed(&rho, 3, 10_000, false, &mut task_rng(702, i * 4 + j as u64)).unwrap();
            let mitigated = mitigate_a_n(est.value, p, 3, nq).unwrap();
            // the map is affine, so the error scales by its slope
            let se = mitigate_a_n(est.value + est.std_error, p, 3, nq).unwrap() - mitigated;
            cases += 1;
            if !within(mitigated, exact_a_n(&psi, 3).unwrap(), se, 3.0) {
                misses += 1;
            }
        }
    }
    Outcome::new(
        worst <= 1e-10 && misses == 0,
        format!("analytic max error {worst:.1e}; sampled {misses}/{cases} outside 3σ"),
    )
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        (v[k / 2 - 1] + v[k / 2]) / 2.0
    }
}

fn c8_noise_study() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for n_t in [0, 6] {
        let mut config = ExperimentConfig::defaults(Preset::NoiseMitigationStudy);
        config.n_t = n_t;
        let out = run_preset(&config, &executor()).unwrap();
        let impurities: Vec<f64> = out.study.iter().map(|r| r.impurity).collect();
        let (lo, hi) = impurities.iter().fold((f64::INFINITY, 0.0f64), |(a, b), &x| (a.min(x), b.max(x)));
        ok &= lo <= 0.0105 && hi >= 0.285;
        for kind in [NoiseKind::LocalDepolarizing, NoiseKind::Dephasing, NoiseKind::AmplitudeDamping] {
            let records: Vec<&StudyRecord> = out.study.iter().filter(|r| r.kind == kind).collect();
            let mut ps: Vec<f64> = records.iter().map(|r| r.p).collect();
            ps.dedup();
            let mut worst = 0.0f64;
            for p in ps {
                let ratios: Vec<f64> = records.iter().filter(|r| r.p == p).filter_map(|r| r.ratio).collect();
                let m = if ratios.len() == records.iter().filter(|r| r.p == p).count() {
                    median(ratios)
                } else {
                    f64::INFINITY
                };
                worst = worst.max(m);
            }
            ok &= worst < 1.0;
            parts.push(format!("N_T={n_t} {kind}: {worst:.2e}"));
        }
        parts.push(format!("N_T={n_t} impurity {lo:.4}..{hi:.4}"));
    }
    Outcome::new(ok, format!("largest median ratio per model: {}", parts.join(", ")))
}

fn c9_gradient() -> Outcome {
    let h = 1e-4;
    let mut worst = 0.0f64;
    for i in 0..10u64 {
        let nq = 1 + (i % 3) as usize;
        let c = random_rotation_circuit(nq, 2, &mut task_rng(901, i)).unwrap();
        let theta = c.parameters();
        for k in 0..theta.len() {
            for n in [2, 3] {
                let a = |shift: f64| {
                    let mut t = theta.clone();
                    t[k] += shift;
                    exact_a_n(&c.with_parameters(&t).unwrap().state().unwrap(), n).unwrap()
                };
                let fd = (a(h) - a(-h)) / (2.0 * h);
                worst = worst.max((fd - shift_rule_gradient(&c, &theta, k, n).unwrap()).abs());
            }
        }
    }
    let pi8 = std::f64::consts::FRAC_PI_8;
    let phase = Circuit::from_gates(
        1,
        vec![
            Gate::H { qubit: 1 },
            Gate::Rotation {
                axis: "Z".parse().unwrap(),
                angle: pi8,
            },
        ],
    )
    .unwrap();
    let est = gradient_a_n(&phase, &[pi8], 0, 2, 20_000, true, &mut task_rng(902, 0)).unwrap();
    let sampled_ok = within(est.value, -0.5, est.std_error, 3.0);
    Outcome::new(
        worst < 1e-6 && sampled_ok,
        format!(
            "max |shift rule - finite difference| = {worst:.1e}; sampled {:.4} ± {:.4} vs -0.5",
            est.value, est.std_error
        ),
    )
}

fn ensemble_error(out: &ExperimentOutput, sweep: f64, quantity: &str) -> (f64, f64) {
    let r = out.row(sweep, quantity).unwrap();
    (r.mean, r.std / (r.instances as f64).sqrt())
}

fn c10_scrambling() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let exec = executor();
    for n_t in [0, 4, 16] {
        let mut config = ExperimentConfig::defaults(Preset::ScramblingDepthSweep);
        config.n_qubits = 4;
        config.grid = vec![1.0, 2.0, 3.0, 4.0, 6.0, 8.0, 10.0, 15.0, 20.0, 30.0, 40.0];
        config.instances = 1000;
        config.n_t = n_t;
        let out = run_preset(&config, &exec).unwrap();
        let series: Vec<(f64, f64)> = config.grid.iter().map(|&d| ensemble_error(&out, d, "otoc_8:x1x1")).collect();
        let comb = |a: (f64, f64), b: (f64, f64)| (a.1 * a.1 + b.1 * b.1).sqrt();
        let steps_ok = series.windows(2).all(|w| w[1].0 <= w[0].0 + 3.0 * comb(w[0], w[1]));
        let (first, last) = (series[0], series[series.len() - 1]);
        let falls = first.0 - last.0 > 3.0 * comb(first, last);
        let avg = ensemble_error(&out, 40.0, "otoc_8:clifford_avg");
        let converged = (last.0 - avg.0).abs() <= 3.0 * comb(last, avg);
        ok &= steps_ok && falls && converged;
        let mut part = format!(
            "N_T={n_t}: otoc {:.4} -> {:.5} vs avg {:.5}{}",
            first.0,
            last.0,
            avg.0,
            if steps_ok { "" } else { " (not monotone)" }
        );
        if n_t == 0 {
            let at10 = ensemble_error(&out, 10.0, "otoc_8:x1x1");
            let avg10 = ensemble_error(&out, 10.0, "otoc_8:clifford_avg");
            let by10 = (at10.0 - avg10.0).abs() <= 3.0 * comb(at10, avg10);
            ok &= by10;
            part.push_str(&format!(", d=10 {:.5} ± {:.5}", at10.0, at10.1));
        }
        parts.push(part);
    }

    let config = ExperimentConfig::defaults(Preset::GueTimeSweep);
    let out = run_preset(&config, &exec).unwrap();
    let flat: Vec<(f64, (f64, f64))> = config.grid.iter().map(|&t| (t, ensemble_error(&out, t, "flatness"))).collect();
    // the dip follows the early-time peak
    let peak = (0..flat.len()).max_by(|&a, &b| flat[a].1 .0.total_cmp(&flat[b].1 .0)).unwrap();
    let (t_dip, dip) = flat[peak..]
        .iter()
        .copied()
        .min_by(|a, b| a.1 .0.total_cmp(&b.1 .0))
        .unwrap();
    let t_late = config.grid[config.grid.len() - 1];
    let late = ensemble_error(&out, t_late, "flatness");
    let eq9 = ensemble_error(&out, t_late, "flatness:clifford_avg");
    let dip_ok = (dip.0 - eq9.0).abs() <= 3.0 * (dip.1.powi(2) + eq9.1.powi(2)).sqrt();
    let ramp_ok = late.0 - dip.0 > 3.0 * (late.1.powi(2) + dip.1.powi(2)).sqrt();
    ok &= dip_ok && ramp_ok && config.instances >= 2000;
    parts.push(format!(
        "GUE: dip {:.5} at t={t_dip:.3} vs Clifford avg {:.5}, late {:.5}",
        dip.0, eq9.0, late.0
    ));
    Outcome::new(ok, parts.join("; "))
}

fn c11_bell_magic() -> Outcome {
    let mut worst = 0.0f64;
    for set in stabilizer_sets(2) {
        for psi in set.states() {
            worst = worst.max(bell_magic_exact(psi).unwrap().b.abs());
        }
    }
    let mut states = vec![StateVector::t_state(1).unwrap()];
    states.extend((0..10u64).map(|i| haar(1 + (i % 3) as usize, 1101, i)));
    let mut misses = 0;
    for (i, psi) in states.iter().enumerate() {
        let exact = bell_magic_exact(psi).unwrap().b;
        let est = bell_magic_estimator(psi, 10_000, &mut task_rng(1102, i as u64)).unwrap();
        if !within(est.value, exact, est.std_error, 3.0) {
            misses += 1;
        }
    }
    let sets = stabilizer_sets(3);
    let mut violations = 0;
    let mut tightest = f64::INFINITY;
    for i in 0..1000u64 {
        let nq = 1 + (i % 3) as usize;
        let psi = haar(nq, 1103, i);
        let d_min = sets[nq - 1].d_min(&psi).unwrap();
        let m2 = renyi_se(&psi, 2).unwrap();
        tightest = tightest.min(d_min - m2 / 4.0);
        if d_min < m2 / 4.0 - 1e-6 {
            violations += 1;
        }
    }
    Outcome::new(
        worst < 1e-10 && misses == 0 && violations == 0,
        format!(
            "stabilizer max |B| = {worst:.1e}; MC {misses}/11 outside 3σ; D_min < M_2/4 in {violations}/1000 (min gap {tightest:.4})"
        ),
    )
}

fn small_config(preset: Preset) -> ExperimentConfig {
    let mut c = ExperimentConfig::defaults(preset);
    c.instances = 4;
    c.haar_samples = 100;
    match preset {
        Preset::DopedCliffordSweep => c.grid = vec![0.0, 2.0, 4.0],
        Preset::ScramblingDepthSweep | Preset::RandomCircuitDepth => {
            c.n_qubits = 3;
            c.grid = vec![1.0, 5.0];
            c.n_t = 2;
        }
        Preset::GueTimeSweep | Preset::RandomPauliSweep | Preset::IsingSweep => {
            c.n_qubits = 2;
            c.k_terms = 6;
            c.grid = vec![0.1, 3.0];
            c.trotter_steps = 4;
        }
        Preset::MonotoneRelationSweep => c.grid = vec![0.0, 0.3],
        Preset::NoiseMitigationStudy => {
            c.n_qubits = 3;
            c.depth = 4;
            c.grid = vec![0.05];
        }
    }
    c
}

fn preset_bytes(config: &ExperimentConfig, threads: usize) -> Vec<u8> {
    let out = run_preset(config, &Rayon::new(Some(threads)).unwrap()).unwrap();
    let mut buf = Vec::new();
    write_rows_csv(&out.rows, &mut buf).unwrap();
    write_bundle_json(config, &out, &mut buf).unwrap();
    buf
}

fn c12_determinism() -> Outcome {
    let psi = haar(2, 1201, 0);
    let rho = DensityMatrix::from_pure(&psi).unwrap();
    let circuit = random_rotation_circuit(2, 2, &mut task_rng(1202, 0)).unwrap();
    let theta = circuit.parameters();
    let estimators: [(&str, fn(&StateVector, &DensityMatrix, &Circuit, &[f64], u64) -> EstimatorResult); 7] = [
        ("alg1", |p, _, _, _, s| algorithm1(p, 3, 500, false, &mut task_rng(s, 0)).unwrap()),
        ("alg2", |p, _, _, _, s| algorithm2(p, 2, 500, &mut task_rng(s, 0)).unwrap()),
        ("bell_magic", |p, _, _, _, s| bell_magic_estimator(p, 500, &mut task_rng(s, 0)).unwrap()),
        ("participation", |p, _, _, _, s| participation_estimator(p, 2, 500, &mut task_rng(s, 0)).unwrap()),
        ("flatness", |p, _, _, _, s| flatness_estimator(p, 500, &mut task_rng(s, 0)).unwrap()),
        ("purity", |_, r, _, _, s| purity_estimator(r, 500, &mut task_rng(s, 0)).unwrap()),
        ("gradient", |_, _, c, t, s| gradient_a_n(c, t, 0, 3, 500, false, &mut task_rng(s, 0)).unwrap()),
    ];
    let mut differing = Vec::new();
    for (name, f) in estimators {
        let a = format!("{:?}", f(&psi, &rho, &circuit, &theta, 7));
        let b = format!("{:?}", f(&psi, &rho, &circuit, &theta, 7));
        if a != b {
            differing.push(name.to_string());
        }
    }
    for preset in Preset::ALL {
        let config = small_config(preset);
        let one = preset_bytes(&config, 4);
        if preset_bytes(&config, 4) != one {
            differing.push(format!("{preset} (repeat)"));
        }
        if preset_bytes(&config, 1) != one {
            differing.push(format!("{preset} (thread count)"));
        }
    }
    Outcome::new(
        differing.is_empty(),
        format!("7 estimators and {} presets; differing: {differing:?}", Preset::ALL.len()),
    )
}

fn main() {
    let criteria = [
        Criterion { id: 1, name: "faithfulness", limit: Some(Duration::from_secs(60)), run: c1_faithfulness },
        Criterion { id: 2, name: "algorithm 1 on doped Clifford states", limit: Some(Duration::from_secs(120)), run: c2_algorithm1 },
        Criterion { id: 3, name: "algorithm 2", limit: Some(Duration::from_secs(300)), run: c3_algorithm2 },
        Criterion { id: 4, name: "replica operator spectrum", limit: None, run: c4_gamma_spectrum },
        Criterion { id: 5, name: "stabilizer fidelity sandwich", limit: None, run: c5_bound_sandwich },
        Criterion { id: 6, name: "Clifford-average identities", limit: Some(Duration::from_secs(300)), run: c6_clifford_averages },
        Criterion { id: 7, name: "depolarizing mitigation", limit: None, run: c7_mitigation },
        Criterion { id: 8, name: "local noise study", limit: Some(Duration::from_secs(600)), run: c8_noise_study },
        Criterion { id: 9, name: "gradients", limit: None, run: c9_gradient },
        Criterion { id: 10, name: "scrambling dynamics", limit: Some(Duration::from_secs(900)), run: c10_scrambling },
        Criterion { id: 11, name: "Bell magic", limit: None, run: c11_bell_magic },
        Criterion { id: 12, name: "determinism", limit: None, run: c12_determinism },
    ];
    let only: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for c in criteria.iter().filter(|c| only.is_empty() || only.contains(&c.id)) {
        let start = Instant::now();
        let outcome = (c.run)();
        let elapsed = start.elapsed();
        let in_time = c.limit.is_none_or(|l| elapsed <= l);
        let passed = outcome.passed && in_time;
        if !passed {
            failed += 1;
        }
        let limit = c.limit.map(|l| format!(" / {} s", l.as_secs())).unwrap_or_default();
        println!(
            "criterion {:>2} {} [{:.1} s{limit}] {}: {}",
            c.id,
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            c.name,
            outcome.detail
        );
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
