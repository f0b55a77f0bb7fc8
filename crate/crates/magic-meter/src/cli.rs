//! The `magic-meter` command line.
//!
//! Exit codes: 0 success, 2 malformed input, 3 refused request (guards,
//! unknown presets, incompatible options), 4 I/O failure.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use magic_meter_core::estimators::{self, EstimatorResult};
use magic_meter_core::exec::task_rng;
use magic_meter_core::experiments::{run_preset, ExperimentConfig};
use magic_meter_core::oracles;
use magic_meter_core::{Circuit, Gate, Pauli, PauliString, StateVector};
use serde_json::json;

use crate::circuit_io::read_circuit;
use crate::config::{parse_preset, read_config, RunConfig};
use crate::error::{Error, Result};
use crate::output::{sig12, write_bundle_json, write_rows_csv, write_study_csv, Format};
use crate::parallel::Rayon;

/// Stabilizer entropies and magic diagnostics of small quantum states.
#[derive(Debug, Parser)]
#[command(name = "magic-meter", version)]
pub struct Cli {
    /// Master seed; overrides the seed of an experiment config.
    #[arg(long, global = true, env = "MAGIC_METER_SEED")]
    pub seed: Option<u64>,

    /// Output file for `experiment`.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Output format; `exact`, `bounds` and `budget` print plain text unless json.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,

    /// Worker threads for `experiment` (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate a quantity exactly.
    Exact(ExactArgs),
    /// Monte-Carlo estimate from simulated measurements; prints JSON.
    Estimate(EstimateArgs),
    /// Exact and sampled parameter-shift gradient of A_n; prints JSON.
    Gradient(GradientArgs),
    /// Bounds on stabilizer fidelity, extent and robustness from A_n.
    Bounds(BoundsArgs),
    /// Run an experiment preset.
    Experiment(ExperimentArgs),
    /// Repetitions needed for a target precision.
    Budget(BudgetArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum NamedState {
    /// |0>^N
    Zero,
    /// |+>^N
    Plus,
    /// |T>^N
    T,
    /// Haar-random state drawn from the seed
    Haar,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct Source {
    #[arg(long, value_enum)]
    pub state: Option<NamedState>,
    /// Circuit file (text or JSON) applied to |0>^N.
    #[arg(long)]
    pub circuit: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    #[value(name = "A_n", alias = "a_n")]
    AN,
    #[value(name = "M_n", alias = "m_n")]
    MN,
    #[value(name = "T_n", alias = "t_n")]
    TN,
    Flatness,
    #[value(name = "I_q", alias = "i_q")]
    IQ,
    Otoc,
    #[value(name = "bell_magic")]
    BellMagic,
    Fstab,
}

#[derive(Debug, Args)]
pub struct ExactArgs {
    #[command(flatten)]
    pub source: Source,
    /// Qubit count for named states.
    #[arg(long, default_value_t = 1)]
    pub qubits: usize,
    #[arg(long, value_enum)]
    pub measure: Measure,
    /// Order n; M_n and T_n at n = 1 give the von Neumann entropy.
    #[arg(long, default_value_t = 2)]
    pub n: u32,
    /// Participation order q.
    #[arg(long, default_value_t = 2.0)]
    pub q: f64,
    /// First OTOC Pauli string (default X on qubit 1).
    #[arg(long)]
    pub sigma: Option<String>,
    /// Second OTOC Pauli string (default X on qubit 1).
    #[arg(long)]
    pub sigma_prime: Option<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Algorithm {
    /// Two-copy Bell sampling with the parity rule.
    Alg1,
    /// Bell sampling of psi* ⊗ psi plus single-copy Pauli measurements.
    Alg2,
    Bellmagic,
    /// Coincidences of computational-basis samples (order --q).
    Participation,
    /// tr(rho^2) from two-copy Bell sampling.
    Purity,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 1)]
    pub qubits: usize,
    #[arg(long, value_enum)]
    pub algorithm: Algorithm,
    #[arg(long, default_value_t = 3)]
    pub n: u32,
    #[arg(long, default_value_t = 2)]
    pub q: u32,
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    /// Run the two-copy estimator at even n anyway.
    #[arg(long)]
    pub allow_even: bool,
}

#[derive(Debug, Args)]
pub struct GradientArgs {
    #[arg(long)]
    pub circuit: PathBuf,
    /// Rotation parameter index, counted from 0 in gate order.
    #[arg(long, default_value_t = 0)]
    pub param: usize,
    #[arg(long, default_value_t = 3)]
    pub n: u32,
    #[arg(long, default_value_t = 1000)]
    pub shots: u64,
    /// Rotation angles replacing the ones in the file, comma separated.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub theta: Option<Vec<f64>>,
    #[arg(long)]
    pub allow_even: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    #[command(flatten)]
    pub source: Source,
    #[arg(long, default_value_t = 1)]
    pub qubits: usize,
    #[arg(long, default_value_t = 2)]
    pub n: u32,
}

#[derive(Debug, Args)]
pub struct ExperimentArgs {
    /// Config file (key = value lines or JSON).
    #[arg(required_unless_present = "preset", conflicts_with = "preset")]
    pub config: Option<PathBuf>,
    /// Run a preset with its default settings.
    #[arg(long)]
    pub preset: Option<String>,
}

#[derive(Debug, Args)]
pub struct BudgetArgs {
    /// Target precision on A_n, or on M_n with --renyi.
    #[arg(long)]
    pub epsilon: f64,
    /// Failure probability.
    #[arg(long, default_value_t = 0.05)]
    pub delta: f64,
    /// Width of the single-shot value range.
    #[arg(long, default_value_t = 2.0)]
    pub range: f64,
    /// Expected M_n; switches to the cost of estimating M_n to precision epsilon.
    #[arg(long)]
    pub renyi: Option<f64>,
    #[arg(long, default_value_t = 3)]
    pub n: u32,
}

/// Parses the process arguments, runs, and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    match run(&cli, &mut out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = out.flush();
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let seed = cli.seed.unwrap_or(0);
    let json = cli.format == Some(Format::Json);
    match &cli.command {
        Command::Exact(a) => exact(a, seed, json, out),
        Command::Estimate(a) => estimate(a, seed, out),
        Command::Gradient(a) => gradient(a, seed, out),
        Command::Bounds(a) => bounds(a, seed, json, out),
        Command::Experiment(a) => experiment(a, cli, out),
        Command::Budget(a) => budget(a, json, out),
    }
}

fn stdout_err(e: std::io::Error) -> Error {
    Error::io("<stdout>", e)
}

fn print_json(out: &mut dyn Write, value: &serde_json::Value) -> Result<()> {
    writeln!(out, "{}", serde_json::to_string(value)?).map_err(stdout_err)
}

/// Circuit preparing a named state from |0>^N.
fn named_circuit(state: NamedState, n_qubits: usize) -> Result<Circuit> {
    let mut c = Circuit::new(n_qubits)?;
    for q in 1..=n_qubits {
        match state {
            NamedState::Zero => {}
            NamedState::Plus => c.push(Gate::H { qubit: q })?,
            NamedState::T => {
                c.push(Gate::H { qubit: q })?;
                c.push(Gate::T { qubit: q })?;
            }
            NamedState::Haar => {
                return Err(Error::Semantic("a Haar-random state has no circuit; use --circuit".into()))
            }
        }
    }
    Ok(c)
}

fn source_circuit(source: &Source, n_qubits: usize) -> Result<Circuit> {
    match (&source.circuit, source.state) {
        (Some(path), _) => read_circuit(path),
        (None, Some(s)) => named_circuit(s, n_qubits),
        (None, None) => Err(Error::Syntax("give --state or --circuit".into())),
    }
}

/// The Haar state is drawn from stream 0 of the seed.
fn source_state(source: &Source, n_qubits: usize, seed: u64) -> Result<StateVector> {
    let state = match (&source.circuit, source.state) {
        (Some(path), _) => read_circuit(path)?.state()?,
        (None, Some(NamedState::Zero)) => StateVector::zero_state(n_qubits)?,
        (None, Some(NamedState::Plus)) => StateVector::plus_state(n_qubits)?,
        (None, Some(NamedState::T)) => StateVector::t_state(n_qubits)?,
        (None, Some(NamedState::Haar)) => StateVector::haar_random(n_qubits, &mut task_rng(seed, 0))?,
        (None, None) => return Err(Error::Syntax("give --state or --circuit".into())),
    };
    Ok(state)
}

fn pauli_arg(text: Option<&str>, n_qubits: usize) -> Result<PauliString> {
    match text {
        Some(t) => Ok(t.parse()?),
        None => Ok(PauliString::single(n_qubits, 1, Pauli::X)?),
    }
}

fn exact(a: &ExactArgs, seed: u64, json: bool, out: &mut dyn Write) -> Result<()> {
    let n = a.n;
    let (name, value, extra) = match a.measure {
        Measure::Otoc => {
            let u = source_circuit(&a.source, a.qubits)?;
            let nq = u.n_qubits();
            let s = pauli_arg(a.sigma.as_deref(), nq)?;
            let sp = pauli_arg(a.sigma_prime.as_deref(), nq)?;
            if n == 0 {
                return Err(Error::Semantic("the OTOC order n must be at least 1".into()));
            }
            ("otoc", oracles::otoc_4n(&u, &s, &sp, n)?, None)
        }
        measure => {
            let psi = source_state(&a.source, a.qubits, seed)?;
            match measure {
                Measure::AN => {
                    if n == 0 {
                        return Err(Error::Semantic("A_n needs n >= 1".into()));
                    }
                    ("A_n", oracles::exact_a_n(&psi, n)?, None)
                }
                Measure::MN | Measure::TN if n == 1 => {
                    let name = if measure == Measure::MN { "M_n" } else { "T_n" };
                    (name, oracles::von_neumann_se(&psi)?, None)
                }
                Measure::MN | Measure::TN if n == 0 => {
                    return Err(Error::Semantic("entropies need n >= 1".into()))
                }
                Measure::MN => ("M_n", oracles::renyi_se(&psi, n)?, None),
                Measure::TN => ("T_n", oracles::tsallis_se(&psi, n)?, None),
                Measure::Flatness => ("flatness", oracles::flatness(&psi), None),
                Measure::IQ => ("I_q", oracles::participation_entropy(&psi, a.q)?, None),
                Measure::BellMagic => {
                    let b = oracles::bell_magic_exact(&psi)?;
                    ("bell_magic", b.b, Some(("b_additive", b.b_additive)))
                }
                Measure::Fstab => ("fstab", oracles::stabilizer_fidelity(&psi)?, None),
                Measure::Otoc => unreachable!("handled above"),
            }
        }
    };
    if json {
        let mut doc = json!({ "measure": name, "value": value });
        match a.measure {
            Measure::IQ => doc["q"] = json!(a.q),
            Measure::Flatness | Measure::Fstab | Measure::BellMagic => {}
            _ => doc["n"] = json!(n),
        }
        if let Some((k, v)) = extra {
            doc[k] = json!(v);
        }
        print_json(out, &doc)
    } else {
        writeln!(out, "{}", sig12(value)).map_err(stdout_err)?;
        if let Some((k, v)) = extra {
            writeln!(out, "{k} {}", sig12(v)).map_err(stdout_err)?;
        }
        Ok(())
    }
}

/// Estimators draw from stream 1 of the seed.
fn estimate(a: &EstimateArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let psi = source_state(&a.source, a.qubits, seed)?;
    let rng = &mut task_rng(seed, 1);
    let result: EstimatorResult = match a.algorithm {
        Algorithm::Alg1 => {
            if a.n == 0 {
                return Err(Error::Semantic("alg1 needs n >= 1".into()));
            }
            estimators::algorithm1(&psi, a.n, a.shots, a.allow_even, rng)?
        }
        Algorithm::Alg2 => estimators::algorithm2(&psi, a.n, a.shots, rng)?,
        Algorithm::Bellmagic => estimators::bell_magic_estimator(&psi, a.shots, rng)?,
        Algorithm::Participation => estimators::participation_estimator(&psi, a.q, a.shots, rng)?,
        // the n = 1 parity rule on two copies of a pure state
        Algorithm::Purity => estimators::algorithm1(&psi, 1, a.shots, false, rng)?,
    };
    print_json(out, &serde_json::to_value(result)?)
}

fn gradient(a: &GradientArgs, seed: u64, out: &mut dyn Write) -> Result<()> {
    let circuit = read_circuit(&a.circuit)?;
    let theta = a.theta.clone().unwrap_or_else(|| circuit.parameters());
    let exact = estimators::shift_rule_gradient(&circuit, &theta, a.param, a.n)?;
    let est = estimators::gradient_a_n(&circuit, &theta, a.param, a.n, a.shots, a.allow_even, &mut task_rng(seed, 1))?;
    print_json(
        out,
        &json!({ "param": a.param, "n": a.n, "theta": theta, "exact": exact, "estimate": est }),
    )
}

fn bounds(a: &BoundsArgs, seed: u64, json: bool, out: &mut dyn Write) -> Result<()> {
    let psi = source_state(&a.source, a.qubits, seed)?;
    let report = oracles::bounds_report(&psi, a.n)?;
    let fstab = if psi.n_qubits() <= oracles::MAX_ENUMERATION_QUBITS {
        Some(oracles::stabilizer_fidelity(&psi)?)
    } else {
        None
    };
    if json {
        let mut doc = serde_json::to_value(report)?;
        doc["fstab"] = json!(fstab);
        return print_json(out, &doc);
    }
    let mut lines = vec![
        ("n", report.n as f64),
        ("A_n", report.a_n),
        ("fstab_lower", report.fstab_lower),
        ("fstab_upper", report.fstab_upper),
        ("xi_lower", report.xi_lower),
        ("robustness_lower", report.robustness_lower),
        ("d_min_upper", report.d_min_upper),
    ];
    if let Some(f) = fstab {
        lines.insert(3, ("fstab", f));
    }
    for (k, v) in lines {
        writeln!(out, "{k} {}", sig12(v)).map_err(stdout_err)?;
    }
    if report.fstab_lower_vacuous {
        writeln!(out, "# fstab_lower is vacuous at this A_n").map_err(stdout_err)?;
    }
    Ok(())
}

fn budget(a: &BudgetArgs, json: bool, out: &mut dyn Write) -> Result<()> {
    match a.renyi {
        None => {
            let shots = estimators::hoeffding_budget(a.epsilon, a.delta, a.range)?;
            if json {
                print_json(out, &json!({ "shots": shots }))
            } else {
                writeln!(out, "{shots}").map_err(stdout_err)
            }
        }
        Some(m_n) => {
            let cost = estimators::renyi_sample_cost(m_n, a.n, a.epsilon, a.delta)?;
            if json {
                print_json(out, &serde_json::to_value(cost)?)
            } else {
                writeln!(out, "epsilon_A {}\nshots {}\ncopies {}", sig12(cost.epsilon), cost.shots, cost.copies)
                    .map_err(stdout_err)
            }
        }
    }
}

/// Study records go next to the main output, `out.csv` -> `out.records.csv`.
pub fn records_path(output: &Path) -> PathBuf {
    output.with_extension("records.csv")
}

fn experiment(a: &ExperimentArgs, cli: &Cli, out: &mut dyn Write) -> Result<()> {
    let mut run = match (&a.config, &a.preset) {
        (Some(path), _) => read_config(path)?,
        (None, Some(name)) => RunConfig {
            experiment: ExperimentConfig::defaults(parse_preset(name)?),
            output: None,
            format: None,
        },
        (None, None) => return Err(Error::Syntax("give a config file or --preset".into())),
    };
    if let Some(seed) = cli.seed {
        run.experiment.seed = seed;
    }
    if cli.output.is_some() {
        run.output.clone_from(&cli.output);
    }
    if cli.format.is_some() {
        run.format = cli.format;
    }
    let format = run.format.unwrap_or(Format::Csv);
    let config = &run.experiment;
    config.validate()?;

    let exec = Rayon::new(cli.threads)?;
    let result = run_preset(config, &exec)?;

    let Some(path) = &run.output else {
        return match format {
            Format::Csv => write_rows_csv(&result.rows, out),
            Format::Json => write_bundle_json(config, &result, out),
        };
    };
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    match format {
        Format::Csv => write_rows_csv(&result.rows, &mut w)?,
        Format::Json => write_bundle_json(config, &result, &mut w)?,
    }
    w.flush().map_err(|e| Error::io(path, e))?;

    let mut summary = format!("{}: {} rows written to {}", config.preset, result.rows.len(), path.display());
    if format == Format::Csv && !result.study.is_empty() {
        let rec = records_path(path);
        let file = File::create(&rec).map_err(|e| Error::io(&rec, e))?;
        let mut w = BufWriter::new(file);
        write_study_csv(&result.study, &mut w)?;
        w.flush().map_err(|e| Error::io(&rec, e))?;
        summary.push_str(&format!(", {} study records to {}", result.study.len(), rec.display()));
    }
    if !result.checks.is_empty() {
        let passed = result.checks.iter().filter(|c| c.passed).count();
        summary.push_str(&format!("; spot checks {passed}/{} passed", result.checks.len()));
    }
    writeln!(out, "{summary}").map_err(stdout_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Result<String> {
        let cli = Cli::try_parse_from(std::iter::once("magic-meter").chain(args.iter().copied()))
            .map_err(|e| Error::Syntax(e.to_string()))?;
        let mut buf = Vec::new();
        run(&cli, &mut buf)?;
        Ok(String::from_utf8(buf).unwrap())
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }

    #[test]
    fn exact_values() {
        assert_eq!(run_args(&["exact", "--state", "t", "--measure", "A_n", "--n", "2"]).unwrap(), "0.75\n");
        assert_eq!(
            run_args(&["exact", "--state", "zero", "--qubits", "4", "--measure", "M_n", "--n", "3"]).unwrap(),
            "0\n"
        );
        let s = run_args(&["exact", "--state", "t", "--measure", "M_n", "--n", "2"]).unwrap();
        assert_eq!(s.trim(), sig12((4.0f64 / 3.0).ln()));
        let otoc = run_args(&["exact", "--state", "zero", "--qubits", "2", "--measure", "otoc", "--sigma", "XI", "--sigma-prime", "ZI"]).unwrap();
        assert_eq!(otoc, "0\n");
    }

    #[test]
    fn named_circuits_match_named_states() {
        for s in [NamedState::Zero, NamedState::Plus, NamedState::T] {
            let c = named_circuit(s, 2).unwrap().state().unwrap();
            let src = Source { state: Some(s), circuit: None };
            let v = source_state(&src, 2, 0).unwrap();
            assert!(c.distance_up_to_phase(&v).unwrap() < 1e-12, "{s:?}");
        }
        assert!(named_circuit(NamedState::Haar, 1).is_err());
    }

    #[test]
    fn records_path_replaces_extension() {
        assert_eq!(records_path(Path::new("a/out.csv")), PathBuf::from("a/out.records.csv"));
    }
}
