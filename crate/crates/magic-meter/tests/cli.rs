use std::path::Path;
use std::process::{Command, Output};

fn mm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magic-meter"))
        .args(args)
        .env_remove("MAGIC_METER_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(args: &[&str]) -> i32 {
    mm(args).status.code().unwrap()
}

fn ok(args: &[&str]) -> String {
    let o = mm(args);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    stdout(&o)
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(s: &str) -> serde_json::Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn exact_examples() {
    assert_eq!(ok(&["exact", "--state", "t", "--measure", "A_n", "--n", "2"]), "0.75\n");
    assert_eq!(ok(&["exact", "--state", "zero", "--qubits", "4", "--measure", "M_n", "--n", "3"]), "0\n");

    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "c.txt", "QUBITS 2\nH 1\nCNOT 1 2\nS 2\n");
    assert_eq!(ok(&["exact", "--circuit", &c, "--measure", "fstab"]), "1\n");

    let v = json(&ok(&["exact", "--state", "t", "--measure", "T_n", "--n", "2", "--format", "json"]));
    assert!((v["value"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert_eq!(v["measure"], "T_n");

    // cos(pi/8)|0> + sin(pi/8)|1> = RY(pi/4)|0>
    let c = write(dir.path(), "ry.txt", "QUBITS 1\nRY 1 0.7853981633974483\n");
    let i2: f64 = ok(&["exact", "--circuit", &c, "--measure", "I_q", "--q", "2"]).trim().parse().unwrap();
    assert!((i2 - 0.75).abs() < 1e-11);
    let f: f64 = ok(&["exact", "--circuit", &c, "--measure", "flatness"]).trim().parse().unwrap();
    let (c8, s8) = (std::f64::consts::FRAC_PI_8.cos(), std::f64::consts::FRAC_PI_8.sin());
    assert!((f - (c8.powi(6) + s8.powi(6) - 0.75 * 0.75)).abs() < 1e-11);

    let b = ok(&["exact", "--state", "zero", "--qubits", "2", "--measure", "bell_magic"]);
    assert!(b.starts_with("0\n"));
    assert_eq!(ok(&["exact", "--state", "zero", "--qubits", "2", "--measure", "otoc", "--sigma", "XI", "--sigma-prime", "XI"]), "1\n");
    // H maps X to Z
    assert_eq!(ok(&["exact", "--state", "plus", "--qubits", "2", "--measure", "otoc", "--sigma", "ZI", "--sigma-prime", "XI"]), "1\n");
}

#[test]
fn estimate_examples() {
    let args = ["estimate", "--state", "t", "--algorithm", "alg1", "--n", "3", "--shots", "10000", "--seed", "1"];
    let first = ok(&args);
    let r = json(&first);
    let (v, se) = (r["value"].as_f64().unwrap(), r["std_error"].as_f64().unwrap());
    assert!((v - 0.625).abs() <= 3.0 * se, "{v} ± {se}");
    assert_eq!(r["shots"], 10000);
    assert_eq!(ok(&args), first, "same seed, same bytes");
    let other = ok(&["estimate", "--state", "t", "--algorithm", "alg1", "--n", "3", "--shots", "10000", "--seed", "2"]);
    assert_ne!(other, first);

    let r = json(&ok(&["estimate", "--state", "zero", "--qubits", "3", "--algorithm", "alg2", "--n", "2", "--shots", "100"]));
    assert_eq!(r["value"].as_f64().unwrap(), 1.0);

    let r = json(&ok(&["estimate", "--state", "plus", "--qubits", "2", "--algorithm", "purity", "--shots", "50"]));
    assert_eq!(r["value"].as_f64().unwrap(), 1.0);
    for alg in ["bellmagic", "participation"] {
        json(&ok(&["estimate", "--state", "haar", "--qubits", "2", "--algorithm", alg, "--shots", "200"]));
    }
}

#[test]
fn seed_from_environment() {
    let args = ["estimate", "--state", "haar", "--qubits", "2", "--algorithm", "alg1", "--shots", "300"];
    let with_env = |seed: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_magic-meter"))
            .args(args)
            .env("MAGIC_METER_SEED", seed)
            .output()
            .unwrap();
        stdout(&o)
    };
    let mut flagged = args.to_vec();
    flagged.extend(["--seed", "7"]);
    assert_eq!(with_env("7"), ok(&flagged));
    assert_ne!(with_env("8"), ok(&flagged));
}

#[test]
fn gradient_bounds_budget() {
    let dir = tempfile::tempdir().unwrap();
    let c = write(dir.path(), "g.txt", "QUBITS 1\nH 1\nRZ 1 0.39269908169872414\n");
    let r = json(&ok(&["gradient", "--circuit", &c, "--n", "3", "--shots", "2000", "--seed", "3"]));
    let exact = r["exact"].as_f64().unwrap();
    let est = r["estimate"]["value"].as_f64().unwrap();
    let se = r["estimate"]["std_error"].as_f64().unwrap();
    assert!((est - exact).abs() <= 4.0 * se, "{exact} vs {est} ± {se}");

    let out = ok(&["bounds", "--state", "t", "--n", "2"]);
    let get = |k: &str| -> f64 {
        let line = out.lines().find(|l| l.starts_with(&format!("{k} "))).unwrap();
        line.split_whitespace().nth(1).unwrap().parse().unwrap()
    };
    assert!((get("fstab_lower") - 0.5).abs() < 1e-4);
    assert!((get("fstab") - 0.85355).abs() < 1e-4);
    assert!((get("fstab_upper") - 0.93060).abs() < 1e-4);

    assert_eq!(ok(&["budget", "--epsilon", "0.05", "--delta", "0.05"]), "2952\n");
    let cost = json(&ok(&["budget", "--renyi", "0.5", "--n", "3", "--epsilon", "0.01", "--format", "json"]));
    assert!(cost["shots"].as_u64().unwrap() > 0);
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "QUBITS 2\nH 1\nWIBBLE 2\n");
    let o = mm(&["exact", "--circuit", &bad, "--measure", "A_n"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("bad.txt:3"));

    assert_eq!(code(&["exact", "--state", "t", "--measure", "A_n", "--n", "two"]), 2);
    assert_eq!(code(&["exact", "--measure", "A_n"]), 2);
    assert_eq!(code(&["exact", "--state", "t", "--circuit", &bad, "--measure", "A_n"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
    assert_eq!(code(&["exact", "--state", "zero", "--measure", "otoc", "--sigma", "Q"]), 2);

    let cfg = write(dir.path(), "x.cfg", "preset = ising_sweep\nshots = lots\n");
    assert_eq!(code(&["experiment", &cfg]), 2);
    let cfg = write(dir.path(), "y.json", "{\"preset\": ");
    assert_eq!(code(&["experiment", &cfg]), 2);
}

#[test]
fn semantic_errors_exit_3() {
    assert_eq!(code(&["estimate", "--state", "t", "--algorithm", "alg1", "--n", "2"]), 3);
    assert_eq!(code(&["estimate", "--state", "t", "--algorithm", "alg1", "--n", "2", "--allow-even", "--shots", "10"]), 0);
    assert_eq!(code(&["exact", "--state", "zero", "--qubits", "5", "--measure", "fstab"]), 3);
    assert_eq!(code(&["exact", "--state", "haar", "--measure", "otoc"]), 3);
    assert_eq!(code(&["experiment", "--preset", "fig9"]), 3);
    assert_eq!(code(&["budget", "--epsilon", "2"]), 3);

    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "np.cfg", "n_qubits = 3\ninstances = 2\n");
    let o = mm(&["experiment", &cfg]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("preset"));
    let cfg = write(dir.path(), "big.cfg", "preset = scrambling_depth_sweep\nn_qubits = 9\n");
    assert_eq!(code(&["experiment", &cfg]), 3);
}

#[test]
fn io_errors_exit_4() {
    assert_eq!(code(&["exact", "--circuit", "/no/such/circuit.txt", "--measure", "A_n"]), 4);
    assert_eq!(code(&["experiment", "/no/such/config.cfg"]), 4);
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "m.cfg", "preset = monotone_relation_sweep\ngrid = 0, 0.5\n");
    assert_eq!(code(&["experiment", &cfg, "--output", "/no/such/dir/out.csv"]), 4);
}

#[test]
fn experiment_csv_and_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("doped.csv");
    let out_s = out.to_str().unwrap();
    let cfg = write(dir.path(), "d.cfg", &format!("preset = doped_clifford_sweep\noutput = {out_s}\n"));
    let summary = ok(&["experiment", &cfg]);
    assert!(summary.contains("rows written"), "{summary}");
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("sweep,quantity,mean,std,instances,kind"));
    let rows: Vec<&str> = lines.collect();
    let sweeps: std::collections::BTreeSet<&str> = rows.iter().map(|l| l.split(',').next().unwrap()).collect();
    assert_eq!(sweeps.len(), 7);
    assert_eq!(rows.len() % 7, 0);

    let j = dir.path().join("doped.json");
    ok(&["experiment", &cfg, "--format", "json", "--output", j.to_str().unwrap()]);
    let doc = json(&std::fs::read_to_string(&j).unwrap());
    assert_eq!(doc["config"]["preset"], "doped_clifford_sweep");
    assert_eq!(doc["rows"].as_array().unwrap().len(), rows.len());

    // without an output path the table goes to stdout
    let cfg = write(dir.path(), "m.cfg", "preset = monotone_relation_sweep\ngrid = 0, 0.5\n");
    let table = ok(&["experiment", &cfg]);
    assert!(table.starts_with("sweep,quantity,mean,std,instances,kind\n"));
}

#[test]
fn noise_study_writes_records() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("noise.csv");
    let cfg = write(
        dir.path(),
        "n.cfg",
        "preset = noise_mitigation_study\nn_qubits = 3\ndepth = 4\ninstances = 3\ngrid = 0.05\nnoise_models = dephasing\n",
    );
    ok(&["experiment", &cfg, "--output", out.to_str().unwrap()]);
    let rec = std::fs::read_to_string(dir.path().join("noise.records.csv")).unwrap();
    assert!(rec.starts_with("model,p,N,n,instance,impurity,err_unmtg,err_mtg,ratio\n"));
    assert_eq!(rec.lines().count(), 1 + 3);
}

#[test]
fn experiments_are_byte_identical_across_threads() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "s.cfg",
        "preset = scrambling_depth_sweep\nn_qubits = 3\ngrid = 1..=6\ninstances = 8\nn_t = 2\nseed = 11\n",
    );
    let one = ok(&["experiment", &cfg, "--threads", "1"]);
    assert_eq!(ok(&["experiment", &cfg, "--threads", "1"]), one);
    assert_eq!(ok(&["experiment", &cfg, "--threads", "4"]), one);
    assert_ne!(ok(&["experiment", &cfg, "--seed", "12"]), one);
}
