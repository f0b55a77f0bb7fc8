//! CSV and JSON writers for experiment results.

use std::io::Write;
use std::str::FromStr;

use magic_meter_core::experiments::{ExperimentConfig, ExperimentOutput, RecordRow};
use magic_meter_core::noise::StudyRecord;
use serde::Serialize;

use crate::error::Result;

pub const CSV_HEADER: [&str; 6] = ["sweep", "quantity", "mean", "std", "instances", "kind"];

const STUDY_HEADER: [&str; 9] = [
    "model", "p", "N", "n", "instance", "impurity", "err_unmtg", "err_mtg", "ratio",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format '{other}'; expected csv or json")),
        }
    }
}

/// Twelve significant digits, shortest form, `-0` folded to `0`; exponent
/// notation outside `[1e-6, 1e15)`.
pub fn sig12(x: f64) -> String {
    if !x.is_finite() {
        return format!("{x}");
    }
    let rounded: f64 = format!("{x:.11e}").parse().expect("formatted float parses");
    if rounded == 0.0 {
        "0".to_string()
    } else if !(1e-6..1e15).contains(&rounded.abs()) {
        format!("{rounded:e}")
    } else {
        format!("{rounded}")
    }
}

fn opt12(x: Option<f64>) -> String {
    x.map(sig12).unwrap_or_default()
}

pub fn write_rows_csv<W: Write>(rows: &[RecordRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER)?;
    for r in rows {
        w.write_record([
            sig12(r.sweep),
            r.quantity.clone(),
            sig12(r.mean),
            sig12(r.std),
            r.instances.to_string(),
            r.kind.name().to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_study_csv<W: Write>(records: &[StudyRecord], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(STUDY_HEADER)?;
    for r in records {
        w.write_record([
            r.kind.name().to_string(),
            sig12(r.p),
            r.n_qubits.to_string(),
            r.n.to_string(),
            r.instance.to_string(),
            sig12(r.impurity),
            sig12(r.err_unmtg),
            opt12(r.err_mtg),
            opt12(r.ratio),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

#[derive(Serialize)]
struct Bundle<'a> {
    config: &'a ExperimentConfig,
    #[serde(flatten)]
    output: &'a ExperimentOutput,
}

/// One JSON document: the full config followed by rows, spot checks and
/// per-instance study records.
pub fn write_bundle_json<W: Write>(config: &ExperimentConfig, output: &ExperimentOutput, mut out: W) -> Result<()> {
    serde_json::to_writer_pretty(&mut out, &Bundle { config, output })?;
    writeln!(out).map_err(serde_json::Error::io)?;
    Ok(())
}
