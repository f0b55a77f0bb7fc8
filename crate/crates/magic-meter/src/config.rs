//! Experiment configuration files.
//!
//! Flat `key = value` lines, `#` comments. Only `preset` is required; every
//! other field falls back to the preset's defaults.
//!
//! ```text
//! preset = doped_clifford_sweep
//! n_qubits = 3
//! grid = 0..=6            # or 0..7, a list "0, 1, 2", lin 0 1 21, log -1 3 8
//! orders = 3
//! noise_models = local_depolarizing, dephasing
//! output = doped.csv
//! ```
//!
//! A JSON object with the same keys is accepted too; arrays become lists.

use std::path::{Path, PathBuf};

use magic_meter_core::experiments::{log_grid, ExperimentConfig, Preset};
use magic_meter_core::noise::NoiseKind;

use crate::error::{Error, Result};
use crate::output::Format;

/// An experiment plus where and how to write it.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub experiment: ExperimentConfig,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
}

pub const KEYS: &[&str] = &[
    "preset",
    "n_qubits",
    "grid",
    "instances",
    "shots",
    "orders",
    "seed",
    "depth",
    "n_t",
    "k_terms",
    "delta",
    "disorder",
    "noise_models",
    "target_impurity",
    "haar_samples",
    "trotter_steps",
    "output",
    "format",
];

struct Entry {
    line: usize,
    key: String,
    value: String,
}

pub fn read_config(path: &Path) -> Result<RunConfig> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let label = path.display().to_string();
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || src.trim_start().starts_with('{');
    if is_json {
        parse_config_json(&src, &label)
    } else {
        parse_config_text(&src, &label)
    }
}

pub fn parse_config_text(src: &str, label: &str) -> Result<RunConfig> {
    let mut entries = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let (key, value) = content.split_once('=').ok_or_else(|| Error::Parse {
            path: label.to_string(),
            line: i + 1,
            message: format!("expected 'key = value', found '{content}'"),
        })?;
        entries.push(Entry {
            line: i + 1,
            key: key.trim().to_ascii_lowercase(),
            value: value.trim().to_string(),
        });
    }
    build(entries, label)
}

pub fn parse_config_json(src: &str, label: &str) -> Result<RunConfig> {
    let parse_err = |line: usize, message: String| Error::Parse {
        path: label.to_string(),
        line,
        message,
    };
    let value: serde_json::Value =
        serde_json::from_str(src).map_err(|e| parse_err(e.line(), e.to_string()))?;
    let object = value
        .as_object()
        .ok_or_else(|| parse_err(1, "expected a JSON object".into()))?;
    let mut entries = Vec::new();
    for (key, v) in object {
        let text = match v {
            serde_json::Value::Array(items) => items
                .iter()
                .map(scalar_text)
                .collect::<Option<Vec<_>>>()
                .map(|parts| parts.join(", ")),
            other => scalar_text(other),
        }
        .ok_or_else(|| parse_err(0, format!("{key}: nested values are not supported")))?;
        entries.push(Entry {
            line: 0,
            key: key.to_ascii_lowercase(),
            value: text,
        });
    }
    build(entries, label)
}

fn scalar_text(v: &serde_json::Value) -> Option<String> {
    match v {
        serde_json::Value::String(s) => Some(s.clone()),
        serde_json::Value::Number(n) => Some(n.to_string()),
        serde_json::Value::Bool(b) => Some(b.to_string()),
        _ => None,
    }
}

fn build(entries: Vec<Entry>, label: &str) -> Result<RunConfig> {
    for (i, e) in entries.iter().enumerate() {
        if !KEYS.contains(&e.key.as_str()) {
            return Err(Error::Parse {
                path: label.to_string(),
                line: e.line,
                message: format!("unknown key '{}'", e.key),
            });
        }
        if entries[..i].iter().any(|prev| prev.key == e.key) {
            return Err(Error::Parse {
                path: label.to_string(),
                line: e.line,
                message: format!("key '{}' given twice", e.key),
            });
        }
    }
    let preset_entry = entries
        .iter()
        .find(|e| e.key == "preset")
        .ok_or_else(|| Error::Semantic(format!("{label}: missing required field 'preset'")))?;
    let preset = parse_preset(&preset_entry.value)?;

    let mut run = RunConfig {
        experiment: ExperimentConfig::defaults(preset),
        output: None,
        format: None,
    };
    for e in entries.iter().filter(|e| e.key != "preset") {
        set(&mut run, &e.key, &e.value).map_err(|message| Error::Parse {
            path: label.to_string(),
            line: e.line,
            message: format!("{}: {message}", e.key),
        })?;
    }
    Ok(run)
}

/// Unknown preset names are a semantic error (exit 3), not a parse error.
pub fn parse_preset(name: &str) -> Result<Preset> {
    Preset::from_name(name.trim()).ok_or_else(|| {
        let known: Vec<_> = Preset::ALL.iter().map(|p| p.name()).collect();
        Error::Semantic(format!("unknown preset '{}'; expected one of {}", name.trim(), known.join(", ")))
    })
}

fn set(run: &mut RunConfig, key: &str, value: &str) -> std::result::Result<(), String> {
    let c = &mut run.experiment;
    match key {
        "n_qubits" => c.n_qubits = scalar(value)?,
        "grid" => c.grid = parse_grid(value)?,
        "instances" => c.instances = scalar(value)?,
        "shots" => c.shots = scalar(value)?,
        "orders" => c.orders = list(value)?,
        "seed" => c.seed = scalar(value)?,
        "depth" => c.depth = scalar(value)?,
        "n_t" => c.n_t = scalar(value)?,
        "k_terms" => c.k_terms = scalar(value)?,
        "delta" => c.delta = scalar(value)?,
        "disorder" => c.disorder = scalar(value)?,
        "noise_models" => {
            c.noise_models = split_list(value)
                .map(|name| NoiseKind::from_name(name).ok_or_else(|| format!("unknown noise model '{name}'")))
                .collect::<std::result::Result<_, _>>()?
        }
        "target_impurity" => c.target_impurity = parse_bool(value)?,
        "haar_samples" => c.haar_samples = scalar(value)?,
        "trotter_steps" => c.trotter_steps = scalar(value)?,
        "output" => run.output = Some(PathBuf::from(value)),
        "format" => run.format = Some(value.parse()?),
        other => return Err(format!("unknown key '{other}'")),
    }
    Ok(())
}

fn scalar<T: std::str::FromStr>(value: &str) -> std::result::Result<T, String> {
    value.trim().parse().map_err(|_| format!("bad value '{value}'"))
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn list<T: std::str::FromStr>(value: &str) -> std::result::Result<Vec<T>, String> {
    split_list(value).map(scalar).collect()
}

fn parse_bool(value: &str) -> std::result::Result<bool, String> {
    match value.trim().to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("bad boolean '{other}'")),
    }
}

/// Grid syntax: a comma list, an integer range `a..b` / `a..=b`,
/// `lin lo hi count` or `log lo_exp hi_exp per_decade`.
pub fn parse_grid(value: &str) -> std::result::Result<Vec<f64>, String> {
    let value = value.trim();
    let words: Vec<&str> = value.split_whitespace().collect();
    match words.first().copied() {
        Some("log") => {
            let [_, lo, hi, per] = words[..] else {
                return Err("expected 'log <lo_exp> <hi_exp> <per_decade>'".into());
            };
            let (lo, hi, per): (i32, i32, usize) = (scalar(lo)?, scalar(hi)?, scalar(per)?);
            if hi < lo || per == 0 {
                return Err("log grid needs lo_exp <= hi_exp and per_decade >= 1".into());
            }
            return Ok(log_grid(lo, hi, per));
        }
        Some("lin") => {
            let [_, lo, hi, count] = words[..] else {
                return Err("expected 'lin <lo> <hi> <count>'".into());
            };
            let (lo, hi, count): (f64, f64, usize) = (scalar(lo)?, scalar(hi)?, scalar(count)?);
            return match count {
                0 => Err("lin grid needs at least one point".into()),
                1 => Ok(vec![lo]),
                _ => Ok((0..count)
                    .map(|k| lo + (hi - lo) * k as f64 / (count - 1) as f64)
                    .collect()),
            };
        }
        _ => {}
    }
    if let Some((a, b)) = value.split_once("..") {
        let (b, inclusive) = match b.strip_prefix('=') {
            Some(b) => (b, true),
            None => (b, false),
        };
        let (a, b): (i64, i64) = (scalar(a)?, scalar(b)?);
        let end = if inclusive { b + 1 } else { b };
        if end <= a {
            return Err(format!("empty range '{value}'"));
        }
        return Ok((a..end).map(|v| v as f64).collect());
    }
    list(value)
}
