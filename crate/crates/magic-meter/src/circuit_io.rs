//! Circuit files.
//!
//! The text format has one directive per line; `#` starts a comment and
//! gate names are case-insensitive. Qubits are numbered from 1.
//!
//! ```text
//! QUBITS 3
//! H 1
//! CNOT 1 2
//! T 3
//! CLIFFORD 2 17      # index into the 24 single-qubit Cliffords
//! RZ 2 0.785398      # exp(-i theta Z/2); RX and RY likewise
//! ROT XZI 0.3        # exp(-i theta P/2) for a Pauli string P
//! ```
//!
//! The JSON form is `{"n_qubits": 3, "gates": [{"gate": "h", "qubit": 1}, ...]}`.

use std::fmt::Write as _;
use std::path::Path;

use magic_meter_core::{Circuit, Gate, Pauli, PauliString};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Serialize, Deserialize)]
struct CircuitFile {
    n_qubits: usize,
    gates: Vec<Gate>,
}

struct LineError(String);

fn number<T: std::str::FromStr>(tok: Option<&str>, what: &str) -> std::result::Result<T, LineError> {
    let tok = tok.ok_or_else(|| LineError(format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| LineError(format!("bad {what} '{tok}'")))
}

fn parse_gate(n_qubits: usize, words: &[&str]) -> std::result::Result<Gate, LineError> {
    let mut args = words[1..].iter().copied();
    let name = words[0].to_ascii_uppercase();
    let gate = match name.as_str() {
        "H" => Gate::H { qubit: number(args.next(), "qubit")? },
        "S" => Gate::S { qubit: number(args.next(), "qubit")? },
        "T" => Gate::T { qubit: number(args.next(), "qubit")? },
        "CNOT" | "CX" => Gate::Cnot {
            control: number(args.next(), "control qubit")?,
            target: number(args.next(), "target qubit")?,
        },
        "CLIFFORD" => Gate::Clifford1 {
            qubit: number(args.next(), "qubit")?,
            index: number(args.next(), "Clifford index")?,
        },
        "RX" | "RY" | "RZ" => {
            let qubit: usize = number(args.next(), "qubit")?;
            let angle = number(args.next(), "angle")?;
            let p = match name.as_bytes()[1] {
                b'X' => Pauli::X,
                b'Y' => Pauli::Y,
                _ => Pauli::Z,
            };
            let axis = PauliString::single(n_qubits, qubit, p).map_err(|e| LineError(e.to_string()))?;
            Gate::Rotation { axis, angle }
        }
        "ROT" => {
            let tok = args.next().ok_or_else(|| LineError("missing Pauli axis".into()))?;
            let axis: PauliString = tok.parse().map_err(|e: magic_meter_core::Error| LineError(e.to_string()))?;
            Gate::Rotation {
                axis,
                angle: number(args.next(), "angle")?,
            }
        }
        other => return Err(LineError(format!("unknown gate '{other}'"))),
    };
    if let Some(extra) = args.next() {
        return Err(LineError(format!("unexpected token '{extra}'")));
    }
    Ok(gate)
}

/// Parses the text format; `label` names the source in error messages.
pub fn parse_circuit_text(src: &str, label: &str) -> Result<Circuit> {
    let err = |line: usize, message: String| Error::Parse {
        path: label.to_string(),
        line,
        message,
    };
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in src.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("");
        let words: Vec<&str> = content.split_whitespace().collect();
        if words.is_empty() {
            continue;
        }
        if words[0].eq_ignore_ascii_case("QUBITS") {
            if circuit.is_some() {
                return Err(err(line, "QUBITS given twice".into()));
            }
            if words.len() != 2 {
                return Err(err(line, "expected 'QUBITS <count>'".into()));
            }
            let n: usize = words[1]
                .parse()
                .map_err(|_| err(line, format!("bad qubit count '{}'", words[1])))?;
            circuit = Some(Circuit::new(n).map_err(|e| err(line, e.to_string()))?);
            continue;
        }
        let c = circuit
            .as_mut()
            .ok_or_else(|| err(line, "a QUBITS line must come before the first gate".into()))?;
        let gate = parse_gate(c.n_qubits(), &words).map_err(|LineError(m)| err(line, m))?;
        c.push(gate).map_err(|e| err(line, e.to_string()))?;
    }
    circuit.ok_or_else(|| err(0, "no QUBITS line".into()))
}

pub fn parse_circuit_json(src: &str, label: &str) -> Result<Circuit> {
    let file: CircuitFile = serde_json::from_str(src).map_err(|e| Error::Parse {
        path: label.to_string(),
        line: e.line(),
        message: e.to_string(),
    })?;
    Circuit::from_gates(file.n_qubits, file.gates).map_err(|e| Error::Parse {
        path: label.to_string(),
        line: 0,
        message: e.to_string(),
    })
}

/// Reads a circuit file, choosing JSON for a `.json` extension or a leading `{`.
pub fn read_circuit(path: &Path) -> Result<Circuit> {
    let src = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let label = path.display().to_string();
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"))
        || src.trim_start().starts_with('{');
    if is_json {
        parse_circuit_json(&src, &label)
    } else {
        parse_circuit_text(&src, &label)
    }
}

/// Writes the text format; parsing the result gives back the same circuit.
pub fn format_circuit_text(circuit: &Circuit) -> String {
    let mut out = format!("QUBITS {}\n", circuit.n_qubits());
    for g in circuit.gates() {
        match g {
            Gate::H { qubit } => writeln!(out, "H {qubit}"),
            Gate::S { qubit } => writeln!(out, "S {qubit}"),
            Gate::T { qubit } => writeln!(out, "T {qubit}"),
            Gate::Cnot { control, target } => writeln!(out, "CNOT {control} {target}"),
            Gate::Clifford1 { qubit, index } => writeln!(out, "CLIFFORD {qubit} {index}"),
            Gate::Rotation { axis, angle } if axis.weight() == 1 => {
                let q = (1..=axis.n_qubits())
                    .find(|&q| axis.get(q) != Pauli::I)
                    .expect("weight-one axis");
                writeln!(out, "R{} {q} {angle:?}", axis.get(q).symbol())
            }
            Gate::Rotation { axis, angle } => writeln!(out, "ROT {axis} {angle:?}"),
        }
        .expect("writing to a String");
    }
    out
}

pub fn format_circuit_json(circuit: &Circuit) -> Result<String> {
    let file = CircuitFile {
        n_qubits: circuit.n_qubits(),
        gates: circuit.gates().to_vec(),
    };
    Ok(serde_json::to_string_pretty(&file)?)
}
