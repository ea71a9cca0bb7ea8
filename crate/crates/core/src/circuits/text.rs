//! Line-oriented circuit text format.
//!
//! ```text
//! qubits 3
//! H 0
//! CX 0 1
//! RZ(0.785398163) 2     # comments run to end of line
//! MCX 0 1 ; 2
//! MCP(1.50000000) 0 1 ; 2
//! PERM mod_m=15 0 1 2
//! ```

use std::fmt::Write as _;
use std::sync::Arc;

use super::{Circuit, Gate};
use crate::arithmetic::PermRegistry;
use crate::error::{Error, Result};

/// Parses circuit text, resolving `PERM` names with the built-in registry.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    parse_circuit_with(text, &PermRegistry::default())
}

pub fn parse_circuit_with(text: &str, registry: &PermRegistry) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: line_no, msg };
        match circuit.as_mut() {
            None => {
                let mut tok = line.split_whitespace();
                let width = match (tok.next(), tok.next(), tok.next()) {
                    (Some("qubits"), Some(n), None) => {
                        n.parse::<usize>().map_err(|_| err(format!("invalid qubit count `{n}`")))?
                    }
                    _ => return Err(err("expected `qubits <N>` header".into())),
                };
                circuit = Some(Circuit::new(width));
            }
            Some(c) => {
                let gate = parse_gate(line, registry).map_err(err)?;
                c.push(gate).map_err(|e| err(e.to_string()))?;
            }
        }
    }
    circuit.ok_or_else(|| Error::Parse { line: text.lines().count().max(1), msg: "missing `qubits <N>` header".into() })
}

fn parse_gate(line: &str, registry: &PermRegistry) -> std::result::Result<Gate, String> {
    let (head, rest) = match line.find(char::is_whitespace) {
        Some(i) => (&line[..i], line[i..].trim()),
        None => (line, ""),
    };
    let (name, angle) = match head.find('(') {
        Some(open) => {
            let close = head
                .rfind(')')
                .filter(|&c| c == head.len() - 1 && c > open)
                .ok_or_else(|| format!("malformed angle in `{head}`"))?;
            let v = head[open + 1..close]
                .trim()
                .parse::<f64>()
                .map_err(|_| format!("invalid angle `{}`", &head[open + 1..close]))?;
            if !v.is_finite() {
                return Err(format!("non-finite angle in `{head}`"));
            }
            (&head[..open], Some(v))
        }
        None => (head, None),
    };

    let needs_angle = matches!(name, "RZ" | "P" | "MCP");
    if needs_angle != angle.is_some() {
        return Err(if needs_angle { format!("{name} requires an angle") } else { format!("{name} takes no angle") });
    }
    let theta = angle.unwrap_or(0.0);

    if name == "PERM" {
        let mut tok = rest.split_whitespace();
        let perm_name = tok.next().ok_or("PERM requires a permutation name")?;
        let qubits = tok.map(parse_index).collect::<std::result::Result<Vec<_>, _>>()?;
        let perm = registry.resolve(perm_name, qubits.len()).map_err(|e| e.to_string())?;
        return Ok(Gate::Perm { perm: Arc::clone(&perm), qubits });
    }

    if matches!(name, "MCX" | "MCP") {
        let (ctrl, tgt) = rest.split_once(';').ok_or_else(|| format!("{name} requires `controls ; target`"))?;
        let controls = indices(ctrl)?;
        let target = exactly(indices(tgt)?, 1, name)?[0];
        return Ok(if name == "MCX" { Gate::Mcx { controls, target } } else { Gate::Mcp { theta, controls, target } });
    }

    let q = indices(rest)?;
    Ok(match name {
        "X" => Gate::X(exactly(q, 1, name)?[0]),
        "H" => Gate::H(exactly(q, 1, name)?[0]),
        "Z" => Gate::Z(exactly(q, 1, name)?[0]),
        "RZ" => Gate::Rz { theta, target: exactly(q, 1, name)?[0] },
        "P" => Gate::P { theta, target: exactly(q, 1, name)?[0] },
        "CX" => {
            let q = exactly(q, 2, name)?;
            Gate::Cx { control: q[0], target: q[1] }
        }
        "CCX" => {
            let q = exactly(q, 3, name)?;
            Gate::Ccx { controls: [q[0], q[1]], target: q[2] }
        }
        other => return Err(format!("unknown gate `{other}`")),
    })
}

fn parse_index(tok: &str) -> std::result::Result<usize, String> {
    tok.parse::<usize>().map_err(|_| format!("invalid qubit index `{tok}`"))
}

fn indices(s: &str) -> std::result::Result<Vec<usize>, String> {
    s.split_whitespace().map(parse_index).collect()
}

fn exactly(v: Vec<usize>, n: usize, name: &str) -> std::result::Result<Vec<usize>, String> {
    if v.len() == n {
        Ok(v)
    } else {
        Err(format!("{name} expects {n} qubit(s), got {}", v.len()))
    }
}

/// Canonical text: header line, then one gate per line.
pub fn emit_circuit(circuit: &Circuit) -> String {
    let mut out = format!("qubits {}\n", circuit.width());
    for g in circuit.gates() {
        let join = |qs: &[usize]| qs.iter().map(|q| q.to_string()).collect::<Vec<_>>().join(" ");
        let _ = match g {
            Gate::X(t) => writeln!(out, "X {t}"),
            Gate::H(t) => writeln!(out, "H {t}"),
            Gate::Z(t) => writeln!(out, "Z {t}"),
            Gate::Rz { theta, target } => writeln!(out, "RZ({}) {target}", fmt_angle(*theta)),
            Gate::P { theta, target } => writeln!(out, "P({}) {target}", fmt_angle(*theta)),
            Gate::Cx { control, target } => writeln!(out, "CX {control} {target}"),
            Gate::Ccx { controls, target } => {
                writeln!(out, "CCX {} {} {target}", controls[0], controls[1])
            }
            Gate::Mcx { controls, target } => writeln!(out, "MCX {} ; {target}", join(controls)),
            Gate::Mcp { theta, controls, target } => {
                writeln!(out, "MCP({}) {} ; {target}", fmt_angle(*theta), join(controls))
            }
            Gate::Perm { perm, qubits } => writeln!(out, "PERM {} {}", perm.name(), join(qubits)),
        };
    }
    out
}

/// Shortest round-trip decimal, zero-padded to at least 9 significant digits.
fn fmt_angle(x: f64) -> String {
    let mut s = format!("{x}");
    let digits: String = s.chars().filter(|c| c.is_ascii_digit()).collect();
    let significant = digits.trim_start_matches('0').len().max(1);
    if significant < 9 {
        if !s.contains('.') {
            s.push('.');
        }
        s.extend(std::iter::repeat_n('0', 9 - significant));
    }
    s
}
