//! Circuit IR shared by the simulator, arithmetic builders, certificates and
//! ansatz assembly.

mod resources;
mod text;

use std::fmt;
use std::sync::Arc;

use crate::arithmetic::BasisPermutation;
use crate::error::{Error, Result};

pub use resources::{mcp_cx_count, mcx_cx_count, resource_count, ResourceReport};
pub use text::{emit_circuit, parse_circuit, parse_circuit_with};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    X,
    H,
    Z,
    Rz,
    P,
    Cx,
    Ccx,
    Mcx,
    Mcp,
    Perm,
}

impl GateKind {
    pub fn name(self) -> &'static str {
        match self {
            GateKind::X => "X",
            GateKind::H => "H",
            GateKind::Z => "Z",
            GateKind::Rz => "RZ",
            GateKind::P => "P",
            GateKind::Cx => "CX",
            GateKind::Ccx => "CCX",
            GateKind::Mcx => "MCX",
            GateKind::Mcp => "MCP",
            GateKind::Perm => "PERM",
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    X(usize),
    H(usize),
    Z(usize),
    Rz {
        theta: f64,
        target: usize,
    },
    P {
        theta: f64,
        target: usize,
    },
    Cx {
        control: usize,
        target: usize,
    },
    Ccx {
        controls: [usize; 2],
        target: usize,
    },
    Mcx {
        controls: Vec<usize>,
        target: usize,
    },
    Mcp {
        theta: f64,
        controls: Vec<usize>,
        target: usize,
    },
    /// Basis permutation acting on `qubits`; `qubits[j]` carries bit `j` of
    /// the permutation's local index.
    Perm {
        perm: Arc<BasisPermutation>,
        qubits: Vec<usize>,
    },
}

impl Gate {
    pub fn kind(&self) -> GateKind {
        match self {
            Gate::X(_) => GateKind::X,
            Gate::H(_) => GateKind::H,
            Gate::Z(_) => GateKind::Z,
            Gate::Rz { .. } => GateKind::Rz,
            Gate::P { .. } => GateKind::P,
            Gate::Cx { .. } => GateKind::Cx,
            Gate::Ccx { .. } => GateKind::Ccx,
            Gate::Mcx { .. } => GateKind::Mcx,
            Gate::Mcp { .. } => GateKind::Mcp,
            Gate::Perm { .. } => GateKind::Perm,
        }
    }

    /// X on `target` with an arbitrary number of controls, using the
    /// narrowest gate kind that fits.
    pub fn controlled_x(controls: &[usize], target: usize) -> Gate {
        match controls {
            [] => Gate::X(target),
            [c] => Gate::Cx { control: *c, target },
            [a, b] => Gate::Ccx { controls: [*a, *b], target },
            _ => Gate::Mcx { controls: controls.to_vec(), target },
        }
    }

    /// Phase `e^{iθ}` on the basis states where every qubit in `qubits` is 1.
    /// Empty `qubits` would be a global phase and yields `None`.
    pub fn phase_on_ones(qubits: &[usize], theta: f64) -> Option<Gate> {
        match qubits {
            [] => None,
            [t] => Some(Gate::P { theta, target: *t }),
            [controls @ .., t] => Some(Gate::Mcp { theta, controls: controls.to_vec(), target: *t }),
        }
    }

    /// Every wire the gate touches, controls first.
    pub fn wires(&self) -> Vec<usize> {
        match self {
            Gate::X(t) | Gate::H(t) | Gate::Z(t) => vec![*t],
            Gate::Rz { target, .. } | Gate::P { target, .. } => vec![*target],
            Gate::Cx { control, target } => vec![*control, *target],
            Gate::Ccx { controls, target } => vec![controls[0], controls[1], *target],
            Gate::Mcx { controls, target } | Gate::Mcp { controls, target, .. } => {
                let mut w = controls.clone();
                w.push(*target);
                w
            }
            Gate::Perm { qubits, .. } => qubits.clone(),
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            Gate::Rz { theta, .. } | Gate::P { theta, .. } | Gate::Mcp { theta, .. } => Some(*theta),
            _ => None,
        }
    }

    /// Checks index range, wire distinctness and permutation width.
    pub fn validate(&self, width: usize) -> Result<()> {
        let wires = self.wires();
        for (i, &w) in wires.iter().enumerate() {
            if w >= width {
                return Err(Error::IndexOutOfRange { index: w, width });
            }
            if wires[..i].contains(&w) {
                return Err(Error::DuplicateWire(w));
            }
        }
        if let Gate::Perm { perm, qubits } = self {
            if perm.width() != qubits.len() {
                return Err(Error::precondition(format!(
                    "permutation {} has width {} but is applied to {} qubits",
                    perm.name(),
                    perm.width(),
                    qubits.len()
                )));
            }
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Result<Gate> {
        Ok(match self {
            Gate::Rz { theta, target } => Gate::Rz { theta: -theta, target: *target },
            Gate::P { theta, target } => Gate::P { theta: -theta, target: *target },
            Gate::Mcp { theta, controls, target } => {
                Gate::Mcp { theta: -theta, controls: controls.clone(), target: *target }
            }
            Gate::Perm { perm, qubits } => Gate::Perm { perm: Arc::new(perm.inverse()?), qubits: qubits.clone() },
            other => other.clone(),
        })
    }
}

/// An ordered gate list over qubits `0..width`.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct Circuit {
    width: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(width: usize) -> Self {
        Self { width, gates: Vec::new() }
    }

    pub fn from_gates(width: usize, gates: Vec<Gate>) -> Result<Self> {
        let mut c = Self::new(width);
        for g in gates {
            c.push(g)?;
        }
        Ok(c)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.width)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends all gates of `other`, which must not be wider than `self`.
    pub fn append(&mut self, other: &Circuit) -> Result<()> {
        if other.width > self.width {
            return Err(Error::precondition(format!(
                "cannot append a width-{} circuit to a width-{} circuit",
                other.width, self.width
            )));
        }
        self.gates.extend(other.gates.iter().cloned());
        Ok(())
    }

    /// Same gates on a wider index space.
    pub fn widened(&self, width: usize) -> Result<Circuit> {
        if width < self.width {
            return Err(Error::precondition("cannot shrink a circuit"));
        }
        Ok(Circuit { width, gates: self.gates.clone() })
    }

    /// Gates reversed, each replaced by its adjoint.
    pub fn inverse(&self) -> Result<Circuit> {
        let gates = self.gates.iter().rev().map(Gate::adjoint).collect::<Result<Vec<_>>>()?;
        Ok(Circuit { width: self.width, gates })
    }
}

pub fn inverse(circuit: &Circuit) -> Result<Circuit> {
    circuit.inverse()
}

/// Gates of `a` followed by gates of `b`.
pub fn concat(a: &Circuit, b: &Circuit) -> Result<Circuit> {
    if a.width != b.width {
        return Err(Error::precondition(format!("width mismatch in concat: {} vs {}", a.width, b.width)));
    }
    let mut c = a.clone();
    c.gates.extend(b.gates.iter().cloned());
    Ok(c)
}
