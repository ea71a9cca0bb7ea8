//! Gate counting, depth and CNOT-equivalent cost.
//!
//! Depth schedules each gate, in order, one layer after the latest layer
//! already occupied on any of its wires; every gate takes unit time.
//!
//! CNOT-equivalent counting model (used when `decompose` is set):
//!
//! * single-qubit gates cost 0, `CX` costs 1, `CCX` costs 6;
//! * `MCX` with `k ≥ 3` controls uses the ancilla-free split
//!   `Λ_k(X) = Λ_1(V)·Λ_{k-1}(X)·Λ_1(V†)·Λ_{k-1}(X)·Λ_{k-1}(V)` with `V² = X`.
//!   The two `Λ_{k-1}(X)` factors borrow the idle target wire and are costed
//!   as a Toffoli ladder; only `Λ_{k-1}(V)` recurses:
//!
//!   ```text
//!   ladder(1) = 1, ladder(2) = 6, ladder(j) = 24·(j − 2)   (j ≥ 3)
//!   cu(0) = 0, cu(1) = 2, cu(j) = 4 + 2·ladder(j − 1) + cu(j − 1)
//!   mcx(0) = 0, mcx(1) = 1, mcx(2) = 6, mcx(k) = cu(k)    (k ≥ 3)
//!   ```
//!
//! * `MCP` with `k` controls is a controlled single-qubit unitary: `cu(k)`.
//! * `PERM` gates are opaque; they are tallied in `opaque_permutations` and
//!   contribute nothing to `cnot_equivalent`.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{Circuit, Gate, GateKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResourceReport {
    pub counts_by_kind: BTreeMap<GateKind, usize>,
    pub total_gates: usize,
    pub depth: usize,
    /// Only populated when counting with decomposition.
    pub cnot_equivalent: Option<usize>,
    pub opaque_permutations: usize,
    pub width: usize,
    pub ancilla_count: usize,
}

impl Serialize for GateKind {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

fn ladder(j: usize) -> usize {
    match j {
        0 => 0,
        1 => 1,
        2 => 6,
        _ => 24 * (j - 2),
    }
}

fn controlled_unitary(j: usize) -> usize {
    match j {
        0 => 0,
        1 => 2,
        _ => 4 + 2 * ladder(j - 1) + controlled_unitary(j - 1),
    }
}

/// CNOT count charged for an X gate with `k` controls.
pub fn mcx_cx_count(k: usize) -> usize {
    match k {
        0 => 0,
        1 => 1,
        2 => 6,
        _ => controlled_unitary(k),
    }
}

/// CNOT count charged for a phase gate with `k` controls.
pub fn mcp_cx_count(k: usize) -> usize {
    controlled_unitary(k)
}

fn gate_cx_cost(g: &Gate) -> usize {
    match g {
        Gate::X(_) | Gate::H(_) | Gate::Z(_) | Gate::Rz { .. } | Gate::P { .. } => 0,
        Gate::Cx { .. } => 1,
        Gate::Ccx { .. } => mcx_cx_count(2),
        Gate::Mcx { controls, .. } => mcx_cx_count(controls.len()),
        Gate::Mcp { controls, .. } => mcp_cx_count(controls.len()),
        Gate::Perm { .. } => 0,
    }
}

/// Counts gates, greedy wire-disjoint depth and (optionally) CNOT cost.
/// `ancilla_count` is supplied by the caller who owns the register layout.
pub fn resource_count(circuit: &Circuit, decompose: bool, ancilla_count: usize) -> ResourceReport {
    let mut counts_by_kind = BTreeMap::new();
    let mut frontier = vec![0usize; circuit.width()];
    let mut depth = 0;
    let mut cx = 0;
    let mut opaque = 0;
    for g in circuit.gates() {
        *counts_by_kind.entry(g.kind()).or_insert(0) += 1;
        let wires = g.wires();
        let layer = wires.iter().map(|&w| frontier[w]).max().unwrap_or(0) + 1;
        for &w in &wires {
            frontier[w] = layer;
        }
        depth = depth.max(layer);
        if g.kind() == GateKind::Perm {
            opaque += 1;
        }
        cx += gate_cx_cost(g);
    }
    ResourceReport {
        counts_by_kind,
        total_gates: circuit.len(),
        depth,
        cnot_equivalent: decompose.then_some(cx),
        opaque_permutations: opaque,
        width: circuit.width(),
        ancilla_count,
    }
}
