//! Certificates: a search space, a classical energy that vanishes exactly on
//! correct solutions, and the matching compute–phase–uncompute circuit.

mod graph;
pub mod phase;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::arithmetic::{
    bit_length, build_is_nonzero_flag, build_multiplier, classical_order, gcd, mod_pow, xor_const, Register,
    RegisterLayout,
};
use crate::circuits::{Circuit, Gate};
use crate::error::{Error, Result};

pub use graph::Graph;
use phase::{phase_on_value, phase_polynomial};

/// Largest search register for which [`Certificate::energy_table`] enumerates.
pub const MAX_TABLE_WIDTH: usize = 20;

/// Difference phase modes are only built for `m` below this bound.
pub const DIFFERENCE_MODE_CAP: u64 = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PhaseMode {
    /// Energy is the number of differing bits (one `P` per output qubit).
    HammingDistance,
    AbsDifference,
    SquaredDifference,
    /// Energy is carried by a flag qubit (order finding, coloring).
    Flag,
}

impl std::str::FromStr for PhaseMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hamming" | "hamming-distance" => Ok(PhaseMode::HammingDistance),
            "abs" | "abs-difference" => Ok(PhaseMode::AbsDifference),
            "squared" | "squared-difference" => Ok(PhaseMode::SquaredDifference),
            "flag" => Ok(PhaseMode::Flag),
            other => Err(Error::precondition(format!("unknown phase mode `{other}`"))),
        }
    }
}

/// Energy weights of the order-finding certificate:
/// `E(r) = flag·[x^r mod m ≠ 1] + magnitude·r + zero·[r = 0]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OrderWeights {
    pub magnitude: f64,
    pub flag: f64,
    pub zero: f64,
}

impl OrderWeights {
    /// `magnitude = 1`, `flag = zero = m`.
    pub fn for_modulus(m: u64) -> Self {
        Self { magnitude: 1.0, flag: m as f64, zero: m as f64 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum CertificateKind {
    Multiplication { m: u64 },
    Modulo { m: u64 },
    OrderFinding { x: u64, m: u64, weights: OrderWeights },
    Coloring { graph: Graph, colors: usize },
}

/// A decoded search-register value.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Candidate {
    Factors { p: u64, q: u64 },
    Order { r: u64 },
    Coloring { colors: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub layout: RegisterLayout,
    pub phase_mode: PhaseMode,
    /// Trivial-factor penalty of the modulo certificate (0 otherwise).
    pub penalty: f64,
}

impl Certificate {
    /// `p·q = m` over `p < 2^⌈log2⌊√m⌋⌉`, `q < 2^⌈log2(m/2)⌉`.
    pub fn multiplication(m: u64, mode: PhaseMode) -> Result<Self> {
        check_modulus(m)?;
        check_difference_mode(m, mode)?;
        let layout = RegisterLayout::multiplication(m)?;
        if bit_length(m) > layout.out.len {
            return Err(Error::precondition("product register cannot hold m"));
        }
        Ok(Self { kind: CertificateKind::Multiplication { m }, layout, phase_mode: mode, penalty: 0.0 })
    }

    /// `m mod p = 0` over `p < 2^⌈log2⌊√m⌋⌉`; `p ∈ {0, 1}` carry a penalty that
    /// strictly dominates every other attainable energy.
    pub fn modulo(m: u64, mode: PhaseMode) -> Result<Self> {
        check_modulus(m)?;
        check_difference_mode(m, mode)?;
        let layout = RegisterLayout::modulo(m)?;
        let p_bound = 1u64 << layout.p.len;
        let penalty = match mode {
            PhaseMode::HammingDistance => (layout.out.len + 1) as f64,
            PhaseMode::AbsDifference => p_bound as f64,
            PhaseMode::SquaredDifference => (p_bound * p_bound) as f64,
            PhaseMode::Flag => unreachable!("rejected by check_difference_mode"),
        };
        Ok(Self { kind: CertificateKind::Modulo { m }, layout, phase_mode: mode, penalty })
    }

    /// `x^r ≡ 1 (mod m)` minimizing `r`.
    pub fn order_finding(x: u64, m: u64, weights: OrderWeights) -> Result<Self> {
        if m < 3 || gcd(x, m) != 1 {
            return Err(Error::precondition(format!("gcd({x}, {m}) must be 1 with m ≥ 3")));
        }
        let layout = RegisterLayout::order_finding(m)?;
        Ok(Self {
            kind: CertificateKind::OrderFinding { x, m, weights },
            layout,
            phase_mode: PhaseMode::Flag,
            penalty: 0.0,
        })
    }

    /// Proper `K`-coloring; color codes `≥ K` cost one unit per node.
    pub fn coloring(graph: Graph, colors: usize) -> Result<Self> {
        let layout = RegisterLayout::coloring(graph.nodes, colors)?;
        Ok(Self {
            kind: CertificateKind::Coloring { graph, colors },
            layout,
            phase_mode: PhaseMode::Flag,
            penalty: 0.0,
        })
    }

    pub fn search_width(&self) -> usize {
        self.layout.search_width()
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            CertificateKind::Multiplication { .. } => "multiplication",
            CertificateKind::Modulo { .. } => "modulo",
            CertificateKind::OrderFinding { .. } => "order-finding",
            CertificateKind::Coloring { .. } => "coloring",
        }
    }

    /// Search qubits pinned by the uniform initial state: the low bit of `p`
    /// is 1 for the factoring certificates, the low bit of `r` is 0 for
    /// order finding.
    pub fn fixed_search_bits(&self) -> Vec<(usize, bool)> {
        match self.kind {
            CertificateKind::Multiplication { .. } | CertificateKind::Modulo { .. } => {
                vec![(self.layout.p.qubit(0), true)]
            }
            CertificateKind::OrderFinding { .. } => vec![(self.layout.p.qubit(0), false)],
            CertificateKind::Coloring { .. } => Vec::new(),
        }
    }

    pub fn decode(&self, s: usize) -> Candidate {
        let p = self.layout.p.read(s) as u64;
        match &self.kind {
            CertificateKind::Multiplication { .. } => {
                Candidate::Factors { p, q: self.layout.q.map_or(0, |q| q.read(s)) as u64 }
            }
            CertificateKind::Modulo { m } => Candidate::Factors { p, q: m.checked_div(p).unwrap_or(0) },
            CertificateKind::OrderFinding { .. } => Candidate::Order { r: p },
            CertificateKind::Coloring { graph, colors } => {
                let b = bits_per_node(*colors);
                Candidate::Coloring {
                    colors: (0..graph.nodes).map(|v| self.layout.p.slice(v * b, b).read(s)).collect(),
                }
            }
        }
    }

    /// Classical energy of search index `s`.
    pub fn energy(&self, s: usize) -> f64 {
        match &self.kind {
            CertificateKind::Multiplication { m } => {
                let q_reg = self.layout.q.expect("multiplication layout has q");
                let product = self.layout.p.read(s) as u64 * q_reg.read(s) as u64;
                self.value_energy(*m, product)
            }
            CertificateKind::Modulo { m } => {
                let p = self.layout.p.read(s) as u64;
                if p <= 1 {
                    self.penalty
                } else {
                    self.residue_energy(m % p)
                }
            }
            CertificateKind::OrderFinding { x, m, weights } => {
                let r = self.layout.p.read(s) as u64;
                let mut e = weights.magnitude * r as f64;
                if mod_pow(*x, r, *m) != 1 {
                    e += weights.flag;
                }
                if r == 0 {
                    e += weights.zero;
                }
                e
            }
            CertificateKind::Coloring { graph, colors } => {
                let b = bits_per_node(*colors);
                let color = |v: usize| self.layout.p.slice(v * b, b).read(s);
                let clashes = graph.edges.iter().filter(|&&(u, v)| color(u) == color(v)).count();
                let invalid = (0..graph.nodes).filter(|&v| color(v) >= *colors).count();
                (clashes + invalid) as f64
            }
        }
    }

    /// Whether `s` encodes a correct, nontrivial answer.
    pub fn is_solution(&self, s: usize) -> bool {
        match &self.kind {
            CertificateKind::Multiplication { m } => {
                let p = self.layout.p.read(s) as u64;
                let q = self.layout.q.map_or(0, |q| q.read(s)) as u64;
                p > 1 && q > 1 && p * q == *m
            }
            CertificateKind::Modulo { m } => {
                let p = self.layout.p.read(s) as u64;
                p > 1 && p < *m && m % p == 0
            }
            CertificateKind::OrderFinding { x, m, .. } => classical_order(*x, *m) == Some(self.layout.p.read(s) as u64),
            CertificateKind::Coloring { .. } => self.energy(s) == 0.0,
        }
    }

    /// Exhaustive energies over the search register.
    pub fn energy_table(&self) -> Result<Vec<f64>> {
        let w = self.search_width();
        if w > MAX_TABLE_WIDTH {
            return Err(Error::resource(format!(
                "search register of {w} qubits exceeds the {MAX_TABLE_WIDTH}-qubit table cap"
            )));
        }
        Ok((0..1usize << w).map(|s| self.energy(s)).collect())
    }

    /// The phase separator `e^{-iθ E}` as a circuit on `layout.total_width` qubits.
    pub fn phase_layer(&self, theta: f64) -> Result<Circuit> {
        match &self.kind {
            CertificateKind::Multiplication { m } => {
                multiplication_phase_layer(*m, &self.layout, theta, self.phase_mode)
            }
            CertificateKind::Modulo { m } => modulo_layer(*m, &self.layout, theta, self.phase_mode, self.penalty),
            CertificateKind::OrderFinding { x, m, weights } => order_phase_layer(
                *x,
                *m,
                &self.layout,
                theta * weights.flag,
                theta * weights.magnitude,
                theta * weights.zero,
            ),
            CertificateKind::Coloring { graph, colors } => coloring_phase_layer(graph, *colors, &self.layout, theta),
        }
    }

    fn value_energy(&self, m: u64, v: u64) -> f64 {
        match self.phase_mode {
            PhaseMode::AbsDifference => m.abs_diff(v) as f64,
            PhaseMode::SquaredDifference => (m.abs_diff(v) as f64).powi(2),
            _ => (v ^ m).count_ones() as f64,
        }
    }

    fn residue_energy(&self, r: u64) -> f64 {
        match self.phase_mode {
            PhaseMode::AbsDifference => r as f64,
            PhaseMode::SquaredDifference => (r as f64).powi(2),
            _ => r.count_ones() as f64,
        }
    }
}

fn bits_per_node(colors: usize) -> usize {
    crate::arithmetic::ceil_log2(colors as u64)
}

fn check_modulus(m: u64) -> Result<()> {
    if m < 4 {
        return Err(Error::precondition(format!("m = {m} is too small")));
    }
    if m >= 1 << 40 {
        return Err(Error::resource(format!("m = {m} exceeds the 40-bit arithmetic range")));
    }
    Ok(())
}

fn check_difference_mode(m: u64, mode: PhaseMode) -> Result<()> {
    match mode {
        PhaseMode::HammingDistance => Ok(()),
        PhaseMode::AbsDifference | PhaseMode::SquaredDifference if m < DIFFERENCE_MODE_CAP => Ok(()),
        PhaseMode::AbsDifference | PhaseMode::SquaredDifference => {
            Err(Error::precondition(format!("difference phase modes require m < {DIFFERENCE_MODE_CAP}")))
        }
        PhaseMode::Flag => {
            Err(Error::precondition("flag mode applies to order-finding and coloring certificates only"))
        }
    }
}

/// `MUL · (⊕m) · phase(θ) · (⊕m)† · MUL†` on `|p⟩|q⟩|0⟩|0⟩`.
///
/// After the XOR the product register holds `pq ⊕ m`. Hamming mode applies
/// `P(−θ)` to each of its qubits; the difference modes apply the exact diagonal
/// `|m − pq|` or `(m − pq)²` as a phase polynomial over the register.
pub fn multiplication_phase_layer(m: u64, layout: &RegisterLayout, theta: f64, mode: PhaseMode) -> Result<Circuit> {
    check_difference_mode(m, mode)?;
    let q = layout.q.ok_or_else(|| Error::precondition("multiplication needs a q register"))?;
    if layout.out.len < layout.p.len + q.len {
        return Err(Error::precondition("product register too narrow"));
    }
    let mul = build_multiplier(layout)?;
    let xor = xor_const(layout.out, m, layout.total_width)?;
    let out = layout.out.qubits();
    let mut c = Circuit::new(layout.total_width);
    c.append(&mul)?;
    c.append(&xor)?;
    match mode {
        PhaseMode::HammingDistance => {
            for &q in &out {
                c.push(Gate::P { theta: -theta, target: q })?;
            }
        }
        PhaseMode::AbsDifference => phase_polynomial(&mut c, &out, theta, |v| m.abs_diff(v as u64 ^ m) as f64)?,
        PhaseMode::SquaredDifference => {
            phase_polynomial(&mut c, &out, theta, |v| (m.abs_diff(v as u64 ^ m) as f64).powi(2))?
        }
        PhaseMode::Flag => unreachable!(),
    }
    c.append(&xor.inverse()?)?;
    c.append(&mul.inverse()?)?;
    Ok(c)
}

/// `MOD · phase(θ) · MOD†` with the trivial-factor penalty `W` of
/// [`Certificate::modulo`] for the given mode.
pub fn modulo_phase_layer(m: u64, layout: &RegisterLayout, theta: f64, mode: PhaseMode) -> Result<Circuit> {
    let cert = Certificate::modulo(m, mode)?;
    if cert.layout.p.len != layout.p.len {
        return Err(Error::precondition(format!("p register must have {} qubits", cert.layout.p.len)));
    }
    modulo_layer(m, layout, theta, mode, cert.penalty)
}

fn modulo_layer(m: u64, layout: &RegisterLayout, theta: f64, mode: PhaseMode, penalty: f64) -> Result<Circuit> {
    check_difference_mode(m, mode)?;
    let (perm, wires) = layout.oracle_mod(m)?;
    let out = layout.out.slice(0, bit_length(m));
    let residue = |v: usize| match mode {
        PhaseMode::AbsDifference => v as f64,
        PhaseMode::SquaredDifference => (v as f64).powi(2),
        _ => v.count_ones() as f64,
    };
    let sentinel = (m % (1u64 << out.len)) as usize;

    let oracle = RegisterLayout::oracle_gate(perm, wires);
    let mut c = Circuit::new(layout.total_width);
    c.push(oracle.clone())?;
    match mode {
        PhaseMode::HammingDistance => {
            for q in out.qubits() {
                c.push(Gate::P { theta: -theta, target: q })?;
            }
        }
        PhaseMode::AbsDifference => {
            for (i, q) in out.qubits().into_iter().enumerate() {
                c.push(Gate::P { theta: -theta * (1u64 << i) as f64, target: q })?;
            }
        }
        _ => phase_polynomial(&mut c, &out.qubits(), theta, residue)?,
    }
    // p = 0 already picked up residue(sentinel); p = 1 picked up residue(0) = 0.
    let p = layout.p.qubits();
    phase_on_value(&mut c, &p, 0, -theta * (penalty - residue(sentinel)))?;
    if layout.p.len > 1 {
        phase_on_value(&mut c, &p, 1, -theta * penalty)?;
    }
    c.push(oracle.adjoint()?)?;
    Ok(c)
}

/// Order-finding layer: modexp oracle, `out ⊕= 1`, flag `[out ≠ 0]`, phases
/// `P(−θ_flag)` on the flag, `P(−θ_mag·2^i)` on `r_i` and `−θ_zero` on `r = 0`,
/// then uncompute.
pub fn order_phase_layer(
    x: u64,
    m: u64,
    layout: &RegisterLayout,
    theta_flag: f64,
    theta_mag: f64,
    theta_zero: f64,
) -> Result<Circuit> {
    let flag = layout.flag.ok_or_else(|| Error::precondition("order finding needs a flag qubit"))?;
    let (perm, wires) = layout.oracle_modexp(x, m)?;
    let oracle = RegisterLayout::oracle_gate(perm, wires);
    let out = layout.out.slice(0, bit_length(m));
    let compute = {
        let mut c = Circuit::new(layout.total_width);
        c.push(oracle)?;
        c.append(&xor_const(out, 1, layout.total_width)?)?;
        c.append(&build_is_nonzero_flag(out, flag, layout.total_width)?)?;
        c
    };
    let mut c = compute.clone();
    c.push(Gate::P { theta: -theta_flag, target: flag })?;
    for (i, q) in layout.p.qubits().into_iter().enumerate() {
        let angle = -theta_mag * (1u64 << i) as f64;
        if angle != 0.0 {
            c.push(Gate::P { theta: angle, target: q })?;
        }
    }
    phase_on_value(&mut c, &layout.p.qubits(), 0, -theta_zero)?;
    c.append(&compute.inverse()?)?;
    Ok(c)
}

/// Per edge `{u, v}`: `v ⊕= u`, X on `v`, MCX onto the flag, `P(−θ)` on the
/// flag, then uncompute. Color codes `≥ K` receive `−θ` directly.
pub fn coloring_phase_layer(graph: &Graph, colors: usize, layout: &RegisterLayout, theta: f64) -> Result<Circuit> {
    if colors < 2 {
        return Err(Error::precondition("graph coloring needs K ≥ 2"));
    }
    let flag = layout.flag.ok_or_else(|| Error::precondition("coloring needs a flag qubit"))?;
    let b = bits_per_node(colors);
    if layout.p.len < graph.nodes * b {
        return Err(Error::precondition("color registers too narrow for the graph"));
    }
    let node = |v: usize| -> Register { layout.p.slice(v * b, b) };
    let mut c = Circuit::new(layout.total_width);
    for &(u, v) in &graph.edges {
        let (ru, rv) = (node(u).qubits(), node(v).qubits());
        let mut compute = Circuit::new(layout.total_width);
        for (&a, &t) in ru.iter().zip(&rv) {
            compute.push(Gate::Cx { control: a, target: t })?;
        }
        for &t in &rv {
            compute.push(Gate::X(t))?;
        }
        compute.push(Gate::controlled_x(&rv, flag))?;
        c.append(&compute)?;
        c.push(Gate::P { theta: -theta, target: flag })?;
        c.append(&compute.inverse()?)?;
    }
    for v in 0..graph.nodes {
        for code in colors..1usize << b {
            phase_on_value(&mut c, &node(v).qubits(), code, -theta)?;
        }
    }
    Ok(c)
}

/// Wraps an angle into `(−π, π]`.
pub fn wrap_phase(a: f64) -> f64 {
    let mut r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r -= 2.0 * PI;
    }
    r
}
