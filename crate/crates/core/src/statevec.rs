//! Dense statevector simulation.
//!
//! Qubit 0 is the least-significant bit of the basis index, so a register
//! occupying qubits `start..start+len` reads directly as an unsigned integer.
//!
//! Gate conventions: `RZ(θ) = diag(e^{-iθ/2}, e^{iθ/2})`, `P(θ) = diag(1, e^{iθ})`,
//! and a multi-controlled phase `MCP(θ)` multiplies by `e^{iθ}` exactly the basis
//! states in which every control and the target are 1.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::circuits::{Circuit, Gate};
use crate::error::{Error, Result};

/// Default qubit cap: 2^24 double-precision complex amplitudes (256 MiB).
pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Environment variable that overrides [`DEFAULT_QUBIT_CAP`].
pub const QUBIT_CAP_ENV: &str = "FUNCQAOA_MAX_QUBITS";

/// Hard ceiling regardless of overrides; indices are `usize` bit masks.
const ABSOLUTE_QUBIT_CAP: usize = 40;

/// Qubit cap in effect, honoring [`QUBIT_CAP_ENV`] when it parses.
pub fn qubit_cap() -> usize {
    std::env::var(QUBIT_CAP_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .map(|c| c.min(ABSOLUTE_QUBIT_CAP))
        .unwrap_or(DEFAULT_QUBIT_CAP)
}

#[derive(Clone, Debug, PartialEq)]
pub struct State {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl State {
    /// `|0…0⟩` on `n_qubits` qubits, subject to [`qubit_cap`].
    pub fn new(n_qubits: usize) -> Result<Self> {
        Self::with_cap(n_qubits, qubit_cap())
    }

    pub fn with_cap(n_qubits: usize, cap: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::precondition("a state needs at least one qubit"));
        }
        if n_qubits > cap.min(ABSOLUTE_QUBIT_CAP) {
            return Err(Error::resource(format!("{n_qubits} qubits exceeds the simulator cap of {cap}")));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 1usize << n_qubits];
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Ok(Self { n_qubits, amplitudes })
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let mut s = Self::new(n_qubits)?;
        if index >= s.amplitudes.len() {
            return Err(Error::precondition(format!("basis index {index} out of range for {n_qubits} qubits")));
        }
        s.amplitudes[0] = Complex64::new(0.0, 0.0);
        s.amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(s)
    }

    /// Builds a state from raw amplitudes; the length must be a power of two.
    /// The vector is taken as given (no renormalization).
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::precondition(format!("amplitude vector length {len} is not a power of two ≥ 2")));
        }
        let n_qubits = len.trailing_zeros() as usize;
        if n_qubits > qubit_cap() {
            return Err(Error::resource(format!("{n_qubits} qubits exceeds the simulator cap of {}", qubit_cap())));
        }
        Ok(Self { n_qubits, amplitudes })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amplitudes[index]
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Inner product `⟨self|other⟩`.
    pub fn inner(&self, other: &State) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// Applies one gate in place.
    pub fn apply_gate(&mut self, gate: &Gate) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let amps = &mut self.amplitudes;
        match gate {
            Gate::X(t) => controlled_x(amps, 0, *t),
            Gate::Cx { control, target } => controlled_x(amps, 1 << control, *target),
            Gate::Ccx { controls, target } => controlled_x(amps, (1 << controls[0]) | (1 << controls[1]), *target),
            Gate::Mcx { controls, target } => controlled_x(amps, mask_of(controls), *target),
            Gate::H(t) => hadamard(amps, *t),
            Gate::Z(t) => {
                let bit = 1usize << t;
                for (i, a) in amps.iter_mut().enumerate() {
                    if i & bit != 0 {
                        *a = -*a;
                    }
                }
            }
            Gate::Rz { theta, target } => {
                let bit = 1usize << target;
                let lo = Complex64::from_polar(1.0, -theta / 2.0);
                let hi = Complex64::from_polar(1.0, theta / 2.0);
                for (i, a) in amps.iter_mut().enumerate() {
                    *a *= if i & bit == 0 { lo } else { hi };
                }
            }
            Gate::P { theta, target } => controlled_phase(amps, 1 << target, *theta),
            Gate::Mcp { theta, controls, target } => controlled_phase(amps, mask_of(controls) | (1 << target), *theta),
            Gate::Perm { perm, qubits } => {
                let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
                let mask = mask_of(qubits);
                for (i, a) in amps.iter().enumerate() {
                    let local = gather(i, qubits);
                    let image = perm.apply(local);
                    out[(i & !mask) | scatter(image, qubits)] = *a;
                }
                *amps = out;
            }
        }
        Ok(())
    }

    /// Applies every gate of `circuit` in order.
    pub fn apply_circuit(&mut self, circuit: &Circuit) -> Result<()> {
        if circuit.width() > self.n_qubits {
            return Err(Error::precondition(format!(
                "circuit width {} exceeds state width {}",
                circuit.width(),
                self.n_qubits
            )));
        }
        for gate in circuit.gates() {
            self.apply_gate(gate)?;
        }
        Ok(())
    }

    /// Exact `Σ_k |a_k|² · energy(k)`.
    pub fn expectation_diagonal<F>(&self, energy: F) -> f64
    where
        F: Fn(usize) -> f64,
    {
        self.amplitudes.iter().enumerate().map(|(k, a)| a.norm_sqr() * energy(k)).sum()
    }

    /// Multiplies amplitude `k` by `e^{i·phase(k)}`.
    pub fn apply_diagonal<F>(&mut self, phase: F)
    where
        F: Fn(usize) -> f64,
    {
        for (k, a) in self.amplitudes.iter_mut().enumerate() {
            let t = phase(k);
            if t != 0.0 {
                *a *= Complex64::from_polar(1.0, t);
            }
        }
    }

    /// Draws `shots` independent measurements in the computational basis.
    ///
    /// The generator is ChaCha20 seeded with `seed` through
    /// `SeedableRng::seed_from_u64`; each shot takes one uniform `f64` and
    /// inverts the cumulative probability vector by binary search.
    pub fn sample(&self, shots: u64, seed: u64) -> Result<MeasurementCounts> {
        if shots == 0 {
            return Err(Error::precondition("shots must be at least 1"));
        }
        let mut cdf = Vec::with_capacity(self.dim());
        let mut acc = 0.0;
        let mut last_nonzero = 0;
        for (i, a) in self.amplitudes.iter().enumerate() {
            let p = a.norm_sqr();
            if p > 0.0 {
                last_nonzero = i;
            }
            acc += p;
            cdf.push(acc);
        }
        let total = acc;
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let mut counts = BTreeMap::new();
        for _ in 0..shots {
            let u = rng.gen::<f64>() * total;
            let k = cdf.partition_point(|&c| c <= u).min(last_nonzero);
            *counts.entry(k).or_insert(0u64) += 1;
        }
        Ok(MeasurementCounts { n_qubits: self.n_qubits, shots, counts })
    }
}

/// Outcome histogram of [`State::sample`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementCounts {
    pub n_qubits: usize,
    pub shots: u64,
    pub counts: BTreeMap<usize, u64>,
}

impl MeasurementCounts {
    pub fn frequency(&self, index: usize) -> f64 {
        self.counts.get(&index).copied().unwrap_or(0) as f64 / self.shots as f64
    }

    /// Basis index rendered most-significant qubit first.
    pub fn bitstring(&self, index: usize) -> String {
        (0..self.n_qubits).rev().map(|q| if index >> q & 1 == 1 { '1' } else { '0' }).collect()
    }
}

fn mask_of(qubits: &[usize]) -> usize {
    qubits.iter().fold(0, |m, q| m | (1 << q))
}

fn gather(index: usize, qubits: &[usize]) -> usize {
    qubits.iter().enumerate().fold(0, |v, (j, q)| v | ((index >> q & 1) << j))
}

fn scatter(value: usize, qubits: &[usize]) -> usize {
    qubits.iter().enumerate().fold(0, |v, (j, q)| v | ((value >> j & 1) << q))
}

fn controlled_x(amps: &mut [Complex64], controls: usize, target: usize) {
    let bit = 1usize << target;
    for i in 0..amps.len() {
        if i & bit == 0 && i & controls == controls {
            amps.swap(i, i | bit);
        }
    }
}

fn hadamard(amps: &mut [Complex64], target: usize) {
    let bit = 1usize << target;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    for i in 0..amps.len() {
        if i & bit == 0 {
            let (a, b) = (amps[i], amps[i | bit]);
            amps[i] = (a + b) * s;
            amps[i | bit] = (a - b) * s;
        }
    }
}

fn controlled_phase(amps: &mut [Complex64], mask: usize, theta: f64) {
    let phase = Complex64::from_polar(1.0, theta);
    for (i, a) in amps.iter_mut().enumerate() {
        if i & mask == mask {
            *a *= phase;
        }
    }
}
