//! Reversible arithmetic: gate-level adder and multiplier, constant XOR,
//! zero test, and semantic basis-permutation oracles for modulo and modular
//! exponentiation.

mod builders;
pub mod classical;
mod perm;

use serde::Serialize;

use crate::error::{Error, Result};

pub use builders::{
    build_adder, build_is_nonzero_flag, build_multiplier, build_xor_const, oracle_mod, oracle_modexp, xor_const,
};
pub use classical::{bit_length, ceil_log2, classical_order, gcd, isqrt, mod_pow};
pub use perm::{BasisPermutation, IndexMap, PermRegistry};

/// A contiguous run of qubits, least-significant qubit first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Register {
    pub start: usize,
    pub len: usize,
}

impl Register {
    pub const fn new(start: usize, len: usize) -> Self {
        Self { start, len }
    }

    pub fn qubit(&self, i: usize) -> usize {
        assert!(i < self.len, "register bit {i} out of range");
        self.start + i
    }

    pub fn qubits(&self) -> Vec<usize> {
        (self.start..self.start + self.len).collect()
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }

    /// `len` qubits starting `offset` into this register.
    pub fn slice(&self, offset: usize, len: usize) -> Register {
        assert!(offset + len <= self.len, "register slice out of range");
        Register::new(self.start + offset, len)
    }

    pub fn overlaps(&self, other: &Register) -> bool {
        self.len > 0 && other.len > 0 && self.start < other.end() && other.start < self.end()
    }

    pub fn contains(&self, q: usize) -> bool {
        (self.start..self.end()).contains(&q)
    }

    /// Reads this register's value out of a basis index.
    pub fn read(&self, index: usize) -> usize {
        if self.len == 0 {
            return 0;
        }
        (index >> self.start) & ((1usize << self.len) - 1)
    }

    /// Basis-index bits encoding `value` in this register.
    pub fn place(&self, value: usize) -> usize {
        value << self.start
    }
}

/// Binds problem registers to circuit wires.
///
/// The search registers always come first: `p` starts at qubit 0 and `q`, when
/// present, follows it directly, so the low `search_width()` bits of a basis
/// index are the search-space index.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegisterLayout {
    pub p: Register,
    pub q: Option<Register>,
    pub out: Register,
    pub ancilla: Register,
    pub flag: Option<usize>,
    pub total_width: usize,
}

impl RegisterLayout {
    /// Packs `p, q, out, ancilla, flag` contiguously in that order.
    pub fn packed(p: usize, q: Option<usize>, out: usize, ancilla: usize, flag: bool) -> Self {
        let mut next = 0;
        let mut take = |len: usize| {
            let r = Register::new(next, len);
            next += len;
            r
        };
        let p = take(p);
        let q = q.map(&mut take);
        let out = take(out);
        let ancilla = take(ancilla);
        let flag = flag.then(|| take(1).start);
        Self { p, q, out, ancilla, flag, total_width: next }
    }

    /// p: `⌈log2⌊√m⌋⌉` qubits, q: `⌈log2(m/2)⌉` qubits, out: their sum, one ancilla.
    pub fn multiplication(m: u64) -> Result<Self> {
        let (p, q) = multiplication_widths(m)?;
        Ok(Self::packed(p, Some(q), p + q, 1, false))
    }

    /// p: `⌈log2⌊√m⌋⌉` qubits, out: `bit_length(m)` qubits.
    pub fn modulo(m: u64) -> Result<Self> {
        let (p, _) = multiplication_widths(m)?;
        Ok(Self::packed(p, None, bit_length(m), 0, false))
    }

    /// r: `bit_length(m − 1)` qubits (so `r < m` fits), out: `bit_length(m)`, one flag.
    pub fn order_finding(m: u64) -> Result<Self> {
        if m < 3 {
            return Err(Error::precondition("order finding needs m ≥ 3"));
        }
        Ok(Self::packed(bit_length(m - 1), None, bit_length(m), 0, true))
    }

    /// `nodes` registers of `⌈log2 K⌉` qubits each, concatenated into `p`, plus a flag.
    pub fn coloring(nodes: usize, colors: usize) -> Result<Self> {
        if colors < 2 {
            return Err(Error::precondition("graph coloring needs K ≥ 2"));
        }
        let bits = ceil_log2(colors as u64);
        Ok(Self::packed(nodes * bits, None, 0, 0, true))
    }

    pub fn search_width(&self) -> usize {
        self.p.len + self.q.map_or(0, |q| q.len)
    }

    pub fn search_qubits(&self) -> Vec<usize> {
        (0..self.search_width()).collect()
    }

    /// Search-space index of a full basis index.
    pub fn search_index(&self, basis: usize) -> usize {
        basis & ((1usize << self.search_width()) - 1)
    }

    /// Qubits outside the search registers (out, ancilla, flag).
    pub fn work_qubits(&self) -> Vec<usize> {
        (self.search_width()..self.total_width).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let mut regs = vec![self.p, self.out, self.ancilla];
        regs.extend(self.q);
        regs.extend(self.flag.map(|f| Register::new(f, 1)));
        for (i, a) in regs.iter().enumerate() {
            if a.end() > self.total_width {
                return Err(Error::precondition("register exceeds layout width"));
            }
            if regs[..i].iter().any(|b| a.overlaps(b)) {
                return Err(Error::precondition("layout registers overlap"));
            }
        }
        if self.p.start != 0 || self.q.is_some_and(|q| q.start != self.p.end()) {
            return Err(Error::precondition("search registers must occupy the low qubits"));
        }
        Ok(())
    }
}

/// `(⌈log2⌊√m⌋⌉, ⌈log2(m/2)⌉)`.
pub fn multiplication_widths(m: u64) -> Result<(usize, usize)> {
    if m < 4 {
        return Err(Error::precondition(format!("m = {m} is too small to factor")));
    }
    Ok((ceil_log2(isqrt(m)), ceil_log2(m) - 1))
}
