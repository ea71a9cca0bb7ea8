use std::sync::Arc;

use super::perm::{mod_permutation, modexp_permutation};
use super::{bit_length, BasisPermutation, Register, RegisterLayout};
use crate::circuits::{Circuit, Gate};
use crate::error::{Error, Result};

/// X on `reg` bit `i` for every set bit `i` of `value`.
pub fn xor_const(reg: Register, value: u64, width: usize) -> Result<Circuit> {
    if reg.len < 64 && value >> reg.len != 0 {
        return Err(Error::precondition(format!("{value} does not fit in a {}-qubit register", reg.len)));
    }
    let mut c = Circuit::new(width);
    for i in 0..reg.len {
        if value >> i & 1 == 1 {
            c.push(Gate::X(reg.qubit(i)))?;
        }
    }
    Ok(c)
}

/// `out ⊕= m`.
pub fn build_xor_const(layout: &RegisterLayout, m: u64) -> Result<Circuit> {
    xor_const(layout.out, m, layout.total_width)
}

/// Appends a Cuccaro-style majority/unmajority ripple adder computing
/// `b ← (a + b) mod 2^n`, optionally XOR-ing the carry-out into `carry_out`.
/// Every gate additionally carries `controls`, which turns the block into a
/// controlled adder.
pub(crate) fn append_ripple_add(
    c: &mut Circuit,
    a: &[usize],
    b: &[usize],
    ancilla: usize,
    carry_out: Option<usize>,
    controls: &[usize],
) -> Result<()> {
    let n = a.len();
    debug_assert_eq!(n, b.len());
    if n == 0 {
        return Ok(());
    }
    let cx = |c: &mut Circuit, extra: &[usize], target: usize| {
        let mut ctl = controls.to_vec();
        ctl.extend_from_slice(extra);
        c.push(Gate::controlled_x(&ctl, target))
    };
    let carry_in = |i: usize| if i == 0 { ancilla } else { a[i - 1] };

    // MAJ(c, b, a): CX a→b, CX a→c, CCX c,b→a
    for i in 0..n {
        let ci = carry_in(i);
        cx(c, &[a[i]], b[i])?;
        cx(c, &[a[i]], ci)?;
        cx(c, &[ci, b[i]], a[i])?;
    }
    if let Some(z) = carry_out {
        cx(c, &[a[n - 1]], z)?;
    }
    // UMA(c, b, a): CCX c,b→a, CX a→c, CX c→b
    for i in (0..n).rev() {
        let ci = carry_in(i);
        cx(c, &[ci, b[i]], a[i])?;
        cx(c, &[a[i]], ci)?;
        cx(c, &[ci], b[i])?;
    }
    Ok(())
}

/// In-place ripple-carry adder `|a⟩|b⟩|0⟩ ↦ |a⟩|(a + b) mod 2^n⟩|0⟩` using one
/// clean ancilla. The circuit width is one past the highest wire used.
pub fn build_adder(a: Register, b: Register, carry_ancilla: usize) -> Result<Circuit> {
    if a.len != b.len {
        return Err(Error::precondition("adder operands must have equal width"));
    }
    let anc = Register::new(carry_ancilla, 1);
    if a.overlaps(&b) || a.overlaps(&anc) || b.overlaps(&anc) {
        return Err(Error::precondition("adder registers overlap"));
    }
    let width = a.end().max(b.end()).max(carry_ancilla + 1);
    let mut c = Circuit::new(width);
    append_ripple_add(&mut c, &a.qubits(), &b.qubits(), carry_ancilla, None, &[])?;
    Ok(c)
}

/// Schoolbook multiplier `|p⟩|q⟩|0⟩ ↦ |p⟩|q⟩|p·q⟩`: for each bit `i` of `p`, a
/// `p_i`-controlled ripple add of `q` into `out[i ..= i + |q|]`.
pub fn build_multiplier(layout: &RegisterLayout) -> Result<Circuit> {
    let q = layout.q.ok_or_else(|| Error::precondition("multiplier needs a q register"))?;
    let (wp, wq) = (layout.p.len, q.len);
    if layout.out.len < wp + wq {
        return Err(Error::precondition(format!("product register has {} qubits, needs {}", layout.out.len, wp + wq)));
    }
    if layout.ancilla.len < 1 {
        return Err(Error::precondition("multiplier needs one ancilla qubit"));
    }
    let anc = layout.ancilla.qubit(0);
    let qs = q.qubits();
    let mut c = Circuit::new(layout.total_width);
    for i in 0..wp {
        let window = layout.out.slice(i, wq).qubits();
        append_ripple_add(&mut c, &qs, &window, anc, Some(layout.out.qubit(i + wq)), &[layout.p.qubit(i)])?;
    }
    Ok(c)
}

/// Sets `flag` to `[reg ≠ 0]`: X on `reg`, MCX onto `flag`, X back, X on `flag`.
pub fn build_is_nonzero_flag(reg: Register, flag: usize, width: usize) -> Result<Circuit> {
    if reg.contains(flag) {
        return Err(Error::precondition("flag qubit lies inside the tested register"));
    }
    let mut c = Circuit::new(width);
    let qs = reg.qubits();
    for &q in &qs {
        c.push(Gate::X(q))?;
    }
    c.push(Gate::controlled_x(&qs, flag))?;
    for &q in &qs {
        c.push(Gate::X(q))?;
    }
    c.push(Gate::X(flag))?;
    Ok(c)
}

impl RegisterLayout {
    /// Modulo oracle on `p` and the low `bit_length(m)` qubits of `out`.
    pub fn oracle_mod(&self, m: u64) -> Result<(BasisPermutation, Vec<usize>)> {
        let w = bit_length(m);
        if self.out.len < w {
            return Err(Error::precondition(format!("out register has {} qubits, m needs {w}", self.out.len)));
        }
        let perm = mod_permutation(m, self.p.len, w)?;
        let mut qubits = self.p.qubits();
        qubits.extend(self.out.slice(0, w).qubits());
        Ok((perm, qubits))
    }

    /// Modular exponentiation oracle on `p` (holding `r`) and the low
    /// `bit_length(m)` qubits of `out`.
    pub fn oracle_modexp(&self, x: u64, m: u64) -> Result<(BasisPermutation, Vec<usize>)> {
        let w = bit_length(m);
        if self.out.len < w {
            return Err(Error::precondition(format!("out register has {} qubits, m needs {w}", self.out.len)));
        }
        let perm = modexp_permutation(x, m, self.p.len, w)?;
        let mut qubits = self.p.qubits();
        qubits.extend(self.out.slice(0, w).qubits());
        Ok((perm, qubits))
    }

    pub(crate) fn oracle_gate(perm: BasisPermutation, qubits: Vec<usize>) -> Gate {
        Gate::Perm { perm: Arc::new(perm), qubits }
    }
}

/// `|p⟩|0⟩ ↦ |p⟩|m mod p⟩` (with `p = 0 ↦ m mod 2^width(out)`).
pub fn oracle_mod(m: u64, layout: &RegisterLayout) -> Result<BasisPermutation> {
    layout.oracle_mod(m).map(|(p, _)| p)
}

/// `|r⟩|0⟩ ↦ |r⟩|x^r mod m⟩`; requires `gcd(x, m) = 1`.
pub fn oracle_modexp(x: u64, m: u64, layout: &RegisterLayout) -> Result<BasisPermutation> {
    layout.oracle_modexp(x, m).map(|(p, _)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::State;

    fn run_basis(c: &Circuit, input: usize) -> usize {
        let mut s = State::basis(c.width(), input).unwrap();
        s.apply_circuit(c).unwrap();
        let hits: Vec<usize> = (0..s.dim()).filter(|&k| s.amplitude(k).norm() > 1e-12).collect();
        assert_eq!(hits.len(), 1, "not a basis permutation on input {input}");
        assert!((s.amplitude(hits[0]).norm() - 1.0).abs() < 1e-12);
        hits[0]
    }

    #[test]
    fn xor_const_examples() {
        let l = RegisterLayout::packed(0, None, 4, 0, false);
        assert!(build_xor_const(&l, 0).unwrap().is_empty());
        let c = build_xor_const(&l, 5).unwrap();
        assert_eq!(c.gates(), &[Gate::X(0), Gate::X(2)]);
        assert!(build_xor_const(&l, 16).is_err());
        for v in 0..16 {
            let once = run_basis(&c, v);
            assert_eq!(run_basis(&c, once), v);
        }
    }

    #[test]
    fn adder_examples() {
        let (a, b) = (Register::new(0, 4), Register::new(4, 4));
        let c = build_adder(a, b, 8).unwrap();
        let add = |x: usize, y: usize| b.read(run_basis(&c, a.place(x) | b.place(y)));
        assert_eq!(add(3, 5), 8);
        assert_eq!(add(9, 9), 2);
        for x in 0..16 {
            assert_eq!(add(0, x), x);
        }
        assert!(build_adder(a, Register::new(3, 4), 8).is_err());
        assert!(build_adder(a, Register::new(4, 3), 8).is_err());
        assert!(build_adder(a, b, 5).is_err());
    }

    #[test]
    fn multiplier_examples() {
        let l = RegisterLayout::packed(3, Some(4), 7, 1, false);
        let c = build_multiplier(&l).unwrap();
        let q = l.q.unwrap();
        let mul = |p: usize, qv: usize| l.out.read(run_basis(&c, l.p.place(p) | q.place(qv)));
        assert_eq!(mul(3, 5), 15);
        assert_eq!(mul(7, 11), 77);
        for qv in 0..16 {
            assert_eq!(mul(0, qv), 0);
        }
        let narrow = RegisterLayout::packed(3, Some(4), 6, 1, false);
        assert!(build_multiplier(&narrow).is_err());
    }

    #[test]
    fn nonzero_flag_truth_table() {
        let reg = Register::new(0, 4);
        let c = build_is_nonzero_flag(reg, 4, 5).unwrap();
        for v in 0..16 {
            let out = run_basis(&c, v);
            assert_eq!(reg.read(out), v);
            assert_eq!(out >> 4 & 1, usize::from(v != 0));
        }
        assert!(build_is_nonzero_flag(reg, 2, 5).is_err());
    }

    #[test]
    fn oracle_examples() {
        let l = RegisterLayout::packed(3, None, 4, 0, false);
        let (perm, _) = l.oracle_mod(15).unwrap();
        let out = |p: usize| l.out.read(perm.apply(p));
        assert_eq!(out(3), 0);
        assert_eq!(out(4), 3);
        assert_eq!(out(0), 15);

        let l = RegisterLayout::modulo(77).unwrap();
        let (perm, _) = l.oracle_mod(77).unwrap();
        assert_eq!(l.out.read(perm.apply(7)), 0);

        let l = RegisterLayout::order_finding(15).unwrap();
        let perm = oracle_modexp(7, 15, &l).unwrap();
        let out = |r: usize| l.out.read(perm.apply(r));
        assert_eq!((out(0), out(2), out(4)), (1, 4, 1));
        assert!(oracle_modexp(5, 15, &l).is_err());
    }
}
