//! Uniform superposition over a list of basis assignments by binary-tree
//! state loading with (multi-)controlled `RY` rotations.

use std::f64::consts::FRAC_PI_2;

use crate::circuits::{Circuit, Gate};
use crate::error::{Error, Result};

/// `RY(θ) = S·RX(θ)·S†` with `RX(θ) = H·RZ(θ)·H`.
pub fn append_ry(c: &mut Circuit, target: usize, theta: f64) -> Result<()> {
    c.push(Gate::P { theta: -FRAC_PI_2, target })?;
    c.push(Gate::H(target))?;
    c.push(Gate::Rz { theta, target })?;
    c.push(Gate::H(target))?;
    c.push(Gate::P { theta: FRAC_PI_2, target })
}

/// `RY(θ)` on `target` conditioned on `controls` reading `values`.
fn append_controlled_ry(c: &mut Circuit, controls: &[usize], values: &[bool], target: usize, theta: f64) -> Result<()> {
    if controls.is_empty() {
        return append_ry(c, target, theta);
    }
    let flips: Vec<usize> = controls.iter().zip(values).filter(|(_, &v)| !v).map(|(&q, _)| q).collect();
    for &q in &flips {
        c.push(Gate::X(q))?;
    }
    append_ry(c, target, theta / 2.0)?;
    c.push(Gate::controlled_x(controls, target))?;
    append_ry(c, target, -theta / 2.0)?;
    c.push(Gate::controlled_x(controls, target))?;
    for &q in &flips {
        c.push(Gate::X(q))?;
    }
    Ok(())
}

/// Appends a circuit mapping `|0…0⟩` on `qubits` to `Σ_{a∈rows} |a⟩ / √|rows|`,
/// where `rows[k][j]` is the value of `qubits[j]`. Amplitudes are real and
/// nonnegative.
pub fn append_subset_loader(c: &mut Circuit, qubits: &[usize], rows: &[Vec<bool>]) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::precondition("cannot load an empty assignment list"));
    }
    if rows.iter().any(|r| r.len() != qubits.len()) {
        return Err(Error::precondition("assignment length differs from qubit count"));
    }
    let mut rows: Vec<Vec<bool>> = rows.to_vec();
    rows.sort();
    rows.dedup();
    load(c, qubits, &rows, 0, &mut Vec::new())
}

fn load(c: &mut Circuit, qubits: &[usize], rows: &[Vec<bool>], depth: usize, prefix: &mut Vec<bool>) -> Result<()> {
    if depth == qubits.len() {
        return Ok(());
    }
    let split = rows.partition_point(|r| !r[depth]);
    let (zeros, ones) = rows.split_at(split);
    if !ones.is_empty() {
        let theta = 2.0 * ((ones.len() as f64) / (rows.len() as f64)).sqrt().asin();
        append_controlled_ry(c, &qubits[..depth], prefix, qubits[depth], theta)?;
    }
    for (branch, bit) in [(zeros, false), (ones, true)] {
        if !branch.is_empty() {
            prefix.push(bit);
            load(c, qubits, branch, depth + 1, prefix)?;
            prefix.pop();
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::statevec::State;

    fn loaded(qubits: &[usize], width: usize, rows: &[Vec<bool>]) -> State {
        let mut c = Circuit::new(width);
        append_subset_loader(&mut c, qubits, rows).unwrap();
        let mut s = State::new(width).unwrap();
        s.apply_circuit(&c).unwrap();
        s
    }

    #[test]
    fn ry_rotates_zero() {
        let mut c = Circuit::new(1);
        append_ry(&mut c, 0, 1.2).unwrap();
        let mut s = State::new(1).unwrap();
        s.apply_circuit(&c).unwrap();
        assert!((s.amplitude(0).re - 0.6f64.cos()).abs() < 1e-12);
        assert!((s.amplitude(1).re - 0.6f64.sin()).abs() < 1e-12);
        assert!(s.amplitude(1).im.abs() < 1e-12);
    }

    #[test]
    fn three_of_four() {
        let rows: Vec<Vec<bool>> = vec![vec![false, false], vec![false, true], vec![true, false]];
        let s = loaded(&[0, 1], 2, &rows);
        let a = 1.0 / 3f64.sqrt();
        for (idx, want) in [(0b00, a), (0b10, a), (0b01, a), (0b11, 0.0)] {
            assert!((s.amplitude(idx).re - want).abs() < 1e-10, "idx {idx}");
        }
    }

    #[test]
    fn arbitrary_subsets_are_uniform() {
        let rows: Vec<Vec<bool>> = [0b101usize, 0b010, 0b111, 0b001, 0b100]
            .iter()
            .map(|&v| (0..3).map(|j| v >> j & 1 == 1).collect())
            .collect();
        let s = loaded(&[1, 3, 4], 5, &rows);
        let a = 1.0 / 5f64.sqrt();
        for idx in 0..32usize {
            let v = (idx >> 1 & 1) | (idx >> 3 & 1) << 1 | (idx >> 4 & 1) << 2;
            let inside = idx & 0b00101 == 0 && [0b101, 0b010, 0b111, 0b001, 0b100].contains(&v);
            let want = if inside { a } else { 0.0 };
            assert!((s.amplitude(idx).norm() - want).abs() < 1e-10, "idx {idx}");
        }
    }

    #[test]
    fn empty_list_rejected() {
        let mut c = Circuit::new(2);
        assert!(append_subset_loader(&mut c, &[0, 1], &[]).is_err());
    }
}
