//! Diagonal phase helpers shared by the certificate builders.

use crate::circuits::{Circuit, Gate};
use crate::error::{Error, Result};

/// Largest register a phase polynomial is expanded over.
pub const MAX_POLYNOMIAL_WIDTH: usize = 20;

/// Multiplies the basis states where `qubits` read `value` by `e^{iθ}`.
pub fn phase_on_value(c: &mut Circuit, qubits: &[usize], value: usize, theta: f64) -> Result<()> {
    if theta == 0.0 {
        return Ok(());
    }
    let zeros: Vec<usize> = qubits.iter().enumerate().filter(|(j, _)| value >> j & 1 == 0).map(|(_, &q)| q).collect();
    for &q in &zeros {
        c.push(Gate::X(q))?;
    }
    if let Some(g) = Gate::phase_on_ones(qubits, theta) {
        c.push(g)?;
    }
    for &q in &zeros {
        c.push(Gate::X(q))?;
    }
    Ok(())
}

/// Exact diagonal `e^{-iθ f(v)}` where `v` is the value held in `qubits`.
///
/// `f` is expanded into its multilinear form `f(v) = Σ_S a_S Π_{j∈S} v_j`
/// (Möbius transform over subsets of bits) and each nonzero `a_S` becomes one
/// `P`/`MCP` gate on the qubits of `S`. The constant term is a global phase and
/// is dropped.
pub fn phase_polynomial<F>(c: &mut Circuit, qubits: &[usize], theta: f64, f: F) -> Result<()>
where
    F: Fn(usize) -> f64,
{
    let w = qubits.len();
    if w > MAX_POLYNOMIAL_WIDTH {
        return Err(Error::resource(format!("phase polynomial over {w} qubits exceeds {MAX_POLYNOMIAL_WIDTH}")));
    }
    let mut coef: Vec<f64> = (0..1usize << w).map(&f).collect();
    for bit in 0..w {
        for s in 0..coef.len() {
            if s >> bit & 1 == 1 {
                coef[s] -= coef[s ^ (1 << bit)];
            }
        }
    }
    for (s, &a) in coef.iter().enumerate().skip(1) {
        if a.abs() < 1e-12 {
            continue;
        }
        let support: Vec<usize> = (0..w).filter(|j| s >> j & 1 == 1).map(|j| qubits[j]).collect();
        if let Some(g) = Gate::phase_on_ones(&support, -theta * a) {
            c.push(g)?;
        }
    }
    Ok(())
}
