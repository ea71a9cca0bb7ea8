//! Variational-quantum-factoring clause model and search-space reduction.
//!
//! Schoolbook multiplication of `p` (`n_p` bits) and `q` (`n_q` bits) is
//! written as one equation per output column. Classical preprocessing fixes
//! and pairs bits; the remaining small clauses are brute-forced into
//! valid-assignment lists that shrink the initial superposition.

mod assign;
mod clause;
mod compression;
mod loader;
mod plan;
mod preprocess;

use std::collections::BTreeMap;

use serde::Serialize;

use crate::arithmetic::bit_length;
use crate::error::{Error, Result};

pub use assign::{valid_assignments, MAX_EXISTENTIAL_VARS, MAX_TARGET_VARS};
pub use clause::{Clause, Lit, Var};
pub use compression::{compression_formula, compression_report, CompressionRow};
pub use loader::{append_ry, append_subset_loader};
pub use plan::{detect_reductions, plan_to_init, Pairing, ReductionPlan, Relation, Subset, VarMap};
pub use preprocess::{preprocess, Preprocessed};

/// Clause system for one `(m, n_p, n_q)` instance.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClauseSet {
    pub m: u64,
    pub n_p: usize,
    pub n_q: usize,
    pub clauses: Vec<Clause>,
}

impl ClauseSet {
    /// Every `p`/`q` variable of the instance, `p` first.
    pub fn factor_vars(&self) -> Vec<Var> {
        (0..self.n_p).map(Var::P).chain((0..self.n_q).map(Var::Q)).collect()
    }

    pub fn holds(&self, value: impl Fn(Var) -> bool + Copy) -> bool {
        self.clauses.iter().all(|c| c.holds(value))
    }
}

/// `(⌈bitlen/2⌉, bitlen − 1)`.
pub fn default_widths(m: u64) -> (usize, usize) {
    let n = bit_length(m);
    (n.div_ceil(2), n.saturating_sub(1).max(1))
}

/// Column equations of `p·q = m` with `p₀ = q₀ = 1` substituted.
///
/// Column `i` reads `Σ_{a+b=i} p_a q_b + Σ_j z_{j,i} = m_i + Σ_k 2^{k−i} z_{i,k}`,
/// where the outgoing carries `z_{i,k}` are the binary digits of
/// `⌊(column max)/2⌋`. Columns are emitted while products or carries remain,
/// so the `(p, q)` projections of the solutions are exactly the factorizations
/// of `m` at these widths.
pub fn generate_clauses(m: u64, n_p: usize, n_q: usize) -> Result<ClauseSet> {
    if m < 3 || m.is_multiple_of(2) {
        return Err(Error::precondition(format!("m = {m} must be odd and at least 3")));
    }
    if n_p == 0 || n_q == 0 || n_p > 63 || n_q > 63 {
        return Err(Error::precondition("factor widths must lie in 1..=63"));
    }
    if n_p + n_q < bit_length(m) {
        return Err(Error::precondition(format!(
            "widths ({n_p}, {n_q}) cannot represent a product of {} bits",
            bit_length(m)
        )));
    }
    let products = n_p + n_q - 1;
    let mut incoming: BTreeMap<usize, Vec<Var>> = BTreeMap::new();
    let mut clauses = Vec::new();
    let mut i = 0;
    while i < products || i < bit_length(m) || incoming.contains_key(&i) {
        let mut c = Clause::new(i, m.checked_shr(i as u32).map_or(0, |v| (v & 1) as i64));
        let mut max_sum = 0u64;
        for a in 0..n_p.min(i + 1) {
            let b = i - a;
            if b < n_q {
                c.add(1, vec![Var::P(a), Var::Q(b)]);
                max_sum += 1;
            }
        }
        for z in incoming.remove(&i).unwrap_or_default() {
            c.add(1, vec![z]);
            max_sum += 1;
        }
        for k in 1..=bit_length(max_sum / 2) {
            let z = Var::Z(i, i + k);
            c.add(-(1i64 << k), vec![z]);
            incoming.entry(i + k).or_default().push(z);
        }
        c.substitute(Var::P(0), Lit::Const(true));
        c.substitute(Var::Q(0), Lit::Const(true));
        clauses.push(c);
        i += 1;
    }
    Ok(ClauseSet { m, n_p, n_q, clauses })
}
