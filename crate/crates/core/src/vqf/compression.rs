use serde::Serialize;

use super::assign::valid_assignments;
use super::{default_widths, generate_clauses, preprocess};
use crate::error::{Error, Result};

/// `n·(1 + log2(1 − b/2^c)/c)`: search-space bits left after every one of
/// `n/c` disjoint `c`-variable clauses excludes `b` assignments.
pub fn compression_formula(n: usize, c: usize, b: u64) -> Result<f64> {
    if c == 0 || c >= 63 {
        return Err(Error::precondition("clause size must lie in 1..63"));
    }
    if b >= 1u64 << c {
        return Err(Error::precondition(format!("b = {b} must be below 2^{c}")));
    }
    if !n.is_multiple_of(c) {
        return Err(Error::precondition(format!("{c} does not divide {n}")));
    }
    let frac = b as f64 / (1u64 << c) as f64;
    Ok(n as f64 * (1.0 + (1.0 - frac).log2() / c as f64))
}

/// One retained clause of a compression report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CompressionRow {
    pub clause_id: usize,
    pub n_pq_vars: usize,
    pub log2_all: f64,
    pub log2_valid: f64,
    pub bits_removed: f64,
}

/// Clauses of `m` at the default widths after preprocessing, restricted to
/// those with `1..=max_vars` factor bits, with carries existential.
pub fn compression_report(m: u64, max_vars: usize) -> Result<Vec<CompressionRow>> {
    if max_vars > super::MAX_TARGET_VARS {
        return Err(Error::resource(format!("max_vars {max_vars} exceeds {}", super::MAX_TARGET_VARS)));
    }
    let (n_p, n_q) = default_widths(m);
    let pre = preprocess(&generate_clauses(m, n_p, n_q)?)?;
    let mut rows = Vec::new();
    for c in &pre.clauses.clauses {
        let vars = c.factor_vars();
        if vars.is_empty() || vars.len() > max_vars {
            continue;
        }
        let valid = match valid_assignments(std::slice::from_ref(c), &vars) {
            Ok(v) => v.len(),
            Err(Error::Resource(_)) => continue,
            Err(e) => return Err(e),
        };
        let log2_all = vars.len() as f64;
        let log2_valid = (valid as f64).log2();
        rows.push(CompressionRow {
            clause_id: c.id,
            n_pq_vars: vars.len(),
            log2_all,
            log2_valid,
            bits_removed: log2_all - log2_valid,
        });
    }
    Ok(rows)
}
