use std::collections::{BTreeSet, HashSet};

use super::clause::{Clause, Var};
use crate::error::{Error, Result};

pub const MAX_TARGET_VARS: usize = 20;
/// Cap on brute-forced existential variables. A single clause whose
/// existential variables all enter linearly is solved by subset sums instead
/// and is not subject to this cap.
pub const MAX_EXISTENTIAL_VARS: usize = 16;

/// Assignments of `targets` for which some assignment of the group's remaining
/// variables satisfies every clause. Rows are in lexicographic order with
/// `targets[0]` most significant.
pub fn valid_assignments(group: &[Clause], targets: &[Var]) -> Result<Vec<Vec<bool>>> {
    let n = targets.len();
    if n > MAX_TARGET_VARS {
        return Err(Error::resource(format!("{n} target variables exceed the cap of {MAX_TARGET_VARS}")));
    }
    let target_set: BTreeSet<Var> = targets.iter().copied().collect();
    if target_set.len() != n {
        return Err(Error::precondition("duplicate target variable"));
    }
    let exist: Vec<Var> = group
        .iter()
        .flat_map(Clause::vars)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .filter(|v| !target_set.contains(v))
        .collect();

    let row = |t: usize| -> Vec<bool> { (0..n).map(|k| t >> (n - 1 - k) & 1 == 1).collect() };
    let lookup = |bits: &[bool], v: Var| -> Option<bool> { targets.iter().position(|&x| x == v).map(|k| bits[k]) };

    if let [clause] = group {
        if let Some(sums) = linear_sums(clause, &exist) {
            let mut out = Vec::new();
            for t in 0..1usize << n {
                let bits = row(t);
                let fixed: i64 = clause
                    .terms
                    .iter()
                    .filter(|(m, _)| m.iter().all(|&v| lookup(&bits, v) == Some(true)))
                    .map(|(_, &c)| c)
                    .sum();
                if sums.contains(&(clause.constant - fixed)) {
                    out.push(bits);
                }
            }
            return Ok(out);
        }
    }

    if exist.len() > MAX_EXISTENTIAL_VARS {
        return Err(Error::resource(format!(
            "{} existential variables exceed the cap of {MAX_EXISTENTIAL_VARS}",
            exist.len()
        )));
    }
    let mut out = Vec::new();
    for t in 0..1usize << n {
        let bits = row(t);
        let ok = (0..1usize << exist.len()).any(|e| {
            let value = |v: Var| {
                lookup(&bits, v).unwrap_or_else(|| {
                    let k = exist.iter().position(|&x| x == v).unwrap();
                    e >> k & 1 == 1
                })
            };
            group.iter().all(|c| c.holds(value))
        });
        if ok {
            out.push(bits);
        }
    }
    Ok(out)
}

/// Attainable sums of the existential part when every existential variable
/// occurs only in degree-1 monomials.
fn linear_sums(c: &Clause, exist: &[Var]) -> Option<HashSet<i64>> {
    let mut coefs = Vec::new();
    for (m, &k) in &c.terms {
        match m.iter().filter(|v| exist.contains(v)).count() {
            0 => {}
            1 if m.len() == 1 => coefs.push(k),
            _ => return None,
        }
    }
    let mut sums = HashSet::from([0i64]);
    for k in coefs {
        let next: Vec<i64> = sums.iter().map(|s| s + k).collect();
        sums.extend(next);
    }
    Some(sums)
}
