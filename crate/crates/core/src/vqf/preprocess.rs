//! Sound simplification rules applied to a fixpoint.
//!
//! Rules, tried per clause in clause order and then in this order:
//!
//! * R1: all coefficients positive and constant 0: every monomial is 0.
//! * R5: a single monomial with coefficient equal to the constant: it is 1.
//! * R2: bound propagation. A monomial whose value would push the attainable
//!   range off the constant is forced (constant at the max forces every
//!   monomial to its maximizing value).
//! * R3: a unique odd-coefficient monomial is fixed by the parity of the constant.
//! * R4: two odd single-variable terms whose other terms are all carries are
//!   paired by parity (`x + y = 1` gives a negated pair, `x + y − 2z = 0` an
//!   equal pair).
//! * R6: after each deduction the variable is substituted everywhere, `x² = x`
//!   is applied and each clause is divided by its coefficient gcd.
//!
//! A bilinear monomial forced to 0 is split off as its own `x·y = 0` clause.

use std::collections::BTreeMap;

use serde::Serialize;

use super::clause::{Clause, Lit, Var};
use super::plan::{Pairing, ReductionPlan, Relation};
use super::ClauseSet;
use crate::error::{Error, Result};

/// Preprocessing outcome: simplified clauses and every variable eliminated on the way.
#[derive(Clone, Debug, Serialize)]
pub struct Preprocessed {
    pub clauses: ClauseSet,
    /// Eliminated variable ↦ constant or (possibly negated) surviving variable.
    #[serde(skip)]
    pub substitutions: BTreeMap<Var, Lit>,
    /// Fixings and pairings over `p`/`q`; all other factor bits residual.
    pub plan: ReductionPlan,
}

enum Fact {
    Fix(Var, bool),
    Pair(Var, Var, bool),
    /// Drop these bilinear monomials from the clause and assert each is 0.
    Exclude(Vec<Vec<Var>>),
}

fn unsat(set: &ClauseSet, c: &Clause) -> Error {
    Error::precondition(format!(
        "m = {} has no factorization at widths ({}, {}): clause {} reduces to `{c}`",
        set.m, set.n_p, set.n_q, c.id
    ))
}

pub fn preprocess(set: &ClauseSet) -> Result<Preprocessed> {
    let mut clauses: Vec<Clause> = set.clauses.clone();
    let mut subs: BTreeMap<Var, Lit> = BTreeMap::new();
    subs.insert(Var::P(0), Lit::Const(true));
    subs.insert(Var::Q(0), Lit::Const(true));

    'outer: loop {
        let mut k = 0;
        while k < clauses.len() {
            let c = &mut clauses[k];
            if !c.normalize() {
                return Err(unsat(set, c));
            }
            let (lo, hi) = c.bounds();
            if c.constant < lo || c.constant > hi {
                return Err(unsat(set, c));
            }
            if c.terms.is_empty() {
                clauses.remove(k);
                continue;
            }
            if let Some(fact) = derive(c) {
                match fact {
                    Fact::Fix(v, b) => eliminate(&mut clauses, &mut subs, v, Lit::Const(b)),
                    Fact::Pair(x, y, negated) => {
                        let (gone, kept) = elimination_order(x, y);
                        eliminate(&mut clauses, &mut subs, gone, Lit::Var { var: kept, negated });
                    }
                    Fact::Exclude(monos) => {
                        let id = clauses[k].id;
                        for (j, m) in monos.into_iter().enumerate() {
                            clauses[k].terms.remove(&m);
                            let mut ex = Clause::new(id, 0);
                            ex.add(1, m);
                            clauses.insert(k + 1 + j, ex);
                        }
                    }
                }
                continue 'outer;
            }
            k += 1;
        }
        break;
    }

    for (id, c) in clauses.iter_mut().enumerate() {
        c.id = id;
    }
    let clauses = ClauseSet { m: set.m, n_p: set.n_p, n_q: set.n_q, clauses };
    let plan = partial_plan(&clauses, &subs);
    Ok(Preprocessed { clauses, substitutions: subs, plan })
}

/// Carries go first, then `p` in favor of `q`, then the higher index.
fn elimination_order(x: Var, y: Var) -> (Var, Var) {
    let rank = |v: Var| match v {
        Var::Z(..) => 0,
        Var::P(_) => 1,
        Var::Q(_) => 2,
    };
    match rank(x).cmp(&rank(y)) {
        std::cmp::Ordering::Less => (x, y),
        std::cmp::Ordering::Greater => (y, x),
        std::cmp::Ordering::Equal if x > y => (x, y),
        std::cmp::Ordering::Equal => (y, x),
    }
}

fn eliminate(clauses: &mut [Clause], subs: &mut BTreeMap<Var, Lit>, v: Var, lit: Lit) {
    for c in clauses.iter_mut() {
        c.substitute(v, lit);
    }
    for rhs in subs.values_mut() {
        if let Lit::Var { var, negated } = *rhs {
            if var == v {
                *rhs = match lit {
                    Lit::Const(b) => Lit::Const(b ^ negated),
                    Lit::Var { var: w, negated: n } => Lit::Var { var: w, negated: n ^ negated },
                };
            }
        }
    }
    subs.insert(v, lit);
}

fn derive(c: &Clause) -> Option<Fact> {
    let single = |m: &[Var]| m.len() == 1;
    let lone_exclusion = c.terms.len() == 1 && c.constant == 0 && c.terms.keys().all(|m| m.len() == 2);

    // R1
    if c.constant == 0 && c.terms.values().all(|&k| k > 0) && !lone_exclusion {
        return Some(force(c.terms.keys().next().unwrap(), false));
    }
    // R5
    if c.terms.len() == 1 {
        let (m, &k) = c.terms.iter().next().unwrap();
        if k == c.constant {
            return Some(force(m, true));
        }
    }
    // R2
    let (lo, hi) = c.bounds();
    for (m, &k) in &c.terms {
        let (lo_if_one, hi_if_one) = if k > 0 { (lo + k, hi) } else { (lo, hi + k) };
        let (lo_if_zero, hi_if_zero) = if k > 0 { (lo, hi - k) } else { (lo - k, hi) };
        let one_ok = (lo_if_one..=hi_if_one).contains(&c.constant);
        let zero_ok = (lo_if_zero..=hi_if_zero).contains(&c.constant);
        match (zero_ok, one_ok) {
            (true, false) if !lone_exclusion => return Some(force(m, false)),
            (false, true) => return Some(force(m, true)),
            _ => {}
        }
    }
    // R3
    let odd: Vec<&Vec<Var>> = c.terms.iter().filter(|(_, &k)| k % 2 != 0).map(|(m, _)| m).collect();
    let parity = c.constant.rem_euclid(2) == 1;
    if odd.len() == 1 && (single(odd[0]) || parity || !lone_exclusion) {
        return Some(force(odd[0], parity));
    }
    // R4
    if odd.len() == 2 && single(odd[0]) && single(odd[1]) {
        let others_are_carries = c.terms.keys().filter(|m| !odd.contains(m)).all(|m| single(m) && m[0].is_carry());
        if others_are_carries {
            return Some(Fact::Pair(odd[0][0], odd[1][0], parity));
        }
    }
    None
}

fn force(m: &[Var], value: bool) -> Fact {
    match (m, value) {
        ([v], b) => Fact::Fix(*v, b),
        ([x, _], true) => Fact::Fix(*x, true),
        (_, false) => Fact::Exclude(vec![m.to_vec()]),
        _ => unreachable!("monomials have degree 1 or 2"),
    }
}

fn partial_plan(set: &ClauseSet, subs: &BTreeMap<Var, Lit>) -> ReductionPlan {
    let mut plan = ReductionPlan::default();
    for v in set.factor_vars() {
        match subs.get(&v) {
            Some(Lit::Const(b)) => {
                plan.fixings.insert(v, *b);
            }
            Some(Lit::Var { var, negated }) => plan.pairings.push(Pairing {
                kept: *var,
                dependent: v,
                relation: if *negated { Relation::Negated } else { Relation::Equal },
            }),
            None => plan.residual_free.push(v),
        }
    }
    plan
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vqf::generate_clauses;
    use Var::*;

    fn single(c: Clause) -> Preprocessed {
        preprocess(&ClauseSet { m: 0, n_p: 0, n_q: 0, clauses: vec![c] }).unwrap()
    }

    #[test]
    fn elementary_rules() {
        let r = single(Clause::from_terms(0, &[(1, &[P(1), Q(1)])], 1));
        assert_eq!(r.substitutions[&P(1)], Lit::Const(true));
        assert_eq!(r.substitutions[&Q(1)], Lit::Const(true));

        let r = single(Clause::from_terms(0, &[(1, &[P(1)]), (1, &[Q(1)])], 0));
        assert_eq!(r.substitutions[&P(1)], Lit::Const(false));
        assert_eq!(r.substitutions[&Q(1)], Lit::Const(false));

        let r = single(Clause::from_terms(0, &[(1, &[P(1)]), (1, &[Q(1)])], 1));
        assert_eq!(r.substitutions[&P(1)], Lit::Var { var: Q(1), negated: true });
        assert!(r.clauses.clauses.is_empty());
    }

    #[test]
    fn exclusions_are_split_off() {
        let r = single(Clause::from_terms(4, &[(1, &[P(2), Q(3)]), (1, &[Z(2, 4)])], 0));
        assert_eq!(r.substitutions[&Z(2, 4)], Lit::Const(false));
        assert_eq!(r.clauses.clauses, vec![Clause::from_terms(0, &[(1, &[P(2), Q(3)])], 0)]);
    }

    #[test]
    fn worked_clauses_for_77() {
        let r = preprocess(&generate_clauses(77, 7, 4).unwrap()).unwrap();
        assert_eq!(r.substitutions[&P(1)], Lit::Var { var: Q(1), negated: false });
        let col2 = Clause::from_terms(0, &[(1, &[P(2)]), (2, &[Q(1)]), (1, &[Q(2)]), (-2, &[Z(2, 3)])], 1);
        assert!(r.clauses.clauses.iter().any(|c| c.terms == col2.terms && c.constant == 1));
        assert!(r
            .clauses
            .clauses
            .iter()
            .any(|c| c.terms.len() == 1 && c.terms.get(&vec![P(6), Q(3)]) == Some(&1) && c.constant == 0));
    }

    #[test]
    fn contradiction_detected() {
        let bad = ClauseSet { m: 0, n_p: 0, n_q: 0, clauses: vec![Clause::from_terms(0, &[(2, &[P(1)])], 1)] };
        assert!(preprocess(&bad).is_err());
    }
}
