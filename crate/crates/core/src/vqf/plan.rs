use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use super::assign::valid_assignments;
use super::clause::Var;
use super::loader::append_subset_loader;
use super::preprocess::Preprocessed;
use crate::arithmetic::RegisterLayout;
use crate::circuits::{Circuit, Gate};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Equal,
    Negated,
}

/// `dependent = kept` or `dependent = 1 − kept`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Pairing {
    pub kept: Var,
    pub dependent: Var,
    pub relation: Relation,
}

/// A variable group restricted to an explicit list of valid assignments.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Subset {
    pub clause_id: usize,
    pub vars: Vec<Var>,
    pub assignments: Vec<Vec<bool>>,
}

impl Subset {
    /// `log2(2^k) − log2(#valid)`.
    pub fn bits_removed(&self) -> f64 {
        self.vars.len() as f64 - (self.assignments.len() as f64).log2()
    }
}

/// Initial-state restrictions over the factor bits.
///
/// Fixed, subset, residual and dependent variables are pairwise disjoint. The
/// `kept` side of a pairing is itself a subset or residual variable.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ReductionPlan {
    pub fixings: BTreeMap<Var, bool>,
    pub pairings: Vec<Pairing>,
    pub subsets: Vec<Subset>,
    pub residual_free: Vec<Var>,
}

impl ReductionPlan {
    /// Whether an assignment lies in the plan's support.
    pub fn admits(&self, value: impl Fn(Var) -> bool) -> bool {
        self.fixings.iter().all(|(&v, &b)| value(v) == b)
            && self.pairings.iter().all(|p| {
                let k = value(p.kept);
                value(p.dependent) == (k ^ (p.relation == Relation::Negated))
            })
            && self
                .subsets
                .iter()
                .all(|s| s.assignments.iter().any(|row| s.vars.iter().zip(row).all(|(&v, &b)| value(v) == b)))
    }

    /// `log2` of the number of admitted assignments.
    pub fn log2_support(&self) -> f64 {
        self.residual_free.len() as f64 + self.subsets.iter().map(|s| (s.assignments.len() as f64).log2()).sum::<f64>()
    }

    /// Every variable the plan constrains or leaves free.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut v: BTreeSet<Var> = self.fixings.keys().copied().collect();
        v.extend(self.free_vars());
        v
    }

    /// Variables whose value varies across the support.
    pub fn free_vars(&self) -> Vec<Var> {
        let mut v: BTreeSet<Var> = self.residual_free.iter().copied().collect();
        v.extend(self.subsets.iter().flat_map(|s| s.vars.iter().copied()));
        v.extend(self.pairings.iter().map(|p| p.dependent));
        v.into_iter().collect()
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = BTreeSet::new();
        let groups = self
            .fixings
            .keys()
            .chain(self.pairings.iter().map(|p| &p.dependent))
            .chain(self.subsets.iter().flat_map(|s| &s.vars))
            .chain(&self.residual_free);
        for v in groups {
            if v.is_carry() {
                return Err(Error::invariant(format!("carry {v} in a reduction plan")));
            }
            if !seen.insert(*v) {
                return Err(Error::invariant(format!("{v} appears twice in the plan")));
            }
        }
        for p in &self.pairings {
            if self.fixings.contains_key(&p.kept) || self.pairings.iter().any(|o| o.dependent == p.kept) {
                return Err(Error::invariant(format!("pair source {} is not free", p.kept)));
            }
        }
        for s in &self.subsets {
            if s.assignments.is_empty() {
                return Err(Error::precondition(format!("clause {} admits no assignment", s.clause_id)));
            }
        }
        Ok(())
    }

    /// Keeps only the restrictions that mention `p` bits alone; every other
    /// `p` bit becomes residual. The support projected onto `p` can only grow.
    pub fn restrict_to_p(&self) -> ReductionPlan {
        let is_p = |v: &Var| matches!(v, Var::P(_));
        let mut out = ReductionPlan {
            fixings: self.fixings.iter().filter(|(v, _)| is_p(v)).map(|(&v, &b)| (v, b)).collect(),
            ..Default::default()
        };
        let mut free: BTreeSet<Var> = self.residual_free.iter().copied().filter(is_p).collect();
        for s in &self.subsets {
            if s.vars.iter().all(is_p) {
                out.subsets.push(s.clone());
            } else {
                free.extend(s.vars.iter().copied().filter(is_p));
            }
        }
        let mut orphans = Vec::new();
        for p in self.pairings.iter().filter(|p| is_p(&p.dependent)) {
            let kept_free = free.contains(&p.kept) || out.subsets.iter().any(|s| s.vars.contains(&p.kept));
            if is_p(&p.kept) && kept_free {
                out.pairings.push(*p);
            } else {
                orphans.push(p.dependent);
            }
        }
        free.extend(orphans);
        out.residual_free = free.into_iter().collect();
        out
    }
}

/// Greedy plan: starting from the preprocessing fixings and pairings, pick
/// clauses with at most `max_clause_vars` factor bits and pairwise disjoint
/// factor-bit sets, best `bits_removed` per variable first (ties: lower id).
pub fn detect_reductions(pre: &Preprocessed, max_clause_vars: usize) -> Result<ReductionPlan> {
    if max_clause_vars > super::MAX_TARGET_VARS {
        return Err(Error::resource(format!("max_clause_vars {max_clause_vars} exceeds {}", super::MAX_TARGET_VARS)));
    }
    let mut candidates = Vec::new();
    for c in &pre.clauses.clauses {
        let vars = c.factor_vars();
        if vars.is_empty() || vars.len() > max_clause_vars {
            continue;
        }
        let rows = match valid_assignments(std::slice::from_ref(c), &vars) {
            Ok(rows) => rows,
            Err(Error::Resource(_)) => continue,
            Err(e) => return Err(e),
        };
        let s = Subset { clause_id: c.id, vars, assignments: rows };
        if s.assignments.is_empty() {
            return Err(Error::precondition(format!("clause {} admits no assignment", c.id)));
        }
        if s.bits_removed() > 1e-12 {
            candidates.push(s);
        }
    }
    candidates.sort_by(|a, b| {
        let ra = a.bits_removed() / a.vars.len() as f64;
        let rb = b.bits_removed() / b.vars.len() as f64;
        rb.total_cmp(&ra).then(a.clause_id.cmp(&b.clause_id))
    });

    let mut plan = pre.plan.clone();
    let mut used: BTreeSet<Var> = BTreeSet::new();
    for s in candidates {
        if s.vars.iter().any(|v| used.contains(v)) {
            continue;
        }
        used.extend(s.vars.iter().copied());
        plan.residual_free.retain(|v| !s.vars.contains(v));
        plan.subsets.push(s);
    }
    plan.subsets.sort_by_key(|s| s.clause_id);
    plan.validate()?;
    Ok(plan)
}

/// Qubit assignment of factor bits.
#[derive(Clone, Debug, Default)]
pub struct VarMap(BTreeMap<Var, usize>);

impl VarMap {
    /// `p_i ↦ layout.p[i]`, `q_j ↦ layout.q[j]`.
    pub fn from_layout(layout: &RegisterLayout) -> Self {
        let mut m = BTreeMap::new();
        for (i, q) in layout.p.qubits().into_iter().enumerate() {
            m.insert(Var::P(i), q);
        }
        if let Some(reg) = layout.q {
            for (j, q) in reg.qubits().into_iter().enumerate() {
                m.insert(Var::Q(j), q);
            }
        }
        Self(m)
    }

    pub fn qubit(&self, v: Var) -> Result<usize> {
        self.0.get(&v).copied().ok_or_else(|| Error::precondition(format!("{v} has no qubit in this layout")))
    }

    pub fn var_of(&self, qubit: usize) -> Option<Var> {
        self.0.iter().find(|(_, &q)| q == qubit).map(|(&v, _)| v)
    }
}

/// Compiles a plan into a state-preparation circuit: X for fixings to 1,
/// subset loaders, H on residual bits, then CX (and X when negated) from each
/// kept bit onto its dependent. Search qubits the plan does not mention stay |0⟩.
pub fn plan_to_init(plan: &ReductionPlan, layout: &RegisterLayout) -> Result<Circuit> {
    plan.validate()?;
    let map = VarMap::from_layout(layout);
    let mut c = Circuit::new(layout.total_width);
    for (&v, &b) in &plan.fixings {
        let q = map.qubit(v)?;
        if b {
            c.push(Gate::X(q))?;
        }
    }
    for s in &plan.subsets {
        let qubits = s.vars.iter().map(|&v| map.qubit(v)).collect::<Result<Vec<_>>>()?;
        append_subset_loader(&mut c, &qubits, &s.assignments)?;
    }
    for &v in &plan.residual_free {
        c.push(Gate::H(map.qubit(v)?))?;
    }
    for p in &plan.pairings {
        let (k, d) = (map.qubit(p.kept)?, map.qubit(p.dependent)?);
        c.push(Gate::Cx { control: k, target: d })?;
        if p.relation == Relation::Negated {
            c.push(Gate::X(d))?;
        }
    }
    Ok(c)
}
