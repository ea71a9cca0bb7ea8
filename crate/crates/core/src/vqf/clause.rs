use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

/// A binary variable of the multiplication model.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    P(usize),
    Q(usize),
    /// Carry from column `.0` into column `.1`, weight `2^(.1 − .0)` in the source column.
    Z(usize, usize),
}

impl Var {
    pub fn is_carry(&self) -> bool {
        matches!(self, Var::Z(..))
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::P(i) => write!(f, "p{i}"),
            Var::Q(j) => write!(f, "q{j}"),
            Var::Z(a, b) => write!(f, "z{a}_{b}"),
        }
    }
}

impl Serialize for Var {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Value a variable is replaced by during preprocessing.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Lit {
    Const(bool),
    Var { var: Var, negated: bool },
}

/// Degree-≤2 pseudo-Boolean equation `Σ coef·monomial = constant`.
///
/// Monomials are sorted, duplicate-free variable lists of length 1 or 2
/// (`x·x` collapses to `x`); zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Clause {
    pub id: usize,
    pub terms: BTreeMap<Vec<Var>, i64>,
    pub constant: i64,
}

impl Clause {
    pub fn new(id: usize, constant: i64) -> Self {
        Self { id, terms: BTreeMap::new(), constant }
    }

    /// Builds `Σ terms = constant`.
    pub fn from_terms(id: usize, terms: &[(i64, &[Var])], constant: i64) -> Self {
        let mut c = Self::new(id, constant);
        for (coef, vars) in terms {
            c.add(*coef, vars.to_vec());
        }
        c
    }

    /// Adds `coef·Π vars` to the left-hand side; an empty product moves to the constant.
    pub fn add(&mut self, coef: i64, mut vars: Vec<Var>) {
        if coef == 0 {
            return;
        }
        if vars.is_empty() {
            self.constant -= coef;
            return;
        }
        vars.sort();
        vars.dedup();
        debug_assert!(vars.len() <= 2, "monomial degree above 2");
        let slot = self.terms.entry(vars.clone()).or_insert(0);
        *slot += coef;
        if *slot == 0 {
            self.terms.remove(&vars);
        }
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms.keys().flatten().copied().collect()
    }

    /// `p`/`q` variables in order.
    pub fn factor_vars(&self) -> Vec<Var> {
        self.vars().into_iter().filter(|v| !v.is_carry()).collect()
    }

    pub fn carry_vars(&self) -> Vec<Var> {
        self.vars().into_iter().filter(Var::is_carry).collect()
    }

    pub fn is_tautology(&self) -> bool {
        self.terms.is_empty() && self.constant == 0
    }

    pub fn lhs(&self, value: impl Fn(Var) -> bool) -> i64 {
        self.terms.iter().filter(|(m, _)| m.iter().all(|&v| value(v))).map(|(_, &c)| c).sum()
    }

    pub fn holds(&self, value: impl Fn(Var) -> bool) -> bool {
        self.lhs(value) == self.constant
    }

    /// Smallest and largest attainable left-hand side, each monomial taken independently.
    pub fn bounds(&self) -> (i64, i64) {
        self.terms.values().fold((0, 0), |(lo, hi), &c| if c < 0 { (lo + c, hi) } else { (lo, hi + c) })
    }

    pub fn mentions(&self, v: Var) -> bool {
        self.terms.keys().any(|m| m.contains(&v))
    }

    /// Replaces `v` by `lit` and re-normalizes.
    pub fn substitute(&mut self, v: Var, lit: Lit) {
        if !self.mentions(v) {
            return;
        }
        let old = std::mem::take(&mut self.terms);
        for (mono, coef) in old {
            if !mono.contains(&v) {
                self.add(coef, mono);
                continue;
            }
            let rest: Vec<Var> = mono.into_iter().filter(|&x| x != v).collect();
            match lit {
                Lit::Const(false) => {}
                Lit::Const(true) => self.add(coef, rest),
                Lit::Var { var, negated: false } => {
                    let mut m = rest;
                    m.push(var);
                    self.add(coef, m);
                }
                Lit::Var { var, negated: true } => {
                    let mut m = rest.clone();
                    m.push(var);
                    self.add(coef, rest);
                    self.add(-coef, m);
                }
            }
        }
    }

    /// Divides through by the gcd of the coefficients. Returns `false` if the
    /// constant is not divisible (the clause is unsatisfiable).
    pub fn normalize(&mut self) -> bool {
        let g = self.terms.values().fold(0i64, |g, &c| gcd(g, c.abs()));
        if g <= 1 {
            return g == 1 || self.constant == 0;
        }
        if self.constant % g != 0 {
            return false;
        }
        for c in self.terms.values_mut() {
            *c /= g;
        }
        self.constant /= g;
        true
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 = {}", self.constant);
        }
        for (k, (mono, &c)) in self.terms.iter().enumerate() {
            let name = mono.iter().map(Var::to_string).collect::<Vec<_>>().join("*");
            let sign = if c < 0 { "-" } else { "+" };
            match (k, c.abs()) {
                (0, 1) if c < 0 => write!(f, "-{name}")?,
                (0, 1) => write!(f, "{name}")?,
                (0, a) => write!(f, "{}{a}{name}", if c < 0 { "-" } else { "" })?,
                (_, 1) => write!(f, " {sign} {name}")?,
                (_, a) => write!(f, " {sign} {a}{name}")?,
            }
        }
        write!(f, " = {}", self.constant)
    }
}

struct TermView<'a>(&'a [Var], i64);

impl Serialize for TermView<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(2))?;
        m.serialize_entry("coef", &self.1)?;
        m.serialize_entry("vars", self.0)?;
        m.end()
    }
}

impl Serialize for Clause {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let terms: Vec<TermView<'_>> = self.terms.iter().map(|(m, &c)| TermView(m, c)).collect();
        let mut st = s.serialize_struct("Clause", 3)?;
        st.serialize_field("id", &self.id)?;
        st.serialize_field("terms", &terms)?;
        st.serialize_field("const", &self.constant)?;
        st.end()
    }
}
