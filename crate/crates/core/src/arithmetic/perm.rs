use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use super::classical::{bit_length, gcd, mod_pow};
use crate::error::{Error, Result};

pub type IndexMap = Arc<dyn Fn(usize) -> usize + Send + Sync>;

/// A named bijection on `[0, 2^width)`, used as an opaque oracle gate.
#[derive(Clone)]
pub struct BasisPermutation {
    name: String,
    width: usize,
    forward: IndexMap,
    inverse: Option<(String, IndexMap)>,
}

impl BasisPermutation {
    pub fn new(name: impl Into<String>, width: usize, forward: IndexMap) -> Self {
        Self { name: name.into(), width, forward, inverse: None }
    }

    pub fn with_inverse(mut self, name: impl Into<String>, inverse: IndexMap) -> Self {
        self.inverse = Some((name.into(), inverse));
        self
    }

    /// Registers the permutation as its own inverse.
    pub fn self_inverse(mut self) -> Self {
        self.inverse = Some((self.name.clone(), Arc::clone(&self.forward)));
        self
    }

    /// `(input, y) ↦ (input, y ⊕ f(input))` on an `in_width + out_width`
    /// register with the input in the low bits. Self-inverse by construction;
    /// `f` must return values below `2^out_width`.
    pub fn xor_oracle<F>(name: impl Into<String>, in_width: usize, out_width: usize, f: F) -> Self
    where
        F: Fn(usize) -> usize + Send + Sync + 'static,
    {
        let in_mask = (1usize << in_width) - 1;
        let out_mask = (1usize << out_width) - 1;
        let forward: IndexMap = Arc::new(move |i| i ^ ((f(i & in_mask) & out_mask) << in_width));
        Self::new(name, in_width + out_width, forward).self_inverse()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn apply(&self, index: usize) -> usize {
        (self.forward)(index)
    }

    pub fn has_inverse(&self) -> bool {
        self.inverse.is_some()
    }

    pub fn inverse(&self) -> Result<BasisPermutation> {
        let (inv_name, inv) = self
            .inverse
            .as_ref()
            .ok_or_else(|| Error::precondition(format!("permutation {} has no registered inverse", self.name)))?;
        Ok(BasisPermutation {
            name: inv_name.clone(),
            width: self.width,
            forward: Arc::clone(inv),
            inverse: Some((self.name.clone(), Arc::clone(&self.forward))),
        })
    }

    /// Exhaustive bijection check, limited to width ≤ 16.
    pub fn check_bijection(&self) -> Result<()> {
        if self.width > 16 {
            return Err(Error::resource("bijection check is limited to 16 qubits"));
        }
        let n = 1usize << self.width;
        let mut seen = vec![false; n];
        for i in 0..n {
            let j = self.apply(i);
            if j >= n || seen[j] {
                return Err(Error::invariant(format!("{} is not a bijection (image of {i} is {j})", self.name)));
            }
            seen[j] = true;
        }
        Ok(())
    }
}

impl fmt::Debug for BasisPermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BasisPermutation")
            .field("name", &self.name)
            .field("width", &self.width)
            .field("invertible", &self.inverse.is_some())
            .finish()
    }
}

impl PartialEq for BasisPermutation {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name && self.width == other.width
    }
}

/// Resolves permutation names that appear in circuit text.
///
/// Built-in families, with the output register width fixed to `bit_length(m)`
/// and the input register taking the remaining low qubits:
///
/// * `mod_m=<m>`: `|p⟩|y⟩ ↦ |p⟩|y ⊕ (m mod p)⟩`, with `p = 0` mapping to
///   `m mod 2^width(out)`;
/// * `modexp_x=<x>_m=<m>`: `|r⟩|y⟩ ↦ |r⟩|y ⊕ (x^r mod m)⟩`, requiring
///   `gcd(x, m) = 1`.
///
/// Both are self-inverse. Custom permutations can be registered by name.
#[derive(Clone, Debug, Default)]
pub struct PermRegistry {
    custom: HashMap<String, Arc<BasisPermutation>>,
}

impl PermRegistry {
    pub fn register(&mut self, perm: BasisPermutation) {
        if let Ok(inv) = perm.inverse() {
            if inv.name() != perm.name() {
                self.custom.insert(inv.name().to_string(), Arc::new(inv));
            }
        }
        self.custom.insert(perm.name().to_string(), Arc::new(perm));
    }

    pub fn resolve(&self, name: &str, width: usize) -> Result<Arc<BasisPermutation>> {
        if let Some(p) = self.custom.get(name) {
            if p.width() != width {
                return Err(Error::precondition(format!(
                    "permutation {name} has width {}, applied to {width} qubits",
                    p.width()
                )));
            }
            return Ok(Arc::clone(p));
        }
        if let Some(m) = name.strip_prefix("mod_m=") {
            let m = parse_u(m, name)?;
            let out = bit_length(m);
            let input = width
                .checked_sub(out)
                .filter(|&w| w > 0)
                .ok_or_else(|| Error::precondition(format!("{name} needs more than {out} qubits")))?;
            return Ok(Arc::new(mod_permutation(m, input, out)?));
        }
        if let Some(rest) = name.strip_prefix("modexp_x=") {
            let (x, m) = rest
                .split_once("_m=")
                .ok_or_else(|| Error::precondition(format!("malformed permutation name {name}")))?;
            let (x, m) = (parse_u(x, name)?, parse_u(m, name)?);
            let out = bit_length(m);
            let input = width
                .checked_sub(out)
                .filter(|&w| w > 0)
                .ok_or_else(|| Error::precondition(format!("{name} needs more than {out} qubits")))?;
            return modexp_permutation(x, m, input, out).map(Arc::new);
        }
        Err(Error::precondition(format!("unknown permutation `{name}`")))
    }
}

fn parse_u(s: &str, name: &str) -> Result<u64> {
    s.parse::<u64>().map_err(|_| Error::precondition(format!("malformed permutation name {name}")))
}

pub(crate) fn mod_permutation(m: u64, in_width: usize, out_width: usize) -> Result<BasisPermutation> {
    if out_width < bit_length(m) {
        return Err(Error::precondition(format!("output register of {out_width} qubits cannot hold {m}")));
    }
    check_width(in_width + out_width)?;
    let sentinel = (m % (1u64 << out_width)) as usize;
    Ok(BasisPermutation::xor_oracle(format!("mod_m={m}"), in_width, out_width, move |p| {
        if p == 0 {
            sentinel
        } else {
            (m % p as u64) as usize
        }
    }))
}

pub(crate) fn modexp_permutation(x: u64, m: u64, in_width: usize, out_width: usize) -> Result<BasisPermutation> {
    if m < 2 || gcd(x, m) != 1 {
        return Err(Error::precondition(format!("gcd({x}, {m}) must be 1 with m ≥ 2")));
    }
    if out_width < bit_length(m) {
        return Err(Error::precondition(format!("output register of {out_width} qubits cannot hold values mod {m}")));
    }
    check_width(in_width + out_width)?;
    Ok(BasisPermutation::xor_oracle(format!("modexp_x={x}_m={m}"), in_width, out_width, move |r| {
        mod_pow(x, r as u64, m) as usize
    }))
}

fn check_width(w: usize) -> Result<()> {
    if w > 40 {
        return Err(Error::resource(format!("permutation width {w} exceeds 40 qubits")));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins_are_bijections_and_self_inverse() {
        let reg = PermRegistry::default();
        let p = reg.resolve("mod_m=15", 7).unwrap();
        p.check_bijection().unwrap();
        assert_eq!(p.inverse().unwrap().name(), "mod_m=15");
        let e = reg.resolve("modexp_x=7_m=15", 8).unwrap();
        e.check_bijection().unwrap();
        for i in 0..256 {
            assert_eq!(e.apply(e.apply(i)), i);
        }
    }

    #[test]
    fn resolve_errors() {
        let reg = PermRegistry::default();
        assert!(reg.resolve("mod_m=15", 4).is_err());
        assert!(reg.resolve("modexp_x=5_m=15", 8).is_err());
        assert!(reg.resolve("nope", 3).is_err());
        assert!(reg.resolve("modexp_x=7", 8).is_err());
    }

    #[test]
    fn custom_without_inverse() {
        let mut reg = PermRegistry::default();
        let swap = BasisPermutation::new("swap2", 2, Arc::new(|i| ((i & 1) << 1) | (i >> 1)));
        swap.check_bijection().unwrap();
        assert!(swap.inverse().is_err());
        reg.register(swap);
        assert!(reg.resolve("swap2", 2).is_ok());
        assert!(reg.resolve("swap2", 3).is_err());
    }

    #[test]
    fn non_bijection_detected() {
        let bad = BasisPermutation::new("const", 2, Arc::new(|_| 0));
        assert!(bad.check_bijection().is_err());
    }
}
