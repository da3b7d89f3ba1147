//! Monotone binary transition rules on `Z^d`.
//!
//! A rule is stored canonically as the antichain of its minimal one-sets:
//! subsets of the support whose all-ones state forces output 1. Monotonicity
//! is then structural (output = OR over one-sets of AND over members), and
//! the combinatorial derivatives (zero-sets, spin-flip dual) are hypergraph
//! transversals of the same family.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A lattice displacement; one entry per axis.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Offset(pub Vec<i64>);

impl Offset {
    pub fn new(coords: &[i64]) -> Self {
        Offset(coords.to_vec())
    }

    pub fn dimension(&self) -> usize {
        self.0.len()
    }

    pub fn norm_squared(&self) -> i128 {
        self.0.iter().map(|&c| (c as i128) * (c as i128)).sum()
    }
}

impl fmt::Display for Offset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, c) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RuleError {
    #[error("support offset {0} is missing from the local assignment")]
    MissingOffset(Offset),
    #[error("table is not monotone: f({low:?}) = 1 > 0 = f({high:?}) with low <= high")]
    NotMonotone { low: Vec<bool>, high: Vec<bool> },
    #[error("table describes the constant function {0}")]
    ConstantFunction(u8),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
}

/// A standard transition function: local, monotone, non-constant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneRule {
    dimension: usize,
    support: Vec<Offset>,
    /// Sorted index lists into `support`; the family is a sorted antichain.
    minimal_one_sets: Vec<Vec<usize>>,
    name: Option<String>,
}

impl MonotoneRule {
    /// Build a rule from its minimal one-sets given as offset sets. The
    /// support is the union of the sets, so it is tight by construction.
    pub fn from_one_sets(
        dimension: usize,
        one_sets: &[Vec<Offset>],
        name: Option<&str>,
    ) -> Result<Self, RuleError> {
        let mut support: Vec<Offset> = one_sets.iter().flatten().cloned().collect();
        support.sort();
        support.dedup();
        let index_of: HashMap<&Offset, usize> =
            support.iter().enumerate().map(|(i, o)| (o, i)).collect();
        let sets: Vec<Vec<usize>> = one_sets
            .iter()
            .map(|s| {
                let mut ix: Vec<usize> = s.iter().map(|o| index_of[o]).collect();
                ix.sort_unstable();
                ix.dedup();
                ix
            })
            .collect();
        Self::from_support_indices(dimension, support, sets, name)
    }

    /// Build a rule from an explicit support and one-sets as support indices.
    pub fn from_support_indices(
        dimension: usize,
        support: Vec<Offset>,
        one_sets: Vec<Vec<usize>>,
        name: Option<&str>,
    ) -> Result<Self, RuleError> {
        if dimension == 0 {
            return Err(RuleError::InvalidRule("dimension must be at least 1".into()));
        }
        if support.is_empty() {
            return Err(RuleError::InvalidRule("empty support".into()));
        }
        for o in &support {
            if o.dimension() != dimension {
                return Err(RuleError::InvalidRule(format!(
                    "offset {o} does not have dimension {dimension}"
                )));
            }
        }
        let mut sorted_support = support.clone();
        sorted_support.sort();
        sorted_support.dedup();
        if sorted_support.len() != support.len() {
            return Err(RuleError::InvalidRule("duplicate support offsets".into()));
        }
        // Remap one-set indices onto the canonically sorted support.
        let remap: HashMap<usize, usize> = support
            .iter()
            .enumerate()
            .map(|(old, o)| (old, sorted_support.binary_search(o).unwrap()))
            .collect();
        let mut sets: Vec<Vec<usize>> = Vec::with_capacity(one_sets.len());
        for s in &one_sets {
            if s.is_empty() {
                return Err(RuleError::InvalidRule(
                    "empty minimal one-set would make the function constant 1".into(),
                ));
            }
            let mut ix: Vec<usize> = Vec::with_capacity(s.len());
            for &i in s {
                if i >= support.len() {
                    return Err(RuleError::InvalidRule(format!(
                        "one-set index {i} out of range for support of size {}",
                        support.len()
                    )));
                }
                ix.push(remap[&i]);
            }
            ix.sort_unstable();
            ix.dedup();
            sets.push(ix);
        }
        if sets.is_empty() {
            return Err(RuleError::InvalidRule(
                "empty one-set family would make the function constant 0".into(),
            ));
        }
        sets.sort();
        sets.dedup();
        for a in &sets {
            for b in &sets {
                if a != b && is_subset(a, b) {
                    return Err(RuleError::InvalidRule(format!(
                        "one-sets are not an antichain: {a:?} is contained in {b:?}"
                    )));
                }
            }
        }
        let mut used = vec![false; sorted_support.len()];
        for s in &sets {
            for &i in s {
                used[i] = true;
            }
        }
        if let Some(i) = used.iter().position(|&u| !u) {
            return Err(RuleError::InvalidRule(format!(
                "support offset {} belongs to no minimal one-set",
                sorted_support[i]
            )));
        }
        Ok(MonotoneRule {
            dimension,
            support: sorted_support,
            minimal_one_sets: sets,
            name: name.map(str::to_owned),
        })
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn support(&self) -> &[Offset] {
        &self.support
    }

    pub fn minimal_one_sets(&self) -> &[Vec<usize>] {
        &self.minimal_one_sets
    }

    pub fn one_sets_as_offsets(&self) -> Vec<Vec<Offset>> {
        self.minimal_one_sets
            .iter()
            .map(|s| s.iter().map(|&i| self.support[i].clone()).collect())
            .collect()
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn with_name(mut self, name: &str) -> Self {
        self.name = Some(name.to_owned());
        self
    }

    /// Squared radius: max of the squared Euclidean norms over the support.
    pub fn radius_squared(&self) -> i128 {
        self.support.iter().map(Offset::norm_squared).max().unwrap()
    }

    pub fn radius(&self) -> f64 {
        (self.radius_squared() as f64).sqrt()
    }

    /// Smallest integer r with r >= radius, for locality-cone window sizing.
    pub fn radius_ceil(&self) -> i64 {
        let rho2 = self.radius_squared();
        let mut r = (self.radius() as i64).max(0);
        while (r as i128) * (r as i128) < rho2 {
            r += 1;
        }
        r
    }

    /// Per-axis dependency reach `(backward, forward)`: one step makes a
    /// site read offsets in `[-backward_k, forward_k]` along axis k. Both
    /// entries are at least 0 and at most `radius_ceil`, so windows sized by
    /// the sharp per-axis cone are never larger than the symmetric rule.
    pub fn axis_reach(&self) -> Vec<(i64, i64)> {
        (0..self.dimension)
            .map(|k| {
                let lo = self.support.iter().map(|o| o.0[k]).min().unwrap();
                let hi = self.support.iter().map(|o| o.0[k]).max().unwrap();
                ((-lo).max(0), hi.max(0))
            })
            .collect()
    }

    /// Evaluate on an explicit local assignment.
    pub fn evaluate(&self, local: &HashMap<Offset, bool>) -> Result<bool, RuleError> {
        let mut bits = Vec::with_capacity(self.support.len());
        for o in &self.support {
            match local.get(o) {
                Some(&b) => bits.push(b),
                None => return Err(RuleError::MissingOffset(o.clone())),
            }
        }
        Ok(self.evaluate_bits(&bits))
    }

    /// Evaluate on bits listed in support order.
    pub fn evaluate_bits(&self, bits: &[bool]) -> bool {
        debug_assert_eq!(bits.len(), self.support.len());
        self.minimal_one_sets
            .iter()
            .any(|s| s.iter().all(|&i| bits[i]))
    }

    /// Evaluate on a support bitmask (bit i = value at `support[i]`).
    pub fn evaluate_mask(&self, mask: u32) -> bool {
        self.minimal_one_sets
            .iter()
            .any(|s| s.iter().all(|&i| mask >> i & 1 == 1))
    }

    /// Recover the rule from a full truth table over `support`. Bit `k` of a
    /// row index is the value assigned to `support[k]`. Rejects non-monotone
    /// tables (with a witness pair) and constant tables. The support is
    /// tightened: offsets on which the function does not depend are dropped.
    pub fn from_truth_table(
        dimension: usize,
        support: &[Offset],
        table: &[bool],
    ) -> Result<Self, RuleError> {
        let n = support.len();
        if n > 24 {
            return Err(RuleError::InvalidParameters(format!(
                "support of size {n} is too large for truth-table construction"
            )));
        }
        if table.len() != 1usize << n {
            return Err(RuleError::InvalidParameters(format!(
                "table has {} rows, expected {}",
                table.len(),
                1usize << n
            )));
        }
        // Monotone iff adding any single 1 never flips the output 1 -> 0.
        for mask in 0..table.len() {
            if !table[mask] {
                continue;
            }
            for k in 0..n {
                if mask >> k & 1 == 0 && !table[mask | 1 << k] {
                    let to_bits = |m: usize| (0..n).map(|j| m >> j & 1 == 1).collect();
                    return Err(RuleError::NotMonotone {
                        low: to_bits(mask),
                        high: to_bits(mask | 1 << k),
                    });
                }
            }
        }
        if table.iter().all(|&b| !b) {
            return Err(RuleError::ConstantFunction(0));
        }
        if table.iter().all(|&b| b) {
            return Err(RuleError::ConstantFunction(1));
        }
        // Minimal true points: true rows all of whose one-smaller rows are false.
        let mut one_sets: Vec<Vec<Offset>> = Vec::new();
        for mask in 0..table.len() {
            if !table[mask] {
                continue;
            }
            let minimal =
                (0..n).all(|k| mask >> k & 1 == 0 || !table[mask & !(1usize << k)]);
            if minimal {
                one_sets.push(
                    (0..n)
                        .filter(|&k| mask >> k & 1 == 1)
                        .map(|k| support[k].clone())
                        .collect(),
                );
            }
        }
        Self::from_one_sets(dimension, &one_sets, None)
    }

    /// Minimal zero-sets: minimal transversals of the one-set family. A set
    /// of support offsets forced to 0 kills the output exactly when it meets
    /// every minimal one-set.
    pub fn minimal_zero_sets(&self) -> Vec<Vec<Offset>> {
        self.minimal_zero_set_indices()
            .iter()
            .map(|s| s.iter().map(|&i| self.support[i].clone()).collect())
            .collect()
    }

    pub fn minimal_zero_set_indices(&self) -> Vec<Vec<usize>> {
        minimal_transversals(&self.minimal_one_sets, self.support.len())
    }

    /// Monotone Boolean dual: x -> !f(!x). Its minimal one-sets are the
    /// minimal transversals of this rule's family; applying the operation
    /// twice gives back the original rule.
    pub fn spin_flip_dual(&self) -> MonotoneRule {
        let transversals = self.minimal_zero_set_indices();
        MonotoneRule::from_support_indices(
            self.dimension,
            self.support.clone(),
            transversals,
            self.name.as_deref().map(|n| format!("dual-{n}")).as_deref(),
        )
        .expect("transversal family of a valid rule is a valid rule")
    }

    pub fn is_self_spin_flip(&self) -> bool {
        let dual = self.spin_flip_dual();
        self.support == dual.support && self.minimal_one_sets == dual.minimal_one_sets
    }

    // ----- builders for the rules discussed in the text -----

    /// North-East-Center majority: major(x(0,1), x(1,0), x(0,0)).
    pub fn nec() -> MonotoneRule {
        let n = Offset::new(&[0, 1]);
        let e = Offset::new(&[1, 0]);
        let c = Offset::new(&[0, 0]);
        MonotoneRule::from_one_sets(
            2,
            &[
                vec![n.clone(), e.clone()],
                vec![n, c.clone()],
                vec![e, c],
            ],
            Some("nec"),
        )
        .unwrap()
    }

    /// North-South max-of-mins: max(min(x(0,0), x(1,0)), min(x(0,1), x(1,1))).
    pub fn nsmm() -> MonotoneRule {
        MonotoneRule::from_one_sets(
            2,
            &[
                vec![Offset::new(&[0, 0]), Offset::new(&[1, 0])],
                vec![Offset::new(&[0, 1]), Offset::new(&[1, 1])],
            ],
            Some("nsmm"),
        )
        .unwrap()
    }

    /// Majority of three min-pairs; its sigma_0 is empty but no direction
    /// grows, so neither velocity condition holds.
    pub fn non_example() -> MonotoneRule {
        let a = [Offset::new(&[0, 2]), Offset::new(&[-1, 2])];
        let b = [Offset::new(&[2, 0]), Offset::new(&[2, -1])];
        let c = [Offset::new(&[0, -1]), Offset::new(&[-1, 0])];
        let union = |x: &[Offset], y: &[Offset]| {
            x.iter().chain(y).cloned().collect::<Vec<_>>()
        };
        MonotoneRule::from_one_sets(
            2,
            &[union(&a, &b), union(&a, &c), union(&b, &c)],
            Some("non-example"),
        )
        .unwrap()
    }

    /// min over the first `a` coordinates of max over the rest, on the unit
    /// cube {0,1}^d. Minimal one-sets pick one completion per prefix.
    pub fn min_max(dimension: usize, a: usize) -> Result<MonotoneRule, RuleError> {
        if a == 0 || a >= dimension {
            return Err(RuleError::InvalidParameters(format!(
                "min_max requires 0 < a < d, got a = {a}, d = {dimension}"
            )));
        }
        let prefixes = 1usize << a;
        let suffixes = 1usize << (dimension - a);
        let cube_point = |prefix: usize, suffix: usize| {
            let mut coords = Vec::with_capacity(dimension);
            for k in 0..a {
                coords.push((prefix >> k & 1) as i64);
            }
            for k in 0..dimension - a {
                coords.push((suffix >> k & 1) as i64);
            }
            Offset(coords)
        };
        // One minimal one-set per function prefix -> chosen suffix.
        let mut one_sets = Vec::new();
        let mut choice = vec![0usize; prefixes];
        loop {
            one_sets.push(
                (0..prefixes)
                    .map(|p| cube_point(p, choice[p]))
                    .collect::<Vec<_>>(),
            );
            let mut k = 0;
            loop {
                if k == prefixes {
                    let name = format!("min-max-{dimension}-{a}");
                    return MonotoneRule::from_one_sets(dimension, &one_sets, Some(&name));
                }
                choice[k] += 1;
                if choice[k] < suffixes {
                    break;
                }
                choice[k] = 0;
                k += 1;
            }
        }
    }

    /// The identity rule x -> x(0).
    pub fn identity(dimension: usize) -> MonotoneRule {
        MonotoneRule::from_one_sets(
            dimension,
            &[vec![Offset(vec![0; dimension])]],
            Some("identity"),
        )
        .unwrap()
    }

    /// Look a builder rule up by its CLI name.
    pub fn builtin(name: &str) -> Option<MonotoneRule> {
        match name {
            "nec" => Some(Self::nec()),
            "nsmm" => Some(Self::nsmm()),
            "non-example" => Some(Self::non_example()),
            "identity" => Some(Self::identity(2)),
            "min-max" => Self::min_max(2, 1).ok(),
            _ => None,
        }
    }
}

fn is_subset(a: &[usize], b: &[usize]) -> bool {
    a.iter().all(|x| b.binary_search(x).is_ok())
}

/// All minimal hitting sets of `edges` over `0..universe`, by exhaustive
/// branch and bound on the first unhit edge. Supports here are tiny, so the
/// exponential worst case is irrelevant.
pub fn minimal_transversals(edges: &[Vec<usize>], universe: usize) -> Vec<Vec<usize>> {
    let mut found: Vec<BTreeSet<usize>> = Vec::new();
    let mut partial: BTreeSet<usize> = BTreeSet::new();
    fn recurse(
        edges: &[Vec<usize>],
        partial: &mut BTreeSet<usize>,
        found: &mut Vec<BTreeSet<usize>>,
    ) {
        if found.iter().any(|t| t.iter().all(|v| partial.contains(v))) {
            return; // any completion is a superset of a known transversal
        }
        let unhit = edges
            .iter()
            .find(|e| !e.iter().any(|v| partial.contains(v)));
        match unhit {
            None => found.push(partial.clone()),
            Some(edge) => {
                for &v in edge {
                    partial.insert(v);
                    recurse(edges, partial, found);
                    partial.remove(&v);
                }
            }
        }
    }
    recurse(edges, &mut partial, &mut found);
    // Keep the antichain of minimal sets.
    let mut minimal: Vec<Vec<usize>> = Vec::new();
    for (i, t) in found.iter().enumerate() {
        let dominated = found
            .iter()
            .enumerate()
            .any(|(j, s)| j != i && s.len() <= t.len() && s.is_subset(t) && s != t);
        if !dominated {
            minimal.push(t.iter().copied().collect());
        }
    }
    minimal.sort();
    minimal.dedup();
    debug_assert!(minimal.iter().all(|s| s.iter().all(|&v| v < universe)));
    minimal
}

// ----- rule definition files -----

#[derive(Debug, Serialize, Deserialize)]
pub struct RuleFile {
    pub dimension: usize,
    pub support: Vec<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub minimal_one_sets: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub truth_table: Option<Vec<TruthTableEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

/// One truth-table row; `assignment` lists bits in support order, leftmost
/// character for `support[0]`.
#[derive(Debug, Serialize, Deserialize)]
pub struct TruthTableEntry {
    pub assignment: String,
    pub output: u8,
}

impl RuleFile {
    pub fn into_rule(self) -> Result<MonotoneRule, RuleError> {
        let support: Vec<Offset> = self.support.iter().map(|c| Offset(c.clone())).collect();
        match (self.minimal_one_sets, self.truth_table) {
            (Some(sets), None) => {
                let rule = MonotoneRule::from_support_indices(
                    self.dimension,
                    support,
                    sets,
                    self.name.as_deref(),
                )?;
                Ok(rule)
            }
            (None, Some(entries)) => {
                let n = support.len();
                let mut table = vec![None; 1usize << n];
                for e in &entries {
                    if e.assignment.len() != n {
                        return Err(RuleError::InvalidParameters(format!(
                            "assignment '{}' does not have {} bits",
                            e.assignment, n
                        )));
                    }
                    let mut mask = 0usize;
                    for (k, ch) in e.assignment.chars().enumerate() {
                        match ch {
                            '1' => mask |= 1 << k,
                            '0' => {}
                            _ => {
                                return Err(RuleError::InvalidParameters(format!(
                                    "assignment '{}' contains '{ch}'",
                                    e.assignment
                                )))
                            }
                        }
                    }
                    table[mask] = Some(e.output != 0);
                }
                let table: Option<Vec<bool>> = table.into_iter().collect();
                let table = table.ok_or_else(|| {
                    RuleError::InvalidParameters(format!(
                        "truth table does not cover all {} assignments",
                        1usize << n
                    ))
                })?;
                let rule = MonotoneRule::from_truth_table(self.dimension, &support, &table)?;
                Ok(match self.name {
                    Some(name) => rule.with_name(&name),
                    None => rule,
                })
            }
            (Some(_), Some(_)) => Err(RuleError::InvalidParameters(
                "rule file has both minimal_one_sets and truth_table".into(),
            )),
            (None, None) => Err(RuleError::InvalidParameters(
                "rule file needs minimal_one_sets or truth_table".into(),
            )),
        }
    }

    pub fn from_rule(rule: &MonotoneRule) -> RuleFile {
        RuleFile {
            dimension: rule.dimension(),
            support: rule.support().iter().map(|o| o.0.clone()).collect(),
            minimal_one_sets: Some(rule.minimal_one_sets().to_vec()),
            truth_table: None,
            name: rule.name().map(str::to_owned),
        }
    }
}

/// Deterministic small random rule for property tests: a handful of offsets
/// within a box, a random antichain over them.
pub fn random_rule(seed: u64, dimension: usize, max_support: usize) -> MonotoneRule {
    use crate::lattice::rng::mix64;
    let mut state = seed;
    let mut next = move || {
        state = state.wrapping_add(0x9e37_79b9_7f4a_7c15);
        mix64(state)
    };
    loop {
        let support_size = 2 + (next() as usize) % (max_support.max(3) - 1);
        let mut offsets: BTreeSet<Offset> = BTreeSet::new();
        while offsets.len() < support_size {
            let coords: Vec<i64> = (0..dimension).map(|_| (next() % 5) as i64 - 2).collect();
            offsets.insert(Offset(coords));
        }
        let offsets: Vec<Offset> = offsets.into_iter().collect();
        let n = offsets.len();
        let n_sets = 1 + (next() as usize) % 3;
        let mut sets: Vec<Vec<usize>> = Vec::new();
        for _ in 0..n_sets {
            let size = 1 + (next() as usize) % n.min(3);
            let mut s: BTreeSet<usize> = BTreeSet::new();
            while s.len() < size {
                s.insert((next() as usize) % n);
            }
            sets.push(s.into_iter().collect());
        }
        // Reduce to the antichain of minimal sets.
        sets.sort_by_key(|s| s.len());
        let mut antichain: Vec<Vec<usize>> = Vec::new();
        for s in sets {
            if !antichain.iter().any(|t| is_subset(t, &s)) {
                antichain.push(s);
            }
        }
        let used: BTreeSet<usize> = antichain.iter().flatten().copied().collect();
        let offsets: Vec<Offset> = used.iter().map(|&i| offsets[i].clone()).collect();
        let remap: HashMap<usize, usize> =
            used.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let antichain: Vec<Vec<usize>> = antichain
            .iter()
            .map(|s| s.iter().map(|i| remap[i]).collect())
            .collect();
        if let Ok(rule) =
            MonotoneRule::from_support_indices(dimension, offsets, antichain, None)
        {
            return rule;
        }
    }
}
