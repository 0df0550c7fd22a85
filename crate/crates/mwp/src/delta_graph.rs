//! Layered bookkeeping of forbidden choice fragments.
//!
//! Every monomial that appears with an ∞ coefficient contributes its
//! guard here: the guard is a *forbidden* fragment — any total
//! assignment matching it makes some flow unbounded. The graph keeps
//! guards in layers by size, eliminates redundant ones on insertion
//! (a weaker fragment subsumes every refinement of it), and fuses
//! triples that jointly cover all alternatives at one derivation point.
//! The passing-choice set is computed from this structure directly,
//! never by enumerating the full 3^n assignment space.

use std::collections::{BTreeMap, BTreeSet};

use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::monomial::{is_subset, Assignment, Delta, ALTERNATIVES};

/// A forbidden fragment: sorted, duplicate-index-free delta list.
pub type Guard = Vec<Delta>;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DeltaGraph {
    layers: BTreeMap<usize, BTreeSet<Guard>>,
}

impl DeltaGraph {
    pub fn new() -> DeltaGraph {
        DeltaGraph::default()
    }

    /// Collects the guards of all ∞ monomials of `polys`.
    pub fn from_inf_guards<'a>(polys: impl Iterator<Item = &'a crate::polynomial::Polynomial>) -> DeltaGraph {
        let mut g = DeltaGraph::new();
        for poly in polys {
            for m in poly.monomials() {
                if m.scalar == crate::semiring::Coefficient::Inf {
                    g.insert(m.deltas.clone());
                }
            }
        }
        g
    }

    pub fn is_empty(&self) -> bool {
        self.layers.values().all(|l| l.is_empty())
    }

    /// The empty guard forbids every assignment.
    pub fn forbids_everything(&self) -> bool {
        self.layers.get(&0).is_some_and(|l| !l.is_empty())
    }

    pub fn guards(&self) -> impl Iterator<Item = &Guard> {
        self.layers.values().flatten()
    }

    pub fn guard_count(&self) -> usize {
        self.layers.values().map(|l| l.len()).sum()
    }

    /// Layer of a guard is its size.
    pub fn layer(&self, size: usize) -> impl Iterator<Item = &Guard> {
        self.layers.get(&size).into_iter().flatten()
    }

    /// Number of indices at which two guards differ, counting an index
    /// bound on only one side as differing.
    pub fn edge_weight(a: &Guard, b: &Guard) -> usize {
        let mut differing = 0;
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].index.cmp(&b[j].index) {
                std::cmp::Ordering::Less => {
                    differing += 1;
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    differing += 1;
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    if a[i].alternative != b[j].alternative {
                        differing += 1;
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        differing + (a.len() - i) + (b.len() - j)
    }

    /// Adds a forbidden fragment unless an existing guard already
    /// subsumes it; removes every stored guard the new one subsumes.
    pub fn insert(&mut self, mut guard: Guard) {
        guard.sort();
        guard.dedup();
        debug_assert!(
            guard.windows(2).all(|w| w[0].index != w[1].index),
            "guard with conflicting deltas"
        );
        if self.guards().any(|g| is_subset(g, &guard)) {
            return;
        }
        for layer in self.layers.values_mut() {
            layer.retain(|g| !is_subset(&guard, g));
        }
        self.layers.entry(guard.len()).or_default().insert(guard);
    }

    /// Fixpoint simplification: whenever three guards in one layer are
    /// identical except at one shared index and jointly cover all
    /// alternatives there, the choice at that index is irrelevant —
    /// replace the triple by the common remainder. The forbidden set is
    /// unchanged.
    pub fn fusion(&mut self) {
        loop {
            let Some((triple, fused)) = self.find_fusible() else {
                return;
            };
            for g in triple {
                if let Some(layer) = self.layers.get_mut(&g.len()) {
                    layer.remove(&g);
                }
            }
            self.insert(fused);
        }
    }

    fn find_fusible(&self) -> Option<(Vec<Guard>, Guard)> {
        for layer in self.layers.values() {
            // bucket by (guard minus one delta, index of that delta)
            let mut buckets: BTreeMap<(Guard, usize), Vec<(u8, &Guard)>> = BTreeMap::new();
            for guard in layer {
                for (pos, d) in guard.iter().enumerate() {
                    let mut rest = guard.clone();
                    rest.remove(pos);
                    buckets
                        .entry((rest, d.index))
                        .or_default()
                        .push((d.alternative, guard));
                }
            }
            for ((rest, _), members) in buckets {
                let alts: BTreeSet<u8> = members.iter().map(|&(a, _)| a).collect();
                if alts.len() == ALTERNATIVES as usize {
                    let triple = members.into_iter().map(|(_, g)| g.clone()).collect();
                    return Some((triple, rest));
                }
            }
        }
        None
    }

    /// True when `assignment` matches at least one forbidden fragment.
    pub fn forbids(&self, assignment: &Assignment) -> bool {
        self.guards().any(|g| assignment.satisfies(g))
    }

    /// The set of total assignments over `0..num_indices` matching no
    /// stored guard, as disjoint product-form fragments. Indices that
    /// appear in no guard stay free and are never enumerated.
    pub fn passing_assignments(&self, num_indices: usize) -> ChoiceSet {
        let guards: Vec<Guard> = self.guards().cloned().collect();
        let mut fragments = Vec::new();
        split_passing(&guards, BTreeMap::new(), &mut fragments);
        ChoiceSet {
            num_indices,
            fragments,
        }
    }
}

/// Recursively splits on the first constrained index: fixing one
/// alternative per branch keeps the emitted fragments pairwise
/// disjoint. A branch dies as soon as some guard becomes fully
/// satisfied.
fn split_passing(guards: &[Guard], fixed: BTreeMap<usize, u8>, out: &mut Vec<ChoiceFragment>) {
    if guards.iter().any(|g| g.is_empty()) {
        return;
    }
    let Some(split_index) = guards.first().map(|g| g[0].index) else {
        out.push(ChoiceFragment { fixed });
        return;
    };
    for alt in 0..ALTERNATIVES {
        let mut satisfied = false;
        let mut rest: Vec<Guard> = Vec::with_capacity(guards.len());
        for g in guards {
            match g.iter().position(|d| d.index == split_index) {
                Some(pos) if g[pos].alternative == alt => {
                    if g.len() == 1 {
                        satisfied = true;
                        break;
                    }
                    let mut shorter = g.clone();
                    shorter.remove(pos);
                    rest.push(shorter);
                }
                Some(_) => {} // guard can no longer match on this branch
                None => rest.push(g.clone()),
            }
        }
        if satisfied {
            continue;
        }
        let mut fixed = fixed.clone();
        fixed.insert(split_index, alt);
        split_passing(&rest, fixed, out);
    }
}

/// A partial assignment; indices it does not fix range over all
/// alternatives.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct ChoiceFragment {
    fixed: BTreeMap<usize, u8>,
}

impl ChoiceFragment {
    pub fn fixed(&self) -> &BTreeMap<usize, u8> {
        &self.fixed
    }

    pub fn matches(&self, assignment: &Assignment) -> bool {
        self.fixed.iter().all(|(&i, &a)| assignment.get(i) == a)
    }
}

/// The passing-choice set in compact product form: a disjoint union of
/// fragments over `{0,1,2}^num_indices`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChoiceSet {
    num_indices: usize,
    fragments: Vec<ChoiceFragment>,
}

impl ChoiceSet {
    /// Every assignment passes.
    pub fn all(num_indices: usize) -> ChoiceSet {
        ChoiceSet {
            num_indices,
            fragments: vec![ChoiceFragment {
                fixed: BTreeMap::new(),
            }],
        }
    }

    /// No assignment passes.
    pub fn none(num_indices: usize) -> ChoiceSet {
        ChoiceSet {
            num_indices,
            fragments: Vec::new(),
        }
    }

    pub fn num_indices(&self) -> usize {
        self.num_indices
    }

    pub fn fragments(&self) -> &[ChoiceFragment] {
        &self.fragments
    }

    pub fn is_empty(&self) -> bool {
        self.fragments.is_empty()
    }

    /// Number of passing assignments, without expanding them.
    pub fn count(&self) -> u128 {
        self.fragments
            .iter()
            .map(|f| {
                let free = self.num_indices - f.fixed.len();
                (ALTERNATIVES as u128).saturating_pow(free as u32)
            })
            .fold(0u128, u128::saturating_add)
    }

    pub fn contains(&self, assignment: &Assignment) -> bool {
        self.fragments.iter().any(|f| f.matches(assignment))
    }

    /// Materializes every passing assignment. Callers are expected to
    /// check [`ChoiceSet::count`] against their own budget first.
    pub fn expand(&self) -> Vec<Assignment> {
        let mut out = Vec::new();
        for fragment in &self.fragments {
            let free: Vec<usize> = (0..self.num_indices)
                .filter(|i| !fragment.fixed.contains_key(i))
                .collect();
            let combos = (ALTERNATIVES as usize).pow(free.len() as u32);
            for mut c in 0..combos {
                let mut choices = vec![0u8; self.num_indices];
                for (&i, &a) in &fragment.fixed {
                    choices[i] = a;
                }
                for &i in free.iter().rev() {
                    choices[i] = (c % ALTERNATIVES as usize) as u8;
                    c /= ALTERNATIVES as usize;
                }
                out.push(Assignment::new(choices));
            }
        }
        out
    }
}

// Debug serialization: layer size → list of guards.
impl Serialize for DeltaGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.layers.len()))?;
        for (size, layer) in &self.layers {
            let guards: Vec<&Guard> = layer.iter().collect();
            map.serialize_entry(size, &guards)?;
        }
        map.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn guard(deltas: &[(u8, usize)]) -> Guard {
        deltas.iter().map(|&(a, i)| Delta::new(a, i)).collect()
    }

    fn assignments(k: usize) -> Vec<Assignment> {
        let total = (ALTERNATIVES as usize).pow(k as u32);
        (0..total)
            .map(|mut n| {
                let mut v = vec![0u8; k];
                for slot in v.iter_mut().rev() {
                    *slot = (n % ALTERNATIVES as usize) as u8;
                    n /= ALTERNATIVES as usize;
                }
                Assignment::new(v)
            })
            .collect()
    }

    #[test]
    fn insert_basic() {
        let mut g = DeltaGraph::new();
        g.insert(guard(&[(0, 1)]));
        assert_eq!(g.layer(1).count(), 1);
        assert_eq!(g.guard_count(), 1);
    }

    #[test]
    fn insert_subsumed_is_dropped() {
        let mut g = DeltaGraph::new();
        g.insert(guard(&[(0, 1)]));
        let before = g.clone();
        g.insert(guard(&[(0, 1), (1, 2)]));
        assert_eq!(g, before);
    }

    #[test]
    fn insert_removes_supersets() {
        let mut g = DeltaGraph::new();
        g.insert(guard(&[(0, 1), (1, 2)]));
        g.insert(guard(&[(0, 1)]));
        assert_eq!(g.guard_count(), 1);
        assert_eq!(g.layer(1).count(), 1);
        assert_eq!(g.layer(2).count(), 0);
    }

    #[test]
    fn empty_guard_forbids_everything() {
        let mut g = DeltaGraph::new();
        g.insert(guard(&[(0, 1)]));
        g.insert(guard(&[]));
        assert!(g.forbids_everything());
        assert_eq!(g.guard_count(), 1);
        assert!(g.passing_assignments(3).is_empty());
    }

    #[test]
    fn fusion_full_cover_collapses() {
        let mut g = DeltaGraph::new();
        g.insert(guard(&[(0, 4)]));
        g.insert(guard(&[(1, 4)]));
        g.insert(guard(&[(2, 4)]));
        g.fusion();
        assert!(g.forbids_everything());
    }

    #[test]
    fn fusion_incomplete_cover_is_noop() {
        let mut g = DeltaGraph::new();
        g.insert(guard(&[(0, 4)]));
        g.insert(guard(&[(1, 4)]));
        let before = g.clone();
        g.fusion();
        assert_eq!(g, before);
    }

    #[test]
    fn fusion_preserves_forbidden_set() {
        // guards over indices {0,1}: triple covering index 1 under (0,0)
        let mut g = DeltaGraph::new();
        g.insert(guard(&[(0, 0), (0, 1)]));
        g.insert(guard(&[(0, 0), (1, 1)]));
        g.insert(guard(&[(0, 0), (2, 1)]));
        g.insert(guard(&[(2, 0), (1, 1)]));
        let before: Vec<bool> = assignments(2).iter().map(|s| g.forbids(s)).collect();
        g.fusion();
        let after: Vec<bool> = assignments(2).iter().map(|s| g.forbids(s)).collect();
        assert_eq!(before, after);
        // the fused guard [(0,0)] lives in layer 1 now
        assert!(g.layer(1).any(|x| *x == guard(&[(0, 0)])));
    }

    #[test]
    fn passing_empty_graph_is_everything() {
        let g = DeltaGraph::new();
        let p = g.passing_assignments(3);
        assert_eq!(p.count(), 27);
        assert_eq!(p.fragments().len(), 1);
        assert_eq!(p.expand().len(), 27);
    }

    #[test]
    fn passing_single_guard() {
        let mut g = DeltaGraph::new();
        g.insert(guard(&[(0, 1)]));
        let p = g.passing_assignments(2);
        assert_eq!(p.count(), 6);
        let expanded: BTreeSet<Assignment> = p.expand().into_iter().collect();
        let brute: BTreeSet<Assignment> = assignments(2)
            .into_iter()
            .filter(|s| !g.forbids(s))
            .collect();
        assert_eq!(expanded, brute);
    }

    #[test]
    fn passing_agrees_with_enumeration() {
        let mut g = DeltaGraph::new();
        g.insert(guard(&[(0, 0), (1, 2)]));
        g.insert(guard(&[(2, 1)]));
        g.insert(guard(&[(1, 0), (0, 3)]));
        g.fusion();
        let k = 4;
        let p = g.passing_assignments(k);
        let expanded: BTreeSet<Assignment> = p.expand().into_iter().collect();
        let brute: BTreeSet<Assignment> = assignments(k)
            .into_iter()
            .filter(|s| !g.forbids(s))
            .collect();
        assert_eq!(expanded, brute);
        assert_eq!(p.count(), expanded.len() as u128);
        // partition: every assignment is passing xor forbidden
        for s in assignments(k) {
            assert_ne!(p.contains(&s), g.forbids(&s));
        }
    }

    #[test]
    fn free_indices_are_not_enumerated() {
        let mut g = DeltaGraph::new();
        g.insert(guard(&[(0, 0)]));
        // 40 indices would be 3^40 assignments; the fragment count stays tiny
        let p = g.passing_assignments(40);
        assert_eq!(p.fragments().len(), 2);
        assert_eq!(p.count(), 2 * 3u128.pow(39));
    }

    #[test]
    fn layer_discipline() {
        let mut g = DeltaGraph::new();
        g.insert(guard(&[(0, 0), (1, 2)]));
        g.insert(guard(&[(2, 1)]));
        g.fusion();
        for (size, _) in g.layers.iter() {
            for gd in g.layer(*size) {
                assert_eq!(gd.len(), *size);
            }
        }
    }

    #[test]
    fn edge_weight_counts_differing_indices() {
        let a = guard(&[(0, 1), (1, 2)]);
        let b = guard(&[(0, 1), (2, 2)]);
        assert_eq!(DeltaGraph::edge_weight(&a, &b), 1);
        let c = guard(&[(0, 3)]);
        assert_eq!(DeltaGraph::edge_weight(&a, &c), 3);
        assert_eq!(DeltaGraph::edge_weight(&a, &a), 0);
    }
}
