//! Monomials: a semiring coefficient guarded by derivation choices.
//!
//! Each derivation point (a binary-operation assignment in the analyzed
//! program) offers [`ALTERNATIVES`] alternative typing rules. A monomial
//! records one coefficient together with the set of choices under which
//! it arises, as a sorted list of [`Delta`] guards. Contradictory guards
//! never coexist: products that would require two different alternatives
//! at the same derivation point collapse to the zero monomial.

use std::cmp::Ordering;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::semiring::Coefficient;

/// Number of alternatives offered at every derivation point.
pub const ALTERNATIVES: u8 = 3;

/// One choice guard: "alternative `alternative` was taken at derivation
/// point `index`".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Delta {
    pub index: usize,
    pub alternative: u8,
}

impl Delta {
    pub fn new(alternative: u8, index: usize) -> Delta {
        assert!(alternative < ALTERNATIVES, "alternative out of range");
        Delta { index, alternative }
    }
}

// The wire form of a delta is the pair [alternative, index].
impl Serialize for Delta {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        (self.alternative, self.index).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Delta {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Delta, D::Error> {
        let (alternative, index) = <(u8, usize)>::deserialize(deserializer)?;
        if alternative >= ALTERNATIVES {
            return Err(D::Error::custom(format!(
                "delta alternative {alternative} out of range"
            )));
        }
        Ok(Delta { index, alternative })
    }
}

/// A total assignment of one alternative to every derivation point
/// `0..k`, i.e. one element of `{0,1,2}^k`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(Vec<u8>);

impl Assignment {
    pub fn new(choices: Vec<u8>) -> Assignment {
        assert!(
            choices.iter().all(|&a| a < ALTERNATIVES),
            "choice out of range"
        );
        Assignment(choices)
    }

    pub fn get(&self, index: usize) -> u8 {
        self.0[index]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    /// True when every delta's choice is the one this assignment makes.
    pub fn satisfies(&self, deltas: &[Delta]) -> bool {
        deltas.iter().all(|d| self.get(d.index) == d.alternative)
    }
}

impl From<Vec<u8>> for Assignment {
    fn from(choices: Vec<u8>) -> Assignment {
        Assignment::new(choices)
    }
}

/// A coefficient together with the derivation choices that produce it.
///
/// Canonical form: deltas strictly ascending by index (at most one per
/// index); the zero monomial has scalar `Zero` and no deltas.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Monomial {
    pub scalar: Coefficient,
    pub deltas: Vec<Delta>,
}

impl Monomial {
    /// Builds a canonical monomial. Deltas are sorted and deduplicated;
    /// passing two different alternatives for the same index is a caller
    /// bug and panics.
    pub fn new(scalar: Coefficient, deltas: Vec<Delta>) -> Monomial {
        if scalar.is_zero() {
            return Monomial::zero();
        }
        let mut deltas = deltas;
        deltas.sort();
        deltas.dedup();
        for pair in deltas.windows(2) {
            assert!(
                pair[0].index != pair[1].index,
                "conflicting deltas at index {}",
                pair[0].index
            );
        }
        Monomial { scalar, deltas }
    }

    /// The zero monomial (absorbing for products, identity for joins).
    pub fn zero() -> Monomial {
        Monomial {
            scalar: Coefficient::Zero,
            deltas: Vec::new(),
        }
    }

    /// The unguarded unit monomial `(m, [])`.
    pub fn unit() -> Monomial {
        Monomial {
            scalar: Coefficient::M,
            deltas: Vec::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.scalar.is_zero()
    }

    /// Product: scalars multiply in the semiring, guard lists merge.
    /// Two different alternatives at the same index are contradictory,
    /// so the product is the zero monomial.
    pub fn product(&self, other: &Monomial) -> Monomial {
        let scalar = self.scalar.times(other.scalar);
        if scalar.is_zero() {
            return Monomial::zero();
        }
        let mut merged = Vec::with_capacity(self.deltas.len() + other.deltas.len());
        let (mut i, mut j) = (0, 0);
        while i < self.deltas.len() && j < other.deltas.len() {
            let (a, b) = (self.deltas[i], other.deltas[j]);
            match a.index.cmp(&b.index) {
                Ordering::Less => {
                    merged.push(a);
                    i += 1;
                }
                Ordering::Greater => {
                    merged.push(b);
                    j += 1;
                }
                Ordering::Equal => {
                    if a.alternative != b.alternative {
                        return Monomial::zero();
                    }
                    merged.push(a);
                    i += 1;
                    j += 1;
                }
            }
        }
        merged.extend_from_slice(&self.deltas[i..]);
        merged.extend_from_slice(&other.deltas[j..]);
        Monomial {
            scalar,
            deltas: merged,
        }
    }

    /// True when `other` is redundant next to `self`: `self`'s guards
    /// are a subset of `other`'s (as index→alternative bindings) and
    /// `self`'s scalar dominates. Whenever `other` applies, `self`
    /// applies with an at-least-as-large coefficient.
    pub fn contains(&self, other: &Monomial) -> bool {
        self.scalar >= other.scalar && is_subset(&self.deltas, &other.deltas)
    }

    /// The scalar if every guard is satisfied by `assignment`, `Zero`
    /// otherwise.
    pub fn eval(&self, assignment: &Assignment) -> Coefficient {
        if assignment.satisfies(&self.deltas) {
            self.scalar
        } else {
            Coefficient::Zero
        }
    }

    /// Canonical monomial order: graded lexicographic on the guard list
    /// (shorter lists first, then (index, alternative) pairs), ties
    /// broken by the scalar. Products with a fixed monomial are weakly
    /// monotone under this order, which the polynomial multiplication
    /// relies on.
    pub fn canonical_cmp(&self, other: &Monomial) -> Ordering {
        self.deltas
            .len()
            .cmp(&other.deltas.len())
            .then_with(|| self.deltas.cmp(&other.deltas))
            .then_with(|| self.scalar.cmp(&other.scalar))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Monomial) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Monomial) -> Ordering {
        self.canonical_cmp(other)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.scalar)?;
        for d in &self.deltas {
            write!(f, "({},{})", d.alternative, d.index)?;
        }
        Ok(())
    }
}

/// Subset test on sorted delta lists, treating them as partial maps
/// index → alternative.
pub(crate) fn is_subset(small: &[Delta], large: &[Delta]) -> bool {
    let mut j = 0;
    for d in small {
        loop {
            if j == large.len() || large[j].index > d.index {
                return false;
            }
            if large[j].index == d.index {
                if large[j].alternative != d.alternative {
                    return false;
                }
                j += 1;
                break;
            }
            j += 1;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semiring::Coefficient::{Inf, M, P, W, Zero};

    fn mono(scalar: Coefficient, deltas: &[(u8, usize)]) -> Monomial {
        Monomial::new(
            scalar,
            deltas.iter().map(|&(a, i)| Delta::new(a, i)).collect(),
        )
    }

    #[test]
    fn product_merges_guards() {
        let a = mono(M, &[(0, 1)]);
        let b = mono(P, &[(2, 3)]);
        assert_eq!(a.product(&b), mono(P, &[(0, 1), (2, 3)]));
    }

    #[test]
    fn product_of_contradictory_guards_is_zero() {
        let a = mono(W, &[(0, 1)]);
        let b = mono(W, &[(1, 1)]);
        assert!(a.product(&b).is_zero());
    }

    #[test]
    fn product_unit_scalar() {
        let a = mono(P, &[]);
        let b = mono(M, &[]);
        assert_eq!(a.product(&b), mono(P, &[]));
    }

    #[test]
    fn product_zero_annihilates_inf() {
        assert!(Monomial::zero().product(&mono(Inf, &[(0, 0)])).is_zero());
    }

    #[test]
    fn contains_examples() {
        assert!(mono(P, &[]).contains(&mono(P, &[(0, 1)])));
        assert!(!mono(M, &[(0, 1)]).contains(&mono(P, &[(0, 1)])));
        assert!(mono(W, &[(0, 1)]).contains(&mono(W, &[(0, 1), (1, 2)])));
        // different alternative at the shared index: not a subset
        assert!(!mono(W, &[(1, 1)]).contains(&mono(W, &[(0, 1), (1, 2)])));
    }

    #[test]
    fn eval_examples() {
        let m = mono(P, &[(0, 1)]);
        assert_eq!(m.eval(&Assignment::new(vec![0, 0])), P);
        assert_eq!(m.eval(&Assignment::new(vec![0, 2])), Zero);
        assert_eq!(mono(W, &[]).eval(&Assignment::new(vec![])), W);
    }

    #[test]
    fn containment_implies_pointwise_domination() {
        let a = mono(W, &[(0, 1)]);
        let b = mono(W, &[(0, 1), (1, 2)]);
        for x in 0..ALTERNATIVES {
            for y in 0..ALTERNATIVES {
                let sigma = Assignment::new(vec![0, x, y]);
                assert!(b.eval(&sigma) <= a.eval(&sigma));
            }
        }
    }

    #[test]
    fn canonical_order_is_graded() {
        let short = mono(P, &[(2, 9)]);
        let long = mono(M, &[(0, 1), (0, 2)]);
        assert!(short < long, "shorter guard lists sort first");
        let a = mono(M, &[(0, 1)]);
        let b = mono(M, &[(1, 1)]);
        assert!(a < b, "same index orders by alternative");
        let c = mono(M, &[(0, 1)]);
        let d = mono(W, &[(0, 1)]);
        assert!(c < d, "ties broken by scalar");
        assert!(Monomial::zero() < a, "empty guard list first");
    }

    #[test]
    #[should_panic(expected = "conflicting deltas")]
    fn conflicting_constructor_deltas_panic() {
        mono(M, &[(0, 1), (1, 1)]);
    }
}
