//! Polynomials: canonically ordered, containment-free monomial lists.
//!
//! A polynomial is the entry type of flow matrices. Its value under a
//! total choice assignment is the join of its monomials' values; the
//! canonical form keeps that function while storing no monomial that is
//! dominated by another (containment elimination happens at insertion,
//! so every stored polynomial is canonical). The zero polynomial is the
//! empty list.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::monomial::{Assignment, Monomial};
use crate::semiring::Coefficient;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    monomials: Vec<Monomial>,
}

impl Polynomial {
    /// The zero polynomial.
    pub fn zero() -> Polynomial {
        Polynomial {
            monomials: Vec::new(),
        }
    }

    /// The multiplicative unit `(m, [])`.
    pub fn unit() -> Polynomial {
        Polynomial {
            monomials: vec![Monomial::unit()],
        }
    }

    /// Canonicalizes an arbitrary monomial list: drops zeros, sorts
    /// under the canonical monomial order, eliminates contained
    /// monomials.
    pub fn from_monomials(monomials: Vec<Monomial>) -> Polynomial {
        let mut monomials = monomials;
        monomials.retain(|m| !m.is_zero());
        monomials.sort();
        Polynomial::from_sorted(monomials)
    }

    /// Canonicalization for a list already sorted under the canonical
    /// order (zero monomials allowed; they are skipped). In a sorted
    /// sequence a later monomial can only contain an earlier one when
    /// both carry the same guard list, and equal guard lists are
    /// adjacent, so one backward check against the last kept entry
    /// suffices; containment *by* earlier entries needs the full scan.
    fn from_sorted(monomials: Vec<Monomial>) -> Polynomial {
        let mut kept: Vec<Monomial> = Vec::with_capacity(monomials.len());
        for m in monomials {
            if m.is_zero() {
                continue;
            }
            if kept.iter().any(|k| k.contains(&m)) {
                continue;
            }
            if let Some(last) = kept.last() {
                if m.contains(last) {
                    kept.pop();
                }
            }
            kept.push(m);
        }
        Polynomial { monomials: kept }
    }

    pub fn from_monomial(m: Monomial) -> Polynomial {
        Polynomial::from_monomials(vec![m])
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    /// Join of two polynomials: evaluates to the join of the inputs
    /// under every assignment. Sorted-merge plus insertion-time
    /// containment elimination.
    pub fn add(&self, other: &Polynomial) -> Polynomial {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let mut merged = Vec::with_capacity(self.monomials.len() + other.monomials.len());
        let (mut i, mut j) = (0, 0);
        while i < self.monomials.len() && j < other.monomials.len() {
            if self.monomials[i] <= other.monomials[j] {
                merged.push(self.monomials[i].clone());
                i += 1;
            } else {
                merged.push(other.monomials[j].clone());
                j += 1;
            }
        }
        merged.extend_from_slice(&self.monomials[i..]);
        merged.extend_from_slice(&other.monomials[j..]);
        Polynomial::from_sorted(merged)
    }

    /// Adds a single monomial.
    pub fn insert(&self, m: Monomial) -> Polynomial {
        self.add(&Polynomial::from_monomial(m))
    }

    /// Product: evaluates to the join over all pairwise monomial
    /// products. For a fixed left monomial whose derivation points are
    /// disjoint from the right list's, the products against an
    /// ascending right list come out already ascending, so each row is
    /// near-sorted and only needs a cheap fix-up pass before the
    /// containment-eliminating merge. (When index sets overlap — loop
    /// closure squares a matrix against itself — order can locally
    /// invert, hence the sort.)
    pub fn times(&self, other: &Polynomial) -> Polynomial {
        let mut acc = Polynomial::zero();
        for a in &self.monomials {
            let mut row: Vec<Monomial> = Vec::with_capacity(other.monomials.len());
            for b in &other.monomials {
                let p = a.product(b);
                if !p.is_zero() {
                    row.push(p);
                }
            }
            row.sort();
            acc = acc.add(&Polynomial::from_sorted(row));
        }
        acc
    }

    /// Join of all monomial values under `assignment`.
    pub fn eval(&self, assignment: &Assignment) -> Coefficient {
        self.monomials
            .iter()
            .map(|m| m.eval(assignment))
            .fold(Coefficient::Zero, Coefficient::join)
    }

    /// Largest derivation-point index mentioned by any guard, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.monomials
            .iter()
            .flat_map(|m| m.deltas.iter().map(|d| d.index))
            .max()
    }

    /// Iterates over all guard indices (with repetition across monomials).
    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.monomials
            .iter()
            .flat_map(|m| m.deltas.iter().map(|d| d.index))
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        for (i, m) in self.monomials.iter().enumerate() {
            if i > 0 {
                f.write_str("+")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

impl Serialize for Polynomial {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.monomials.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Polynomial {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Polynomial, D::Error> {
        // Re-canonicalize on load so hand-edited report files cannot
        // smuggle in non-canonical polynomials.
        let monomials = Vec::<Monomial>::deserialize(deserializer)?;
        Ok(Polynomial::from_monomials(monomials))
    }
}
