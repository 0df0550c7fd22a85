//! Relations: a variable list bound to a flow matrix, plus the calculus
//! rules that combine them — sequential composition, branch join, and
//! the while-loop fixpoint with local ∞ correction.
//!
//! Row and column `i` both refer to `variables[i]`: the row is the
//! input occurrence, the column the output occurrence of that name.

use std::borrow::Cow;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};

use crate::matrix::FlowMatrix;
use crate::monomial::Monomial;
use crate::semiring::Coefficient;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Relation {
    variables: Vec<String>,
    matrix: FlowMatrix,
}

impl Relation {
    pub fn new(variables: Vec<String>, matrix: FlowMatrix) -> Relation {
        assert_eq!(
            variables.len(),
            matrix.dim(),
            "matrix dimension must match the variable count"
        );
        let mut seen = variables.clone();
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), variables.len(), "variable names must be distinct");
        Relation { variables, matrix }
    }

    /// Identity relation: every variable flows only to itself.
    pub fn identity(variables: Vec<String>) -> Relation {
        let dim = variables.len();
        Relation::new(variables, FlowMatrix::identity(dim))
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn matrix(&self) -> &FlowMatrix {
        &self.matrix
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v == name)
    }

    /// Extends to a superset variable list, identity on fresh names.
    fn extended_to(&self, variables: &[String]) -> Relation {
        let dim = variables.len();
        let mut matrix = FlowMatrix::zero(dim);
        let positions: Vec<Option<usize>> =
            variables.iter().map(|v| self.index_of(v)).collect();
        for (i, pi) in positions.iter().enumerate() {
            for (j, pj) in positions.iter().enumerate() {
                match (pi, pj) {
                    (Some(a), Some(b)) => matrix.set(i, j, self.matrix.get(*a, *b).clone()),
                    _ if i == j => matrix.set(i, j, crate::polynomial::Polynomial::unit()),
                    _ => {}
                }
            }
        }
        Relation::new(variables.to_vec(), matrix)
    }

    /// Brings two relations over a common variable list: the left
    /// relation's variables first, then the right's unseen ones in
    /// order of appearance. When the lists are already equal the
    /// resize is skipped and the inputs are returned as-is — the skip
    /// is observable through the borrowed variants.
    pub fn homogenise<'a>(
        a: &'a Relation,
        b: &'a Relation,
    ) -> (Cow<'a, Relation>, Cow<'a, Relation>) {
        if a.variables == b.variables {
            return (Cow::Borrowed(a), Cow::Borrowed(b));
        }
        let mut union = a.variables.clone();
        for v in &b.variables {
            if !union.contains(v) {
                union.push(v.clone());
            }
        }
        (
            Cow::Owned(a.extended_to(&union)),
            Cow::Owned(b.extended_to(&union)),
        )
    }

    /// Sequential composition: `self` runs first, then `other`.
    pub fn compose(&self, other: &Relation) -> Relation {
        let (a, b) = Relation::homogenise(self, other);
        let matrix = a.matrix.product(&b.matrix);
        Relation::new(a.variables.clone(), matrix)
    }

    /// Branch join: worst case of either relation.
    pub fn sum(&self, other: &Relation) -> Relation {
        let (a, b) = Relation::homogenise(self, other);
        let matrix = a.matrix.sum(&b.matrix);
        Relation::new(a.variables.clone(), matrix)
    }

    /// While-loop rule: close the body matrix, then mark every variable
    /// whose diagonal reaches `p` under some choice fragment as having
    /// no polynomial bound under that same fragment, by joining an
    /// ∞-scalared copy of the fragment into its whole column. Failure
    /// stays local: other variables and other choices are untouched.
    pub fn while_close(&self) -> Relation {
        let closed = self.matrix.closure();
        let dim = closed.dim();
        let mut corrected = closed.clone();
        for i in 0..dim {
            let p_guards: Vec<Vec<crate::monomial::Delta>> = closed
                .get(i, i)
                .monomials()
                .iter()
                .filter(|m| m.scalar == Coefficient::P)
                .map(|m| m.deltas.clone())
                .collect();
            for guard in p_guards {
                for row in 0..dim {
                    corrected.insert_monomial(row, i, Monomial::new(Coefficient::Inf, guard.clone()));
                }
            }
        }
        Relation::new(self.variables.clone(), corrected)
    }
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "variables: {}", self.variables.join(", "))?;
        write!(f, "{}", self.matrix)
    }
}

impl<'de> Deserialize<'de> for Relation {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Relation, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            variables: Vec<String>,
            matrix: FlowMatrix,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.variables.len() != raw.matrix.dim() {
            return Err(D::Error::custom(
                "relation variable count does not match matrix dimension",
            ));
        }
        let mut seen = raw.variables.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != raw.variables.len() {
            return Err(D::Error::custom("relation variables must be distinct"));
        }
        Ok(Relation {
            variables: raw.variables,
            matrix: raw.matrix,
        })
    }
}

/// An ordered collection of relations; folds are sequential because
/// composition order is semantically significant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationList {
    relations: Vec<Relation>,
}

impl RelationList {
    pub fn new(first: Relation) -> RelationList {
        RelationList {
            relations: vec![first],
        }
    }

    pub fn push(&mut self, relation: Relation) {
        self.relations.push(relation);
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// Left-to-right composition into a single relation.
    pub fn compose_all(&self) -> Relation {
        let mut acc = self.relations[0].clone();
        for r in &self.relations[1..] {
            acc = acc.compose(r);
        }
        acc
    }

    /// Join of all relations into a single relation.
    pub fn sum_all(&self) -> Relation {
        let mut acc = self.relations[0].clone();
        for r in &self.relations[1..] {
            acc = acc.sum(r);
        }
        acc
    }
}
