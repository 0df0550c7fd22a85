//! Dense square matrices of polynomials — the carrier of variable flows.
//!
//! Rows are source (input) variable slots, columns are target (output)
//! slots. The analysis routinely produces dense matrices, so storage is
//! a plain row-major vector with no sparsity tricks.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::monomial::Monomial;
use crate::polynomial::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowMatrix {
    dim: usize,
    entries: Vec<Polynomial>,
}

impl FlowMatrix {
    /// All-zero matrix.
    pub fn zero(dim: usize) -> FlowMatrix {
        FlowMatrix {
            dim,
            entries: vec![Polynomial::zero(); dim * dim],
        }
    }

    /// Identity: `(m, [])` on the diagonal, zero elsewhere.
    pub fn identity(dim: usize) -> FlowMatrix {
        let mut m = FlowMatrix::zero(dim);
        for i in 0..dim {
            m.set(i, i, Polynomial::unit());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Polynomial>>) -> FlowMatrix {
        let dim = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == dim),
            "flow matrix must be square"
        );
        FlowMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn get(&self, row: usize, col: usize) -> &Polynomial {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Polynomial) {
        self.entries[row * self.dim + col] = value;
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Polynomial]> {
        self.entries.chunks(self.dim.max(1))
    }

    /// Entrywise join. Dimension mismatch is a caller contract
    /// violation (homogenisation must run first) and panics.
    pub fn sum(&self, other: &FlowMatrix) -> FlowMatrix {
        assert_eq!(
            self.dim, other.dim,
            "internal error: matrix sum over mismatched dimensions"
        );
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| a.add(b))
            .collect();
        FlowMatrix {
            dim: self.dim,
            entries,
        }
    }

    /// Matrix product over the polynomial semiring: entry (i,j) is the
    /// join over k of `self[i,k] * other[k,j]`.
    pub fn product(&self, other: &FlowMatrix) -> FlowMatrix {
        assert_eq!(
            self.dim, other.dim,
            "internal error: matrix product over mismatched dimensions"
        );
        let mut out = FlowMatrix::zero(self.dim);
        for i in 0..self.dim {
            for j in 0..self.dim {
                let mut acc = Polynomial::zero();
                for k in 0..self.dim {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    acc = acc.add(&a.times(b));
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    /// Least fixpoint of `S ↦ S ⊕ S·self` seeded with `I ⊕ self`;
    /// equals the join of all powers of `self`. Terminates because the
    /// entries range over finitely many canonical polynomials; the
    /// iteration cap is a safety net that must never fire.
    pub fn closure(&self) -> FlowMatrix {
        let cap = self.dim * self.dim * self.distinct_indices().len().max(1) + 1;
        let mut s = FlowMatrix::identity(self.dim).sum(self);
        for _ in 0..cap {
            let next = s.sum(&s.product(self));
            if next == s {
                return s;
            }
            s = next;
        }
        panic!("internal error: matrix closure did not stabilize within {cap} iterations");
    }

    /// Derivation-point indices mentioned anywhere in the matrix.
    pub fn distinct_indices(&self) -> BTreeSet<usize> {
        self.entries.iter().flat_map(|p| p.indices()).collect()
    }

    pub fn entries(&self) -> impl Iterator<Item = &Polynomial> {
        self.entries.iter()
    }

    /// Monomials of every entry in column `col`, paired with their row.
    pub fn column(&self, col: usize) -> impl Iterator<Item = (usize, &Polynomial)> {
        (0..self.dim).map(move |row| (row, self.get(row, col)))
    }

    /// Joins `monomial` into the entry at (row, col).
    pub fn insert_monomial(&mut self, row: usize, col: usize, monomial: Monomial) {
        let updated = self.get(row, col).insert(monomial);
        self.set(row, col, updated);
    }
}

impl fmt::Display for FlowMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rendered: Vec<Vec<String>> = self
            .rows()
            .map(|r| r.iter().map(|p| p.to_string()).collect())
            .collect();
        let width = rendered
            .iter()
            .flatten()
            .map(|s| s.len())
            .max()
            .unwrap_or(1);
        for row in &rendered {
            f.write_str("[ ")?;
            for (j, cell) in row.iter().enumerate() {
                if j > 0 {
                    f.write_str("  ")?;
                }
                write!(f, "{cell:width$}")?;
            }
            f.write_str(" ]\n")?;
        }
        Ok(())
    }
}

impl Serialize for FlowMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<&[Polynomial]> = self.rows().take(self.dim).collect();
        rows.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FlowMatrix {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<FlowMatrix, D::Error> {
        let rows = Vec::<Vec<Polynomial>>::deserialize(deserializer)?;
        let dim = rows.len();
        if rows.iter().any(|r| r.len() != dim) {
            return Err(D::Error::custom("flow matrix must be square"));
        }
        Ok(FlowMatrix::from_rows(rows))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::{Assignment, Delta};
    use crate::semiring::Coefficient::{self, M, P, W};

    fn mono(scalar: Coefficient, deltas: &[(u8, usize)]) -> Monomial {
        Monomial::new(
            scalar,
            deltas.iter().map(|&(a, i)| Delta::new(a, i)).collect(),
        )
    }

    #[test]
    fn identity_shape() {
        let empty = FlowMatrix::identity(0);
        assert_eq!(empty.dim(), 0);
        let i2 = FlowMatrix::identity(2);
        assert_eq!(*i2.get(0, 0), Polynomial::unit());
        assert_eq!(*i2.get(1, 1), Polynomial::unit());
        assert!(i2.get(0, 1).is_zero());
        assert!(i2.get(1, 0).is_zero());
    }

    #[test]
    fn identity_is_product_unit() {
        let mut a = FlowMatrix::zero(3);
        a.set(0, 1, Polynomial::from_monomial(mono(W, &[(0, 0)])));
        a.set(1, 2, Polynomial::from_monomial(mono(P, &[(1, 1)])));
        a.set(2, 0, Polynomial::from_monomial(mono(M, &[])));
        let i = FlowMatrix::identity(3);
        assert_eq!(i.product(&a), a);
        assert_eq!(a.product(&i), a);
    }

    #[test]
    fn sum_laws() {
        let mut a = FlowMatrix::zero(2);
        a.set(0, 1, Polynomial::from_monomial(mono(M, &[])));
        let z = FlowMatrix::zero(2);
        assert_eq!(z.sum(&a), a);
        assert_eq!(a.sum(&a), a);
    }

    #[test]
    fn product_with_zero_annihilates() {
        let mut a = FlowMatrix::zero(2);
        a.set(0, 1, Polynomial::from_monomial(mono(P, &[])));
        let z = FlowMatrix::zero(2);
        assert_eq!(a.product(&z), z);
    }

    #[test]
    fn closure_of_zero_and_identity() {
        assert_eq!(FlowMatrix::zero(3).closure(), FlowMatrix::identity(3));
        assert_eq!(FlowMatrix::identity(3).closure(), FlowMatrix::identity(3));
    }

    #[test]
    fn closure_of_single_edge() {
        // x --m--> y, nothing else: closure is I plus that edge.
        let mut a = FlowMatrix::zero(2);
        a.set(0, 1, Polynomial::unit());
        let mut expected = FlowMatrix::identity(2);
        expected.set(0, 1, Polynomial::unit());
        assert_eq!(a.closure(), expected);
    }

    #[test]
    fn closure_accumulates_paths() {
        // chain x -> y -> z of m edges: closure adds the x -> z path.
        // This also exercises the delta-free cap (must not fire).
        let mut a = FlowMatrix::zero(3);
        a.set(0, 1, Polynomial::unit());
        a.set(1, 2, Polynomial::unit());
        let c = a.closure();
        assert_eq!(*c.get(0, 2), Polynomial::unit());
        // fixpoint equation: closure = I + closure * a
        let again = FlowMatrix::identity(3).sum(&c.product(&a));
        assert_eq!(c, again);
    }

    #[test]
    fn product_matches_hand_expansion() {
        // [[m, w(0,0)], [0, p]] * [[m, 0], [m(1,1), m]]
        let mut a = FlowMatrix::zero(2);
        a.set(0, 0, Polynomial::unit());
        a.set(0, 1, Polynomial::from_monomial(mono(W, &[(0, 0)])));
        a.set(1, 1, Polynomial::from_monomial(mono(P, &[])));
        let mut b = FlowMatrix::zero(2);
        b.set(0, 0, Polynomial::unit());
        b.set(1, 0, Polynomial::from_monomial(mono(M, &[(1, 1)])));
        b.set(1, 1, Polynomial::unit());
        let c = a.product(&b);
        // entry (0,0) = m*m + w(0,0)*m(1,1) = m + w(0,0)(1,1)
        let expected00 = Polynomial::from_monomials(vec![mono(M, &[]), mono(W, &[(0, 0), (1, 1)])]);
        assert_eq!(*c.get(0, 0), expected00);
        // entry (0,1) = w(0,0)*m = w(0,0)
        assert_eq!(*c.get(0, 1), Polynomial::from_monomial(mono(W, &[(0, 0)])));
        // entry (1,0) = p*m(1,1) = p(1,1); entry (1,1) = p
        assert_eq!(*c.get(1, 0), Polynomial::from_monomial(mono(P, &[(1, 1)])));
        assert_eq!(*c.get(1, 1), Polynomial::from_monomial(mono(P, &[])));
        // spot-check by evaluation against the defining sum
        for s0 in 0..3u8 {
            for s1 in 0..3u8 {
                let sigma = Assignment::new(vec![s0, s1]);
                for i in 0..2 {
                    for j in 0..2 {
                        let mut want = Coefficient::Zero;
                        for k in 0..2 {
                            want = want
                                .join(a.get(i, k).eval(&sigma).times(b.get(k, j).eval(&sigma)));
                        }
                        assert_eq!(c.get(i, j).eval(&sigma), want);
                    }
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "mismatched dimensions")]
    fn dimension_mismatch_panics() {
        FlowMatrix::zero(2).sum(&FlowMatrix::zero(3));
    }

    #[test]
    fn dense_matrix_round_trips_operations() {
        // every entry non-zero; no operation may assume sparsity
        let dim = 3;
        let mut a = FlowMatrix::zero(dim);
        for i in 0..dim {
            for j in 0..dim {
                let alt = ((i + j) % 3) as u8;
                a.set(
                    i,
                    j,
                    Polynomial::from_monomials(vec![mono(M, &[]), mono(P, &[(alt, i * dim + j)])]),
                );
            }
        }
        let c = a.closure();
        assert!(c.entries().all(|p| !p.is_zero()));
        let fix = FlowMatrix::identity(dim).sum(&c.product(&a));
        assert_eq!(c, fix);
    }

    #[test]
    fn serde_nested_lists() {
        let mut a = FlowMatrix::zero(2);
        a.set(0, 1, Polynomial::from_monomial(mono(W, &[(2, 0)])));
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"[[[],[{"scalar":"w","deltas":[[2,0]]}]],[[],[]]]"#);
        let back: FlowMatrix = serde_json::from_str(&json).unwrap();
        assert_eq!(back, a);
    }
}
