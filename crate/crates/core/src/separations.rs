//! Separations of a graph and the lattice they form.

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::parse_two_bracketed;
use crate::vset::{subsets_of_size, VertexSet};
use std::cmp::Ordering;
use std::fmt;

/// An oriented separation `(A, B)`: `A` is the small side, `B` the big side.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Separation {
    pub small: VertexSet,
    pub big: VertexSet,
}

impl Separation {
    pub fn new(small: VertexSet, big: VertexSet) -> Self {
        Separation { small, big }
    }

    pub fn separator(&self) -> VertexSet {
        self.small & self.big
    }

    pub fn order(&self) -> usize {
        self.separator().len()
    }

    /// `A \ B`.
    pub fn strict_small(&self) -> VertexSet {
        self.small - self.big
    }

    /// `B \ A`.
    pub fn strict_big(&self) -> VertexSet {
        self.big - self.small
    }

    pub fn inverse(&self) -> Self {
        Separation { small: self.big, big: self.small }
    }

    /// `(A, B) ≤ (C, D)` iff `A ⊆ C` and `B ⊇ D`.
    pub fn leq(&self, other: &Separation) -> bool {
        self.small.is_subset(other.small) && other.big.is_subset(self.big)
    }

    pub fn lt(&self, other: &Separation) -> bool {
        self != other && self.leq(other)
    }

    pub fn infimum(&self, other: &Separation) -> Separation {
        Separation { small: self.small & other.small, big: self.big | other.big }
    }

    pub fn supremum(&self, other: &Separation) -> Separation {
        Separation { small: self.small | other.small, big: self.big & other.big }
    }

    /// Whether this pair is a separation of `g`.
    pub fn is_separation_of(&self, g: &Graph) -> bool {
        if self.small | self.big != g.vertices() {
            return false;
        }
        let b_only = self.strict_big();
        self.strict_small().iter().all(|v| !g.neighbours(v).intersects(b_only))
    }

    /// The orientation whose small side holds the least vertex outside the
    /// separator. Used as the key of the unoriented separation.
    pub fn canonical(&self) -> Separation {
        let outside = (self.small | self.big) - self.separator();
        match outside.min() {
            Some(x) if !self.small.contains(x) => self.inverse(),
            Some(_) => *self,
            None => {
                if self.big < self.small {
                    self.inverse()
                } else {
                    *self
                }
            }
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical() == *self
    }

    /// Sort key used for enumeration: order first, then canonical form.
    pub fn sort_key(&self) -> (usize, VertexSet, VertexSet) {
        (self.order(), self.small, self.big)
    }

    pub fn parse(line: &str, lineno: usize) -> Result<Separation> {
        let (a, b) = parse_two_bracketed(line, lineno)?;
        Ok(Separation::new(a, b))
    }
}

impl fmt::Display for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.small, self.big)
    }
}

impl fmt::Debug for Separation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.small, self.big)
    }
}

pub fn order(s: &Separation) -> usize {
    s.order()
}

pub fn infimum(a: &Separation, b: &Separation) -> Separation {
    a.infimum(b)
}

pub fn supremum(a: &Separation, b: &Separation) -> Separation {
    a.supremum(b)
}

pub fn leq(a: &Separation, b: &Separation) -> bool {
    a.leq(b)
}

/// Whether some orientations of the two unoriented separations are comparable.
pub fn is_nested(a: &Separation, b: &Separation) -> bool {
    let bi = b.inverse();
    a.leq(b) || a.leq(&bi) || b.leq(a) || bi.leq(a)
}

/// `|s ∧ t| + |s ∨ t| = |s| + |t|`.
pub fn check_submodular_equality(a: &Separation, b: &Separation) -> bool {
    a.infimum(b).order() + a.supremum(b).order() == a.order() + b.order()
}

/// The unoriented separations of order `< k`, each in canonical orientation,
/// sorted by order and then canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationSystem {
    pub k: usize,
    pub members: Vec<Separation>,
}

impl SeparationSystem {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Both orientations of every member.
    pub fn oriented(&self) -> Vec<Separation> {
        let mut out = Vec::with_capacity(2 * self.members.len());
        for s in &self.members {
            out.push(*s);
            if s.inverse() != *s {
                out.push(s.inverse());
            }
        }
        out
    }

    pub fn position(&self, s: &Separation) -> Option<usize> {
        let c = s.canonical();
        self.members.binary_search_by(|m| cmp_key(m, &c)).ok()
    }

    pub fn contains(&self, s: &Separation) -> bool {
        self.position(s).is_some()
    }
}

fn cmp_key(a: &Separation, b: &Separation) -> Ordering {
    a.sort_key().cmp(&b.sort_key())
}

/// Enumerates `S_k(g)`: for each separator `S` with `|S| < k`, the components
/// of `g - S` are distributed over the two sides in every way.
pub fn enumerate_separations(g: &Graph, k: usize) -> SeparationSystem {
    let v = g.vertices();
    let mut members = Vec::new();
    for size in 0..k.min(v.len() + 1) {
        for sep in subsets_of_size(v, size) {
            let comps = g.components_within(v - sep);
            if comps.is_empty() {
                members.push(Separation::new(sep, sep));
                continue;
            }
            let rest = &comps[1..];
            assert!(rest.len() < 40, "too many components to distribute");
            for mask in 0u64..(1u64 << rest.len()) {
                let mut a = sep | comps[0];
                let mut b = sep;
                for (i, c) in rest.iter().enumerate() {
                    if mask >> i & 1 == 1 {
                        a |= *c;
                    } else {
                        b |= *c;
                    }
                }
                members.push(Separation::new(a, b));
            }
        }
    }
    members.sort_by(cmp_key);
    debug_assert!(members.iter().all(|s| s.is_canonical()));
    SeparationSystem { k, members }
}

/// Checks that `s` is a separation of `g` and returns an error otherwise.
pub fn require_separation(g: &Graph, s: &Separation) -> Result<()> {
    if s.is_separation_of(g) {
        Ok(())
    } else {
        Err(Error::Precondition(format!("{s} is not a separation of the graph")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named::*;

    fn vs(v: &[usize]) -> VertexSet {
        VertexSet::from_iter(v.iter().copied())
    }

    fn sep(a: &[usize], b: &[usize]) -> Separation {
        Separation::new(vs(a), vs(b))
    }

    #[test]
    fn small_enumerations() {
        let k4 = complete(4);
        let s = enumerate_separations(&k4, 3);
        // (A, V) for |A| ≤ 2: 1 + 4 + 6.
        assert_eq!(s.len(), 11);
        assert!(s.members.iter().all(|m| m.small == k4.vertices() || m.big == k4.vertices()));
        let k1 = enumerate_separations(&k4, 1);
        assert_eq!(k1.members, vec![sep(&[0, 1, 2, 3], &[])]);
        let k2 = enumerate_separations(&complete(2), 2);
        assert_eq!(k2.len(), 3);
    }

    #[test]
    fn order_and_lattice_examples() {
        let v = vs(&[0, 1, 2, 3]);
        assert_eq!(Separation::new(VertexSet::EMPTY, v).order(), 0);
        assert_eq!(Separation::new(vs(&[0, 1]), v).order(), 2);
        let s = sep(&[0, 1], &[1, 2, 3]);
        let t = sep(&[0, 1, 2], &[2, 3]);
        assert_eq!(s.infimum(&t), s);
        assert_eq!(s.supremum(&s), s);
        let bottom = Separation::new(VertexSet::EMPTY, v);
        assert_eq!(bottom.infimum(&t), bottom);
        assert!(bottom.leq(&t));
        assert!(is_nested(&s, &t));
        let c1 = sep(&[0, 1, 2], &[2, 3, 0]);
        let c2 = sep(&[1, 2, 3], &[3, 0, 1]);
        assert!(!is_nested(&c1, &c2));
        assert!(c1.is_separation_of(&cycle(4)));
    }

    #[test]
    fn canonical_form_is_stable() {
        let s = sep(&[1, 2, 3], &[0, 1]);
        assert_eq!(s.canonical(), s.inverse());
        assert_eq!(s.inverse().canonical(), s.inverse());
        let full = sep(&[0, 1], &[0, 1]);
        assert_eq!(full.canonical(), full);
    }

    #[test]
    fn submodular_equality_on_k4() {
        let s = enumerate_separations(&complete(4), 5).oriented();
        for a in &s {
            for b in &s {
                assert!(check_submodular_equality(a, b));
            }
        }
    }
}
