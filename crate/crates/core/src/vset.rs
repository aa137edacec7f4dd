//! Fixed-width vertex sets.

use std::cmp::Ordering;
use std::fmt;

/// Largest number of distinct vertex labels a set can hold.
pub const MAX_VERTICES: usize = 128;

/// A set of vertex labels in `0..128`, stored as a bit mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct VertexSet(pub u128);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn singleton(v: usize) -> Self {
        assert!(v < MAX_VERTICES, "vertex label {v} exceeds the 128-vertex cap");
        VertexSet(1u128 << v)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        it.into_iter().fold(Self::EMPTY, |s, v| s.with(v))
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 >> v & 1 == 1
    }

    pub fn with(self, v: usize) -> Self {
        self | Self::singleton(v)
    }

    pub fn without(self, v: usize) -> Self {
        if v < MAX_VERTICES {
            VertexSet(self.0 & !(1u128 << v))
        } else {
            self
        }
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 127 - self.0.leading_zeros() as usize)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    pub fn iter(self) -> Iter {
        Iter(self.0)
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

pub struct Iter(u128);

impl Iterator for Iter {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let v = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(v)
    }
}

impl IntoIterator for VertexSet {
    type Item = usize;
    type IntoIter = Iter;
    fn into_iter(self) -> Iter {
        self.iter()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(it: I) -> Self {
        VertexSet::from_iter(it)
    }
}

macro_rules! bitop {
    ($tr:ident, $f:ident, $op:tt, $tra:ident, $fa:ident) => {
        impl std::ops::$tr for VertexSet {
            type Output = VertexSet;
            fn $f(self, o: VertexSet) -> VertexSet {
                VertexSet(self.0 $op o.0)
            }
        }
        impl std::ops::$tra for VertexSet {
            fn $fa(&mut self, o: VertexSet) {
                self.0 = self.0 $op o.0;
            }
        }
    };
}
bitop!(BitOr, bitor, |, BitOrAssign, bitor_assign);
bitop!(BitAnd, bitand, &, BitAndAssign, bitand_assign);
bitop!(BitXor, bitxor, ^, BitXorAssign, bitxor_assign);

impl std::ops::Sub for VertexSet {
    type Output = VertexSet;
    fn sub(self, o: VertexSet) -> VertexSet {
        VertexSet(self.0 & !o.0)
    }
}

/// Lexicographic order on the sorted element lists.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        let diff = self.0 ^ other.0;
        if diff == 0 {
            return Ordering::Equal;
        }
        let x = diff.trailing_zeros();
        // Both lists agree below x. The one holding x is smaller unless the
        // other one has run out of elements.
        let (holder, other_bits) = if self.0 >> x & 1 == 1 {
            (Ordering::Less, other.0)
        } else {
            (Ordering::Greater, self.0)
        };
        let other_has_more = x < 127 && other_bits >> (x + 1) != 0;
        if other_has_more {
            holder
        } else {
            holder.reverse()
        }
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Writes `[a, b, c]`.
impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// All subsets of `set` with exactly `size` elements, in lexicographic order.
pub fn subsets_of_size(set: VertexSet, size: usize) -> Vec<VertexSet> {
    let items = set.to_vec();
    let mut out = Vec::new();
    if size > items.len() {
        return out;
    }
    let n = items.len();
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(VertexSet::from_iter(idx.iter().map(|&i| items[i])));
        let mut p = size;
        while p > 0 && idx[p - 1] == n - size + p - 1 {
            p -= 1;
        }
        if p == 0 {
            return out;
        }
        idx[p - 1] += 1;
        for q in p..size {
            idx[q] = idx[q - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[usize]) -> VertexSet {
        VertexSet::from_iter(v.iter().copied())
    }

    #[test]
    fn lexicographic_order_matches_sorted_lists() {
        let sets: Vec<VertexSet> = (0u128..64).map(VertexSet).collect();
        for a in &sets {
            for b in &sets {
                assert_eq!(a.cmp(b), a.to_vec().cmp(&b.to_vec()), "{a:?} {b:?}");
            }
        }
        assert!(s(&[0, 5]) < s(&[1]));
        assert!(s(&[0]) < s(&[0, 1]));
        assert!(s(&[]) < s(&[127]));
        assert!(s(&[126, 127]) > s(&[126]));
    }

    #[test]
    fn subsets_enumerate_combinations() {
        let base = s(&[1, 3, 4, 7]);
        assert_eq!(subsets_of_size(base, 0), vec![VertexSet::EMPTY]);
        assert_eq!(subsets_of_size(base, 2).len(), 6);
        assert_eq!(subsets_of_size(base, 4), vec![base]);
        assert!(subsets_of_size(base, 5).is_empty());
        let twos = subsets_of_size(base, 2);
        let mut sorted = twos.clone();
        sorted.sort();
        assert_eq!(twos, sorted);
    }
}
