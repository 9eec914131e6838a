//! Binary relations on `{1..n}` stored as one bitmask row per element.

use std::fmt;

/// Largest supported size; rows are single `u64` words indexed by `1..=n`.
pub const MAX_SIZE: usize = 62;

/// A relation `a ◁ b` on `{1..n}`; bit `b` of row `a` is set iff `a ◁ b`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Relation {
    n: usize,
    rows: Vec<u64>,
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Relation(n={}, {:?})", self.n, self.pairs())
    }
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_SIZE, "relation size {n} exceeds {MAX_SIZE}");
        Relation {
            n,
            rows: vec![0; n + 1],
        }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut r = Self::empty(n);
        for (a, b) in pairs {
            r.insert(a, b);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.rows[a] >> b & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, a: usize, b: usize) -> bool {
        debug_assert!((1..=self.n).contains(&a) && (1..=self.n).contains(&b));
        let fresh = !self.contains(a, b);
        self.rows[a] |= 1 << b;
        fresh
    }

    pub fn remove(&mut self, a: usize, b: usize) {
        self.rows[a] &= !(1 << b);
    }

    /// Bitmask of the `b` with `a ◁ b`.
    #[inline]
    pub fn row(&self, a: usize) -> u64 {
        self.rows[a]
    }

    /// All pairs `(a, b)` with `a ◁ b`, sorted lexicographically.
    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 1..=self.n {
            let mut rest = self.rows[a];
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                out.push((a, b));
                rest &= rest - 1;
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    pub fn is_subset(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & !b == 0)
    }

    pub fn is_disjoint(&self, other: &Relation) -> bool {
        self.rows.iter().zip(&other.rows).all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation {
            n: self.n,
            rows: self.rows.iter().zip(&other.rows).map(|(a, b)| a | b).collect(),
        }
    }

    /// Pairs `a ◁ b` with `a < b`.
    pub fn increasing(&self) -> Relation {
        let mut r = self.clone();
        for a in 1..=self.n {
            // keep bits strictly above a
            r.rows[a] &= !((1u64 << (a + 1)) - 1);
        }
        r
    }

    /// Pairs `b ◁ a` with `a < b`.
    pub fn decreasing(&self) -> Relation {
        let mut r = self.clone();
        for b in 1..=self.n {
            r.rows[b] &= (1u64 << b) - 1;
        }
        r
    }

    /// The relation with every pair reversed.
    pub fn reversed(&self) -> Relation {
        Relation::from_pairs(self.n, self.pairs().into_iter().map(|(a, b)| (b, a)))
    }

    /// Transitive closure, in place.
    pub fn close_transitively(&mut self) {
        for k in 1..=self.n {
            let krow = self.rows[k];
            for a in 1..=self.n {
                if self.rows[a] >> k & 1 == 1 {
                    self.rows[a] |= krow;
                }
            }
        }
    }

    /// Pairs of the relation not implied by two others (transitive reduction
    /// of a transitively closed, irreflexive relation).
    pub fn hasse(&self) -> Relation {
        let mut h = self.clone();
        for a in 1..=self.n {
            let mut mids = self.rows[a];
            while mids != 0 {
                let m = mids.trailing_zeros() as usize;
                mids &= mids - 1;
                h.rows[a] &= !self.rows[m];
            }
        }
        h
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn increasing_decreasing_split() {
        let r = Relation::from_pairs(4, [(2, 3), (3, 1), (1, 4)]);
        assert_eq!(r.increasing().pairs(), vec![(1, 4), (2, 3)]);
        assert_eq!(r.decreasing().pairs(), vec![(3, 1)]);
        assert_eq!(r.len(), 3);
    }

    #[test]
    fn closure_and_reduction() {
        let mut r = Relation::from_pairs(3, [(3, 2), (2, 1)]);
        r.close_transitively();
        assert_eq!(r.pairs(), vec![(2, 1), (3, 1), (3, 2)]);
        assert_eq!(r.hasse().pairs(), vec![(2, 1), (3, 2)]);
    }
}
