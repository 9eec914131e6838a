//! Interval-posets: posets `(P, ◁)` on `{1..n}` closed under the two
//! interval-poset conditions, in bijection with intervals `[S, T]` of Tam_n.
//!
//! The increasing part of an interval-poset is `Inc(S)` and its decreasing
//! part is `Dec(T)`. The stored relation is always the full transitive
//! closure; the Hasse diagram is recomputed when needed.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::{Relation, MAX_SIZE};
use crate::tamari::{tamari_leq, BinaryTree, TamariLattice};

/// Largest size for the exhaustive enumerations.
pub const MAX_ENUMERATION_SIZE: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntervalPoset {
    rel: Relation,
}

impl fmt::Debug for IntervalPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntervalPoset(n={}, {:?})", self.size(), self.rel.pairs())
    }
}

/// Orders by size, then by the sorted pair list (the canonical serialization).
impl Ord for IntervalPoset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size()
            .cmp(&other.size())
            .then_with(|| self.rel.pairs().cmp(&other.rel.pairs()))
    }
}

impl PartialOrd for IntervalPoset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Serialize for IntervalPoset {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntervalPoset {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = IntervalPosetJson::deserialize(d)?;
        IntervalPoset::from_json(&json).map_err(serde::de::Error::custom)
    }
}

/// The Hasse diagram split by direction. Pairs are `(x, y)` meaning `x ◁ y`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HasseSplit {
    /// Decreasing covers `j ◁ i` (`i < j`), sorted by `(i, j)`.
    pub j: Vec<(usize, usize)>,
    /// Increasing covers `i ◁ j` (`i < j`), sorted by `(i, j)`.
    pub k: Vec<(usize, usize)>,
}

/// JSON shape `{"n": .., "relations": [[a, b], ..]}` with the closed relation set.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct IntervalPosetJson {
    pub n: usize,
    pub relations: Vec<[usize; 2]>,
}

/// Applies transitivity and both interval-poset conditions until stable.
fn close_interval_poset(rel: &mut Relation) -> Result<()> {
    let n = rel.size();
    loop {
        let before = rel.clone();
        rel.close_transitively();
        for a in 1..=n {
            for c in a + 1..=n {
                if rel.contains(a, c) {
                    for b in a + 1..c {
                        rel.insert(b, c);
                    }
                }
                if rel.contains(c, a) {
                    for b in a + 1..c {
                        rel.insert(b, a);
                    }
                }
            }
        }
        if *rel == before {
            break;
        }
    }
    for a in 1..=n {
        if rel.contains(a, a) {
            // a cycle through a; report one of its pairs
            let b = (1..=n)
                .find(|&b| b != a && rel.contains(a, b) && rel.contains(b, a))
                .unwrap_or(a);
            return Err(Error::ClosureConflict(a.min(b), a.max(b)));
        }
        for b in a + 1..=n {
            if rel.contains(a, b) && rel.contains(b, a) {
                return Err(Error::ClosureConflict(a, b));
            }
        }
    }
    Ok(())
}

impl IntervalPoset {
    /// Least interval-poset containing `pairs`.
    pub fn closure(n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if !(1..=MAX_SIZE).contains(&n) {
            return Err(Error::SizeOutOfRange(n, 1, MAX_SIZE));
        }
        let mut rel = Relation::empty(n);
        for (a, b) in pairs {
            if !(1..=n).contains(&a) || !(1..=n).contains(&b) {
                return Err(Error::PairOutOfRange(a, b, n));
            }
            if a == b {
                return Err(Error::ReflexivePair(a));
            }
            rel.insert(a, b);
        }
        close_interval_poset(&mut rel)?;
        Ok(IntervalPoset { rel })
    }

    /// Wraps a relation that must already be a closed interval-poset.
    pub fn from_closed(rel: Relation) -> Result<Self> {
        let n = rel.size();
        let ip = Self::closure(n, rel.pairs())?;
        if ip.rel != rel {
            return Err(Error::Invalid(format!("relation {:?} is not closed", rel.pairs())));
        }
        Ok(ip)
    }

    /// The empty relation: the whole lattice `[min, max]`.
    pub fn full(n: usize) -> Self {
        IntervalPoset {
            rel: Relation::empty(n),
        }
    }

    pub fn size(&self) -> usize {
        self.rel.size()
    }

    pub fn relation(&self) -> &Relation {
        &self.rel
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        self.rel.pairs()
    }

    #[inline]
    pub fn precedes(&self, a: usize, b: usize) -> bool {
        self.rel.contains(a, b)
    }

    pub fn inc(&self) -> Relation {
        self.rel.increasing()
    }

    pub fn dec(&self) -> Relation {
        self.rel.decreasing()
    }

    pub fn hasse(&self) -> Relation {
        self.rel.hasse()
    }

    pub fn hasse_split(&self) -> HasseSplit {
        let mut j = Vec::new();
        let mut k = Vec::new();
        for (x, y) in self.hasse().pairs() {
            if x < y {
                k.push((x, y));
            } else {
                j.push((x, y));
            }
        }
        j.sort_by_key(|&(b, a)| (a, b));
        HasseSplit { j, k }
    }

    /// No `x < y < z` with both `y → z` and `y → x` in the Hasse diagram.
    pub fn is_exceptional(&self) -> bool {
        let h = self.hasse();
        (1..=self.size()).all(|y| {
            let row = h.row(y);
            let above = row >> (y + 1) != 0;
            let below = row & ((1u64 << y) - 1) != 0;
            !(above && below)
        })
    }

    /// For all `i < j` there is `i <= z <= j` with `i ⊴ z` and `j ⊴ z`.
    pub fn is_simple(&self) -> bool {
        let n = self.size();
        let weak = |a: usize, b: usize| a == b || self.precedes(a, b);
        (1..=n).all(|i| (i + 1..=n).all(|j| (i..=j).any(|z| weak(i, z) && weak(j, z))))
    }

    pub fn is_projective(&self) -> bool {
        self.dec().is_empty()
    }

    pub fn is_injective(&self) -> bool {
        self.inc().is_empty()
    }

    /// For a projective interval-poset with increasing relations `C`, the
    /// injective interval-poset with decreasing relations
    /// `C⁰ = { j ◁ i : i◁s ∉ C for all i < s <= j }`.
    pub fn c_zero(&self) -> Result<IntervalPoset> {
        if !self.is_projective() {
            return Err(Error::WrongKind("projective"));
        }
        let n = self.size();
        let mut out = Relation::empty(n);
        for i in 1..=n {
            for j in i + 1..=n {
                if (i + 1..=j).all(|s| !self.precedes(i, s)) {
                    out.insert(j, i);
                }
            }
        }
        debug_assert!(IntervalPoset::from_closed(out.clone()).is_ok());
        Ok(IntervalPoset { rel: out })
    }

    /// `C + R̄`: the closure of `C` together with the reversals of the
    /// decreasing pairs in `r` (given as `(j, i)` with `i < j`).
    pub fn add_reversed(&self, r: &[(usize, usize)]) -> Result<IntervalPoset> {
        if !self.is_projective() {
            return Err(Error::WrongKind("projective"));
        }
        for &(j, i) in r {
            if i >= j {
                return Err(Error::Invalid(format!("({j}, {i}) is not a decreasing pair")));
            }
        }
        let out = IntervalPoset::closure(
            self.size(),
            self.pairs().into_iter().chain(r.iter().map(|&(j, i)| (i, j))),
        )?;
        assert!(out.is_projective(), "closure of increasing relations stays increasing");
        Ok(out)
    }

    /// Interval-poset of `[s, t]`: `Inc(s) ∪ Dec(t)`.
    pub fn from_interval(s: &BinaryTree, t: &BinaryTree) -> Result<IntervalPoset> {
        if !tamari_leq(s, t)? {
            return Err(Error::NotAnInterval);
        }
        let rel = s.relations().inc().union(&t.relations().dec());
        debug_assert!(IntervalPoset::from_closed(rel.clone()).is_ok());
        Ok(IntervalPoset { rel })
    }

    /// Inverse of [`IntervalPoset::from_interval`]: builds the plane forests of
    /// the increasing and decreasing Hasse diagrams (siblings in natural
    /// order) and turns them into binary trees.
    pub fn to_interval(&self) -> (BinaryTree, BinaryTree) {
        let n = self.size();
        let mut inc_children = vec![Vec::new(); n + 1];
        let mut inc_roots = Vec::new();
        let mut dec_children = vec![Vec::new(); n + 1];
        let mut dec_roots = Vec::new();
        let inc_hasse = self.inc().hasse();
        let dec_hasse = self.dec().hasse();
        for v in 1..=n {
            // each vertex has at most one parent in either forest
            match (1..=n).find(|&p| inc_hasse.contains(v, p)) {
                Some(p) => inc_children[p].push(v),
                None => inc_roots.push(v),
            }
            match (1..=n).find(|&p| dec_hasse.contains(v, p)) {
                Some(p) => dec_children[p].push(v),
                None => dec_roots.push(v),
            }
        }

        // first child becomes the left son, next brother the right son
        fn from_inc(siblings: &[usize], children: &[Vec<usize>]) -> BinaryTree {
            match siblings.split_first() {
                None => BinaryTree::Leaf,
                Some((&first, rest)) => {
                    BinaryTree::node(from_inc(&children[first], children), from_inc(rest, children))
                }
            }
        }
        // last child becomes the right son, previous brother the left son
        fn from_dec(siblings: &[usize], children: &[Vec<usize>]) -> BinaryTree {
            match siblings.split_last() {
                None => BinaryTree::Leaf,
                Some((&last, rest)) => BinaryTree::node(from_dec(rest, children), from_dec(&children[last], children)),
            }
        }
        (from_inc(&inc_roots, &inc_children), from_dec(&dec_roots, &dec_children))
    }

    /// Indices in `lattice` of the trees `x` with `C ⊆ Inc(x)` and
    /// `Inc(x) ∩ J̄ = ∅`.
    pub fn support(&self, lattice: &TamariLattice) -> Vec<usize> {
        let c = self.inc();
        let j_bar = Relation::from_pairs(self.size(), self.hasse_split().j.iter().map(|&(j, i)| (i, j)));
        (0..lattice.trees().len())
            .filter(|&x| {
                let inc = lattice.relations(x).inc();
                c.is_subset(&inc) && inc.is_disjoint(&j_bar)
            })
            .collect()
    }

    pub fn to_json(&self) -> IntervalPosetJson {
        IntervalPosetJson {
            n: self.size(),
            relations: self.pairs().into_iter().map(|(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json(json: &IntervalPosetJson) -> Result<IntervalPoset> {
        IntervalPoset::closure(json.n, json.relations.iter().map(|&[a, b]| (a, b)))
    }
}

/// The binary trees of the interval `ip`, as lattice indices.
pub fn support_trees(ip: &IntervalPoset, lattice: &TamariLattice) -> Vec<usize> {
    ip.support(lattice)
}

/// All interval-posets of size `n`, from the intervals of Tam_n, in
/// canonical order.
pub fn enumerate_ips(n: usize) -> Result<Vec<IntervalPoset>> {
    if !(1..=MAX_ENUMERATION_SIZE).contains(&n) {
        return Err(Error::SizeOutOfRange(n, 1, MAX_ENUMERATION_SIZE));
    }
    let lattice = TamariLattice::new(n)?;
    let mut out: Vec<IntervalPoset> = lattice
        .poset()
        .intervals()
        .into_iter()
        .map(|(s, t)| IntervalPoset {
            rel: lattice.relations(s).inc().union(&lattice.relations(t).dec()),
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}

pub fn enumerate_exceptional(n: usize) -> Result<Vec<IntervalPoset>> {
    Ok(enumerate_ips(n)?
        .into_iter()
        .filter(IntervalPoset::is_exceptional)
        .collect())
}
