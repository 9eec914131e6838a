//! Planar binary trees and the Tamari order.
//!
//! Trees carry implicit binary-search-tree labels: the in-order position of
//! an internal vertex is its label in `1..=n`. `i ◁ j` when vertex `i` lies in
//! the subtree rooted at `j`. The Tamari order is `T1 <= T2` iff
//! `Dec(T2) ⊆ Dec(T1)`; the right comb is the minimum and the left comb the
//! maximum.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::poset::FinitePoset;
use crate::relation::Relation;

/// Largest size accepted by [`enumerate_trees`].
pub const MAX_ENUMERATION_SIZE: usize = 12;
/// Largest size for which the full lattice is built.
pub const MAX_LATTICE_SIZE: usize = 8;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BinaryTree {
    Leaf,
    Node(Box<BinaryTree>, Box<BinaryTree>),
}

impl BinaryTree {
    pub fn node(left: BinaryTree, right: BinaryTree) -> Self {
        BinaryTree::Node(Box::new(left), Box::new(right))
    }

    /// Every internal vertex is the left child of its parent; Tamari maximum.
    pub fn left_comb(n: usize) -> Self {
        (0..n).fold(BinaryTree::Leaf, |acc, _| BinaryTree::node(acc, BinaryTree::Leaf))
    }

    /// Every internal vertex is the right child of its parent; Tamari minimum.
    pub fn right_comb(n: usize) -> Self {
        (0..n).fold(BinaryTree::Leaf, |acc, _| BinaryTree::node(BinaryTree::Leaf, acc))
    }

    pub fn size(&self) -> usize {
        match self {
            BinaryTree::Leaf => 0,
            BinaryTree::Node(l, r) => 1 + l.size() + r.size(),
        }
    }

    /// Increasing and decreasing relations from the binary-search-tree labels.
    pub fn relations(&self) -> TreeRelations {
        fn walk(t: &BinaryTree, next: &mut usize, rel: &mut Relation) -> Vec<usize> {
            match t {
                BinaryTree::Leaf => Vec::new(),
                BinaryTree::Node(l, r) => {
                    let mut below = walk(l, next, rel);
                    let root = *next;
                    *next += 1;
                    below.extend(walk(r, next, rel));
                    for &i in &below {
                        rel.insert(i, root);
                    }
                    below.push(root);
                    below
                }
            }
        }
        let n = self.size();
        let mut rel = Relation::empty(n);
        let mut next = 1;
        walk(self, &mut next, &mut rel);
        TreeRelations { rel }
    }

    /// Trees covering `self`: a vertex with a right child is rotated so that
    /// the child becomes the parent (`A x (B y C)` becomes `(A x B) y C`).
    pub fn rotation_covers(&self) -> Vec<BinaryTree> {
        let mut out = Vec::new();
        if let BinaryTree::Node(a, right) = self {
            if let BinaryTree::Node(b, c) = right.as_ref() {
                out.push(BinaryTree::node(
                    BinaryTree::node((**a).clone(), (**b).clone()),
                    (**c).clone(),
                ));
            }
            for l in a.rotation_covers() {
                out.push(BinaryTree::node(l, (**right).clone()));
            }
            for r in right.rotation_covers() {
                out.push(BinaryTree::node((**a).clone(), r));
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        match self {
            BinaryTree::Leaf => Value::Null,
            BinaryTree::Node(l, r) => Value::Array(vec![l.to_json(), r.to_json()]),
        }
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Null => Ok(BinaryTree::Leaf),
            Value::Array(kids) if kids.len() == 2 => Ok(BinaryTree::node(
                BinaryTree::from_json(&kids[0])?,
                BinaryTree::from_json(&kids[1])?,
            )),
            other => Err(Error::Invalid(format!("not a binary tree: {other}"))),
        }
    }
}

/// Compact canonical form: the tree's JSON text.
impl fmt::Display for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BinaryTree::Leaf => write!(f, "null"),
            BinaryTree::Node(l, r) => write!(f, "[{l},{r}]"),
        }
    }
}

impl fmt::Debug for BinaryTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for BinaryTree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for BinaryTree {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Value::deserialize(d)?;
        BinaryTree::from_json(&v).map_err(serde::de::Error::custom)
    }
}

/// The relation `◁` of a binary search tree, split on demand into its
/// increasing and decreasing parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TreeRelations {
    rel: Relation,
}

impl TreeRelations {
    pub fn size(&self) -> usize {
        self.rel.size()
    }

    pub fn all(&self) -> &Relation {
        &self.rel
    }

    /// Pairs `a ◁ b` with `a < b`.
    pub fn inc(&self) -> Relation {
        self.rel.increasing()
    }

    /// Pairs `b ◁ a` with `a < b`.
    pub fn dec(&self) -> Relation {
        self.rel.decreasing()
    }
}

fn trees_of_size(n: usize, memo: &mut Vec<Vec<BinaryTree>>) -> Vec<BinaryTree> {
    while memo.len() <= n {
        let m = memo.len();
        let mut level = Vec::new();
        for l in 0..m {
            for left in &memo[l] {
                for right in &memo[m - 1 - l] {
                    level.push(BinaryTree::node(left.clone(), right.clone()));
                }
            }
        }
        memo.push(level);
    }
    memo[n].clone()
}

/// All binary trees with `n` internal vertices, ordered by left-subtree size
/// and then recursively.
pub fn enumerate_trees(n: usize) -> Result<Vec<BinaryTree>> {
    if !(1..=MAX_ENUMERATION_SIZE).contains(&n) {
        return Err(Error::SizeOutOfRange(n, 1, MAX_ENUMERATION_SIZE));
    }
    let mut memo = vec![vec![BinaryTree::Leaf]];
    Ok(trees_of_size(n, &mut memo))
}

/// `t1 <= t2` in the Tamari order.
pub fn tamari_leq(t1: &BinaryTree, t2: &BinaryTree) -> Result<bool> {
    let (n1, n2) = (t1.size(), t2.size());
    if n1 != n2 {
        return Err(Error::SizeMismatch(n1, n2));
    }
    let (r1, r2) = (t1.relations(), t2.relations());
    let by_dec = r2.dec().is_subset(&r1.dec());
    debug_assert_eq!(by_dec, r1.inc().is_subset(&r2.inc()));
    Ok(by_dec)
}

/// Tam_n with its trees, their relations and the order as a [`FinitePoset`].
#[derive(Clone, Debug)]
pub struct TamariLattice {
    n: usize,
    trees: Vec<BinaryTree>,
    relations: Vec<TreeRelations>,
    index: HashMap<BinaryTree, usize>,
    poset: Arc<FinitePoset>,
}

impl TamariLattice {
    pub fn new(n: usize) -> Result<Self> {
        if !(1..=MAX_LATTICE_SIZE).contains(&n) {
            return Err(Error::SizeOutOfRange(n, 1, MAX_LATTICE_SIZE));
        }
        let trees = enumerate_trees(n)?;
        let relations: Vec<TreeRelations> = trees.iter().map(BinaryTree::relations).collect();
        let decs: Vec<Relation> = relations.iter().map(TreeRelations::dec).collect();
        let labels = trees.iter().map(ToString::to_string).collect();
        let poset = FinitePoset::from_fn(labels, |i, j| decs[j].is_subset(&decs[i]))?;
        let index = trees.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
        let lattice = TamariLattice {
            n,
            trees,
            relations,
            index,
            poset: Arc::new(poset),
        };
        // pins the rotation orientation: the maximum must be the left comb
        assert_eq!(lattice.poset.maximum(), Some(lattice.index[&BinaryTree::left_comb(n)]));
        Ok(lattice)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn trees(&self) -> &[BinaryTree] {
        &self.trees
    }

    pub fn tree(&self, i: usize) -> &BinaryTree {
        &self.trees[i]
    }

    pub fn relations(&self, i: usize) -> &TreeRelations {
        &self.relations[i]
    }

    pub fn index_of(&self, t: &BinaryTree) -> Result<usize> {
        self.index
            .get(t)
            .copied()
            .ok_or_else(|| Error::UnknownElement(t.to_string()))
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    pub fn poset_arc(&self) -> Arc<FinitePoset> {
        Arc::clone(&self.poset)
    }

    /// Index of the tree whose increasing relations are exactly `inc`.
    pub fn index_with_inc(&self, inc: &Relation) -> Option<usize> {
        self.relations.iter().position(|r| &r.inc() == inc)
    }
}

/// Tam_n as a bare poset.
pub fn tamari_lattice(n: usize) -> Result<FinitePoset> {
    Ok(TamariLattice::new(n)?.poset.as_ref().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn catalan(n: usize) -> usize {
        // c_{k+1} = Σ c_i c_{k-i}
        let mut c = vec![1usize];
        for k in 0..n {
            c.push((0..=k).map(|i| c[i] * c[k - i]).sum());
        }
        c[n]
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_trees(1).unwrap().len(), 1);
        assert_eq!(enumerate_trees(4).unwrap().len(), 14);
        assert_eq!(enumerate_trees(8).unwrap().len(), 1430);
        for n in 1..=8 {
            let trees = enumerate_trees(n).unwrap();
            assert_eq!(trees.len(), catalan(n));
            let distinct: BTreeSet<_> = trees.iter().collect();
            assert_eq!(distinct.len(), trees.len());
            assert!(trees.iter().all(|t| t.size() == n));
        }
        assert!(enumerate_trees(0).is_err());
        assert!(enumerate_trees(13).is_err());
    }

    #[test]
    fn enumeration_order_starts_with_empty_left_subtree() {
        let trees = enumerate_trees(2).unwrap();
        assert_eq!(trees[0], BinaryTree::right_comb(2));
        assert_eq!(trees[1], BinaryTree::left_comb(2));
    }

    #[test]
    fn relations_of_combs() {
        let left = BinaryTree::left_comb(2).relations();
        assert_eq!(left.inc().pairs(), vec![(1, 2)]);
        assert!(left.dec().is_empty());
        let right = BinaryTree::right_comb(2).relations();
        assert!(right.inc().is_empty());
        assert_eq!(right.dec().pairs(), vec![(2, 1)]);
        let r3 = BinaryTree::right_comb(3).relations();
        assert_eq!(r3.dec().pairs(), vec![(2, 1), (3, 1), (3, 2)]);
        assert!(r3.inc().is_empty());
    }

    #[test]
    fn leq_examples() {
        for n in 1..=5 {
            assert!(tamari_leq(&BinaryTree::right_comb(n), &BinaryTree::left_comb(n)).unwrap());
        }
        let t = &enumerate_trees(4).unwrap()[5];
        assert!(tamari_leq(t, t).unwrap());
        assert!(!tamari_leq(&BinaryTree::left_comb(2), &BinaryTree::right_comb(2)).unwrap());
        assert_eq!(
            tamari_leq(&BinaryTree::left_comb(2), &BinaryTree::left_comb(3)).unwrap_err(),
            Error::SizeMismatch(2, 3)
        );
    }

    #[test]
    fn rotation_cover_examples() {
        assert_eq!(
            BinaryTree::right_comb(2).rotation_covers(),
            vec![BinaryTree::left_comb(2)]
        );
        for n in 1..=5 {
            assert!(BinaryTree::left_comb(n).rotation_covers().is_empty());
        }
        assert_eq!(BinaryTree::right_comb(3).rotation_covers().len(), 2);
    }

    #[test]
    fn small_lattices() {
        let p1 = tamari_lattice(1).unwrap();
        assert_eq!(p1.len(), 1);
        let p2 = tamari_lattice(2).unwrap();
        assert_eq!(p2.covers(), &[(0, 1)]);
        let p3 = tamari_lattice(3).unwrap();
        assert_eq!((p3.len(), p3.covers().len(), p3.num_intervals()), (5, 5, 13));
        assert_eq!(tamari_lattice(4).unwrap().num_intervals(), 68);
        assert!(tamari_lattice(9).is_err());
    }

    #[test]
    fn covers_are_rotations() {
        for n in 1..=5 {
            let lat = TamariLattice::new(n).unwrap();
            let from_rot: BTreeSet<(usize, usize)> = lat
                .trees()
                .iter()
                .enumerate()
                .flat_map(|(i, t)| {
                    t.rotation_covers()
                        .into_iter()
                        .map(|s| (i, lat.index_of(&s).unwrap()))
                        .collect::<Vec<_>>()
                })
                .collect();
            let covers: BTreeSet<_> = lat.poset().covers().iter().copied().collect();
            assert_eq!(from_rot, covers, "n = {n}");
        }
    }

    #[test]
    fn extremes_and_injectivity() {
        for n in 1..=6 {
            let lat = TamariLattice::new(n).unwrap();
            let min = lat.poset().minimum().unwrap();
            assert_eq!(lat.tree(min), &BinaryTree::right_comb(n));
            assert!(lat.relations(min).inc().is_empty());
            let distinct: BTreeSet<_> = (0..lat.trees().len()).map(|i| lat.relations(i).all().clone()).collect();
            assert_eq!(distinct.len(), lat.trees().len());
        }
    }

    #[test]
    fn json_round_trip() {
        let t = BinaryTree::node(BinaryTree::left_comb(1), BinaryTree::Leaf);
        assert_eq!(t.to_string(), "[[null,null],null]");
        let v: Value = serde_json::from_str("[[null,null],null]").unwrap();
        assert_eq!(BinaryTree::from_json(&v).unwrap(), t);
        assert!(BinaryTree::from_json(&serde_json::json!([null])).is_err());
    }
}
