//! Noncrossing trees on the circle with vertices `1..=n+1`, the bijections
//! ψ and θ with exceptional interval-posets, planar duality and rotation.
//!
//! The side `[1, n+1]` of the circle is the base. Edges are stored as sorted
//! pairs `(a, b)` with `a < b`, and the edge list itself is sorted.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval_poset::IntervalPoset;
use crate::relation::{Relation, MAX_SIZE};

/// Largest size for [`enumerate_nc`].
pub const MAX_ENUMERATION_SIZE: usize = 6;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NoncrossingTree {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl fmt::Debug for NoncrossingTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NoncrossingTree(n={}, {:?})", self.n, self.edges)
    }
}

impl Serialize for NoncrossingTree {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for NoncrossingTree {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let json = NoncrossingTreeJson::deserialize(d)?;
        NoncrossingTree::from_json(&json).map_err(serde::de::Error::custom)
    }
}

/// JSON shape `{"n": .., "edges": [[a, b], ..]}`, `a < b`, sorted.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct NoncrossingTreeJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeKind {
    /// Oriented toward `n+1`, the edge goes from a larger to a smaller vertex.
    Descent,
    Rise,
}

/// An edge oriented toward the vertex `n+1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrientedEdge {
    pub child: usize,
    pub parent: usize,
    pub kind: EdgeKind,
    /// Largest vertex of `[a, b)` joined to `a` once the edge is removed.
    pub i_f: usize,
    /// Cyclically largest vertex of `[b, a)` joined to `b` once the edge is removed.
    pub j_f: usize,
}

impl OrientedEdge {
    pub fn endpoints(&self) -> (usize, usize) {
        (self.child.min(self.parent), self.child.max(self.parent))
    }
}

#[inline]
fn crosses((a, b): (usize, usize), (c, d): (usize, usize)) -> bool {
    (a < c && c < b && b < d) || (c < a && a < d && d < b)
}

/// Vertices `from, from+1, ..` up to but excluding `to`, wrapping from `m` to 1.
pub fn cyclic_range(from: usize, to: usize, m: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut v = from;
    while v != to {
        out.push(v);
        v = if v == m { 1 } else { v + 1 };
    }
    out
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
        ra != rb
    }
}

impl NoncrossingTree {
    /// Validates an edge set on the circle with `n+1` vertices.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        if !(1..=MAX_SIZE).contains(&n) {
            return Err(Error::SizeOutOfRange(n, 1, MAX_SIZE));
        }
        let m = n + 1;
        let mut sorted = Vec::new();
        for (a, b) in edges {
            let (a, b) = (a.min(b), a.max(b));
            if a < 1 || b > m || a == b {
                return Err(Error::BadEdge(a, b, m));
            }
            sorted.push((a, b));
        }
        sorted.sort_unstable();
        for (i, &e) in sorted.iter().enumerate() {
            if let Some(&g) = sorted[i + 1..].iter().find(|&&g| crosses(e, g)) {
                return Err(Error::Crossing(e.0, e.1, g.0, g.1));
            }
        }
        let mut uf = UnionFind::new(m + 1);
        for &(a, b) in &sorted {
            if !uf.union(a, b) {
                return Err(Error::Cycle(a, b));
            }
        }
        if let Some(v) = (2..=m).find(|&v| uf.find(v) != uf.find(1)) {
            return Err(Error::Disconnected(v));
        }
        Ok(NoncrossingTree { n, edges: sorted })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    fn neighbours(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n + 2];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    /// Vertices reachable from `start` without using the edge `skip`.
    fn component_without(&self, adj: &[Vec<usize>], start: usize, skip: (usize, usize)) -> Vec<bool> {
        let mut seen = vec![false; self.n + 2];
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if (v.min(w), v.max(w)) == skip || seen[w] {
                    continue;
                }
                seen[w] = true;
                queue.push_back(w);
            }
        }
        seen
    }

    /// The pair `(i_f, j_f)` for the edge `(a, b)`, `a < b`.
    fn endpoints_f(&self, adj: &[Vec<usize>], (a, b): (usize, usize)) -> (usize, usize) {
        let m = self.n + 1;
        let from_a = self.component_without(adj, a, (a, b));
        let from_b = self.component_without(adj, b, (a, b));
        let i_f = cyclic_range(a, b, m)
            .into_iter()
            .rev()
            .find(|&v| from_a[v])
            .unwrap_or(a);
        let j_f = cyclic_range(b, a, m)
            .into_iter()
            .rev()
            .find(|&v| from_b[v])
            .unwrap_or(b);
        (i_f, j_f)
    }

    /// Label of each edge: a side `[i, i+1]` is labeled `i`; any other edge is
    /// labeled by the open side `[i, i+1]` it separates from the base.
    pub fn edge_labels(&self) -> BTreeMap<(usize, usize), usize> {
        let mut labels = BTreeMap::new();
        for &(a, b) in &self.edges {
            let label = if b == a + 1 {
                a
            } else {
                let open: Vec<usize> = (a..b)
                    .filter(|&i| {
                        !self
                            .edges
                            .iter()
                            .any(|&(c, d)| (c, d) != (a, b) && a <= c && c <= i && i < d && d <= b)
                    })
                    .collect();
                debug_assert_eq!(open.len(), 1, "edge ({a}, {b}) of {self:?}");
                open[0]
            };
            labels.insert((a, b), label);
        }
        labels
    }

    /// Edges oriented toward `n+1`, in edge order.
    pub fn orient(&self) -> Vec<OrientedEdge> {
        let m = self.n + 1;
        let adj = self.neighbours();
        let mut parent = vec![0usize; m + 1];
        let mut seen = vec![false; m + 1];
        seen[m] = true;
        let mut queue = VecDeque::from([m]);
        while let Some(v) = queue.pop_front() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    queue.push_back(w);
                }
            }
        }
        self.edges
            .iter()
            .map(|&(a, b)| {
                let (child, par) = if parent[a] == b { (a, b) } else { (b, a) };
                let (i_f, j_f) = self.endpoints_f(&adj, (a, b));
                OrientedEdge {
                    child,
                    parent: par,
                    kind: if child > par { EdgeKind::Descent } else { EdgeKind::Rise },
                    i_f,
                    j_f,
                }
            })
            .collect()
    }

    pub fn count_descents(&self) -> usize {
        self.orient().iter().filter(|e| e.kind == EdgeKind::Descent).count()
    }

    /// Rises whose `j_f` is `n+1`.
    pub fn count_forbidden_rises(&self) -> usize {
        let top = self.n + 1;
        self.orient()
            .iter()
            .filter(|e| e.kind == EdgeKind::Rise && e.j_f == top)
            .count()
    }

    /// The planar dual, edge by edge: `f ↦ [i_f, j_f]`.
    pub fn planar_dual(&self) -> NoncrossingTree {
        let adj = self.neighbours();
        let edges: Vec<_> = self.edges.iter().map(|&e| self.endpoints_f(&adj, e)).collect();
        NoncrossingTree::new(self.n, edges).expect("the planar dual of a noncrossing tree is a noncrossing tree")
    }

    /// Rotation of the circle by one step: `i ↦ i-1`, `1 ↦ n+1`.
    pub fn rotate(&self) -> NoncrossingTree {
        let m = self.n + 1;
        let shift = |v: usize| if v == 1 { m } else { v - 1 };
        NoncrossingTree::new(self.n, self.edges.iter().map(|&(a, b)| (shift(a), shift(b))))
            .expect("rotation preserves noncrossing trees")
    }

    /// ψ⁻¹: `i ◁ j` when the edge labeled `i` is separated from the base by
    /// the edge labeled `j`.
    pub fn psi_inv(&self) -> IntervalPoset {
        let labels = self.edge_labels();
        let mut rel = Relation::empty(self.n);
        for (&(a, b), &i) in &labels {
            for (&(c, d), &j) in &labels {
                if (a, b) != (c, d) && c <= a && b <= d {
                    rel.insert(i, j);
                }
            }
        }
        IntervalPoset::from_closed(rel).expect("ψ⁻¹ yields a closed interval-poset")
    }

    /// θ⁻¹: the interval-poset whose Hasse diagram is the orientation toward
    /// `n+1`, with `n+1` removed.
    pub fn theta_inv(&self) -> IntervalPoset {
        let top = self.n + 1;
        let pairs = self
            .orient()
            .into_iter()
            .filter(|e| e.parent != top)
            .map(|e| (e.child, e.parent));
        IntervalPoset::closure(self.n, pairs).expect("θ⁻¹ yields an interval-poset")
    }

    pub fn to_json(&self) -> NoncrossingTreeJson {
        NoncrossingTreeJson {
            n: self.n,
            edges: self.edges.iter().map(|&(a, b)| [a, b]).collect(),
        }
    }

    pub fn from_json(json: &NoncrossingTreeJson) -> Result<Self> {
        NoncrossingTree::new(json.n, json.edges.iter().map(|&[a, b]| (a, b)))
    }
}

/// Validates `edges` as a noncrossing tree of size `n`.
pub fn validate_nc(n: usize, edges: &[(usize, usize)]) -> Result<NoncrossingTree> {
    NoncrossingTree::new(n, edges.iter().copied())
}

/// ψ: each `v` goes to `[v₁, v₂+1]` where `v₁`, `v₂` are the least and
/// largest elements of `{x : x ⊴ v}`.
pub fn psi(ip: &IntervalPoset) -> Result<NoncrossingTree> {
    if !ip.is_exceptional() {
        return Err(Error::WrongKind("exceptional"));
    }
    let n = ip.size();
    let edges = (1..=n).map(|v| {
        let below: Vec<usize> = (1..=n).filter(|&x| x == v || ip.precedes(x, v)).collect();
        (below[0], below[below.len() - 1] + 1)
    });
    NoncrossingTree::new(n, edges)
}

/// θ: the Hasse diagram of `ip` with a new top `n+1` above its maximal elements.
pub fn theta(ip: &IntervalPoset) -> Result<NoncrossingTree> {
    if !ip.is_exceptional() {
        return Err(Error::WrongKind("exceptional"));
    }
    let n = ip.size();
    let hasse = ip.hasse();
    let mut edges = hasse.pairs();
    for x in 1..=n {
        if ip.relation().row(x) == 0 {
            edges.push((x, n + 1));
        }
    }
    NoncrossingTree::new(n, edges)
}

/// All noncrossing trees of size `n`, in lexicographic order of edge lists.
pub fn enumerate_nc(n: usize) -> Result<Vec<NoncrossingTree>> {
    if !(1..=MAX_ENUMERATION_SIZE).contains(&n) {
        return Err(Error::SizeOutOfRange(n, 1, MAX_ENUMERATION_SIZE));
    }
    let m = n + 1;
    let candidates: Vec<(usize, usize)> = (1..=m).flat_map(|a| (a + 1..=m).map(move |b| (a, b))).collect();

    fn extend(
        start: usize,
        chosen: &mut Vec<(usize, usize)>,
        candidates: &[(usize, usize)],
        n: usize,
        out: &mut Vec<NoncrossingTree>,
    ) {
        if chosen.len() == n {
            if let Ok(t) = NoncrossingTree::new(n, chosen.iter().copied()) {
                out.push(t);
            }
            return;
        }
        for idx in start..candidates.len() {
            let e = candidates[idx];
            if chosen.iter().any(|&g| crosses(e, g)) {
                continue;
            }
            let mut uf = UnionFind::new(n + 2);
            let acyclic = chosen.iter().chain(std::iter::once(&e)).all(|&(a, b)| uf.union(a, b));
            if !acyclic {
                continue;
            }
            chosen.push(e);
            extend(idx + 1, chosen, candidates, n, out);
            chosen.pop();
        }
    }

    let mut out = Vec::new();
    extend(0, &mut Vec::new(), &candidates, n, &mut out);
    Ok(out)
}

/// `(1/(2n+1))·C(3n, n)`.
pub fn noncrossing_count(n: usize) -> u64 {
    let mut binom: u64 = 1;
    for k in 0..n as u64 {
        binom = binom * (3 * n as u64 - k) / (k + 1);
    }
    binom / (2 * n as u64 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn nc(n: usize, edges: &[(usize, usize)]) -> NoncrossingTree {
        NoncrossingTree::new(n, edges.iter().copied()).unwrap()
    }

    fn sample4_psi() -> NoncrossingTree {
        nc(4, &[(1, 5), (1, 4), (2, 4), (2, 3)])
    }

    fn sample4_theta() -> NoncrossingTree {
        nc(4, &[(1, 3), (2, 3), (1, 4), (4, 5)])
    }

    fn sample4() -> IntervalPoset {
        IntervalPoset::closure(4, [(2, 3), (3, 1), (1, 4)]).unwrap()
    }

    /// Cell-adjacency construction of the dual. Arc `i` is the circle side
    /// `[i, i+1]` (arc `n+1` is the base); a chord shields an arc from `f`
    /// when exactly one of the two lies inside it. Each side of `f` sees one
    /// unshielded arc, and those two cells are joined by the dual edge.
    fn dual_by_cells(t: &NoncrossingTree) -> NoncrossingTree {
        let n = t.size();
        let inside = |(c, d): (usize, usize), arc: usize| c <= arc && arc < d;
        let edges = t.edges().iter().map(|&f| {
            let visible: Vec<usize> = (1..=n + 1)
                .filter(|&arc| {
                    t.edges().iter().all(|&g| {
                        let f_in_g = g.0 <= f.0 && f.1 <= g.1;
                        g == f || inside(g, arc) == f_in_g
                    })
                })
                .collect();
            assert_eq!(visible.len(), 2, "edge {f:?} of {t:?} sees {visible:?}");
            (visible[0], visible[1])
        });
        NoncrossingTree::new(n, edges).unwrap()
    }

    #[test]
    fn validation_examples() {
        assert!(validate_nc(4, &[(1, 5), (1, 4), (2, 4), (2, 3)]).is_ok());
        assert!(validate_nc(2, &[(1, 3), (2, 3)]).is_ok());
        assert_eq!(
            validate_nc(3, &[(1, 3), (2, 4)]).unwrap_err(),
            Error::Crossing(1, 3, 2, 4)
        );
        assert_eq!(
            validate_nc(3, &[(1, 2), (2, 3), (1, 3)]).unwrap_err(),
            Error::Cycle(2, 3)
        );
        assert_eq!(validate_nc(3, &[(1, 2), (2, 3)]).unwrap_err(), Error::Disconnected(4));
        assert_eq!(validate_nc(2, &[(1, 4)]).unwrap_err(), Error::BadEdge(1, 4, 3));
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_nc(1).unwrap(), vec![nc(1, &[(1, 2)])]);
        assert_eq!(enumerate_nc(3).unwrap().len(), 12);
        assert_eq!(enumerate_nc(5).unwrap().len(), 273);
        for n in 1..=6 {
            assert_eq!(enumerate_nc(n).unwrap().len() as u64, noncrossing_count(n));
        }
        assert_eq!(noncrossing_count(6), 1428);
    }

    #[test]
    fn label_examples() {
        let labels = sample4_psi().edge_labels();
        assert_eq!(
            labels.into_iter().collect::<Vec<_>>(),
            vec![((1, 4), 1), ((1, 5), 4), ((2, 3), 2), ((2, 4), 3)]
        );
        let l2: Vec<_> = nc(2, &[(1, 2), (2, 3)]).edge_labels().into_iter().collect();
        assert_eq!(l2, vec![((1, 2), 1), ((2, 3), 2)]);
        let l3: Vec<_> = nc(2, &[(1, 3), (2, 3)]).edge_labels().into_iter().collect();
        assert_eq!(l3, vec![((1, 3), 1), ((2, 3), 2)]);
    }

    #[test]
    fn labels_are_bijective() {
        for n in 1..=5 {
            for t in enumerate_nc(n).unwrap() {
                let labels: BTreeSet<usize> = t.edge_labels().into_values().collect();
                assert_eq!(labels, (1..=n).collect());
            }
        }
    }

    #[test]
    fn orientation_examples() {
        let o = sample4_theta().orient();
        let descents: Vec<_> = o
            .iter()
            .filter(|e| e.kind == EdgeKind::Descent)
            .map(|e| (e.child, e.parent))
            .collect();
        let rises: BTreeSet<_> = o
            .iter()
            .filter(|e| e.kind == EdgeKind::Rise)
            .map(|e| (e.child, e.parent))
            .collect();
        assert_eq!(descents, vec![(3, 1)]);
        assert_eq!(rises, BTreeSet::from([(2, 3), (1, 4), (4, 5)]));

        let single = nc(1, &[(1, 2)]).orient();
        assert_eq!(
            single,
            vec![OrientedEdge {
                child: 1,
                parent: 2,
                kind: EdgeKind::Rise,
                i_f: 1,
                j_f: 2
            }]
        );

        let base = sample4_psi()
            .orient()
            .into_iter()
            .find(|e| e.endpoints() == (1, 5))
            .unwrap();
        assert_eq!((base.i_f, base.j_f), (4, 5));
    }

    #[test]
    fn endpoint_ranges() {
        for n in 1..=5 {
            let m = n + 1;
            for t in enumerate_nc(n).unwrap() {
                for e in t.orient() {
                    let (a, b) = e.endpoints();
                    assert!(cyclic_range(a, b, m).contains(&e.i_f));
                    assert!(cyclic_range(b, a, m).contains(&e.j_f));
                }
            }
        }
    }

    #[test]
    fn psi_examples() {
        assert_eq!(psi(&sample4()).unwrap(), sample4_psi());
        assert_eq!(psi(&IntervalPoset::full(2)).unwrap(), nc(2, &[(1, 2), (2, 3)]));
        let s = IntervalPoset::closure(2, [(2, 1)]).unwrap();
        assert_eq!(psi(&s).unwrap(), nc(2, &[(1, 3), (2, 3)]));
        let bad = IntervalPoset::closure(3, [(2, 3), (2, 1)]).unwrap();
        assert_eq!(psi(&bad).unwrap_err(), Error::WrongKind("exceptional"));
    }

    #[test]
    fn psi_inv_examples() {
        assert_eq!(sample4_psi().psi_inv(), sample4());
        assert!(nc(2, &[(1, 2), (2, 3)]).psi_inv().relation().is_empty());
        assert_eq!(nc(2, &[(1, 3), (2, 3)]).psi_inv().pairs(), vec![(2, 1)]);
    }

    #[test]
    fn theta_examples() {
        assert_eq!(theta(&sample4()).unwrap(), sample4_theta());
        assert_eq!(theta(&IntervalPoset::full(2)).unwrap(), nc(2, &[(1, 3), (2, 3)]));
        let p = IntervalPoset::closure(2, [(1, 2)]).unwrap();
        assert_eq!(theta(&p).unwrap(), nc(2, &[(1, 2), (2, 3)]));
    }

    #[test]
    fn theta_inv_examples() {
        assert_eq!(sample4_theta().theta_inv(), sample4());
        assert!(nc(2, &[(1, 3), (2, 3)]).theta_inv().relation().is_empty());
        assert_eq!(nc(2, &[(1, 2), (2, 3)]).theta_inv().pairs(), vec![(1, 2)]);
    }

    #[test]
    fn dual_examples() {
        assert_eq!(sample4_psi().planar_dual(), sample4_theta());
        assert_eq!(nc(2, &[(1, 2), (2, 3)]).planar_dual(), nc(2, &[(1, 3), (2, 3)]));
        let one = nc(1, &[(1, 2)]);
        assert_eq!(one.planar_dual(), one);
    }

    #[test]
    fn rotate_examples() {
        assert_eq!(sample4_psi().rotate(), nc(4, &[(4, 5), (3, 5), (1, 3), (1, 2)]));
        assert_eq!(sample4_psi().planar_dual().planar_dual(), sample4_psi().rotate());
        assert_eq!(nc(2, &[(1, 2), (1, 3)]).rotate(), nc(2, &[(1, 3), (2, 3)]));
        let t = sample4_psi();
        let full_turn = (0..5).fold(t.clone(), |acc, _| acc.rotate());
        assert_eq!(full_turn, t);
    }

    #[test]
    fn descent_and_forbidden_counts() {
        assert_eq!(sample4_theta().count_descents(), 1);
        // both rises of the path 1→2→3 reach the base side
        let path = nc(2, &[(1, 2), (2, 3)]);
        assert_eq!((path.count_descents(), path.count_forbidden_rises()), (0, 2));
        // the star at n+1 is ψ of an interval-poset with a single maximal
        // element, so only the edge [1, n+1] reaches the base side
        for n in 1..=5 {
            let star = NoncrossingTree::new(n, (1..=n).map(|i| (i, n + 1))).unwrap();
            assert_eq!(star.count_forbidden_rises(), 1);
            assert_eq!(star.psi_inv().relation().row(1), 0);
        }
    }

    #[test]
    fn dual_matches_cell_construction() {
        for n in 1..=4 {
            for t in enumerate_nc(n).unwrap() {
                assert_eq!(t.planar_dual(), dual_by_cells(&t), "{t:?}");
            }
        }
    }

    #[test]
    fn json_shape() {
        let j = serde_json::to_string(&sample4_theta().to_json()).unwrap();
        assert_eq!(j, r#"{"n":4,"edges":[[1,3],[1,4],[2,3],[4,5]]}"#);
        let back: NoncrossingTreeJson = serde_json::from_str(&j).unwrap();
        assert_eq!(NoncrossingTree::from_json(&back).unwrap(), sample4_theta());
    }
}
