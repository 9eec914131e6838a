//! Finite posets as explicit order data.
//!
//! Elements keep their construction order, and every matrix built from a
//! poset (zeta, Coxeter) is indexed by that order.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

/// A finite partially ordered set with opaque string element ids.
#[derive(Clone, Debug)]
pub struct FinitePoset {
    labels: Vec<String>,
    index: HashMap<String, usize>,
    words: usize,
    // row x holds the bits y with x <= y
    up: Vec<u64>,
    // row y holds the bits x with x <= y
    down: Vec<u64>,
    covers: Vec<(usize, usize)>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
}

impl PartialEq for FinitePoset {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.up == other.up
    }
}

impl Eq for FinitePoset {}

/// JSON form of a poset: element ids plus the cover (or full order) pairs.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct PosetJson {
    pub elements: Vec<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub leq: Vec<(String, String)>,
}

fn index_labels(labels: &[String]) -> Result<HashMap<String, usize>> {
    let mut index = HashMap::with_capacity(labels.len());
    for (i, l) in labels.iter().enumerate() {
        if index.insert(l.clone(), i).is_some() {
            return Err(Error::DuplicateElement(l.clone()));
        }
    }
    Ok(index)
}

fn resolve(index: &HashMap<String, usize>, pairs: &[(String, String)]) -> Result<Vec<(usize, usize)>> {
    pairs
        .iter()
        .map(|(a, b)| {
            let x = *index.get(a).ok_or_else(|| Error::UnknownElement(a.clone()))?;
            let y = *index.get(b).ok_or_else(|| Error::UnknownElement(b.clone()))?;
            Ok((x, y))
        })
        .collect()
}

#[inline]
fn bit(rows: &[u64], words: usize, x: usize, y: usize) -> bool {
    rows[x * words + y / 64] >> (y % 64) & 1 == 1
}

#[inline]
fn set_bit(rows: &mut [u64], words: usize, x: usize, y: usize) {
    rows[x * words + y / 64] |= 1 << (y % 64);
}

fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * 64 + b)
        })
    })
}

/// Reflexive-transitive closure of a relation given as bit rows.
fn close(rows: &mut [u64], n: usize, words: usize) {
    for x in 0..n {
        set_bit(rows, words, x, x);
    }
    // Warshall: if x <= k then x inherits everything above k
    for k in 0..n {
        let krow: Vec<u64> = rows[k * words..(k + 1) * words].to_vec();
        for x in 0..n {
            if bit(rows, words, x, k) {
                for (w, kw) in krow.iter().enumerate() {
                    rows[x * words + w] |= kw;
                }
            }
        }
    }
}

impl FinitePoset {
    /// Builds a poset from an explicit, already closed order relation.
    pub fn from_leq(elements: Vec<String>, leq: &[(String, String)]) -> Result<Self> {
        let index = index_labels(&elements)?;
        let pairs = resolve(&index, leq)?;
        let n = elements.len();
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for &(x, y) in &pairs {
            set_bit(&mut rows, words, x, y);
        }
        // Cycles are reported first: they make every other check meaningless.
        let mut closed = rows.clone();
        close(&mut closed, n, words);
        for x in 0..n {
            for y in x + 1..n {
                if bit(&closed, words, x, y) && bit(&closed, words, y, x) {
                    return Err(Error::NotAntisymmetric(elements[x].clone(), elements[y].clone()));
                }
            }
        }
        Self::from_rows(elements, index, rows, words)
    }

    /// Builds a poset as the reflexive-transitive closure of the given pairs.
    pub fn from_covers(elements: Vec<String>, covers: &[(String, String)]) -> Result<Self> {
        let index = index_labels(&elements)?;
        let pairs = resolve(&index, covers)?;
        let n = elements.len();
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for &(x, y) in &pairs {
            set_bit(&mut rows, words, x, y);
        }
        close(&mut rows, n, words);
        Self::from_rows(elements, index, rows, words)
    }

    /// Builds a poset from a predicate `leq(i, j)` over element indices.
    pub fn from_fn(elements: Vec<String>, leq: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let index = index_labels(&elements)?;
        let n = elements.len();
        let words = n.div_ceil(64).max(1);
        let mut rows = vec![0u64; n * words];
        for x in 0..n {
            for y in 0..n {
                if leq(x, y) {
                    set_bit(&mut rows, words, x, y);
                }
            }
        }
        Self::from_rows(elements, index, rows, words)
    }

    pub fn from_json(json: &PosetJson) -> Result<Self> {
        if json.leq.is_empty() {
            Self::from_covers(json.elements.clone(), &json.covers)
        } else {
            Self::from_leq(json.elements.clone(), &json.leq)
        }
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.labels.clone(),
            covers: self
                .covers
                .iter()
                .map(|&(x, y)| (self.labels[x].clone(), self.labels[y].clone()))
                .collect(),
            leq: Vec::new(),
        }
    }

    fn from_rows(labels: Vec<String>, index: HashMap<String, usize>, up: Vec<u64>, words: usize) -> Result<Self> {
        let n = labels.len();
        if let Some(x) = (0..n).find(|&x| !bit(&up, words, x, x)) {
            return Err(Error::NotReflexive(labels[x].clone()));
        }
        for x in 0..n {
            for y in x + 1..n {
                if bit(&up, words, x, y) && bit(&up, words, y, x) {
                    return Err(Error::NotAntisymmetric(labels[x].clone(), labels[y].clone()));
                }
            }
        }
        // transitivity: x <= y implies up(y) ⊆ up(x)
        for x in 0..n {
            let xrow = &up[x * words..(x + 1) * words];
            for y in ones(xrow) {
                let yrow = &up[y * words..(y + 1) * words];
                if let Some(w) = (0..words).find(|&w| yrow[w] & !xrow[w] != 0) {
                    let z = w * 64 + (yrow[w] & !xrow[w]).trailing_zeros() as usize;
                    return Err(Error::NotTransitive(
                        labels[x].clone(),
                        labels[y].clone(),
                        labels[z].clone(),
                    ));
                }
            }
        }
        let mut down = vec![0u64; n * words];
        for x in 0..n {
            for y in ones(&up[x * words..(x + 1) * words]) {
                set_bit(&mut down, words, y, x);
            }
        }
        let mut covers = Vec::new();
        let mut upper = vec![Vec::new(); n];
        let mut lower = vec![Vec::new(); n];
        for x in 0..n {
            let xrow = &up[x * words..(x + 1) * words];
            for y in ones(xrow) {
                if y == x {
                    continue;
                }
                let yrow = &down[y * words..(y + 1) * words];
                let between: u32 = (0..words).map(|w| (xrow[w] & yrow[w]).count_ones()).sum();
                if between == 2 {
                    covers.push((x, y));
                    upper[x].push(y);
                    lower[y].push(x);
                }
            }
        }
        Ok(FinitePoset {
            labels,
            index,
            words,
            up,
            down,
            covers,
            upper,
            lower,
        })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.index
            .get(label)
            .copied()
            .ok_or_else(|| Error::UnknownElement(label.to_string()))
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        bit(&self.up, self.words, x, y)
    }

    /// Elements `y` with `x <= y`, ascending by index.
    pub fn up_set(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        ones(&self.up[x * self.words..(x + 1) * self.words])
    }

    /// Elements `y` with `y <= x`, ascending by index.
    pub fn down_set(&self, x: usize) -> impl Iterator<Item = usize> + '_ {
        ones(&self.down[x * self.words..(x + 1) * self.words])
    }

    /// Cover pairs `(x, y)` with `x ⋖ y`, grouped by `x`.
    pub fn covers(&self) -> &[(usize, usize)] {
        &self.covers
    }

    pub fn upper_covers(&self, x: usize) -> &[usize] {
        &self.upper[x]
    }

    pub fn lower_covers(&self, x: usize) -> &[usize] {
        &self.lower[x]
    }

    /// All comparable pairs `x <= y`, lexicographic in element order.
    pub fn intervals(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|x| self.up_set(x).map(move |y| (x, y)))
            .collect()
    }

    pub fn num_intervals(&self) -> usize {
        self.up.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// A linear extension: elements sorted by the size of their down-set.
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by_key(|&x| {
            self.down[x * self.words..(x + 1) * self.words]
                .iter()
                .map(|w| w.count_ones())
                .sum::<u32>()
        });
        order
    }

    /// Unique minimal element, if any.
    pub fn minimum(&self) -> Option<usize> {
        (0..self.len()).find(|&x| self.up_set(x).count() == self.len())
    }

    /// Unique maximal element, if any.
    pub fn maximum(&self) -> Option<usize> {
        (0..self.len()).find(|&x| self.down_set(x).count() == self.len())
    }

    /// Z[x][y] = 1 iff x <= y.
    pub fn zeta_matrix(&self) -> IntMatrix {
        let n = self.len();
        let mut z = IntMatrix::zeros(n, n);
        for x in 0..n {
            for y in self.up_set(x) {
                z[(x, y)] = 1;
            }
        }
        z
    }

    /// The inverse of the zeta matrix (the Möbius function, `M[x][y] = μ(x, y)`).
    ///
    /// In a linear extension the zeta matrix is unitriangular, so Gaussian
    /// elimination never divides: rows are solved by back substitution from
    /// the top of the poset down.
    pub fn zeta_inverse(&self) -> Result<IntMatrix> {
        let n = self.len();
        let order = self.linear_extension();
        let mut inv = IntMatrix::zeros(n, n);
        for &x in order.iter().rev() {
            // row x of Z·M = e_x: M[x] = e_x - Σ_{x<k} M[k]
            let mut row = vec![0i64; n];
            row[x] = 1;
            for k in self.up_set(x) {
                if k == x {
                    continue;
                }
                for (r, m) in row.iter_mut().zip(inv.row(k)) {
                    if *m != 0 {
                        *r = r.checked_sub(*m).ok_or(Error::Overflow)?;
                    }
                }
            }
            inv.row_mut(x).copy_from_slice(&row);
        }
        Ok(inv)
    }

    /// φ = Z·(Z⁻¹)ᵗ, the class map of the Serre functor on dimension vectors.
    pub fn serre_class_matrix(&self) -> Result<IntMatrix> {
        let n = self.len();
        let inv_t = self.zeta_inverse()?.transpose();
        // row x of Z·Mᵗ is the sum of rows k of Mᵗ over k in up(x)
        let mut phi = IntMatrix::zeros(n, n);
        for x in 0..n {
            let mut row = vec![0i64; n];
            for k in self.up_set(x) {
                for (r, m) in row.iter_mut().zip(inv_t.row(k)) {
                    if *m != 0 {
                        *r = r.checked_add(*m).ok_or(Error::Overflow)?;
                    }
                }
            }
            phi.row_mut(x).copy_from_slice(&row);
        }
        Ok(phi)
    }

    /// C = −Z·(Z⁻¹)ᵗ.
    pub fn coxeter_matrix(&self) -> Result<IntMatrix> {
        self.serre_class_matrix()?.neg()
    }

    /// Renders the Hasse diagram in Graphviz DOT.
    pub fn to_dot(&self, name: &str) -> String {
        let mut out = format!("digraph \"{name}\" {{\n  rankdir=BT;\n");
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("  n{i} [label=\"{}\"];\n", l.replace('"', "\\\"")));
        }
        for &(x, y) in &self.covers {
            out.push_str(&format!("  n{x} -> n{y};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// The five-element poset 0<1, 0<2, 1<3, 2<3, 3<4 used as a worked example
/// of a Serre orbit that leaves the module category.
pub fn ex_dyck() -> FinitePoset {
    let elements = (0..5).map(|i| i.to_string()).collect();
    let covers: Vec<(String, String)> = [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]
        .iter()
        .map(|(a, b)| (a.to_string(), b.to_string()))
        .collect();
    FinitePoset::from_covers(elements, &covers).expect("ex_dyck is a poset")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    fn pairs(v: &[(&str, &str)]) -> Vec<(String, String)> {
        v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
    }

    fn chain2() -> FinitePoset {
        FinitePoset::from_leq(s(&["b", "a"]), &pairs(&[("b", "b"), ("a", "a"), ("b", "a")])).unwrap()
    }

    #[test]
    fn two_chain() {
        let p = chain2();
        assert_eq!(p.len(), 2);
        assert_eq!(p.covers(), &[(0, 1)]);
        assert_eq!(p.intervals().len(), 3);
        assert_eq!(
            p.zeta_matrix(),
            IntMatrix::from_rows(vec![vec![1, 1], vec![0, 1]]).unwrap()
        );
        assert_eq!(
            p.coxeter_matrix().unwrap(),
            IntMatrix::from_rows(vec![vec![0, -1], vec![1, -1]]).unwrap()
        );
    }

    #[test]
    fn ex_dyck_covers() {
        let p = ex_dyck();
        assert_eq!(p.len(), 5);
        assert_eq!(p.covers(), &[(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)]);
    }

    #[test]
    fn cyclic_triple_is_antisymmetry_error() {
        let err =
            FinitePoset::from_leq(s(&["a", "b", "c"]), &pairs(&[("a", "b"), ("b", "c"), ("c", "a")])).unwrap_err();
        assert!(matches!(err, Error::NotAntisymmetric(_, _)), "{err}");
    }

    #[test]
    fn missing_reflexive_and_transitive_pairs() {
        let err = FinitePoset::from_leq(s(&["a", "b"]), &pairs(&[("a", "a"), ("a", "b")])).unwrap_err();
        assert_eq!(err, Error::NotReflexive("b".into()));
        let err = FinitePoset::from_leq(
            s(&["a", "b", "c"]),
            &pairs(&[("a", "a"), ("b", "b"), ("c", "c"), ("a", "b"), ("b", "c")]),
        )
        .unwrap_err();
        assert_eq!(err, Error::NotTransitive("a".into(), "b".into(), "c".into()));
    }

    #[test]
    fn antichain() {
        let p = FinitePoset::from_covers(s(&["x", "y", "z"]), &[]).unwrap();
        assert!(p.covers().is_empty());
        let p2 = FinitePoset::from_covers(s(&["x", "y"]), &[]).unwrap();
        assert_eq!(p2.zeta_matrix(), IntMatrix::identity(2));
        assert_eq!(p2.coxeter_matrix().unwrap(), IntMatrix::identity(2).neg().unwrap());
    }

    #[test]
    fn unknown_element_rejected() {
        let err = FinitePoset::from_covers(s(&["x"]), &pairs(&[("x", "q")])).unwrap_err();
        assert_eq!(err, Error::UnknownElement("q".into()));
    }

    #[test]
    fn zeta_inverse_is_inverse() {
        let p = ex_dyck();
        let z = p.zeta_matrix();
        let m = p.zeta_inverse().unwrap();
        assert_eq!(z.mul(&m).unwrap(), IntMatrix::identity(5));
    }

    #[test]
    fn dyck_coxeter_has_order_eight() {
        let c = ex_dyck().coxeter_matrix().unwrap();
        assert!(c.power_is_identity(8).unwrap());
        assert!(!c.power_is_identity(4).unwrap());
    }
}
