//! Finite-dimensional representations of a poset over the rationals.
//!
//! A representation assigns a space `M_x` to every element and a map
//! `M_x → M_y` to every cover `x ⋖ y`, such that all paths between two
//! elements compose to the same map.

use std::sync::Arc;

use num_traits::{One, Zero};

use super::linalg::{QMatrix, Span, Q};
use crate::error::{Error, Result};
use crate::interval_poset::IntervalPoset;
use crate::poset::FinitePoset;
use crate::tamari::TamariLattice;

#[derive(Clone, Debug)]
pub struct PosetRep {
    poset: Arc<FinitePoset>,
    dims: Vec<usize>,
    /// One matrix per entry of `poset.covers()`, of shape `dims[y] × dims[x]`.
    maps: Vec<QMatrix>,
}

fn cover_index(poset: &FinitePoset, x: usize, y: usize) -> Option<usize> {
    poset.covers().binary_search(&(x, y)).ok()
}

impl PosetRep {
    pub fn new(poset: Arc<FinitePoset>, dims: Vec<usize>, maps: Vec<QMatrix>) -> Result<Self> {
        if dims.len() != poset.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} dimensions for {} elements",
                dims.len(),
                poset.len()
            )));
        }
        if maps.len() != poset.covers().len() {
            return Err(Error::ShapeMismatch(format!(
                "{} maps for {} covers",
                maps.len(),
                poset.covers().len()
            )));
        }
        for (&(x, y), m) in poset.covers().iter().zip(&maps) {
            if (m.rows(), m.cols()) != (dims[y], dims[x]) {
                return Err(Error::ShapeMismatch(format!(
                    "map {} → {} is {}×{}, expected {}×{}",
                    poset.label(x),
                    poset.label(y),
                    m.rows(),
                    m.cols(),
                    dims[y],
                    dims[x]
                )));
            }
        }
        let rep = PosetRep { poset, dims, maps };
        rep.check_commutative()?;
        Ok(rep)
    }

    /// Thin representation with identity maps on covers inside `support`.
    pub fn thin(poset: Arc<FinitePoset>, support: &[bool]) -> Result<Self> {
        let dims: Vec<usize> = support.iter().map(|&s| usize::from(s)).collect();
        let maps = poset
            .covers()
            .iter()
            .map(|&(x, y)| {
                let mut m = QMatrix::zeros(dims[y], dims[x]);
                if support[x] && support[y] {
                    m.set(0, 0, Q::one());
                }
                m
            })
            .collect();
        PosetRep::new(poset, dims, maps)
    }

    pub fn zero(poset: Arc<FinitePoset>) -> Self {
        let n = poset.len();
        PosetRep::thin(poset, &vec![false; n]).expect("zero representation")
    }

    /// Indecomposable projective at `x`: supported on the up-set of `x`.
    pub fn projective(poset: Arc<FinitePoset>, x: usize) -> Self {
        let support: Vec<bool> = (0..poset.len()).map(|y| poset.leq(x, y)).collect();
        PosetRep::thin(poset, &support).expect("up-sets are convex")
    }

    /// Indecomposable injective at `x`: supported on the down-set of `x`.
    pub fn injective(poset: Arc<FinitePoset>, x: usize) -> Self {
        let support: Vec<bool> = (0..poset.len()).map(|y| poset.leq(y, x)).collect();
        PosetRep::thin(poset, &support).expect("down-sets are convex")
    }

    pub fn simple(poset: Arc<FinitePoset>, x: usize) -> Self {
        let support: Vec<bool> = (0..poset.len()).map(|y| y == x).collect();
        PosetRep::thin(poset, &support).expect("points are convex")
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn dim(&self, x: usize) -> usize {
        self.dims[x]
    }

    pub fn dimvec(&self) -> &[usize] {
        &self.dims
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn is_thin(&self) -> bool {
        self.dims.iter().all(|&d| d <= 1)
    }

    /// The structure map on the cover `x ⋖ y`.
    pub fn cover_map(&self, x: usize, y: usize) -> &QMatrix {
        let i = cover_index(&self.poset, x, y).expect("not a cover");
        &self.maps[i]
    }

    /// The map `M_x → M_y` for `x <= y`, along any saturated chain.
    pub fn path_map(&self, x: usize, y: usize) -> QMatrix {
        assert!(self.poset.leq(x, y), "path_map needs x <= y");
        let mut acc = QMatrix::identity(self.dims[x]);
        let mut cur = x;
        while cur != y {
            let next = *self
                .poset
                .upper_covers(cur)
                .iter()
                .find(|&&z| self.poset.leq(z, y))
                .expect("a cover below y");
            acc = self.cover_map(cur, next).mul(&acc);
            cur = next;
        }
        acc
    }

    fn check_commutative(&self) -> Result<()> {
        let p = &self.poset;
        for (x, y) in p.intervals() {
            if x == y || self.dims[x] == 0 || self.dims[y] == 0 {
                continue;
            }
            let reference = self.path_map(x, y);
            for &z in p.upper_covers(x) {
                if p.leq(z, y) && self.path_map(z, y).mul(self.cover_map(x, z)) != reference {
                    return Err(Error::NotCommutative(p.label(x).into(), p.label(y).into()));
                }
            }
        }
        Ok(())
    }
}

/// `dim Hom(A, B)`, as the nullity of the commutation equations
/// `B_{xy} f_x = f_y A_{xy}` over all covers.
pub fn hom_dim(a: &PosetRep, b: &PosetRep) -> usize {
    assert!(Arc::ptr_eq(&a.poset, &b.poset) || a.poset.covers() == b.poset.covers());
    let n = a.poset.len();
    let mut offset = vec![0; n + 1];
    for x in 0..n {
        offset[x + 1] = offset[x] + b.dims[x] * a.dims[x];
    }
    let unknowns = offset[n];
    if unknowns == 0 {
        return 0;
    }
    // f_x is stored row-major: entry (r, c) at offset[x] + r * dim A_x + c
    let var = |x: usize, r: usize, c: usize| offset[x] + r * a.dims[x] + c;
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for &(x, y) in a.poset.covers() {
        let am = a.cover_map(x, y);
        let bm = b.cover_map(x, y);
        for r in 0..b.dims[y] {
            for c in 0..a.dims[x] {
                let mut eq = vec![Q::zero(); unknowns];
                for k in 0..b.dims[x] {
                    if !bm.get(r, k).is_zero() {
                        eq[var(x, k, c)] += bm.get(r, k);
                    }
                }
                for k in 0..a.dims[y] {
                    if !am.get(k, c).is_zero() {
                        eq[var(y, r, k)] -= am.get(k, c);
                    }
                }
                if eq.iter().any(|v| !v.is_zero()) {
                    rows.push(eq);
                }
            }
        }
    }
    if rows.is_empty() {
        return unknowns;
    }
    let m = QMatrix::from_fn(rows.len(), unknowns, |r, c| rows[r][c].clone());
    unknowns - m.rank()
}

/// Isomorphism test for thin representations: equal supports and the same
/// pattern of nonzero cover maps.
pub fn iso_thin(a: &PosetRep, b: &PosetRep) -> Result<bool> {
    if !a.is_thin() || !b.is_thin() {
        return Err(Error::NotThin);
    }
    if a.dims != b.dims {
        return Ok(false);
    }
    Ok(a.maps.iter().zip(&b.maps).all(|(f, g)| f.is_zero() == g.is_zero()))
}

/// The thin module supported on the trees of an interval-poset.
pub fn interval_module(ip: &IntervalPoset, lattice: &TamariLattice) -> Result<PosetRep> {
    let mut support = vec![false; lattice.trees().len()];
    for x in ip.support(lattice) {
        support[x] = true;
    }
    PosetRep::thin(lattice.poset_arc(), &support)
}

/// Radical at `x`: the span of the images of all cover maps into `M_x`.
pub(crate) fn radical(m: &PosetRep, x: usize) -> Span {
    let mut span = Span::new(m.dims[x]);
    for &w in m.poset.lower_covers(x) {
        for v in m.cover_map(w, x).columns() {
            span.push(v);
        }
    }
    span
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poset::ex_dyck;

    fn dyck() -> Arc<FinitePoset> {
        Arc::new(ex_dyck())
    }

    #[test]
    fn projective_and_injective_supports() {
        let p = dyck();
        assert_eq!(PosetRep::projective(p.clone(), 3).dimvec(), &[0, 0, 0, 1, 1]);
        assert_eq!(PosetRep::injective(p.clone(), 3).dimvec(), &[1, 1, 1, 1, 0]);
        assert_eq!(PosetRep::simple(p, 2).dimvec(), &[0, 0, 1, 0, 0]);
    }

    #[test]
    fn hom_between_indecomposables() {
        let p = dyck();
        for x in 0..p.len() {
            for y in 0..p.len() {
                let px = PosetRep::projective(p.clone(), x);
                let py = PosetRep::projective(p.clone(), y);
                assert_eq!(hom_dim(&px, &py), usize::from(p.leq(y, x)));
                let ix = PosetRep::injective(p.clone(), x);
                let iy = PosetRep::injective(p.clone(), y);
                assert_eq!(hom_dim(&ix, &iy), usize::from(p.leq(y, x)));
                // Hom(P_x, M) = M_x
                assert_eq!(hom_dim(&px, &iy), usize::from(p.leq(x, y)));
            }
        }
    }

    #[test]
    fn inconsistent_square_is_rejected() {
        let p = dyck();
        // identity everywhere except the cover 2 ⋖ 3 which is zero
        let dims = vec![1; 5];
        let maps = p
            .covers()
            .iter()
            .map(|&(x, y)| {
                let v = if (x, y) == (2, 3) { 0 } else { 1 };
                QMatrix::from_i64(&[&[v]])
            })
            .collect();
        assert!(matches!(PosetRep::new(p, dims, maps), Err(Error::NotCommutative(..))));
    }

    #[test]
    fn iso_thin_rejects_thick() {
        let p = dyck();
        let mut dims = vec![0; 5];
        dims[4] = 2;
        let maps = p
            .covers()
            .iter()
            .map(|&(x, y)| QMatrix::zeros(dims[y], dims[x]))
            .collect();
        let thick = PosetRep::new(p.clone(), dims, maps).unwrap();
        assert!(matches!(iso_thin(&thick, &thick), Err(Error::NotThin)));
        assert!(iso_thin(&PosetRep::injective(p.clone(), 4), &PosetRep::injective(p, 4)).unwrap());
    }
}
