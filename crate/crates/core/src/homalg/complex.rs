//! Bounded chain complexes of representations and their homology.
//!
//! Differentials lower degree: `d_k : C_k → C_{k-1}`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;

use super::linalg::{QMatrix, Span, Q};
use super::rep::PosetRep;
use crate::error::{Error, Result};
use crate::poset::FinitePoset;

/// A morphism of representations, one matrix per element.
pub type Morphism = Vec<QMatrix>;

#[derive(Clone, Debug)]
pub struct ChainComplex {
    poset: Arc<FinitePoset>,
    terms: BTreeMap<i32, PosetRep>,
    diffs: BTreeMap<i32, Morphism>,
}

impl ChainComplex {
    /// Builds a complex, dropping zero terms and checking that every `d_k`
    /// is a morphism and that `d_{k-1} d_k = 0`.
    pub fn new(
        poset: Arc<FinitePoset>,
        terms: BTreeMap<i32, PosetRep>,
        diffs: BTreeMap<i32, Morphism>,
    ) -> Result<Self> {
        let terms: BTreeMap<i32, PosetRep> = terms.into_iter().filter(|(_, m)| !m.is_zero()).collect();
        let mut kept = BTreeMap::new();
        for (k, d) in diffs {
            let (Some(src), Some(dst)) = (terms.get(&k), terms.get(&(k - 1))) else {
                continue;
            };
            check_morphism(&poset, src, dst, &d, k)?;
            kept.insert(k, d);
        }
        let cx = ChainComplex {
            poset,
            terms,
            diffs: kept,
        };
        cx.check_square_zero()?;
        Ok(cx)
    }

    pub fn single(m: PosetRep, degree: i32) -> Self {
        let poset = Arc::clone(m.poset());
        let mut terms = BTreeMap::new();
        terms.insert(degree, m);
        ChainComplex::new(poset, terms, BTreeMap::new()).expect("one-term complex")
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn terms(&self) -> &BTreeMap<i32, PosetRep> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `d_k` at element `z` as a matrix, zero if absent.
    fn diff_at(&self, k: i32, z: usize) -> QMatrix {
        match self.diffs.get(&k) {
            Some(d) => d[z].clone(),
            None => QMatrix::zeros(self.dim(k - 1, z), self.dim(k, z)),
        }
    }

    fn dim(&self, k: i32, z: usize) -> usize {
        self.terms.get(&k).map_or(0, |m| m.dim(z))
    }

    fn check_square_zero(&self) -> Result<()> {
        for (&k, d) in &self.diffs {
            let Some(d_lower) = self.diffs.get(&(k - 1)) else {
                continue;
            };
            for z in 0..self.poset.len() {
                if !d_lower[z].mul(&d[z]).is_zero() {
                    return Err(Error::NotAComplex {
                        degree: k,
                        element: self.poset.label(z).into(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Alternating sum of dimension vectors, `Σ (-1)^k dimvec(C_k)`.
    pub fn euler_dimvec(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.poset.len()];
        for (&k, m) in &self.terms {
            let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
            for (o, &d) in out.iter_mut().zip(m.dimvec()) {
                *o += sign * d as i64;
            }
        }
        out
    }

    /// Nonzero homology representations by degree.
    pub fn homology(&self) -> Result<BTreeMap<i32, PosetRep>> {
        let n = self.poset.len();
        let mut out = BTreeMap::new();
        for (&k, term) in &self.terms {
            // per element: basis of boundaries B_z followed by complement H_z in cycles
            let mut boundaries: Vec<Vec<Vec<Q>>> = Vec::with_capacity(n);
            let mut classes: Vec<Vec<Vec<Q>>> = Vec::with_capacity(n);
            for z in 0..n {
                let dim = term.dim(z);
                let mut span = Span::new(dim);
                for v in self.diff_at(k + 1, z).columns() {
                    span.push(v);
                }
                let b = span.basis().to_vec();
                let cycles = if self.dim(k - 1, z) == 0 {
                    QMatrix::identity(dim).columns()
                } else {
                    self.diff_at(k, z).kernel()
                };
                let mut h = Vec::new();
                for v in cycles {
                    if span.push(v.clone()) {
                        h.push(v);
                    }
                }
                boundaries.push(b);
                classes.push(h);
            }
            let dims: Vec<usize> = classes.iter().map(Vec::len).collect();
            if dims.iter().all(|&d| d == 0) {
                continue;
            }
            let mut maps = Vec::with_capacity(self.poset.covers().len());
            for &(x, y) in self.poset.covers() {
                let mut m = QMatrix::zeros(dims[y], dims[x]);
                if dims[x] > 0 && dims[y] > 0 {
                    let mut basis = boundaries[y].clone();
                    basis.extend(classes[y].iter().cloned());
                    let coords = QMatrix::from_columns(term.dim(y), &basis);
                    let skip = boundaries[y].len();
                    let f = term.cover_map(x, y);
                    for (c, h) in classes[x].iter().enumerate() {
                        let image = f.mul_vec(h);
                        let sol = coords
                            .solve(&image)
                            .ok_or_else(|| Error::Invalid("image of a cycle is not a cycle".into()))?;
                        for r in 0..dims[y] {
                            m.set(r, c, sol[skip + r].clone());
                        }
                    }
                }
                maps.push(m);
            }
            out.insert(k, PosetRep::new(Arc::clone(&self.poset), dims, maps)?);
        }
        Ok(out)
    }
}

fn check_morphism(poset: &FinitePoset, src: &PosetRep, dst: &PosetRep, d: &Morphism, k: i32) -> Result<()> {
    if d.len() != poset.len() {
        return Err(Error::ShapeMismatch(format!(
            "differential {k} has {} components",
            d.len()
        )));
    }
    for (z, m) in d.iter().enumerate() {
        if (m.rows(), m.cols()) != (dst.dim(z), src.dim(z)) {
            return Err(Error::ShapeMismatch(format!(
                "differential {k} at `{}` is {}×{}",
                poset.label(z),
                m.rows(),
                m.cols()
            )));
        }
    }
    for &(x, y) in poset.covers() {
        let left = d[y].mul(src.cover_map(x, y));
        let right = dst.cover_map(x, y).mul(&d[x]);
        if left != right {
            return Err(Error::NotCommutative(poset.label(x).into(), poset.label(y).into()));
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SummandKind {
    Projective,
    Injective,
}

/// A complex whose terms are direct sums of indecomposable projectives or
/// injectives. The differential `d_k` is a scalar matrix with one row per
/// summand of degree `k-1` and one column per summand of degree `k`; entry
/// `λ` stands for `λ` times the canonical map between the two summands.
#[derive(Clone, Debug)]
pub struct SumComplex {
    poset: Arc<FinitePoset>,
    kind: SummandKind,
    terms: BTreeMap<i32, Vec<usize>>,
    diffs: BTreeMap<i32, QMatrix>,
}

impl SumComplex {
    pub fn new(
        poset: Arc<FinitePoset>,
        kind: SummandKind,
        terms: BTreeMap<i32, Vec<usize>>,
        diffs: BTreeMap<i32, QMatrix>,
    ) -> Result<Self> {
        let terms: BTreeMap<i32, Vec<usize>> = terms.into_iter().filter(|(_, v)| !v.is_empty()).collect();
        let what = match kind {
            SummandKind::Projective => "P→P",
            SummandKind::Injective => "I→I",
        };
        let mut kept = BTreeMap::new();
        for (k, d) in diffs {
            let (Some(src), Some(dst)) = (terms.get(&k), terms.get(&(k - 1))) else {
                continue;
            };
            if (d.rows(), d.cols()) != (dst.len(), src.len()) {
                return Err(Error::ShapeMismatch(format!(
                    "differential {k} is {}×{}, expected {}×{}",
                    d.rows(),
                    d.cols(),
                    dst.len(),
                    src.len()
                )));
            }
            for (r, &y) in dst.iter().enumerate() {
                for (c, &x) in src.iter().enumerate() {
                    // Hom(P_x, P_y) and Hom(I_x, I_y) are nonzero iff y <= x
                    if !d.get(r, c).is_zero() && !poset.leq(y, x) {
                        return Err(Error::NoMorphism {
                            what,
                            from: poset.label(x).into(),
                            to: poset.label(y).into(),
                        });
                    }
                }
            }
            kept.insert(k, d);
        }
        for (&k, d) in &kept {
            if let Some(lower) = kept.get(&(k - 1)) {
                if !lower.mul(d).is_zero() {
                    return Err(Error::NotAComplex {
                        degree: k,
                        element: "*".into(),
                    });
                }
            }
        }
        Ok(SumComplex {
            poset,
            kind,
            terms,
            diffs: kept,
        })
    }

    pub fn poset(&self) -> &Arc<FinitePoset> {
        &self.poset
    }

    pub fn kind(&self) -> SummandKind {
        self.kind
    }

    pub fn terms(&self) -> &BTreeMap<i32, Vec<usize>> {
        &self.terms
    }

    pub fn diff(&self, k: i32) -> Option<&QMatrix> {
        self.diffs.get(&k)
    }

    /// Degrees that carry summands, lowest first.
    pub fn degrees(&self) -> Vec<i32> {
        self.terms.keys().copied().collect()
    }

    /// Replaces every `P_x` by `I_x`, keeping the scalar differentials.
    pub fn nakayama(&self) -> Result<SumComplex> {
        if self.kind != SummandKind::Projective {
            let k = self.terms.keys().next().copied().unwrap_or(0);
            return Err(Error::NotProjective(k));
        }
        Ok(SumComplex {
            poset: Arc::clone(&self.poset),
            kind: SummandKind::Injective,
            terms: self.terms.clone(),
            diffs: self.diffs.clone(),
        })
    }

    fn present(&self, x: usize, z: usize) -> bool {
        match self.kind {
            SummandKind::Projective => self.poset.leq(x, z),
            SummandKind::Injective => self.poset.leq(z, x),
        }
    }

    /// Positions of the summands that are nonzero at `z`.
    fn coords(&self, summands: &[usize], z: usize) -> Vec<usize> {
        (0..summands.len()).filter(|&i| self.present(summands[i], z)).collect()
    }

    fn term_rep(&self, summands: &[usize]) -> Result<PosetRep> {
        let coords: Vec<Vec<usize>> = (0..self.poset.len()).map(|z| self.coords(summands, z)).collect();
        let dims = coords.iter().map(Vec::len).collect();
        let maps = self
            .poset
            .covers()
            .iter()
            .map(|&(x, y)| {
                QMatrix::from_fn(coords[y].len(), coords[x].len(), |r, c| {
                    if coords[y][r] == coords[x][c] {
                        num_traits::One::one()
                    } else {
                        Q::zero()
                    }
                })
            })
            .collect();
        PosetRep::new(Arc::clone(&self.poset), dims, maps)
    }

    /// The complex of representations this describes.
    pub fn realize(&self) -> Result<ChainComplex> {
        let mut terms = BTreeMap::new();
        for (&k, summands) in &self.terms {
            terms.insert(k, self.term_rep(summands)?);
        }
        let mut diffs = BTreeMap::new();
        for (&k, d) in &self.diffs {
            let src = &self.terms[&k];
            let dst = &self.terms[&(k - 1)];
            let morphism = (0..self.poset.len())
                .map(|z| d.select(&self.coords(dst, z), &self.coords(src, z)))
                .collect();
            diffs.insert(k, morphism);
        }
        ChainComplex::new(Arc::clone(&self.poset), terms, diffs)
    }

    /// `Σ (-1)^k Σ_summands dimvec`, computed without realizing.
    pub fn euler_dimvec(&self) -> Vec<i64> {
        let mut out = vec![0i64; self.poset.len()];
        for (&k, summands) in &self.terms {
            let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
            for &x in summands {
                for (z, o) in out.iter_mut().enumerate() {
                    if self.present(x, z) {
                        *o += sign;
                    }
                }
            }
        }
        out
    }
}
