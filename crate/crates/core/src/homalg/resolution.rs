//! Projective resolutions and the derived Serre functor `ν ∘ (proj. res.)`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use super::complex::{ChainComplex, SumComplex, SummandKind};
use super::linalg::{q, QMatrix, Span, Q};
use super::rep::{radical, PosetRep};
use crate::error::{Error, Result};
use crate::interval_poset::IntervalPoset;
use crate::tamari::TamariLattice;

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Projective resolution of an interval module indexed by subsets `R` of the
/// decreasing Hasse covers `J`. The summand for `R` sits in degree `|R|` at
/// the tree `S` with `Inc(S) = C + R̄`; removing the `p`-th pair of `R`
/// contributes `(-1)^p` to the differential.
pub fn boolean_resolution(ip: &IntervalPoset, lattice: &TamariLattice) -> Result<SumComplex> {
    if ip.size() != lattice.size() {
        return Err(Error::SizeMismatch(ip.size(), lattice.size()));
    }
    let c = IntervalPoset::closure(ip.size(), ip.inc().pairs())?;
    let j = ip.hasse_split().j;
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();
    let mut previous: Vec<Vec<usize>> = Vec::new();
    for k in 0..=j.len() {
        let level = subsets(j.len(), k);
        let mut summands = Vec::with_capacity(level.len());
        for r in &level {
            let pairs: Vec<(usize, usize)> = r.iter().map(|&i| j[i]).collect();
            let (s, _) = c.add_reversed(&pairs)?.to_interval();
            summands.push(lattice.index_of(&s)?);
        }
        if k > 0 {
            let mut d = QMatrix::zeros(previous.len(), level.len());
            for (col, r) in level.iter().enumerate() {
                for p in 0..r.len() {
                    let mut face = r.clone();
                    face.remove(p);
                    let row = previous.binary_search(&face).expect("faces are listed");
                    d.set(row, col, q(if p % 2 == 0 { 1 } else { -1 }));
                }
            }
            diffs.insert(k as i32, d);
        }
        terms.insert(k as i32, summands);
        previous = level;
    }
    SumComplex::new(lattice.poset_arc(), SummandKind::Projective, terms, diffs)
}

fn unit(dim: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); dim];
    v[i] = Q::one();
    v
}

/// Lifts vectors given in the coordinates `present` to length `len`.
fn lift(v: &[Q], present: &[usize], len: usize) -> Vec<Q> {
    let mut out = vec![Q::zero(); len];
    for (val, &i) in v.iter().zip(present) {
        out[i] = val.clone();
    }
    out
}

/// Minimal projective resolution of `m`, built degree by degree as the
/// projective cover of the previous kernel. Vectors of `⊕ P_{x_i}` are kept
/// in global coordinates (one per summand), so the structure maps are
/// coordinate inclusions.
pub fn min_proj_resolution(m: &PosetRep) -> Result<SumComplex> {
    let poset = Arc::clone(m.poset());
    let n = poset.len();
    let mut terms = BTreeMap::new();
    let mut diffs = BTreeMap::new();

    // degree 0: top of m
    let mut gens: Vec<usize> = Vec::new();
    let mut images: Vec<Vec<Q>> = Vec::new();
    for x in 0..n {
        let mut span = radical(m, x);
        for i in 0..m.dim(x) {
            let e = unit(m.dim(x), i);
            if span.push(e.clone()) {
                gens.push(x);
                images.push(e);
            }
        }
    }
    if gens.is_empty() {
        return SumComplex::new(poset, SummandKind::Projective, terms, diffs);
    }
    let mut kernel: Vec<Vec<Vec<Q>>> = (0..n)
        .map(|z| {
            let present: Vec<usize> = (0..gens.len()).filter(|&i| poset.leq(gens[i], z)).collect();
            if present.is_empty() {
                return Vec::new();
            }
            let cols: Vec<Vec<Q>> = present
                .iter()
                .map(|&i| m.path_map(gens[i], z).mul_vec(&images[i]))
                .collect();
            QMatrix::from_columns(m.dim(z), &cols)
                .kernel()
                .iter()
                .map(|v| lift(v, &present, gens.len()))
                .collect()
        })
        .collect();
    terms.insert(0, gens.clone());

    for degree in 1.. {
        if kernel.iter().all(Vec::is_empty) {
            break;
        }
        if degree as usize > n + 1 {
            return Err(Error::Invalid("resolution does not terminate".into()));
        }
        let width = gens.len();
        let mut next: Vec<usize> = Vec::new();
        let mut columns: Vec<Vec<Q>> = Vec::new();
        for z in 0..n {
            let mut span = Span::new(width);
            for &w in poset.lower_covers(z) {
                for v in &kernel[w] {
                    span.push(v.clone());
                }
            }
            for v in &kernel[z] {
                if span.push(v.clone()) {
                    next.push(z);
                    columns.push(v.clone());
                }
            }
        }
        diffs.insert(degree, QMatrix::from_columns(width, &columns));
        terms.insert(degree, next.clone());
        kernel = (0..n)
            .map(|z| {
                let present: Vec<usize> = (0..next.len()).filter(|&i| poset.leq(next[i], z)).collect();
                if present.is_empty() {
                    return Vec::new();
                }
                let cols: Vec<Vec<Q>> = present.iter().map(|&i| columns[i].clone()).collect();
                QMatrix::from_columns(width, &cols)
                    .kernel()
                    .iter()
                    .map(|v| lift(v, &present, next.len()))
                    .collect()
            })
            .collect();
        gens = next;
    }
    SumComplex::new(poset, SummandKind::Projective, terms, diffs)
}

/// The derived Serre functor applied to a module placed in degree 0.
pub fn serre_module(m: &PosetRep) -> Result<ChainComplex> {
    min_proj_resolution(m)?.nakayama()?.realize()
}

/// One application of the Serre functor during an iteration.
#[derive(Clone, Debug)]
pub struct IterationStep {
    /// Nonzero homology as `(absolute degree, dimension vector)`.
    pub homology: Vec<(i32, Vec<usize>)>,
    /// Accumulated shift after this step, when the homology was concentrated.
    pub shift: Option<i32>,
}

#[derive(Clone, Debug)]
pub struct SerreIteration {
    pub steps: Vec<IterationStep>,
    /// Last module reached, in degree `shift`.
    pub module: PosetRep,
    pub shift: i32,
    /// True when some step had homology in more than one degree.
    pub halted: bool,
}

/// Applies the Serre functor up to `steps` times, stopping early when the
/// result is no longer a shifted module.
pub fn serre_iterate(m: &PosetRep, steps: usize) -> Result<SerreIteration> {
    let mut module = m.clone();
    let mut shift = 0;
    let mut out = Vec::new();
    for _ in 0..steps {
        let h = serre_module(&module)?.homology()?;
        let homology: Vec<(i32, Vec<usize>)> = h.iter().map(|(&k, r)| (k + shift, r.dimvec().to_vec())).collect();
        if h.len() > 1 {
            out.push(IterationStep { homology, shift: None });
            return Ok(SerreIteration {
                steps: out,
                module,
                shift,
                halted: true,
            });
        }
        match h.into_iter().next() {
            Some((k, rep)) => {
                shift += k;
                module = rep;
            }
            None => module = PosetRep::zero(Arc::clone(module.poset())),
        }
        out.push(IterationStep {
            homology,
            shift: Some(shift),
        });
    }
    Ok(SerreIteration {
        steps: out,
        module,
        shift,
        halted: false,
    })
}

/// Interval-poset of a thin module over Tam_n, when its support is the
/// support of one.
pub fn module_to_ip(m: &PosetRep, lattice: &TamariLattice) -> Option<IntervalPoset> {
    if !m.is_thin() || m.is_zero() {
        return None;
    }
    let support: Vec<usize> = (0..m.dimvec().len()).filter(|&x| m.dim(x) == 1).collect();
    // the support of [s, t] has least element s and greatest element t
    let poset = lattice.poset();
    let s = *support.iter().find(|&&x| support.iter().all(|&y| poset.leq(x, y)))?;
    let t = *support.iter().find(|&&x| support.iter().all(|&y| poset.leq(y, x)))?;
    let ip = IntervalPoset::from_interval(lattice.tree(s), lattice.tree(t)).ok()?;
    (ip.support(lattice) == support).then_some(ip)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homalg::rep::{interval_module, iso_thin};
    use crate::interval_poset::enumerate_ips;
    use crate::poset::ex_dyck;

    #[test]
    fn dyck_resolutions() {
        let p = Arc::new(ex_dyck());
        let r = min_proj_resolution(&PosetRep::injective(p.clone(), 3)).unwrap();
        assert_eq!(r.terms(), &BTreeMap::from([(0, vec![0]), (1, vec![4])]));
        let rad = PosetRep::thin(p.clone(), &[false, true, true, true, true]).unwrap();
        let r = min_proj_resolution(&rad).unwrap();
        assert_eq!(r.terms(), &BTreeMap::from([(0, vec![1, 2]), (1, vec![3])]));
        let r = min_proj_resolution(&PosetRep::projective(p, 3)).unwrap();
        assert_eq!(r.terms(), &BTreeMap::from([(0, vec![3])]));
    }

    #[test]
    fn dyck_iteration_leaves_modules() {
        let p = Arc::new(ex_dyck());
        let it = serre_iterate(&PosetRep::projective(p.clone(), 3), 10).unwrap();
        assert!(it.halted);
        assert_eq!(it.steps.len(), 3);
        assert_eq!(it.steps[0].homology, vec![(0, vec![1, 1, 1, 1, 0])]);
        assert_eq!(it.steps[1].homology, vec![(1, vec![0, 1, 1, 1, 1])]);
        assert_eq!(
            it.steps[2].homology,
            vec![(1, vec![1, 0, 0, 0, 0]), (2, vec![0, 0, 0, 1, 0])]
        );
        assert!(iso_thin(
            &it.module,
            &PosetRep::thin(p, &[false, true, true, true, true]).unwrap()
        )
        .unwrap());
    }

    #[test]
    fn tam2_orbit_returns_with_shift_two() {
        let lat = TamariLattice::new(2).unwrap();
        let p = lat.poset_arc();
        let min = p.minimum().unwrap();
        let start = PosetRep::projective(p, min);
        let it = serre_iterate(&start, 6).unwrap();
        assert!(!it.halted);
        assert_eq!(it.shift, 2);
        assert!(iso_thin(&it.module, &start).unwrap());
    }

    #[test]
    fn boolean_resolutions_resolve_interval_modules() {
        for n in 1..=4 {
            let lat = TamariLattice::new(n).unwrap();
            for ip in enumerate_ips(n).unwrap() {
                let res = boolean_resolution(&ip, &lat).unwrap();
                let h = res.realize().unwrap().homology().unwrap();
                let m = interval_module(&ip, &lat).unwrap();
                assert_eq!(h.len(), 1, "{ip:?}");
                assert!(iso_thin(&h[&0], &m).unwrap(), "{ip:?}");
            }
        }
    }

    #[test]
    fn interval_module_round_trip() {
        let lat = TamariLattice::new(3).unwrap();
        for ip in enumerate_ips(3).unwrap() {
            let m = interval_module(&ip, &lat).unwrap();
            assert_eq!(module_to_ip(&m, &lat), Some(ip));
        }
    }
}
