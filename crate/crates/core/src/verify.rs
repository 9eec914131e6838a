//! The combinatorial Serre functor on exceptional interval-posets and the
//! exhaustive verification campaigns built on it.

use std::collections::BTreeSet;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::homalg::{boolean_resolution, interval_module, iso_thin, ChainComplex};
use crate::interval_poset::{enumerate_exceptional, enumerate_ips, IntervalPoset};
use crate::noncrossing::{enumerate_nc, noncrossing_count, psi, theta, EdgeKind, NoncrossingTree};
use crate::poset::{ex_dyck, FinitePoset};
use crate::tamari::{enumerate_trees, TamariLattice};

pub const MAX_SERRE_SIZE: usize = 4;
pub const MAX_SERRE_SIZE_EXTENDED: usize = 5;
pub const MAX_CY_SIZE: usize = 6;
pub const MAX_COXETER_SIZE: usize = 8;
pub const MAX_BIJECTION_SIZE: usize = 5;
pub const MAX_KCLASS_SIZE: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SerreStep {
    pub ip: IntervalPoset,
    /// `|J|` of the predecessor.
    pub shift: usize,
    pub cumulative_shift: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitRecord {
    pub start: IntervalPoset,
    pub steps: Vec<SerreStep>,
    pub closed: bool,
}

impl OrbitRecord {
    pub fn total_shift(&self) -> i64 {
        self.steps.last().map_or(0, |s| s.cumulative_shift)
    }

    /// Smallest number of steps that returns to the start, if any.
    pub fn period(&self) -> Option<usize> {
        self.steps.iter().position(|s| s.ip == self.start).map(|i| i + 1)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Failure {
    pub instance: String,
    pub reason: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub witness: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub campaign: String,
    pub n: usize,
    pub checked: usize,
    pub failures: Vec<Failure>,
    pub seconds: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl VerificationReport {
    fn finish(campaign: &str, n: usize, checked: usize, mut failures: Vec<Failure>, start: Instant) -> Self {
        failures.sort_by(|a, b| a.instance.cmp(&b.instance));
        VerificationReport {
            campaign: campaign.to_string(),
            n,
            checked,
            pass: failures.is_empty(),
            failures,
            seconds: start.elapsed().as_secs_f64(),
            notes: Vec::new(),
        }
    }
}

fn instance(ip: &IntervalPoset) -> String {
    serde_json::to_string(ip).expect("interval-posets serialize")
}

fn fail(ip: &IntervalPoset, reason: impl Into<String>, witness: Value) -> Failure {
    Failure {
        instance: instance(ip),
        reason: reason.into(),
        witness,
    }
}

fn check_size(n: usize, max: usize) -> Result<()> {
    if (1..=max).contains(&n) {
        Ok(())
    } else {
        Err(Error::SizeOutOfRange(n, 1, max))
    }
}

/// `𝕊` on exceptional interval-posets: `ψ⁻¹(ψ(ip)*)` together with the
/// shift `|J(ip)|`.
pub fn serre_combinatorial(ip: &IntervalPoset) -> Result<(IntervalPoset, usize)> {
    let tree = psi(ip)?;
    Ok((tree.planar_dual().psi_inv(), ip.hasse_split().j.len()))
}

/// Runs exactly `2n+2` combinatorial Serre steps from `ip`.
pub fn serre_orbit(ip: &IntervalPoset) -> Result<OrbitRecord> {
    let n = ip.size();
    let mut steps = Vec::with_capacity(2 * n + 2);
    let mut cur = ip.clone();
    let mut total = 0i64;
    for _ in 0..2 * n + 2 {
        let (next, shift) = serre_combinatorial(&cur)?;
        total += shift as i64;
        steps.push(SerreStep {
            ip: next.clone(),
            shift,
            cumulative_shift: total,
        });
        cur = next;
    }
    Ok(OrbitRecord {
        start: ip.clone(),
        closed: cur == *ip,
        steps,
    })
}

fn graded_dims(cx: &ChainComplex) -> Value {
    cx.terms()
        .iter()
        .map(|(k, m)| (k.to_string(), json!(m.dimvec())))
        .collect::<serde_json::Map<_, _>>()
        .into()
}

/// Homological check of the combinatorial Serre functor: the Nakayama image
/// of the boolean resolution has homology only in degree `|J|`, isomorphic
/// to the interval module of the image.
pub fn verify_serre(n: usize, extended: bool) -> Result<VerificationReport> {
    check_size(
        n,
        if extended {
            MAX_SERRE_SIZE_EXTENDED
        } else {
            MAX_SERRE_SIZE
        },
    )?;
    let start = Instant::now();
    let lattice = TamariLattice::new(n)?;
    let ips = enumerate_exceptional(n)?;
    let failures: Vec<Failure> = ips
        .par_iter()
        .map(|ip| serre_instance(ip, &lattice))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(VerificationReport::finish("serre", n, ips.len(), failures, start))
}

fn serre_instance(ip: &IntervalPoset, lattice: &TamariLattice) -> Result<Option<Failure>> {
    let (image, shift) = serre_combinatorial(ip)?;
    let resolution = boolean_resolution(ip, lattice)?;
    let complex = resolution.nakayama()?.realize()?;
    let homology = complex.homology()?;
    let target = interval_module(&image, lattice)?;
    let concentrated = homology.len() == 1 && homology.contains_key(&(shift as i32));
    let iso = concentrated && iso_thin(&homology[&(shift as i32)], &target).unwrap_or(false);
    if iso {
        return Ok(None);
    }
    let (s, t) = ip.to_interval();
    let witness = json!({
        "ip": ip,
        "trees": [s.to_json(), t.to_json()],
        "expected_degree": shift,
        "expected": { "ip": image, "dimvec": target.dimvec() },
        "resolution": graded_dims(&resolution.realize()?),
        "homology": homology
            .iter()
            .map(|(k, m)| (k.to_string(), json!(m.dimvec())))
            .collect::<serde_json::Map<_, _>>(),
    });
    let reason = if concentrated {
        "homology is not isomorphic to the dual interval module"
    } else {
        "homology is not concentrated in degree |J|"
    };
    Ok(Some(fail(ip, reason, witness)))
}

/// Orbit closure and shift bookkeeping for every exceptional interval-poset.
pub fn verify_cy(n: usize) -> Result<VerificationReport> {
    check_size(n, MAX_CY_SIZE)?;
    let start = Instant::now();
    let ips = enumerate_exceptional(n)?;
    let results: Vec<(bool, Option<Failure>)> = ips
        .par_iter()
        .map(|ip| Ok((ip.is_projective(), cy_instance(ip)?)))
        .collect::<Result<Vec<_>>>()?;
    let projectives = results.iter().filter(|(p, _)| *p).count();
    let projective_failures = results.iter().filter(|(p, f)| *p && f.is_some()).count();
    let failures: Vec<Failure> = results.into_iter().filter_map(|(_, f)| f).collect();
    let full = failures.is_empty();
    let mut report = VerificationReport::finish("cy", n, ips.len(), failures, start);
    report.notes.push(format!(
        "sufficient set (projectives; a poset with a unique minimum or maximum reduces to them): {}/{} passed",
        projectives - projective_failures,
        projectives
    ));
    report.notes.push(format!(
        "full exceptional family: {} ({} orbits)",
        if full { "passed" } else { "failed" },
        ips.len()
    ));
    Ok(report)
}

fn cy_instance(ip: &IntervalPoset) -> Result<Option<Failure>> {
    let n = ip.size();
    let orbit = serre_orbit(ip)?;
    let expected = (n * (n - 1)) as i64;
    let mut problems = Vec::new();
    if !orbit.closed {
        problems.push(format!("orbit does not close after {} steps", 2 * n + 2));
    }
    if orbit.total_shift() != expected {
        problems.push(format!("total shift {} ≠ {expected}", orbit.total_shift()));
    }
    if let Some(p) = orbit.period() {
        if !(2 * n + 2).is_multiple_of(p) {
            problems.push(format!("period {p} does not divide {}", 2 * n + 2));
        }
    }
    // shift of each step = descents of θ(predecessor)
    let mut pred = ip.clone();
    for (k, step) in orbit.steps.iter().enumerate() {
        let descents = theta(&pred)?.count_descents();
        if step.shift != descents {
            problems.push(format!("step {}: shift {} ≠ descents(θ) {descents}", k + 1, step.shift));
        }
        if !step.ip.is_exceptional() {
            problems.push(format!("step {}: image is not exceptional", k + 1));
        }
        pred = step.ip.clone();
    }
    // two steps rotate the noncrossing tree
    let mut pred_tree = psi(ip)?;
    for (k, pair) in orbit.steps.chunks(2).enumerate() {
        let after = psi(&pair[1].ip)?;
        if after != pred_tree.rotate() {
            problems.push(format!("steps {}..{}: ψ(𝕊²) is not the rotation", 2 * k + 1, 2 * k + 2));
        }
        pred_tree = after;
    }
    // independent recount: |J| = rises with j_f ≠ n+1, summed over the orbit
    let mut rises = 0usize;
    let mut forbidden = 0usize;
    let mut cur = ip.clone();
    for step in &orbit.steps {
        let tree = psi(&cur)?;
        rises += tree.orient().iter().filter(|e| e.kind == EdgeKind::Rise).count();
        forbidden += tree.count_forbidden_rises();
        cur = step.ip.clone();
    }
    if (rises - forbidden) as i64 != orbit.total_shift() {
        problems.push(format!(
            "rises {rises} − forbidden rises {forbidden} ≠ total shift {}",
            orbit.total_shift()
        ));
    }
    // and from the rotation orbit alone: n(n+1) edges minus its forbidden rises
    let mut tree = psi(ip)?;
    let mut rotation_forbidden = 0usize;
    for _ in 0..=n {
        rotation_forbidden += tree.count_forbidden_rises();
        tree = tree.rotate();
    }
    if (n * (n + 1)) as i64 - rotation_forbidden as i64 != orbit.total_shift() {
        problems.push(format!(
            "n(n+1) − {rotation_forbidden} forbidden rises over the rotation orbit ≠ total shift {}",
            orbit.total_shift()
        ));
    }
    if problems.is_empty() {
        return Ok(None);
    }
    let witness = json!({
        "orbit": orbit,
        "rises": rises,
        "forbidden_rises": forbidden,
        "rotation_forbidden_rises": rotation_forbidden,
    });
    Ok(Some(fail(ip, problems.join("; "), witness)))
}

/// `C^{period} = Id` for the Coxeter matrix of `poset`, together with the
/// entry and column-sign checks when `strict` is set.
pub fn coxeter_check(name: &str, poset: &FinitePoset, period: u32, strict: bool) -> Result<VerificationReport> {
    let start = Instant::now();
    let c = poset.coxeter_matrix()?;
    let mut failures = Vec::new();
    let mut push = |reason: String| {
        failures.push(Failure {
            instance: name.to_string(),
            reason,
            witness: Value::Null,
        })
    };
    if !c.power_is_identity(period)? {
        push(format!("C^{period} ≠ Id"));
    }
    if strict {
        if !c.entries_within(&[-1, 0, 1]) {
            push("C has an entry outside {-1, 0, 1}".into());
        }
        if !c.column_signs_consistent() {
            push("a column of C mixes signs".into());
        }
    }
    let mut report = VerificationReport::finish("coxeter", poset.len(), 1, failures, start);
    report
        .notes
        .push(format!("{name}: {0}×{0} matrix, period {period}", poset.len()));
    Ok(report)
}

/// Coxeter periodicity `C^{2n+2} = Id` on Tam_n.
pub fn verify_coxeter(n: usize) -> Result<VerificationReport> {
    check_size(n, MAX_COXETER_SIZE)?;
    let lattice = TamariLattice::new(n)?;
    let mut report = coxeter_check(&format!("Tam_{n}"), lattice.poset(), (2 * n + 2) as u32, true)?;
    report.n = n;
    Ok(report)
}

/// The generic-poset check on `ex_dyck`: `C^8 = Id`.
pub fn verify_coxeter_ex_dyck() -> Result<VerificationReport> {
    coxeter_check("ex_dyck", &ex_dyck(), 8, false)
}

/// Round trips and identities between exceptional interval-posets and
/// noncrossing trees.
pub fn verify_bijections(n: usize) -> Result<VerificationReport> {
    check_size(n, MAX_BIJECTION_SIZE)?;
    let start = Instant::now();
    let ips = enumerate_ips(n)?;
    let exceptional: Vec<IntervalPoset> = ips.iter().filter(|ip| ip.is_exceptional()).cloned().collect();
    let trees = enumerate_nc(n)?;
    let mut failures: Vec<Failure> = exceptional
        .par_iter()
        .filter_map(|ip| bijection_instance(ip).transpose())
        .collect::<Result<Vec<_>>>()?;
    failures.extend(
        trees
            .par_iter()
            .filter_map(|t| tree_instance(t).transpose())
            .collect::<Result<Vec<_>>>()?,
    );
    let expected = noncrossing_count(n) as usize;
    let global = |reason: String| Failure {
        instance: format!("n={n}"),
        reason,
        witness: Value::Null,
    };
    if exceptional.len() != expected || trees.len() != expected {
        failures.push(global(format!(
            "{} exceptional interval-posets, {} noncrossing trees, expected {expected}",
            exceptional.len(),
            trees.len()
        )));
    }
    let psi_image: BTreeSet<NoncrossingTree> = exceptional.iter().map(psi).collect::<Result<_>>()?;
    let theta_image: BTreeSet<NoncrossingTree> = exceptional.iter().map(theta).collect::<Result<_>>()?;
    let all: BTreeSet<NoncrossingTree> = trees.iter().cloned().collect();
    if psi_image != all {
        failures.push(global("ψ is not onto the noncrossing trees".into()));
    }
    if theta_image != all {
        failures.push(global("θ is not onto the noncrossing trees".into()));
    }
    // every interval-poset round-trips through its Tamari interval
    for ip in &ips {
        let (s, t) = ip.to_interval();
        if IntervalPoset::from_interval(&s, &t).as_ref() != Ok(ip) {
            failures.push(fail(ip, "interval round trip", Value::Null));
        }
    }
    if enumerate_trees(n)?.len() != TamariLattice::new(n)?.trees().len() {
        failures.push(global("tree enumeration and lattice disagree".into()));
    }
    let checked = exceptional.len() + trees.len();
    let mut report = VerificationReport::finish("bijections", n, checked, failures, start);
    report.notes.push(format!(
        "{} exceptional ↔ {} noncrossing trees",
        exceptional.len(),
        trees.len()
    ));
    Ok(report)
}

fn bijection_instance(ip: &IntervalPoset) -> Result<Option<Failure>> {
    let n = ip.size();
    let p = psi(ip)?;
    let t = theta(ip)?;
    let mut problems = Vec::new();
    if p.psi_inv() != *ip {
        problems.push("ψ⁻¹ψ ≠ id");
    }
    if t.theta_inv() != *ip {
        problems.push("θ⁻¹θ ≠ id");
    }
    if p.planar_dual() != t {
        problems.push("ψ(I)* ≠ θ(I)");
    }
    // increasing covers ↔ descents, decreasing covers ↔ allowed rises,
    // maximal elements ↔ forbidden rises, through the edge labelled by the
    // lower element
    let split = ip.hasse_split();
    let labels = p.edge_labels();
    let oriented = p.orient();
    let kind_of = |v: usize| {
        let edge = labels
            .iter()
            .find(|(_, &l)| l == v)
            .map(|(&e, _)| e)
            .expect("every label occurs");
        let o = oriented
            .iter()
            .find(|o| o.endpoints() == edge)
            .expect("every edge is oriented");
        (o.kind, o.j_f == n + 1)
    };
    for &(x, _) in &split.k {
        if kind_of(x).0 != EdgeKind::Descent {
            problems.push("increasing cover not a descent");
        }
    }
    for &(j, _) in &split.j {
        if kind_of(j) != (EdgeKind::Rise, false) {
            problems.push("decreasing cover not an allowed rise");
        }
    }
    for v in 1..=n {
        if ip.relation().row(v) == 0 && kind_of(v) != (EdgeKind::Rise, true) {
            problems.push("maximal element not a forbidden rise");
        }
    }
    if problems.is_empty() {
        return Ok(None);
    }
    let witness = json!({ "ip": ip, "psi": p, "theta": t, "dual": p.planar_dual() });
    Ok(Some(fail(ip, problems.join("; "), witness)))
}

fn tree_instance(t: &NoncrossingTree) -> Result<Option<Failure>> {
    let mut problems = Vec::new();
    if psi(&t.psi_inv())? != *t {
        problems.push("ψψ⁻¹ ≠ id");
    }
    if theta(&t.theta_inv())? != *t {
        problems.push("θθ⁻¹ ≠ id");
    }
    let dual = t.planar_dual();
    if dual.planar_dual() != t.rotate() {
        problems.push("dual² ≠ rotation");
    }
    if t.rotate().planar_dual() != dual.rotate() {
        problems.push("dual∘rotate ≠ rotate∘dual");
    }
    let mut r = t.clone();
    for _ in 0..=t.size() {
        r = r.rotate();
    }
    if r != *t {
        problems.push("n+1 rotations ≠ id");
    }
    if problems.is_empty() {
        return Ok(None);
    }
    Ok(Some(Failure {
        instance: serde_json::to_string(t).expect("trees serialize"),
        reason: problems.join("; "),
        witness: json!({ "tree": t, "dual": dual, "rotation": t.rotate() }),
    }))
}

/// Support indicator of an interval module as a dimension vector.
fn support_dimvec(ip: &IntervalPoset, lattice: &TamariLattice) -> Vec<i64> {
    let mut v = vec![0; lattice.trees().len()];
    for x in ip.support(lattice) {
        v[x] = 1;
    }
    v
}

/// Grothendieck-group shadow of the combinatorial Serre functor:
/// `(-1)^s dimvec(𝕊 I) = φ · dimvec(I)` with `φ = Z (Z⁻¹)ᵗ`.
pub fn k_class_check(n: usize) -> Result<VerificationReport> {
    check_size(n, MAX_KCLASS_SIZE)?;
    let start = Instant::now();
    let lattice = TamariLattice::new(n)?;
    let phi = lattice.poset().serre_class_matrix()?;
    let ips = enumerate_exceptional(n)?;
    let failures: Vec<Failure> = ips
        .par_iter()
        .map(|ip| -> Result<Option<Failure>> {
            let (image, s) = serre_combinatorial(ip)?;
            let sign = if s % 2 == 0 { 1 } else { -1 };
            let lhs: Vec<i64> = support_dimvec(&image, &lattice).iter().map(|v| sign * v).collect();
            let rhs = phi.mul_vec(&support_dimvec(ip, &lattice))?;
            Ok((lhs != rhs).then(|| {
                fail(
                    ip,
                    "(-1)^s dimvec(𝕊 I) ≠ φ dimvec(I)",
                    json!({ "shift": s, "lhs": lhs, "rhs": rhs }),
                )
            }))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(VerificationReport::finish("kclass", n, ips.len(), failures, start))
}
