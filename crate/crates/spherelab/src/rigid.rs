//! Finite rigid vertex sets over the glued model.
//!
//! For each handle count `n >= 3` the module builds a finite candidate set of
//! model spheres: the handle spheres, every interior split, and a good pair
//! of handle-crossing spheres per handle.  On top of the set it provides the
//! certificate machinery used by rigidity arguments: detectability of a
//! crossing through a pair of pants completions, split-pair certificates
//! across an exchange, fully-split expansion of a pants decomposition, and a
//! breadth-first exchange exhaustion with per-layer audits.

use std::collections::{BTreeMap, BTreeSet};
use std::env;

use serde::{Deserialize, Serialize};

use crate::disks::{good_pair_check, goodness, Disk, GoodnessData};
use crate::error::{Error, Result};
use crate::glued::{
    crossing, disjoint, is_pants, GluedManifold, GluedPants, SphereClass, SplitSphereOutcome, YId,
};
use crate::splits::{essential_splits, intersects, m04_third_sphere, Label, Split};

/// A set of model spheres in canonical order.
pub type SphereSet = BTreeSet<SphereClass>;

/// Environment variable consulted for the search node budget when no
/// explicit budget is given.
pub const BUDGET_ENV: &str = "SPHERELAB_BUDGET";

/// Resolves a node budget: an explicit argument wins, then the
/// `SPHERELAB_BUDGET` environment variable, then one million nodes.
pub fn resolve_budget(explicit: Option<u64>) -> u64 {
    explicit
        .or_else(|| env::var(BUDGET_ENV).ok().and_then(|v| v.parse().ok()))
        .unwrap_or(1_000_000)
}

/// A good pair attached to one handle: two crossing spheres of that handle
/// whose caps sit on two different other handles, with the goodness data of
/// each verified at construction.
#[derive(Clone, Debug, Serialize)]
pub struct GoodPair {
    pub y: YId,
    pub a_prime: SphereClass,
    pub a_second: SphereClass,
    pub goodness_prime: GoodnessData,
    pub goodness_second: GoodnessData,
}

/// The candidate rigid set: all handle spheres, all interior splits, and one
/// good pair per handle.  Constructed only through [`build_rigid_set`];
/// deserialization re-runs the construction and cross-checks any stored
/// vertex list against it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "RigidSetOut", try_from = "RigidSetIn")]
pub struct RigidSetX {
    manifold: GluedManifold,
    y_spheres: Vec<SphereClass>,
    interior_spheres: Vec<SphereClass>,
    good_pairs: Vec<GoodPair>,
}

impl PartialEq for GoodPair {
    fn eq(&self, other: &GoodPair) -> bool {
        self.y == other.y && self.a_prime == other.a_prime && self.a_second == other.a_second
    }
}

impl Eq for GoodPair {}

#[derive(Serialize)]
struct RigidSetOut {
    manifold: GluedManifold,
    vertices: Vec<SphereClass>,
    good_pairs: Vec<GoodPair>,
}

impl From<RigidSetX> for RigidSetOut {
    fn from(x: RigidSetX) -> RigidSetOut {
        let vertices = x.vertex_set().into_iter().collect();
        RigidSetOut {
            manifold: x.manifold,
            vertices,
            good_pairs: x.good_pairs,
        }
    }
}

#[derive(Deserialize)]
struct RigidSetIn {
    manifold: GluedManifold,
    #[serde(default)]
    vertices: Option<Vec<SphereClass>>,
}

impl TryFrom<RigidSetIn> for RigidSetX {
    type Error = Error;

    fn try_from(input: RigidSetIn) -> Result<RigidSetX> {
        let n = input.manifold.n();
        if input.manifold != GluedManifold::standard(n)? {
            return Err(Error::ManifoldMismatch(
                "the rigid set is defined over the standard boundary pairing".into(),
            ));
        }
        let built = build_rigid_set(n)?;
        if let Some(vertices) = input.vertices {
            let stored: SphereSet = vertices.into_iter().collect();
            if stored != built.vertex_set() {
                return Err(Error::ManifoldMismatch(
                    "stored vertex list disagrees with the deterministic construction".into(),
                ));
            }
        }
        Ok(built)
    }
}

impl RigidSetX {
    pub fn manifold(&self) -> &GluedManifold {
        &self.manifold
    }

    pub fn y_spheres(&self) -> &[SphereClass] {
        &self.y_spheres
    }

    pub fn interior_spheres(&self) -> &[SphereClass] {
        &self.interior_spheres
    }

    pub fn good_pairs(&self) -> &[GoodPair] {
        &self.good_pairs
    }

    /// All vertices: handle spheres, interior splits, and good spheres.
    pub fn vertex_set(&self) -> SphereSet {
        let mut out: SphereSet = self.y_spheres.iter().cloned().collect();
        out.extend(self.interior_spheres.iter().cloned());
        for pair in &self.good_pairs {
            out.insert(pair.a_prime.clone());
            out.insert(pair.a_second.clone());
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_set().len()
    }

    pub fn contains(&self, a: &SphereClass) -> bool {
        self.vertex_set().contains(a)
    }

    /// The designated base pants decomposition: all handle spheres plus the
    /// caterpillar of interior splits.
    pub fn base_pants(&self) -> Result<GluedPants> {
        let mut spheres = self.y_spheres.clone();
        for z in base_interior_splits(self.manifold.ground_size(), self.manifold.n())? {
            spheres.push(SphereClass::interior(&self.manifold, z)?);
        }
        is_pants(&self.manifold, &spheres)
    }

    /// Builds a detectability certificate for every good sphere against its
    /// handle sphere.
    pub fn detectability_audit(
        &self,
        budget: Option<u64>,
    ) -> Result<Vec<DetectabilityCertificate>> {
        let x = self.vertex_set();
        let mut out = Vec::new();
        for pair in &self.good_pairs {
            let alpha = SphereClass::Y(pair.y);
            for beta in [&pair.a_prime, &pair.a_second] {
                out.push(detect_intersection(&x, &alpha, beta, &self.manifold, budget)?);
            }
        }
        Ok(out)
    }
}

/// The caterpillar of interior splits completing the handle spheres to a
/// pants decomposition: {1,3}, {2,4}, the boundary pairs {2k+1, 2k+2} of the
/// remaining handles, and the prefix unions {5,..,2j} that chain them up.
fn base_interior_splits(s: u8, n: u8) -> Result<Vec<Split>> {
    let mut out = vec![Split::new(s, &[1, 3])?, Split::new(s, &[2, 4])?];
    for k in 2..n {
        out.push(Split::new(s, &[2 * k + 1, 2 * k + 2])?);
    }
    for j in 4..=n {
        let piece: Vec<Label> = (5..=2 * j).collect();
        out.push(Split::new(s, &piece)?);
    }
    Ok(out)
}

/// Builds the rigid candidate set for `n` handles.  The good pair of handle
/// `k` caps the boundary labels of handles `k+1` and `k+2` (cyclically);
/// with fewer than three handles no disjoint good pair exists.
pub fn build_rigid_set(n: u8) -> Result<RigidSetX> {
    if n < 3 {
        return Err(Error::CannotPlaceGoodPairs(n));
    }
    let m = GluedManifold::standard(n)?;
    let s = m.ground_size();
    let ys: Vec<YId> = m.y_ids().collect();
    let y_spheres: Vec<SphereClass> = ys.iter().map(|&y| SphereClass::Y(y)).collect();
    let interior_spheres: Vec<SphereClass> = essential_splits(s)
        .into_iter()
        .map(|z| SphereClass::interior(&m, z))
        .collect::<Result<_>>()?;
    // The complex is a join of the handle spheres and the interior splits;
    // verify rather than assume.
    for y in &y_spheres {
        for z in &interior_spheres {
            if !disjoint(&m, y, z)? {
                return Err(Error::NotDisjoint(format!("{y}"), format!("{z}")));
            }
        }
    }
    let mut good_pairs = Vec::new();
    for (k, &y) in ys.iter().enumerate() {
        let (p, q) = m.orbit(y)?;
        let caps1 = m.orbit(ys[(k + 1) % ys.len()])?;
        let caps2 = m.orbit(ys[(k + 2) % ys.len()])?;
        let dp1 = Disk::from_labels(s, p, &[caps1.0])?;
        let dm1 = Disk::from_labels(s, q, &[caps1.1])?;
        let dp2 = Disk::from_labels(s, p, &[caps2.0])?;
        let dm2 = Disk::from_labels(s, q, &[caps2.1])?;
        let pair = GoodPair {
            y,
            a_prime: SphereClass::once_crossing(&m, y, dp1, dm1)?,
            a_second: SphereClass::once_crossing(&m, y, dp2, dm2)?,
            goodness_prime: goodness(p, q, &dp1, &dm1)?,
            goodness_second: goodness(p, q, &dp2, &dm2)?,
        };
        if !good_pair_check(&pair.goodness_prime, &pair.goodness_second)? {
            return Err(Error::CannotPlaceGoodPairs(n));
        }
        good_pairs.push(pair);
    }
    Ok(RigidSetX {
        manifold: m,
        y_spheres,
        interior_spheres,
        good_pairs,
    })
}

/// Witness that two crossing spheres are detectable inside a vertex set: two
/// pants decompositions through `alpha` and `beta` respectively that differ
/// only by exchanging one for the other.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DetectabilityCertificate {
    pub alpha: SphereClass,
    pub beta: SphereClass,
    pub p_alpha: GluedPants,
    pub p_beta: GluedPants,
}

impl DetectabilityCertificate {
    /// Re-checks every invariant against the ambient vertex set.
    pub fn verify(&self, x: &SphereSet, m: &GluedManifold) -> Result<bool> {
        if self.p_alpha.manifold() != m || self.p_beta.manifold() != m {
            return Ok(false);
        }
        if !crossing(m, &self.alpha, &self.beta)? {
            return Ok(false);
        }
        if !self.p_alpha.contains(&self.alpha) || !self.p_beta.contains(&self.beta) {
            return Ok(false);
        }
        let rest_alpha: Vec<&SphereClass> = self
            .p_alpha
            .spheres()
            .iter()
            .filter(|v| **v != self.alpha)
            .collect();
        let rest_beta: Vec<&SphereClass> = self
            .p_beta
            .spheres()
            .iter()
            .filter(|v| **v != self.beta)
            .collect();
        if rest_alpha != rest_beta {
            return Ok(false);
        }
        let all_in = self
            .p_alpha
            .spheres()
            .iter()
            .chain(self.p_beta.spheres())
            .all(|v| x.contains(v));
        Ok(all_in)
    }

    /// Applies a vertex map to every sphere of the certificate and rebuilds
    /// it on the image, re-running the pants checks.
    pub fn map(
        &self,
        f: &BTreeMap<SphereClass, SphereClass>,
        m: &GluedManifold,
    ) -> Result<DetectabilityCertificate> {
        let image = |v: &SphereClass| -> Result<SphereClass> {
            f.get(v).cloned().ok_or(Error::DomainError)
        };
        let map_pants = |p: &GluedPants| -> Result<GluedPants> {
            let spheres: Vec<SphereClass> =
                p.spheres().iter().map(image).collect::<Result<_>>()?;
            is_pants(m, &spheres)
        };
        Ok(DetectabilityCertificate {
            alpha: image(&self.alpha)?,
            beta: image(&self.beta)?,
            p_alpha: map_pants(&self.p_alpha)?,
            p_beta: map_pants(&self.p_beta)?,
        })
    }
}

/// Searches for a detectability certificate for the crossing pair
/// `(alpha, beta)` inside the vertex set `x`: a common collection of
/// `3n - 4` further spheres completing both to pants decompositions.  The
/// backtracking search is capped at `budget` nodes (see [`resolve_budget`]).
pub fn detect_intersection(
    x: &SphereSet,
    alpha: &SphereClass,
    beta: &SphereClass,
    m: &GluedManifold,
    budget: Option<u64>,
) -> Result<DetectabilityCertificate> {
    if !crossing(m, alpha, beta)? {
        return Err(Error::NotIntersecting);
    }
    if !x.contains(alpha) || !x.contains(beta) {
        return Err(Error::NotMember);
    }
    let budget = resolve_budget(budget);
    let mut candidates = Vec::new();
    for c in x {
        if c == alpha || c == beta {
            continue;
        }
        if disjoint(m, c, alpha)? && disjoint(m, c, beta)? {
            candidates.push(c.clone());
        }
    }
    let want = 3 * m.n() as usize - 4;
    let mut q: Vec<SphereClass> = Vec::with_capacity(want);
    let mut nodes: u64 = 0;
    let found = search_completion(m, alpha, beta, &candidates, 0, want, &mut q, &mut nodes, budget)?;
    match found {
        Some((p_alpha, p_beta)) => Ok(DetectabilityCertificate {
            alpha: alpha.clone(),
            beta: beta.clone(),
            p_alpha,
            p_beta,
        }),
        None if nodes > budget => Err(Error::NotDetectable(format!(
            "search budget of {budget} nodes exhausted"
        ))),
        None => Err(Error::NotDetectable(format!(
            "no common completion by {want} spheres exists in the {}-vertex set",
            x.len()
        ))),
    }
}

#[allow(clippy::too_many_arguments)]
fn search_completion(
    m: &GluedManifold,
    alpha: &SphereClass,
    beta: &SphereClass,
    candidates: &[SphereClass],
    start: usize,
    want: usize,
    q: &mut Vec<SphereClass>,
    nodes: &mut u64,
    budget: u64,
) -> Result<Option<(GluedPants, GluedPants)>> {
    *nodes += 1;
    if *nodes > budget {
        return Ok(None);
    }
    if q.len() == want {
        let mut with_alpha = q.clone();
        with_alpha.push(alpha.clone());
        let mut with_beta = q.clone();
        with_beta.push(beta.clone());
        if let (Ok(p_alpha), Ok(p_beta)) = (is_pants(m, &with_alpha), is_pants(m, &with_beta)) {
            return Ok(Some((p_alpha, p_beta)));
        }
        return Ok(None);
    }
    for i in start..candidates.len() {
        if candidates.len() - i < want - q.len() {
            break;
        }
        if *nodes > budget {
            return Ok(None);
        }
        let mut compatible = true;
        for prev in q.iter() {
            if !disjoint(m, prev, &candidates[i])? {
                compatible = false;
                break;
            }
        }
        if !compatible {
            continue;
        }
        q.push(candidates[i].clone());
        let hit = search_completion(m, alpha, beta, candidates, i + 1, want, q, nodes, budget)?;
        q.pop();
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// The canonically least pair `(a, b)` with `a` in the decomposition and `b`
/// a member of `x` realizing a split sphere for `(a, P)`, if any.
pub fn split_witness(
    x: &SphereSet,
    p: &GluedPants,
) -> Result<Option<(SphereClass, SphereClass)>> {
    for a in p.spheres() {
        for b in p.split_spheres_for(a)?.found() {
            if x.contains(&b) {
                return Ok(Some((a.clone(), b)));
            }
        }
    }
    Ok(None)
}

/// One matched split pair at a sphere `a` shared by two pants decompositions
/// that differ by a single exchange: `b1` splits `a` in `p1`, `b2` splits
/// `a` in `p2`, and the two are disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplitPairCertificate {
    pub a: SphereClass,
    pub b1: SphereClass,
    pub b2: SphereClass,
    pub p1: GluedPants,
    pub p2: GluedPants,
    /// Third spheres of the four-holed pieces spanned by `(a, b1)` and
    /// `(a, b2)`; present only when all three spheres are interior splits.
    pub twins: Option<(Split, Split)>,
    /// Whether the two twins cross each other.  Recorded as data: both
    /// nested and crossing configurations occur.
    pub twins_cross: Option<bool>,
}

impl SplitPairCertificate {
    /// Re-checks the certificate: memberships, disjointness, and the twin
    /// intersection pattern against `b1` and `b2`.
    pub fn verify(&self) -> Result<bool> {
        let m = self.p1.manifold();
        if self.p2.manifold() != m {
            return Ok(false);
        }
        if self.b1 == self.b2 || !disjoint(m, &self.b1, &self.b2)? {
            return Ok(false);
        }
        if !self.p1.split_spheres_for(&self.a)?.found().contains(&self.b1) {
            return Ok(false);
        }
        if !self.p2.split_spheres_for(&self.a)?.found().contains(&self.b2) {
            return Ok(false);
        }
        if let Some((t1, t2)) = &self.twins {
            let (SphereClass::Interior(za), SphereClass::Interior(zb1), SphereClass::Interior(zb2)) =
                (&self.a, &self.b1, &self.b2)
            else {
                return Ok(false);
            };
            if m04_third_sphere(za, zb1)? != *t1 || m04_third_sphere(za, zb2)? != *t2 {
                return Ok(false);
            }
            for t in [t1, t2] {
                if !intersects(t, zb1)? || !intersects(t, zb2)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

fn make_certificate(
    a: &SphereClass,
    b1: &SphereClass,
    b2: &SphereClass,
    p1: GluedPants,
    p2: GluedPants,
) -> Result<SplitPairCertificate> {
    let twins = match (a, b1, b2) {
        (SphereClass::Interior(za), SphereClass::Interior(zb1), SphereClass::Interior(zb2)) => {
            Some((m04_third_sphere(za, zb1)?, m04_third_sphere(za, zb2)?))
        }
        _ => None,
    };
    let twins_cross = match &twins {
        Some((t1, t2)) => Some(intersects(t1, t2)?),
        None => None,
    };
    Ok(SplitPairCertificate {
        a: a.clone(),
        b1: b1.clone(),
        b2: b2.clone(),
        p1,
        p2,
        twins,
        twins_cross,
    })
}

/// Builds the two split-pair certificates at `c` induced by the exchange of
/// `a` for `b` in `p`.  Preconditions: every sphere of `p` and the sphere
/// `b` lie in `x`, `b` realizes a split sphere for `(a, p)`, and `c` is a
/// non-self-adjacent neighbor of `a` in `p`.  Each split sphere of `(c, p)`
/// is matched with a disjoint split sphere of `(c, p')` where `p'` is the
/// exchanged decomposition; a missing sphere or partner is an out-of-model
/// configuration and is reported as an error.
pub fn construct_split_pairs(
    p: &GluedPants,
    a: &SphereClass,
    c: &SphereClass,
    b: &SphereClass,
    x: &SphereSet,
) -> Result<[SplitPairCertificate; 2]> {
    let m = p.manifold();
    for v in p.spheres() {
        if !x.contains(v) {
            return Err(Error::NotSplit(format!("{v} is not a member of the vertex set")));
        }
    }
    if !x.contains(b) {
        return Err(Error::NotSplit(format!("{b} is not a member of the vertex set")));
    }
    if !p.split_spheres_for(a)?.found().contains(b) {
        return Err(Error::NotSplitSphere);
    }
    if !p.contains(c) {
        return Err(Error::NotMember);
    }
    if p.self_adjacent(c)? {
        return Err(Error::InvalidSphere(format!(
            "{c} is self-adjacent and has no split spheres"
        )));
    }
    if !p.adjacent(a, c)? {
        return Err(Error::InvalidSphere(format!(
            "{a} and {c} are not adjacent in the decomposition"
        )));
    }
    let ds = p.split_spheres_for(c)?.found();
    if ds.len() != 2 {
        return Err(Error::OutOfModel(format!(
            "only {} of the two split spheres for {c} are representable",
            ds.len()
        )));
    }
    let p2 = p.exchange(a, b)?;
    let es = p2.split_spheres_for(c)?.found();
    let mut out = Vec::with_capacity(2);
    for d in &ds {
        let mut partner = None;
        for e in &es {
            if e != d && disjoint(m, d, e)? {
                partner = Some(e.clone());
                break;
            }
        }
        let Some(e) = partner else {
            return Err(Error::OutOfModel(format!(
                "no disjoint split-sphere partner for {c} at {d} after exchanging {a} for {b}"
            )));
        };
        out.push(make_certificate(c, d, &e, p.clone(), p2.clone())?);
    }
    let second = out.pop().expect("two certificates");
    let first = out.pop().expect("two certificates");
    Ok([first, second])
}

/// Result of expanding a vertex set until one pants decomposition becomes
/// fully split inside it.
#[derive(Clone, Debug, Serialize)]
pub struct ExpansionReport {
    /// The seed: a sphere of the decomposition and the set member that
    /// splits it.
    pub witness: (SphereClass, SphereClass),
    /// The expanded vertex set.
    pub expanded: SphereSet,
    /// Members of `expanded` that were not in the input set, in the order
    /// they were found.
    pub added: Vec<SphereClass>,
    /// Split-pair certificates established along the traversal.
    pub certificates: Vec<SplitPairCertificate>,
    /// Out-of-model events: unrealizable split-sphere slots, missing
    /// partners, and candidates whose re-cut fails.
    pub frontier: Vec<String>,
    /// Traversal layers over the decomposition's spheres, seed first.
    pub layers: Vec<Vec<SphereClass>>,
    /// Whether the traversal reached every non-self-adjacent sphere.
    pub layers_exhaustive: bool,
    /// Whether every representable split sphere of the decomposition lies
    /// in the expanded set.
    pub fully_split: bool,
}

struct Expansion {
    expanded: SphereSet,
    added: Vec<SphereClass>,
    certificates: Vec<SplitPairCertificate>,
    frontier: Vec<String>,
    anchor_beta: BTreeMap<SphereClass, SphereClass>,
}

impl Expansion {
    /// Processes one sphere of the decomposition: adds its realized split
    /// spheres, records unrealizable slots, and, when an anchored neighbor
    /// is available, matches split pairs across the anchor's exchange.
    fn process(
        &mut self,
        p: &GluedPants,
        c: &SphereClass,
        anchor: Option<(SphereClass, SphereClass)>,
    ) -> Result<()> {
        let out = p.split_spheres_for(c)?;
        if let SplitSphereOutcome::Slots { slots, .. } = &out {
            for slot in slots {
                if slot.sphere.is_none() {
                    self.frontier.push(format!(
                        "split-sphere slot {:?} for {c} is out of model",
                        slot.pairing
                    ));
                }
            }
        }
        for note in out.notes() {
            self.frontier.push(format!("at {c}: {note}"));
        }
        let ds = out.found();
        for d in &ds {
            if self.expanded.insert(d.clone()) {
                self.added.push(d.clone());
            }
        }
        if !ds.is_empty() {
            self.anchor_beta.insert(c.clone(), ds[0].clone());
        }
        let Some((alpha, beta)) = anchor else {
            return Ok(());
        };
        let p2 = p.exchange(&alpha, &beta)?;
        let es_out = p2.split_spheres_for(c)?;
        if es_out.is_self_adjacent() {
            self.frontier.push(format!(
                "{c} is self-adjacent after exchanging {alpha} for {beta}; no partner decomposition"
            ));
            return Ok(());
        }
        for note in es_out.notes() {
            self.frontier
                .push(format!("at {c} after exchange at {alpha}: {note}"));
        }
        let es = es_out.found();
        for d in &ds {
            let mut partner = None;
            for e in &es {
                if e != d && disjoint(p.manifold(), d, e)? {
                    partner = Some(e.clone());
                    break;
                }
            }
            match partner {
                Some(e) => {
                    if self.expanded.insert(e.clone()) {
                        self.added.push(e.clone());
                    }
                    self.certificates
                        .push(make_certificate(c, d, &e, p.clone(), p2.clone())?);
                }
                None => self.frontier.push(format!(
                    "no split-pair partner for {c} at {d} after exchanging {alpha} for {beta}"
                )),
            }
        }
        Ok(())
    }
}

/// Expands `x` until `p` is fully split inside it.  The decomposition must
/// be contained in `x` and at least one of its spheres must already have a
/// split sphere in `x`; the traversal then walks the dual adjacency from
/// that seed, adding every realized split sphere and matching split pairs
/// across exchanges at anchored neighbors.
pub fn expand_fully_split(x: &SphereSet, p: &GluedPants) -> Result<ExpansionReport> {
    for v in p.spheres() {
        if !x.contains(v) {
            return Err(Error::NotSplit(format!("{v} is not a member of the vertex set")));
        }
    }
    let Some((a0, b0)) = split_witness(x, p)? else {
        return Err(Error::NotSplit(
            "no sphere of the decomposition has a split sphere in the set".into(),
        ));
    };
    let mut state = Expansion {
        expanded: x.clone(),
        added: Vec::new(),
        certificates: Vec::new(),
        frontier: Vec::new(),
        anchor_beta: BTreeMap::new(),
    };
    let mut processed: BTreeSet<SphereClass> = BTreeSet::new();
    processed.insert(a0.clone());
    state.process(p, &a0, None)?;
    let mut layers: Vec<Vec<SphereClass>> = vec![vec![a0.clone()]];
    loop {
        let last = layers.last().expect("nonempty").clone();
        let mut next: Vec<SphereClass> = Vec::new();
        for c in p.spheres() {
            if processed.contains(c) || p.self_adjacent(c)? {
                continue;
            }
            for prev in &last {
                if p.adjacent(prev, c)? {
                    next.push(c.clone());
                    break;
                }
            }
        }
        if next.is_empty() {
            break;
        }
        for c in &next {
            processed.insert(c.clone());
        }
        for c in &next {
            let mut anchor = None;
            for prev in &last {
                if p.adjacent(prev, c)? {
                    if let Some(beta) = state.anchor_beta.get(prev) {
                        anchor = Some((prev.clone(), beta.clone()));
                        break;
                    }
                }
            }
            if anchor.is_none() {
                state.frontier.push(format!(
                    "no anchored neighbor for {c}; split-pair construction skipped"
                ));
            }
            state.process(p, c, anchor)?;
        }
        layers.push(next);
    }
    let mut layers_exhaustive = true;
    let mut fully_split = true;
    for a in p.spheres() {
        if p.self_adjacent(a)? {
            continue;
        }
        if !processed.contains(a) {
            layers_exhaustive = false;
        }
        for b in p.split_spheres_for(a)?.found() {
            if !state.expanded.contains(&b) {
                fully_split = false;
            }
        }
    }
    Ok(ExpansionReport {
        witness: (a0, b0),
        expanded: state.expanded,
        added: state.added,
        certificates: state.certificates,
        frontier: state.frontier,
        layers,
        layers_exhaustive,
        fully_split,
    })
}

/// Per-layer record of the exchange exhaustion.
#[derive(Clone, Debug, Serialize)]
pub struct ExhaustLayer {
    pub index: usize,
    /// Number of decompositions expanded in this layer.
    pub decompositions: usize,
    pub vertices_before: usize,
    pub vertices_after: usize,
    /// Spheres added by the expansions of this layer.
    pub added: Vec<SphereClass>,
    /// Split-pair certificates established in this layer.
    pub certificates: usize,
    pub frontier: Vec<String>,
    /// Number of decompositions generated for the next layer.
    pub next_layer_size: usize,
    /// Whether every next-layer decomposition lies in the current vertex set.
    pub next_layer_contained: bool,
    /// Whether every next-layer decomposition has a split witness in the
    /// current vertex set.
    pub next_layer_split: bool,
}

/// Report of the breadth-first exchange exhaustion.
#[derive(Clone, Debug, Serialize)]
pub struct ExhaustReport {
    pub n: u8,
    pub depth: usize,
    pub layers: Vec<ExhaustLayer>,
    /// The final vertex set.
    pub vertices: SphereSet,
}

/// Starting from the rigid set and its base pants decomposition, repeatedly
/// expands the vertex set over each layer of decompositions and generates
/// the next layer by all realizable exchanges, auditing that each new layer
/// stays inside the current vertex set and remains split by it.
pub fn exhaust(n: u8, depth: usize) -> Result<ExhaustReport> {
    let x = build_rigid_set(n)?;
    let p0 = x.base_pants()?;
    let mut vertices = x.vertex_set();
    let mut seen: BTreeSet<Vec<SphereClass>> = BTreeSet::new();
    seen.insert(p0.spheres().to_vec());
    let mut layer_pants: Vec<GluedPants> = vec![p0];
    let mut layers = Vec::new();
    for index in 0..=depth {
        let vertices_before = vertices.len();
        let mut added = Vec::new();
        let mut certificates = 0usize;
        let mut frontier = Vec::new();
        for p in &layer_pants {
            if !p.spheres().iter().all(|v| vertices.contains(v)) {
                frontier.push(format!(
                    "decomposition [{}] left the vertex set",
                    sphere_names(p)
                ));
                continue;
            }
            match expand_fully_split(&vertices, p) {
                Ok(report) => {
                    added.extend(report.added.iter().cloned());
                    vertices = report.expanded;
                    certificates += report.certificates.len();
                    frontier.extend(report.frontier);
                    if !report.layers_exhaustive {
                        frontier.push(format!(
                            "traversal did not reach every sphere of [{}]",
                            sphere_names(p)
                        ));
                    }
                    if !report.fully_split {
                        frontier.push(format!(
                            "expansion left an unsplit sphere in [{}]",
                            sphere_names(p)
                        ));
                    }
                }
                Err(Error::NotSplit(msg)) => {
                    frontier.push(format!("decomposition [{}] skipped: {msg}", sphere_names(p)));
                }
                Err(e) => return Err(e),
            }
        }
        let mut next: BTreeMap<Vec<SphereClass>, GluedPants> = BTreeMap::new();
        for p in &layer_pants {
            for a in p.spheres() {
                for b in p.split_spheres_for(a)?.found() {
                    let q = p.exchange(a, &b)?;
                    let key = q.spheres().to_vec();
                    if !seen.contains(&key) {
                        next.entry(key).or_insert(q);
                    }
                }
            }
        }
        let mut next_layer_contained = true;
        let mut next_layer_split = true;
        for q in next.values() {
            if !q.spheres().iter().all(|v| vertices.contains(v)) {
                next_layer_contained = false;
                continue;
            }
            if split_witness(&vertices, q)?.is_none() {
                next_layer_split = false;
            }
        }
        layers.push(ExhaustLayer {
            index,
            decompositions: layer_pants.len(),
            vertices_before,
            vertices_after: vertices.len(),
            added,
            certificates,
            frontier,
            next_layer_size: next.len(),
            next_layer_contained,
            next_layer_split,
        });
        for key in next.keys() {
            seen.insert(key.clone());
        }
        layer_pants = next.into_values().collect();
        if layer_pants.is_empty() {
            break;
        }
    }
    Ok(ExhaustReport {
        n,
        depth,
        layers,
        vertices,
    })
}

fn sphere_names(p: &GluedPants) -> String {
    p.spheres()
        .iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(", ")
}

/// Checks that a vertex map defined on `x` is simplicial and injective on
/// the closed star of every vertex.  A vertex of `x` missing from the map
/// is a domain error.
pub fn check_local_injectivity(
    f: &BTreeMap<SphereClass, SphereClass>,
    x: &SphereSet,
    m: &GluedManifold,
) -> Result<bool> {
    let verts: Vec<&SphereClass> = x.iter().collect();
    let mut images = Vec::with_capacity(verts.len());
    for v in &verts {
        let img = f.get(*v).ok_or(Error::DomainError)?;
        img.validate_over(m)?;
        images.push(img);
    }
    let k = verts.len();
    let mut adj = vec![false; k * k];
    for i in 0..k {
        for j in (i + 1)..k {
            if disjoint(m, verts[i], verts[j])? {
                adj[i * k + j] = true;
                adj[j * k + i] = true;
                // Simpliciality: an edge must map to an edge.
                if images[i] == images[j] || !disjoint(m, images[i], images[j])? {
                    return Ok(false);
                }
            }
        }
    }
    for i in 0..k {
        let mut star: Vec<usize> = vec![i];
        star.extend((0..k).filter(|&j| adj[i * k + j]));
        for (idx, &u) in star.iter().enumerate() {
            for &w in &star[idx + 1..] {
                if images[u] == images[w] {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}
