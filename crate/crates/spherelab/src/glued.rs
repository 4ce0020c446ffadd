//! The restricted sphere model of a connected sum of `n` handles.
//!
//! The manifold is presented by gluing the boundary spheres of a `2n`-holed
//! 3-sphere in pairs.  Three kinds of sphere are representable:
//!
//! * **Y-spheres** — the glued boundary pairs themselves;
//! * **interior spheres** — essential splits of the `2n` boundary labels;
//! * **once-crossing spheres** — a disk on each boundary sphere of one pair,
//!   joined through the handle by an annulus.
//!
//! Pants decompositions of the model are recognised by an explicit cut
//! procedure which produces the dual multigraph (a connected trivalent graph
//! with first Betti number `n`).  On top of that sit adjacency queries,
//! split-sphere slots and the exchange move.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::disks::{self, Disk};
use crate::error::{Error, Result};
use crate::punctured::{RegionForest, TreeItem};
use crate::splits::{self, Label, LabelSet, Split, MAX_GROUND};

/// Identifier of a Y-sphere, printed as a letter `A`, `B`, `C`, ...
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct YId(pub u8);

impl YId {
    pub fn letter(self) -> char {
        (b'A' + self.0) as char
    }
}

impl From<YId> for String {
    fn from(y: YId) -> String {
        y.letter().to_string()
    }
}

impl TryFrom<String> for YId {
    type Error = Error;

    fn try_from(text: String) -> Result<YId> {
        let mut chars = text.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) if c.is_ascii_uppercase() => Ok(YId(c as u8 - b'A')),
            _ => Err(Error::InvalidSphere(format!(
                "Y-sphere labels are single capital letters, got {text:?}"
            ))),
        }
    }
}

impl fmt::Debug for YId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

impl fmt::Display for YId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

/// The glued manifold: `n` handles presented by a fixed-point-free pairing
/// of the `2n` boundary labels.  Orbits are kept sorted by their smaller
/// label and named `A`, `B`, `C`, ... in that order.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "ManifoldJson", into = "ManifoldJson")]
pub struct GluedManifold {
    n: u8,
    orbits: Vec<(Label, Label)>,
}

#[derive(Serialize, Deserialize)]
struct ManifoldJson {
    n: u8,
    pairing: Vec<[Label; 2]>,
    labels: BTreeMap<String, [Label; 2]>,
}

impl From<GluedManifold> for ManifoldJson {
    fn from(m: GluedManifold) -> ManifoldJson {
        ManifoldJson {
            n: m.n,
            pairing: m.orbits.iter().map(|&(a, b)| [a, b]).collect(),
            labels: m
                .orbits
                .iter()
                .enumerate()
                .map(|(k, &(a, b))| (YId(k as u8).letter().to_string(), [a, b]))
                .collect(),
        }
    }
}

impl TryFrom<ManifoldJson> for GluedManifold {
    type Error = Error;

    fn try_from(json: ManifoldJson) -> Result<GluedManifold> {
        let m = GluedManifold::new(json.n, &json.pairing)?;
        for (k, &(a, b)) in m.orbits.iter().enumerate() {
            let letter = YId(k as u8).letter().to_string();
            if json.labels.get(&letter) != Some(&[a, b]) {
                return Err(Error::ManifoldMismatch(format!(
                    "label table must assign {letter} to [{a},{b}]"
                )));
            }
        }
        if json.labels.len() != m.orbits.len() {
            return Err(Error::ManifoldMismatch(
                "label table must name each orbit exactly once".into(),
            ));
        }
        Ok(m)
    }
}

impl fmt::Debug for GluedManifold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GluedManifold(n={}, {:?})", self.n, self.orbits)
    }
}

impl GluedManifold {
    /// Builds a manifold from an explicit pairing of `[2n]`.
    pub fn new(n: u8, pairing: &[[Label; 2]]) -> Result<GluedManifold> {
        if !(2..=MAX_GROUND / 2).contains(&n) {
            return Err(Error::ManifoldMismatch(format!(
                "n must lie in 2..={}, got {n}",
                MAX_GROUND / 2
            )));
        }
        if pairing.len() != n as usize {
            return Err(Error::ManifoldMismatch(format!(
                "expected {n} orbit pairs, got {}",
                pairing.len()
            )));
        }
        let mut orbits: Vec<(Label, Label)> = pairing
            .iter()
            .map(|&[a, b]| (a.min(b), a.max(b)))
            .collect();
        orbits.sort();
        let mut seen = LabelSet::EMPTY;
        for &(a, b) in &orbits {
            if a == b || !(1..=2 * n).contains(&a) || !(1..=2 * n).contains(&b) {
                return Err(Error::ManifoldMismatch(format!(
                    "bad orbit pair ({a},{b})"
                )));
            }
            if seen.contains(a) || seen.contains(b) {
                return Err(Error::ManifoldMismatch(format!(
                    "label {} paired twice",
                    if seen.contains(a) { a } else { b }
                )));
            }
            seen = seen.with(a).with(b);
        }
        Ok(GluedManifold { n, orbits })
    }

    /// The manifold whose pairing is `(1,2), (3,4), ...`.
    pub fn standard(n: u8) -> Result<GluedManifold> {
        let pairing: Vec<[Label; 2]> = (0..n).map(|k| [2 * k + 1, 2 * k + 2]).collect();
        GluedManifold::new(n, &pairing)
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    /// The number of boundary labels of the underlying holed sphere.
    pub fn ground_size(&self) -> u8 {
        2 * self.n
    }

    pub fn y_ids(&self) -> impl Iterator<Item = YId> {
        (0..self.n).map(YId)
    }

    /// The boundary pair of a Y-sphere, smaller label first.
    pub fn orbit(&self, y: YId) -> Result<(Label, Label)> {
        self.orbits
            .get(y.0 as usize)
            .copied()
            .ok_or_else(|| Error::InvalidSphere(format!("no Y-sphere {y} for n={}", self.n)))
    }

    pub fn orbit_of_label(&self, label: Label) -> Result<YId> {
        for (k, &(a, b)) in self.orbits.iter().enumerate() {
            if label == a || label == b {
                return Ok(YId(k as u8));
            }
        }
        Err(Error::InvalidSphere(format!(
            "label {label} is not a boundary label"
        )))
    }
}

/// A sphere in the model.  The derived order puts Y-spheres first, then
/// interior spheres, then once-crossing spheres.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "SphereClassJson", into = "SphereClassJson")]
pub enum SphereClass {
    Y(YId),
    Interior(Split),
    OnceCrossing { y: YId, d_plus: Disk, d_minus: Disk },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum SphereClassJson {
    Y(YId),
    Interior(Split),
    OnceCrossing { y: YId, d_plus: Disk, d_minus: Disk },
}

impl From<SphereClass> for SphereClassJson {
    fn from(x: SphereClass) -> SphereClassJson {
        match x {
            SphereClass::Y(y) => SphereClassJson::Y(y),
            SphereClass::Interior(z) => SphereClassJson::Interior(z),
            SphereClass::OnceCrossing { y, d_plus, d_minus } => {
                SphereClassJson::OnceCrossing { y, d_plus, d_minus }
            }
        }
    }
}

impl TryFrom<SphereClassJson> for SphereClass {
    type Error = Error;

    fn try_from(json: SphereClassJson) -> Result<SphereClass> {
        match json {
            SphereClassJson::Y(y) => Ok(SphereClass::Y(y)),
            SphereClassJson::Interior(z) => {
                if !z.is_essential() {
                    return Err(Error::InvalidSphere(format!(
                        "peripheral split {z}: encode boundary pairs as Y-spheres"
                    )));
                }
                Ok(SphereClass::Interior(z))
            }
            SphereClassJson::OnceCrossing { y, d_plus, d_minus } => {
                if d_plus.ground_size() != d_minus.ground_size() {
                    return Err(Error::GroundMismatch(
                        d_plus.ground_size(),
                        d_minus.ground_size(),
                    ));
                }
                if d_plus.on() >= d_minus.on() {
                    return Err(Error::InvalidSphere(
                        "d_plus must sit on the smaller boundary label of the pair".into(),
                    ));
                }
                if !disks::disks_disjoint(&d_plus, &d_minus)? {
                    return Err(Error::InvalidSphere(
                        "the two disks of a once-crossing sphere must be disjoint".into(),
                    ));
                }
                Ok(SphereClass::OnceCrossing { y, d_plus, d_minus })
            }
        }
    }
}

impl fmt::Debug for SphereClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SphereClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SphereClass::Y(y) => write!(f, "Y({y})"),
            SphereClass::Interior(z) => write!(f, "Z {z}"),
            SphereClass::OnceCrossing { y, d_plus, d_minus } => {
                write!(f, "X({y}; {d_plus}; {d_minus})")
            }
        }
    }
}

impl SphereClass {
    /// An interior sphere; a split cutting off a single boundary label is
    /// canonicalised to the Y-sphere it is parallel to.
    pub fn interior(m: &GluedManifold, z: Split) -> Result<SphereClass> {
        if z.ground_size() != m.ground_size() {
            return Err(Error::GroundMismatch(z.ground_size(), m.ground_size()));
        }
        if z.is_essential() {
            return Ok(SphereClass::Interior(z));
        }
        let small = if z.side().len() == 1 {
            z.side()
        } else {
            z.coside()
        };
        Ok(SphereClass::Y(m.orbit_of_label(small.min().unwrap())?))
    }

    pub fn once_crossing(
        m: &GluedManifold,
        y: YId,
        d_plus: Disk,
        d_minus: Disk,
    ) -> Result<SphereClass> {
        let x = SphereClass::OnceCrossing { y, d_plus, d_minus };
        x.validate_over(m)?;
        Ok(x)
    }

    /// Checks that the sphere's data are consistent with the manifold.
    pub fn validate_over(&self, m: &GluedManifold) -> Result<()> {
        match self {
            SphereClass::Y(y) => m.orbit(*y).map(|_| ()),
            SphereClass::Interior(z) => {
                if z.ground_size() != m.ground_size() {
                    return Err(Error::GroundMismatch(z.ground_size(), m.ground_size()));
                }
                if !z.is_essential() {
                    return Err(Error::InvalidSphere(format!("peripheral split {z}")));
                }
                Ok(())
            }
            SphereClass::OnceCrossing { y, d_plus, d_minus } => {
                let (p, q) = m.orbit(*y)?;
                if d_plus.ground_size() != m.ground_size()
                    || d_minus.ground_size() != m.ground_size()
                {
                    return Err(Error::GroundMismatch(
                        d_plus.ground_size(),
                        m.ground_size(),
                    ));
                }
                if d_plus.on() != p || d_minus.on() != q {
                    return Err(Error::InvalidSphere(format!(
                        "disks must sit on boundary labels {p} and {q} of Y({y})"
                    )));
                }
                if !disks::disks_disjoint(d_plus, d_minus)? {
                    return Err(Error::InvalidSphere(
                        "the two disks of a once-crossing sphere must be disjoint".into(),
                    ));
                }
                Ok(())
            }
        }
    }
}

/// Disjointness of two model spheres.  Equal spheres are *not* disjoint:
/// the complex has no loops at vertices.
pub fn disjoint(m: &GluedManifold, x: &SphereClass, y: &SphereClass) -> Result<bool> {
    x.validate_over(m)?;
    y.validate_over(m)?;
    if x == y {
        return Ok(false);
    }
    use SphereClass::*;
    Ok(match (x, y) {
        (Y(_), Y(_)) | (Y(_), Interior(_)) | (Interior(_), Y(_)) => true,
        (Y(a), OnceCrossing { y, .. }) | (OnceCrossing { y, .. }, Y(a)) => a != y,
        (Interior(z), Interior(w)) => splits::is_nested(z, w)?,
        (Interior(z), OnceCrossing { d_plus, d_minus, .. })
        | (OnceCrossing { d_plus, d_minus, .. }, Interior(z)) => {
            disks::disk_sphere_disjoint(d_plus, z)? && disks::disk_sphere_disjoint(d_minus, z)?
        }
        (
            OnceCrossing { d_plus, d_minus, .. },
            OnceCrossing {
                d_plus: e_plus,
                d_minus: e_minus,
                ..
            },
        ) => {
            disks::disks_disjoint(d_plus, e_plus)?
                && disks::disks_disjoint(d_plus, e_minus)?
                && disks::disks_disjoint(d_minus, e_plus)?
                && disks::disks_disjoint(d_minus, e_minus)?
        }
    })
}

/// True when the spheres are distinct and not disjoint.
pub fn crossing(m: &GluedManifold, x: &SphereClass, y: &SphereClass) -> Result<bool> {
    Ok(x != y && !disjoint(m, x, y)?)
}

/// Every sphere expressible in the model, in canonical order.
pub fn all_model_spheres(m: &GluedManifold) -> Vec<SphereClass> {
    let s = m.ground_size();
    let mut out: Vec<SphereClass> = m.y_ids().map(SphereClass::Y).collect();
    out.extend(splits::essential_splits(s).into_iter().map(SphereClass::Interior));
    for y in m.y_ids() {
        let (p, q) = m.orbit(y).expect("orbit exists");
        for d_plus in disks::all_disks_on(s, p) {
            for d_minus in disks::all_disks_on(s, q) {
                if disks::disks_disjoint(&d_plus, &d_minus).expect("same ground") {
                    out.push(SphereClass::OnceCrossing { y, d_plus, d_minus });
                }
            }
        }
    }
    out.sort();
    out
}

/// A pants decomposition of the model with its dual multigraph.  Edges are
/// indexed parallel to the sorted sphere list; vertices are numbered by
/// first appearance along that list.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GluedPantsJson", into = "GluedPantsJson")]
pub struct GluedPants {
    manifold: GluedManifold,
    spheres: Vec<SphereClass>,
    edges: Vec<[usize; 2]>,
    n_vertices: usize,
}

#[derive(Serialize, Deserialize)]
struct GluedPantsJson {
    manifold: GluedManifold,
    spheres: Vec<SphereClass>,
    dual_graph: DualGraphJson,
}

#[derive(Serialize, Deserialize)]
struct DualGraphJson {
    vertices: usize,
    edges: Vec<[usize; 2]>,
}

impl From<GluedPants> for GluedPantsJson {
    fn from(p: GluedPants) -> GluedPantsJson {
        GluedPantsJson {
            manifold: p.manifold,
            spheres: p.spheres,
            dual_graph: DualGraphJson {
                vertices: p.n_vertices,
                edges: p.edges,
            },
        }
    }
}

impl TryFrom<GluedPantsJson> for GluedPants {
    type Error = Error;

    fn try_from(json: GluedPantsJson) -> Result<GluedPants> {
        let p = is_pants(&json.manifold, &json.spheres)?;
        if p.edges != json.dual_graph.edges || p.n_vertices != json.dual_graph.vertices {
            return Err(Error::OutOfModel(
                "stored dual graph disagrees with the cut procedure".into(),
            ));
        }
        Ok(p)
    }
}

impl fmt::Debug for GluedPants {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GluedPants{:?}", self.spheres)
    }
}

/// Checks that a sphere set is a pants decomposition and builds its dual
/// graph by cutting.
pub fn is_pants(m: &GluedManifold, spheres: &[SphereClass]) -> Result<GluedPants> {
    let mut p = spheres.to_vec();
    p.sort();
    p.dedup();
    for x in &p {
        x.validate_over(m)?;
    }
    let expected = 3 * m.n() as usize - 3;
    if p.len() != expected {
        return Err(Error::NotMaximal {
            expected,
            got: p.len(),
        });
    }
    for i in 0..p.len() {
        for j in (i + 1)..p.len() {
            if !disjoint(m, &p[i], &p[j])? {
                return Err(Error::NotDisjoint(p[i].to_string(), p[j].to_string()));
            }
        }
    }
    let (edges, n_vertices) = cut_dual_graph(m, &p)?;
    Ok(GluedPants {
        manifold: m.clone(),
        spheres: p,
        edges,
        n_vertices,
    })
}

/// The piece of a disk wholly containing a far set of labels.
fn side_for_far(d: &Disk, far: LabelSet) -> Result<LabelSet> {
    if far.is_subset(d.side()) {
        Ok(d.side())
    } else if far.is_subset(d.coside()) {
        Ok(d.coside())
    } else {
        Err(Error::OutOfModel(format!(
            "cuff piece {far} straddles the disk {d}"
        )))
    }
}

/// The piece of `d` on whose side the whole disk `other` lies.
fn side_for_disk(d: &Disk, other: &Disk) -> Result<LabelSet> {
    if d.on() == other.on() {
        let (a, ac) = (other.side(), other.coside());
        let in_side = a.is_subset(d.side()) || ac.is_subset(d.side());
        let in_coside = a.is_subset(d.coside()) || ac.is_subset(d.coside());
        match (in_side, in_coside) {
            (true, false) => Ok(d.side()),
            (false, true) => Ok(d.coside()),
            _ => Err(Error::OutOfModel(format!(
                "parallel disk circles on boundary sphere {}: {d} and {other}",
                d.on()
            ))),
        }
    } else {
        Ok(d.piece_containing(other.on()))
    }
}

struct DisjointSets(Vec<usize>);

impl DisjointSets {
    fn new(n: usize) -> DisjointSets {
        DisjointSets((0..n).collect())
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        self.0[ra] = rb;
    }
}

/// Cuts the manifold along the (already validated, pairwise disjoint) sphere
/// set and returns the dual multigraph as `(edges, vertex count)`.
fn cut_dual_graph(m: &GluedManifold, p: &[SphereClass]) -> Result<(Vec<[usize; 2]>, usize)> {
    let s = m.ground_size();

    // Interior splits cut the holed sphere into a forest of regions.
    let mut interiors: Vec<Split> = Vec::new();
    let mut interior_of: BTreeMap<usize, usize> = BTreeMap::new();
    for (si, x) in p.iter().enumerate() {
        if let SphereClass::Interior(z) = x {
            interior_of.insert(si, interiors.len());
            interiors.push(*z);
        }
    }
    let forest = RegionForest::new(s, &interiors)?;

    // Each disk of a once-crossing sphere cuts the region owning its base
    // label.
    let mut label_region = vec![usize::MAX; s as usize + 1];
    for (r, region) in forest.regions.iter().enumerate() {
        for item in &region.items {
            if let TreeItem::Direct(l) = item {
                label_region[*l as usize] = r;
            }
        }
    }
    struct RegionDisk {
        sphere: usize,
        disk: Disk,
    }
    let mut region_disks: Vec<Vec<RegionDisk>> = (0..forest.regions.len()).map(|_| Vec::new()).collect();
    for (si, x) in p.iter().enumerate() {
        if let SphereClass::OnceCrossing { d_plus, d_minus, .. } = x {
            for disk in [d_plus, d_minus] {
                region_disks[label_region[disk.on() as usize]].push(RegionDisk {
                    sphere: si,
                    disk: *disk,
                });
            }
        }
    }

    // Atomize every region.  Atoms are keyed by the vector of disk sides; a
    // region with k disks falls into exactly k+1 atoms.
    let mut atom_count = 0usize;
    let mut item_atom: BTreeMap<TreeItem, usize> = BTreeMap::new();
    // Per boundary label: face profile (disk sphere index -> piece) -> atom.
    let mut cuff_faces: BTreeMap<Label, BTreeMap<Vec<(usize, LabelSet)>, usize>> = BTreeMap::new();
    // Per once-crossing disk copy: (sphere index, piece of d_plus/d_minus).
    let mut copy_atom: BTreeMap<(usize, LabelSet), usize> = BTreeMap::new();

    for (r, region) in forest.regions.iter().enumerate() {
        let ds = &region_disks[r];
        let mut local: BTreeMap<Vec<LabelSet>, usize> = BTreeMap::new();
        let mut intern = |key: Vec<LabelSet>, atom_count: &mut usize| -> usize {
            *local.entry(key).or_insert_with(|| {
                let id = *atom_count;
                *atom_count += 1;
                id
            })
        };
        let diskful: BTreeSet<Label> = ds.iter().map(|rd| rd.disk.on()).collect();
        for item in &region.items {
            if let TreeItem::Direct(l) = item {
                if diskful.contains(l) {
                    continue;
                }
            }
            let far = forest.far_set(*item);
            let key: Vec<LabelSet> = ds
                .iter()
                .map(|rd| side_for_far(&rd.disk, far))
                .collect::<Result<_>>()?;
            let atom = intern(key, &mut atom_count);
            item_atom.insert(*item, atom);
        }
        for &cuff in &diskful {
            let circle_disks: Vec<usize> = (0..ds.len()).filter(|&k| ds[k].disk.on() == cuff).collect();
            // The canonical side of a disk contains the least co-label, so
            // the coside plays the role of the clade on this cuff.
            let clades: BTreeSet<LabelSet> = circle_disks.iter().map(|&k| ds[k].disk.coside()).collect();
            if clades.len() != circle_disks.len() {
                return Err(Error::OutOfModel(format!(
                    "parallel disk circles on boundary sphere {cuff}"
                )));
            }
            let mut faces: Vec<Option<LabelSet>> = vec![None];
            faces.extend(clades.iter().map(|&c| Some(c)));
            let face_map = cuff_faces.entry(cuff).or_default();
            for face in faces {
                let side_on_cuff = |k: usize| -> LabelSet {
                    let d = &ds[k].disk;
                    match face {
                        Some(c) if c.is_subset(d.coside()) => d.coside(),
                        _ => d.side(),
                    }
                };
                let key: Vec<LabelSet> = (0..ds.len())
                    .map(|k| {
                        if ds[k].disk.on() == cuff {
                            Ok(side_on_cuff(k))
                        } else {
                            Ok(ds[k].disk.piece_containing(cuff))
                        }
                    })
                    .collect::<Result<_>>()?;
                let atom = intern(key, &mut atom_count);
                let mut profile: Vec<(usize, LabelSet)> = circle_disks
                    .iter()
                    .map(|&k| (ds[k].sphere, side_on_cuff(k)))
                    .collect();
                profile.sort();
                face_map.insert(profile, atom);
            }
        }
        for k in 0..ds.len() {
            for piece in [ds[k].disk.side(), ds[k].disk.coside()] {
                let key: Vec<LabelSet> = (0..ds.len())
                    .map(|k2| {
                        if k2 == k {
                            Ok(piece)
                        } else {
                            side_for_disk(&ds[k2].disk, &ds[k].disk)
                        }
                    })
                    .collect::<Result<_>>()?;
                let atom = intern(key, &mut atom_count);
                copy_atom.insert((ds[k].sphere, piece), atom);
            }
        }
        if local.len() != ds.len() + 1 {
            return Err(Error::OutOfModel(format!(
                "disks cut a region into {} pieces instead of {}",
                local.len(),
                ds.len() + 1
            )));
        }
    }

    // Glue along the handles, orbit by orbit.
    let mut uf = DisjointSets::new(atom_count);
    let y_in_p: BTreeSet<YId> = p
        .iter()
        .filter_map(|x| match x {
            SphereClass::Y(y) => Some(*y),
            _ => None,
        })
        .collect();
    for y in m.y_ids() {
        let (pa, qa) = m.orbit(y)?;
        if y_in_p.contains(&y) {
            continue; // the Y-sphere itself is a cut sphere; edge added below
        }
        let orbit_spheres: Vec<usize> = p
            .iter()
            .enumerate()
            .filter_map(|(si, x)| match x {
                SphereClass::OnceCrossing { y: yy, .. } if *yy == y => Some(si),
                _ => None,
            })
            .collect();
        if orbit_spheres.is_empty() {
            let a = uf.find(item_atom[&TreeItem::Direct(pa)]);
            let b = uf.find(item_atom[&TreeItem::Direct(qa)]);
            if a == b {
                return Err(Error::OutOfModel(format!(
                    "handle {y} attaches a complementary piece to itself"
                )));
            }
            uf.union(a, b);
            continue;
        }
        // Match faces of the two cuffs through the handle: on each crossing
        // sphere, the piece away from the partner label glues to the piece
        // away from this label.
        let plus_faces = cuff_faces.get(&pa).expect("disks on plus cuff");
        let minus_faces = cuff_faces.get(&qa).expect("disks on minus cuff");
        for (profile, &atom_p) in plus_faces {
            let image: Vec<(usize, LabelSet)> = profile
                .iter()
                .map(|&(si, piece)| {
                    let d_minus = match &p[si] {
                        SphereClass::OnceCrossing { d_minus, .. } => d_minus,
                        _ => unreachable!("profile entries are crossing spheres"),
                    };
                    let target = if piece.contains(qa) {
                        d_minus.piece_containing(pa)
                    } else {
                        d_minus.piece_avoiding(pa)
                    };
                    (si, target)
                })
                .collect();
            match minus_faces.get(&image) {
                Some(&atom_q) => uf.union(atom_p, atom_q),
                None => {
                    return Err(Error::OutOfModel(format!(
                        "crossing spheres on handle {y} do not glue consistently"
                    )))
                }
            }
        }
    }

    // One dual edge per sphere, with deterministic end order.
    let mut edges: Vec<[usize; 2]> = Vec::with_capacity(p.len());
    for (si, x) in p.iter().enumerate() {
        let ends = match x {
            SphereClass::Y(y) => {
                let (pa, qa) = m.orbit(*y)?;
                [
                    item_atom[&TreeItem::Direct(pa)],
                    item_atom[&TreeItem::Direct(qa)],
                ]
            }
            SphereClass::Interior(_) => {
                let k = interior_of[&si];
                [
                    item_atom[&TreeItem::Outer(k)],
                    item_atom[&TreeItem::Inner(k)],
                ]
            }
            SphereClass::OnceCrossing { d_plus, .. } => [
                copy_atom[&(si, d_plus.side())],
                copy_atom[&(si, d_plus.coside())],
            ],
        };
        edges.push([uf.find(ends[0]), uf.find(ends[1])]);
    }

    // Renumber vertices by first appearance; every atom class must show up.
    let mut renumber: BTreeMap<usize, usize> = BTreeMap::new();
    for e in &mut edges {
        for end in e.iter_mut() {
            let next = renumber.len();
            *end = *renumber.entry(*end).or_insert(next);
        }
    }
    let mut classes: BTreeSet<usize> = BTreeSet::new();
    for a in 0..atom_count {
        classes.insert(uf.find(a));
    }
    let n_vertices = classes.len();
    let expected_vertices = 2 * m.n() as usize - 2;
    if n_vertices != expected_vertices || renumber.len() != n_vertices {
        return Err(Error::OutOfModel(format!(
            "cut produced {n_vertices} complementary pieces, expected {expected_vertices}"
        )));
    }
    let mut valence = vec![0usize; n_vertices];
    for e in &edges {
        valence[e[0]] += 1;
        valence[e[1]] += 1;
    }
    if let Some(v) = valence.iter().position(|&d| d != 3) {
        return Err(Error::OutOfModel(format!(
            "complementary piece {v} has {} cuffs instead of 3",
            valence[v]
        )));
    }
    let mut seen = vec![false; n_vertices];
    let mut stack = vec![0usize];
    seen[0] = true;
    while let Some(v) = stack.pop() {
        for e in &edges {
            for (a, b) in [(e[0], e[1]), (e[1], e[0])] {
                if a == v && !seen[b] {
                    seen[b] = true;
                    stack.push(b);
                }
            }
        }
    }
    if !seen.iter().all(|&x| x) {
        return Err(Error::OutOfModel("cut complement is disconnected".into()));
    }
    if edges.len() + 1 - n_vertices != m.n() as usize {
        return Err(Error::OutOfModel(format!(
            "dual graph has first Betti number {}, expected {}",
            edges.len() + 1 - n_vertices,
            m.n()
        )));
    }
    Ok((edges, n_vertices))
}

/// One of the two re-pairings of the four cuffs around a non-self-adjacent
/// sphere, together with the model sphere realizing it, if any.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PairingSlot {
    /// The two cuff pairs rejoined by a sphere filling this slot.
    pub pairing: [[String; 2]; 2],
    /// The model sphere realizing the slot, when one exists.
    pub sphere: Option<SphereClass>,
}

/// The split spheres for a pants sphere: none if it is self-adjacent,
/// otherwise two pairing slots (each realized by at most one model sphere).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SplitSphereOutcome {
    SelfAdjacent,
    Slots {
        slots: [PairingSlot; 2],
        notes: Vec<String>,
    },
}

impl SplitSphereOutcome {
    /// The realized split spheres, in canonical order.
    pub fn found(&self) -> Vec<SphereClass> {
        match self {
            SplitSphereOutcome::SelfAdjacent => Vec::new(),
            SplitSphereOutcome::Slots { slots, .. } => {
                let mut out: Vec<SphereClass> =
                    slots.iter().filter_map(|s| s.sphere.clone()).collect();
                out.sort();
                out
            }
        }
    }

    pub fn is_self_adjacent(&self) -> bool {
        matches!(self, SplitSphereOutcome::SelfAdjacent)
    }

    pub fn notes(&self) -> &[String] {
        match self {
            SplitSphereOutcome::SelfAdjacent => &[],
            SplitSphereOutcome::Slots { notes, .. } => notes,
        }
    }
}

fn normalize_pairing(mut d: [[String; 2]; 2]) -> [[String; 2]; 2] {
    for pair in &mut d {
        pair.sort();
    }
    d.sort();
    d
}

impl GluedPants {
    pub fn manifold(&self) -> &GluedManifold {
        &self.manifold
    }

    pub fn spheres(&self) -> &[SphereClass] {
        &self.spheres
    }

    pub fn dual_edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    pub fn dual_vertex_count(&self) -> usize {
        self.n_vertices
    }

    pub fn contains(&self, a: &SphereClass) -> bool {
        self.spheres.binary_search(a).is_ok()
    }

    pub fn index_of(&self, a: &SphereClass) -> Result<usize> {
        self.spheres.binary_search(a).map_err(|_| Error::NotMember)
    }

    /// A sphere is self-adjacent when it bounds two cuffs of one pants
    /// piece, i.e. its dual edge is a loop.
    pub fn self_adjacent(&self, a: &SphereClass) -> Result<bool> {
        let e = self.edges[self.index_of(a)?];
        Ok(e[0] == e[1])
    }

    /// Two spheres are adjacent when some pants piece has both on its
    /// boundary; for `a == b` this is self-adjacency.
    pub fn adjacent(&self, a: &SphereClass, b: &SphereClass) -> Result<bool> {
        if a == b {
            return self.self_adjacent(a);
        }
        let ea = self.edges[self.index_of(a)?];
        let eb = self.edges[self.index_of(b)?];
        Ok(ea[0] == eb[0] || ea[0] == eb[1] || ea[1] == eb[0] || ea[1] == eb[1])
    }

    /// Cuff ends incident to a dual vertex, excluding the ends of `skip`.
    fn ends_at(&self, v: usize, skip: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (j, e) in self.edges.iter().enumerate() {
            if j == skip {
                continue;
            }
            for (end, &w) in e.iter().enumerate() {
                if w == v {
                    out.push((j, end));
                }
            }
        }
        out
    }

    /// The split spheres for `a`: the two re-pairings of the four cuffs of
    /// the complementary 4-holed piece of `P ∖ {a}`, each realized by the
    /// model sphere found by exhaustive search (when one exists).
    pub fn split_spheres_for(&self, a: &SphereClass) -> Result<SplitSphereOutcome> {
        let i = self.index_of(a)?;
        let [u, v] = self.edges[i];
        if u == v {
            return Ok(SplitSphereOutcome::SelfAdjacent);
        }
        let cu = self.ends_at(u, i);
        let cv = self.ends_at(v, i);
        debug_assert_eq!((cu.len(), cv.len()), (2, 2));
        let nm = |c: (usize, usize)| self.spheres[c.0].to_string();
        let raw = [
            [[nm(cu[0]), nm(cv[0])], [nm(cu[1]), nm(cv[1])]],
            [[nm(cu[0]), nm(cv[1])], [nm(cu[1]), nm(cv[0])]],
        ];
        let descriptors = [
            normalize_pairing(raw[0].clone()),
            normalize_pairing(raw[1].clone()),
        ];
        let mut slots = [
            PairingSlot {
                pairing: raw[0].clone(),
                sphere: None,
            },
            PairingSlot {
                pairing: raw[1].clone(),
                sphere: None,
            },
        ];
        let mut notes = Vec::new();
        let rest: Vec<SphereClass> = self
            .spheres
            .iter()
            .filter(|x| *x != a)
            .cloned()
            .collect();
        'candidates: for x in all_model_spheres(&self.manifold) {
            if x == *a || rest.contains(&x) || disjoint(&self.manifold, &x, a)? {
                continue;
            }
            for r in &rest {
                if !disjoint(&self.manifold, &x, r)? {
                    continue 'candidates;
                }
            }
            let mut candidate = rest.clone();
            candidate.push(x.clone());
            let p2 = match is_pants(&self.manifold, &candidate) {
                Ok(p2) => p2,
                Err(e) => {
                    notes.push(format!("crossing sphere {x} does not re-cut into pants: {e}"));
                    continue;
                }
            };
            let j2 = p2.index_of(&x).expect("candidate is a member");
            let [w0, w1] = p2.edges[j2];
            if w0 == w1 {
                notes.push(format!("{x} would be self-adjacent after the exchange"));
                continue;
            }
            let name_pair = |w: usize| -> [String; 2] {
                let ends = p2.ends_at(w, j2);
                debug_assert_eq!(ends.len(), 2);
                [p2.spheres[ends[0].0].to_string(), p2.spheres[ends[1].0].to_string()]
            };
            let desc = normalize_pairing([name_pair(w0), name_pair(w1)]);
            let hit = match (desc == descriptors[0], desc == descriptors[1]) {
                (true, false) => Some(0),
                (false, true) => Some(1),
                (true, true) => {
                    // Both descriptors coincide (a cuff is a loop); fill in
                    // canonical order.
                    Some(if slots[0].sphere.is_none() { 0 } else { 1 })
                }
                (false, false) => None,
            };
            match hit {
                Some(k) if slots[k].sphere.is_none() => slots[k].sphere = Some(x),
                Some(_) => notes.push(format!("additional sphere {x} matches an occupied pairing")),
                None => notes.push(format!("{x} realizes an unexpected cuff pairing")),
            }
        }
        Ok(SplitSphereOutcome::Slots { slots, notes })
    }

    /// Replaces `a` by one of its split spheres.
    pub fn exchange(&self, a: &SphereClass, b: &SphereClass) -> Result<GluedPants> {
        if !self.split_spheres_for(a)?.found().contains(b) {
            return Err(Error::NotSplitSphere);
        }
        let mut spheres: Vec<SphereClass> = self
            .spheres
            .iter()
            .filter(|x| *x != a)
            .cloned()
            .collect();
        spheres.push(b.clone());
        is_pants(&self.manifold, &spheres)
    }
}

/// Enumerates every pants decomposition expressible in the model.  Intended
/// for small `n`: the search is a clique enumeration over the disjointness
/// graph of all model spheres.
pub fn enumerate_all_pants(m: &GluedManifold) -> Result<Vec<GluedPants>> {
    let spheres = all_model_spheres(m);
    let k = spheres.len();
    let mut adj = vec![vec![false; k]; k];
    for i in 0..k {
        for j in (i + 1)..k {
            if disjoint(m, &spheres[i], &spheres[j])? {
                adj[i][j] = true;
                adj[j][i] = true;
            }
        }
    }
    let want = 3 * m.n() as usize - 3;
    let mut out = Vec::new();
    let mut clique: Vec<usize> = Vec::new();
    fn extend(
        start: usize,
        want: usize,
        k: usize,
        adj: &[Vec<bool>],
        clique: &mut Vec<usize>,
        spheres: &[SphereClass],
        m: &GluedManifold,
        out: &mut Vec<GluedPants>,
    ) {
        if clique.len() == want {
            let set: Vec<SphereClass> = clique.iter().map(|&i| spheres[i].clone()).collect();
            if let Ok(p) = is_pants(m, &set) {
                out.push(p);
            }
            return;
        }
        let need = want - clique.len();
        for i in start..k {
            if k - i < need {
                break;
            }
            if clique.iter().all(|&j| adj[j][i]) {
                clique.push(i);
                extend(i + 1, want, k, adj, clique, spheres, m, out);
                clique.pop();
            }
        }
    }
    extend(0, want, k, &adj, &mut clique, &spheres, m, &mut out);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m3() -> GluedManifold {
        GluedManifold::standard(3).unwrap()
    }

    fn m2() -> GluedManifold {
        GluedManifold::standard(2).unwrap()
    }

    fn interior(m: &GluedManifold, piece: &[Label]) -> SphereClass {
        SphereClass::interior(m, Split::new(m.ground_size(), piece).unwrap()).unwrap()
    }

    fn oc(m: &GluedManifold, y: u8, plus: &[Label], minus: &[Label]) -> SphereClass {
        let (p, q) = m.orbit(YId(y)).unwrap();
        SphereClass::once_crossing(
            m,
            YId(y),
            Disk::from_labels(m.ground_size(), p, plus).unwrap(),
            Disk::from_labels(m.ground_size(), q, minus).unwrap(),
        )
        .unwrap()
    }

    /// The base pants decomposition used throughout: all Y-spheres plus the
    /// caterpillar splits {1,3}, {2,4}, {5,6}.
    fn base_pants_n3() -> GluedPants {
        let m = m3();
        let spheres = vec![
            SphereClass::Y(YId(0)),
            SphereClass::Y(YId(1)),
            SphereClass::Y(YId(2)),
            interior(&m, &[1, 3]),
            interior(&m, &[2, 4]),
            interior(&m, &[5, 6]),
        ];
        is_pants(&m, &spheres).unwrap()
    }

    fn good_sphere_a(m: &GluedManifold) -> SphereClass {
        oc(m, 0, &[3], &[4])
    }

    #[test]
    fn manifold_json_round_trip() {
        let m = m3();
        let text = serde_json::to_string(&m).unwrap();
        assert_eq!(
            text,
            r#"{"n":3,"pairing":[[1,2],[3,4],[5,6]],"labels":{"A":[1,2],"B":[3,4],"C":[5,6]}}"#
        );
        let back: GluedManifold = serde_json::from_str(&text).unwrap();
        assert_eq!(back, m);
        // A label table naming the wrong orbit is rejected.
        let bad = r#"{"n":2,"pairing":[[1,2],[3,4]],"labels":{"A":[3,4],"B":[1,2]}}"#;
        assert!(serde_json::from_str::<GluedManifold>(bad).is_err());
        let bad = r#"{"n":2,"pairing":[[1,2],[2,3]],"labels":{"A":[1,2],"B":[2,3]}}"#;
        assert!(serde_json::from_str::<GluedManifold>(bad).is_err());
    }

    #[test]
    fn peripheral_splits_canonicalize_to_y_spheres() {
        let m = m3();
        let z = Split::new(6, &[4]).unwrap();
        assert_eq!(
            SphereClass::interior(&m, z).unwrap(),
            SphereClass::Y(YId(1))
        );
        assert_eq!(
            SphereClass::interior(&m, Split::new(6, &[2, 3, 4, 5, 6]).unwrap()).unwrap(),
            SphereClass::Y(YId(0))
        );
    }

    #[test]
    fn once_crossing_requires_disjoint_disks() {
        let m = m3();
        let d_plus = Disk::from_labels(6, 1, &[3]).unwrap();
        let d_minus = Disk::from_labels(6, 2, &[3]).unwrap();
        assert!(matches!(
            SphereClass::once_crossing(&m, YId(0), d_plus, d_minus),
            Err(Error::InvalidSphere(_))
        ));
        let json = r#"{"once_crossing":{"y":"A","d_plus":{"s":6,"on":1,"side":[3]},"d_minus":{"s":6,"on":2,"side":[3]}}}"#;
        assert!(serde_json::from_str::<SphereClass>(json).is_err());
    }

    #[test]
    fn sphere_json_shapes() {
        let m = m3();
        let y = SphereClass::Y(YId(0));
        assert_eq!(serde_json::to_string(&y).unwrap(), r#"{"y":"A"}"#);
        let z = interior(&m, &[1, 3]);
        assert_eq!(
            serde_json::to_string(&z).unwrap(),
            r#"{"interior":{"s":6,"side":[1,3]}}"#
        );
        let x = good_sphere_a(&m);
        let text = serde_json::to_string(&x).unwrap();
        assert_eq!(serde_json::from_str::<SphereClass>(&text).unwrap(), x);
        // Peripheral interior data must use the Y form.
        assert!(serde_json::from_str::<SphereClass>(r#"{"interior":{"s":6,"side":[4]}}"#).is_err());
    }

    #[test]
    fn model_sphere_counts() {
        assert_eq!(all_model_spheres(&m2()).len(), 9);
        let spheres = all_model_spheres(&m3());
        assert_eq!(spheres.len(), 178);
        let per_orbit = spheres
            .iter()
            .filter(|x| matches!(x, SphereClass::OnceCrossing { y, .. } if *y == YId(0)))
            .count();
        assert_eq!(per_orbit, 50);
    }

    #[test]
    fn disjointness_case_table() {
        let m = m3();
        let y_a = SphereClass::Y(YId(0));
        // Interior spheres avoid the handles entirely.
        assert!(disjoint(&m, &y_a, &interior(&m, &[1, 2])).unwrap());
        // A once-crossing sphere meets its own Y-sphere.
        assert!(!disjoint(&m, &y_a, &good_sphere_a(&m)).unwrap());
        assert!(disjoint(&m, &SphereClass::Y(YId(1)), &good_sphere_a(&m)).unwrap());
        // The two members of the standard good pair are disjoint.
        assert!(disjoint(&m, &good_sphere_a(&m), &oc(&m, 0, &[5], &[6])).unwrap());
        // Equal spheres are not an edge.
        assert!(!disjoint(&m, &y_a, &y_a).unwrap());
    }

    #[test]
    fn disjointness_is_symmetric_everywhere() {
        for m in [m2(), m3()] {
            let spheres = all_model_spheres(&m);
            for x in &spheres {
                for y in &spheres {
                    assert_eq!(
                        disjoint(&m, x, y).unwrap(),
                        disjoint(&m, y, x).unwrap(),
                        "{x} vs {y}"
                    );
                }
            }
        }
    }

    #[test]
    fn base_pants_dual_graph_is_frozen() {
        let p = base_pants_n3();
        // Sorted sphere order: Y(A), Y(B), Y(C), {1,3}, {5,6}-side, {2,4}-side.
        assert_eq!(p.dual_vertex_count(), 4);
        assert_eq!(
            p.dual_edges(),
            &[[0, 1], [0, 1], [2, 2], [0, 3], [3, 2], [3, 1]]
        );
    }

    #[test]
    fn pants_cardinality_and_disjointness_failures() {
        let m = m3();
        let err = is_pants(&m, &[SphereClass::Y(YId(0))]).unwrap_err();
        assert_eq!(err, Error::NotMaximal { expected: 6, got: 1 });
        let mut spheres = base_pants_n3().spheres().to_vec();
        spheres[3] = interior(&m, &[1, 2]); // crosses {2,4}
        assert!(matches!(
            is_pants(&m, &spheres).unwrap_err(),
            Error::NotDisjoint(_, _)
        ));
        // Duplicates collapse and the set becomes too small.
        let mut doubled = base_pants_n3().spheres().to_vec();
        doubled[0] = doubled[1].clone();
        assert!(matches!(
            is_pants(&m, &doubled).unwrap_err(),
            Error::NotMaximal { expected: 6, got: 5 }
        ));
    }

    #[test]
    fn parallel_disk_circles_are_out_of_model() {
        let m = m3();
        let x1 = oc(&m, 0, &[3], &[4]);
        let x2 = oc(&m, 0, &[3], &[4, 5, 6]);
        let spheres = vec![
            x1,
            x2,
            SphereClass::Y(YId(1)),
            SphereClass::Y(YId(2)),
            interior(&m, &[5, 6]),
            interior(&m, &[1, 3]),
        ];
        assert!(matches!(
            is_pants(&m, &spheres).unwrap_err(),
            Error::OutOfModel(_)
        ));
    }

    #[test]
    fn good_sphere_pants_dual_graph_is_frozen() {
        let m = m3();
        let spheres = vec![
            SphereClass::Y(YId(1)),
            SphereClass::Y(YId(2)),
            interior(&m, &[1, 3]),
            interior(&m, &[2, 4]),
            interior(&m, &[5, 6]),
            good_sphere_a(&m),
        ];
        let p = is_pants(&m, &spheres).unwrap();
        // Sorted order: Y(B), Y(C), {1,3}, {5,6}-side, {2,4}-side, crossing.
        assert_eq!(p.dual_vertex_count(), 4);
        assert_eq!(
            p.dual_edges(),
            &[[0, 0], [1, 1], [2, 3], [3, 1], [3, 2], [2, 0]]
        );
        // Loops are exactly the self-adjacent spheres.
        assert!(p.self_adjacent(&SphereClass::Y(YId(1))).unwrap());
        assert!(p.self_adjacent(&SphereClass::Y(YId(2))).unwrap());
        assert!(!p.self_adjacent(&good_sphere_a(&m)).unwrap());
    }

    #[test]
    fn two_handle_pants_are_thetas_and_dumbbells() {
        let m = m2();
        let all = enumerate_all_pants(&m).unwrap();
        assert_eq!(all.len(), 7);
        let mut thetas = 0;
        let mut dumbbells = 0;
        for p in &all {
            assert_eq!(p.dual_vertex_count(), 2);
            let loops = p.dual_edges().iter().filter(|e| e[0] == e[1]).count();
            match loops {
                0 => thetas += 1,
                2 => dumbbells += 1,
                other => panic!("impossible loop count {other}"),
            }
        }
        assert_eq!((thetas, dumbbells), (2, 5));
    }

    #[test]
    fn adjacency_in_theta_and_dumbbell() {
        let m = m2();
        let theta = is_pants(
            &m,
            &[
                SphereClass::Y(YId(0)),
                SphereClass::Y(YId(1)),
                interior(&m, &[1, 3]),
            ],
        )
        .unwrap();
        let spheres: Vec<SphereClass> = theta.spheres().to_vec();
        for a in &spheres {
            assert!(!theta.self_adjacent(a).unwrap());
            for b in &spheres {
                if a != b {
                    assert!(theta.adjacent(a, b).unwrap());
                }
            }
        }
        let dumbbell = is_pants(
            &m,
            &[
                SphereClass::Y(YId(0)),
                SphereClass::Y(YId(1)),
                interior(&m, &[1, 2]),
            ],
        )
        .unwrap();
        assert!(dumbbell.self_adjacent(&SphereClass::Y(YId(0))).unwrap());
        assert!(dumbbell.self_adjacent(&SphereClass::Y(YId(1))).unwrap());
        assert!(!dumbbell.self_adjacent(&interior(&m, &[1, 2])).unwrap());
        assert!(dumbbell
            .adjacent(&SphereClass::Y(YId(0)), &interior(&m, &[1, 2]))
            .unwrap());
        // The two loops sit at opposite ends of the bar.
        assert!(!dumbbell
            .adjacent(&SphereClass::Y(YId(0)), &SphereClass::Y(YId(1)))
            .unwrap());
        assert_eq!(
            dumbbell.index_of(&interior(&m, &[1, 3])).unwrap_err(),
            Error::NotMember
        );
    }

    #[test]
    fn split_spheres_of_the_base_pants() {
        let m = m3();
        let p = base_pants_n3();
        let expect = |a: &SphereClass, want: Vec<SphereClass>| {
            let out = p.split_spheres_for(a).unwrap();
            assert_eq!(out.notes(), &[] as &[String], "notes for {a}");
            assert_eq!(out.found(), want, "split spheres of {a}");
        };
        // The self-adjacent Y-sphere has no split spheres.
        assert!(p
            .split_spheres_for(&SphereClass::Y(YId(2)))
            .unwrap()
            .is_self_adjacent());
        // Each non-loop Y-sphere has exactly one in-model split sphere: the
        // twisted partner of the slot pair is not representable.
        expect(&SphereClass::Y(YId(0)), vec![good_sphere_a(&m)]);
        expect(
            &SphereClass::Y(YId(1)),
            vec![oc(&m, 1, &[1], &[2])],
        );
        // Interior spheres have both slots realized by interior spheres.
        expect(
            &interior(&m, &[1, 3]),
            vec![interior(&m, &[1, 2, 4]), interior(&m, &[2, 3, 4])],
        );
        expect(
            &interior(&m, &[2, 4]),
            vec![interior(&m, &[1, 2, 3]), interior(&m, &[1, 3, 4])],
        );
        expect(
            &interior(&m, &[5, 6]),
            vec![interior(&m, &[1, 3, 5]), interior(&m, &[1, 3, 6])],
        );
        // The unrealized slot of Y(A) is recorded as an empty slot.
        match p.split_spheres_for(&SphereClass::Y(YId(0))).unwrap() {
            SplitSphereOutcome::Slots { slots, .. } => {
                assert_eq!(slots.iter().filter(|s| s.sphere.is_some()).count(), 1);
            }
            _ => panic!("Y(A) is not self-adjacent"),
        }
    }

    #[test]
    fn exchange_swaps_y_for_the_good_sphere() {
        let m = m3();
        let p = base_pants_n3();
        let a = SphereClass::Y(YId(0));
        let b = good_sphere_a(&m);
        let p2 = p.exchange(&a, &b).unwrap();
        assert!(p2.contains(&b) && !p2.contains(&a));
        // The new decomposition is the frozen good-sphere pants.
        assert_eq!(p2.dual_edges(), &[[0, 0], [1, 1], [2, 3], [3, 1], [3, 2], [2, 0]]);
        // The move reverses.
        assert!(p2.split_spheres_for(&b).unwrap().found().contains(&a));
        let p3 = p2.exchange(&b, &a).unwrap();
        assert_eq!(p3.spheres(), p.spheres());
        // A sphere that is not a split sphere is rejected.
        assert_eq!(
            p.exchange(&a, &interior(&m, &[1, 2])).unwrap_err(),
            Error::NotSplitSphere
        );
    }

    #[test]
    fn split_sphere_slots_over_all_two_handle_pants() {
        let m = m2();
        for p in enumerate_all_pants(&m).unwrap() {
            for a in p.spheres() {
                let out = p.split_spheres_for(a).unwrap();
                assert_eq!(out.notes(), &[] as &[String]);
                assert_eq!(out.is_self_adjacent(), p.self_adjacent(a).unwrap());
                for b in out.found() {
                    let p2 = p.exchange(a, &b).unwrap();
                    assert!(p2.split_spheres_for(&b).unwrap().found().contains(a));
                    let back = p2.exchange(&b, a).unwrap();
                    assert_eq!(back.spheres(), p.spheres());
                }
            }
        }
    }

    #[test]
    fn pants_json_round_trip() {
        let p = base_pants_n3();
        let text = serde_json::to_string(&p).unwrap();
        let back: GluedPants = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);
        // Tampering with the dual graph is rejected on load.
        let tampered = text.replace("[3,2]", "[2,3]");
        assert_ne!(tampered, text);
        assert!(serde_json::from_str::<GluedPants>(&tampered).is_err());
    }
}
