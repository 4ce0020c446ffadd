//! The Farey-with-fins complex at finite radius and constructive
//! non-rigidity witnesses.
//!
//! The infinite complex has one vertex per reduced fraction (plus infinity),
//! an edge for every unimodular pair, and a fin — a path of length two — over
//! every such edge.  A finite mediant-generated ball stands in for the whole:
//! all witness constructions need only finitely many vertices, and targets
//! beyond the ball are produced arithmetically.  For any finite connected
//! subgraph with at least two edges, [`find_nonrigidity_witness`] produces a
//! locally injective simplicial map together with a certificate that no
//! automorphism of the complex restricts to it: either an edge changes type
//! (automorphisms preserve the farey/fin edge partition) or at least three
//! embeddings agree off a single edge (at most two automorphisms fix an edge
//! pointwise).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A reduced fraction `p/q` with `q >= 0`, or infinity as `1/0`.  Ordered as
/// a point of the circle with infinity largest.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "(i64, i64)", try_from = "(i64, i64)")]
pub struct Fraction {
    p: i64,
    q: i64,
}

impl Fraction {
    pub const ZERO: Fraction = Fraction { p: 0, q: 1 };
    pub const ONE: Fraction = Fraction { p: 1, q: 1 };
    pub const INFINITY: Fraction = Fraction { p: 1, q: 0 };

    pub fn new(p: i64, q: i64) -> Result<Fraction> {
        if p == 0 && q == 0 {
            return Err(Error::InvalidSphere("0/0 is not a vertex".into()));
        }
        if q == 0 {
            return Ok(Fraction::INFINITY);
        }
        let (mut p, mut q) = if q < 0 { (-p, -q) } else { (p, q) };
        let g = gcd(p, q);
        p /= g;
        q /= g;
        Ok(Fraction { p, q })
    }

    pub fn numerator(self) -> i64 {
        self.p
    }

    pub fn denominator(self) -> i64 {
        self.q
    }

    pub fn is_infinite(self) -> bool {
        self.q == 0
    }

    /// The mediant `(p + p')/(q + q')`, the apex of the tessellation
    /// triangle on one side of the edge `(self, other)`.
    pub fn mediant(self, other: Fraction) -> Result<Fraction> {
        Fraction::new(self.p + other.p, self.q + other.q)
    }

    /// The difference `(p - p')/(q - q')`, the apex on the other side.
    pub fn comediant(self, other: Fraction) -> Result<Fraction> {
        Fraction::new(self.p - other.p, self.q - other.q)
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl From<Fraction> for (i64, i64) {
    fn from(f: Fraction) -> (i64, i64) {
        (f.p, f.q)
    }
}

impl TryFrom<(i64, i64)> for Fraction {
    type Error = Error;

    fn try_from(pair: (i64, i64)) -> Result<Fraction> {
        Fraction::new(pair.0, pair.1)
    }
}

impl Ord for Fraction {
    fn cmp(&self, other: &Fraction) -> std::cmp::Ordering {
        match (self.q == 0, other.q == 0) {
            (true, true) => std::cmp::Ordering::Equal,
            (true, false) => std::cmp::Ordering::Greater,
            (false, true) => std::cmp::Ordering::Less,
            (false, false) => {
                (self.p as i128 * other.q as i128).cmp(&(other.p as i128 * self.q as i128))
            }
        }
    }
}

impl PartialOrd for Fraction {
    fn partial_cmp(&self, other: &Fraction) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q == 0 {
            write!(f, "inf")
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl fmt::Debug for Fraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Two fractions span an edge of the tessellation when `|ps - qr| = 1`.
pub fn unimodular(a: Fraction, b: Fraction) -> bool {
    (a.p as i128 * b.q as i128 - a.q as i128 * b.p as i128).abs() == 1
}

/// A vertex of the complex: a tessellation vertex or the fin over an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VKey {
    Farey(Fraction),
    Fin(Fraction, Fraction),
}

impl VKey {
    /// The fin vertex over the edge `{a, b}`, with the endpoints stored in
    /// increasing order.
    pub fn fin(a: Fraction, b: Fraction) -> Result<VKey> {
        if !unimodular(a, b) {
            return Err(Error::InvalidSphere(format!(
                "{a} and {b} do not span an edge"
            )));
        }
        if a < b {
            Ok(VKey::Fin(a, b))
        } else {
            Ok(VKey::Fin(b, a))
        }
    }

    pub fn is_farey(&self) -> bool {
        matches!(self, VKey::Farey(_))
    }

    fn well_formed(&self) -> Result<()> {
        match self {
            VKey::Farey(_) => Ok(()),
            VKey::Fin(a, b) => {
                if a < b && unimodular(*a, *b) {
                    Ok(())
                } else {
                    Err(Error::InvalidSphere(format!(
                        "fin({a},{b}) does not name an edge"
                    )))
                }
            }
        }
    }
}

impl fmt::Display for VKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VKey::Farey(x) => write!(f, "{x}"),
            VKey::Fin(a, b) => write!(f, "fin({a},{b})"),
        }
    }
}

fn sorted_pair(u: VKey, v: VKey) -> (VKey, VKey) {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Whether `{u, v}` is an edge of the infinite complex (checked
/// arithmetically, independent of any generated ball).
pub fn is_complex_edge(u: VKey, v: VKey) -> bool {
    match (u, v) {
        (VKey::Farey(a), VKey::Farey(b)) => a != b && unimodular(a, b),
        (VKey::Farey(x), VKey::Fin(a, b)) | (VKey::Fin(a, b), VKey::Farey(x)) => x == a || x == b,
        (VKey::Fin(..), VKey::Fin(..)) => false,
    }
}

/// The type of an edge: tessellation edge or fin edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EdgeKind {
    Farey,
    Fin,
}

/// The kind of `{u, v}` when it is an edge of the complex.
pub fn edge_kind(u: VKey, v: VKey) -> Option<EdgeKind> {
    if !is_complex_edge(u, v) {
        return None;
    }
    match (u, v) {
        (VKey::Farey(_), VKey::Farey(_)) => Some(EdgeKind::Farey),
        _ => Some(EdgeKind::Fin),
    }
}

/// A finite mediant-generated ball of the complex.  Growth returns a new
/// snapshot; nothing is mutated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FareyFins {
    depth: usize,
    farey_vertices: BTreeSet<Fraction>,
    farey_edges: BTreeSet<(Fraction, Fraction)>,
}

fn fedge(a: Fraction, b: Fraction) -> (Fraction, Fraction) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Generates the ball of the given mediant depth around the base triangle
/// `{0/1, 1/1, inf}`: at each level both triangle apexes of every edge are
/// added with their edges.
pub fn build_farey_fins(depth: usize) -> FareyFins {
    let mut vertices: BTreeSet<Fraction> =
        [Fraction::ZERO, Fraction::ONE, Fraction::INFINITY].into();
    let mut edges: BTreeSet<(Fraction, Fraction)> = [
        fedge(Fraction::ZERO, Fraction::ONE),
        fedge(Fraction::ONE, Fraction::INFINITY),
        fedge(Fraction::ZERO, Fraction::INFINITY),
    ]
    .into();
    for _ in 0..depth {
        let snapshot: Vec<(Fraction, Fraction)> = edges.iter().copied().collect();
        for (a, b) in snapshot {
            for apex in [a.mediant(b), a.comediant(b)] {
                let apex = apex.expect("edge endpoints are distinct");
                vertices.insert(apex);
                edges.insert(fedge(a, apex));
                edges.insert(fedge(b, apex));
            }
        }
    }
    FareyFins {
        depth,
        farey_vertices: vertices,
        farey_edges: edges,
    }
}

impl FareyFins {
    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn farey_vertex_count(&self) -> usize {
        self.farey_vertices.len()
    }

    pub fn farey_edge_count(&self) -> usize {
        self.farey_edges.len()
    }

    /// Total vertex count: tessellation vertices plus one fin per edge.
    pub fn vertex_count(&self) -> usize {
        self.farey_vertices.len() + self.farey_edges.len()
    }

    /// Total edge count: tessellation edges plus two fin edges per fin.
    pub fn edge_count(&self) -> usize {
        3 * self.farey_edges.len()
    }

    pub fn contains(&self, v: &VKey) -> bool {
        match v {
            VKey::Farey(x) => self.farey_vertices.contains(x),
            VKey::Fin(a, b) => self.farey_edges.contains(&(*a, *b)),
        }
    }

    pub fn vertices(&self) -> Vec<VKey> {
        let mut out: Vec<VKey> = self.farey_vertices.iter().map(|&x| VKey::Farey(x)).collect();
        out.extend(self.farey_edges.iter().map(|&(a, b)| VKey::Fin(a, b)));
        out.sort();
        out
    }

    pub fn edges(&self) -> Vec<(VKey, VKey)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for &(a, b) in &self.farey_edges {
            out.push(sorted_pair(VKey::Farey(a), VKey::Farey(b)));
            out.push(sorted_pair(VKey::Fin(a, b), VKey::Farey(a)));
            out.push(sorted_pair(VKey::Fin(a, b), VKey::Farey(b)));
        }
        out.sort();
        out
    }

    pub fn neighbors(&self, v: &VKey) -> Vec<VKey> {
        let mut out = Vec::new();
        match v {
            VKey::Farey(x) => {
                for &(a, b) in &self.farey_edges {
                    if a == *x {
                        out.push(VKey::Farey(b));
                        out.push(VKey::Fin(a, b));
                    } else if b == *x {
                        out.push(VKey::Farey(a));
                        out.push(VKey::Fin(a, b));
                    }
                }
            }
            VKey::Fin(a, b) => {
                if self.farey_edges.contains(&(*a, *b)) {
                    out.push(VKey::Farey(*a));
                    out.push(VKey::Farey(*b));
                }
            }
        }
        out.sort();
        out
    }

    /// Fin vertices have valence two; tessellation vertices have unbounded
    /// valence in the infinite complex, whatever the ball shows.
    pub fn has_unbounded_valence(&self, v: &VKey) -> bool {
        v.is_farey()
    }

    /// A snapshot grown by the given number of extra mediant levels.
    pub fn grow(&self, extra: usize) -> FareyFins {
        build_farey_fins(self.depth + extra)
    }

    /// Graphviz rendering: tessellation vertices as labeled circles, fins as
    /// points, fin edges dashed.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph farey_fins {\n  node [shape=circle];\n");
        for x in &self.farey_vertices {
            s.push_str(&format!("  \"{x}\";\n"));
        }
        for (a, b) in &self.farey_edges {
            s.push_str(&format!("  \"fin({a},{b})\" [shape=point];\n"));
        }
        for (a, b) in &self.farey_edges {
            s.push_str(&format!("  \"{a}\" -- \"{b}\";\n"));
            s.push_str(&format!("  \"{a}\" -- \"fin({a},{b})\" [style=dashed];\n"));
            s.push_str(&format!("  \"{b}\" -- \"fin({a},{b})\" [style=dashed];\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// A finite subgraph of the complex: a vertex set and an edge set over it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "SubgraphJson", try_from = "SubgraphJson")]
pub struct Subgraph {
    vertices: BTreeSet<VKey>,
    edges: BTreeSet<(VKey, VKey)>,
}

#[derive(Serialize, Deserialize)]
struct SubgraphJson {
    vertices: Vec<VKey>,
    edges: Vec<(VKey, VKey)>,
}

impl From<Subgraph> for SubgraphJson {
    fn from(x: Subgraph) -> SubgraphJson {
        SubgraphJson {
            vertices: x.vertices.into_iter().collect(),
            edges: x.edges.into_iter().collect(),
        }
    }
}

impl TryFrom<SubgraphJson> for Subgraph {
    type Error = Error;

    fn try_from(json: SubgraphJson) -> Result<Subgraph> {
        Subgraph::new(json.vertices, json.edges)
    }
}

impl Subgraph {
    /// Builds and validates a subgraph: fin keys are normalized, and every
    /// edge must be an edge of the complex between listed vertices.
    pub fn new(vertices: Vec<VKey>, edges: Vec<(VKey, VKey)>) -> Result<Subgraph> {
        let normalize = |v: VKey| -> Result<VKey> {
            match v {
                VKey::Farey(_) => Ok(v),
                VKey::Fin(a, b) => VKey::fin(a, b),
            }
        };
        let vertices: BTreeSet<VKey> = vertices
            .into_iter()
            .map(normalize)
            .collect::<Result<_>>()?;
        let mut edge_set = BTreeSet::new();
        for (u, v) in edges {
            let (u, v) = (normalize(u)?, normalize(v)?);
            if !vertices.contains(&u) || !vertices.contains(&v) {
                return Err(Error::InvalidSphere(format!(
                    "edge ({u}, {v}) mentions an unlisted vertex"
                )));
            }
            if !is_complex_edge(u, v) {
                return Err(Error::InvalidSphere(format!(
                    "({u}, {v}) is not an edge of the complex"
                )));
            }
            edge_set.insert(sorted_pair(u, v));
        }
        Ok(Subgraph {
            vertices,
            edges: edge_set,
        })
    }

    pub fn vertices(&self) -> &BTreeSet<VKey> {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<(VKey, VKey)> {
        &self.edges
    }

    pub fn contains(&self, v: &VKey) -> bool {
        self.vertices.contains(v)
    }

    pub fn has_edge(&self, u: VKey, v: VKey) -> bool {
        self.edges.contains(&sorted_pair(u, v))
    }

    pub fn neighbors(&self, v: &VKey) -> Vec<VKey> {
        let mut out = Vec::new();
        for (a, b) in &self.edges {
            if a == v {
                out.push(*b);
            } else if b == v {
                out.push(*a);
            }
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        let Some(start) = self.vertices.iter().next() else {
            return true;
        };
        let mut seen: BTreeSet<VKey> = [*start].into();
        let mut queue = vec![*start];
        while let Some(v) = queue.pop() {
            for w in self.neighbors(&v) {
                if seen.insert(w) {
                    queue.push(w);
                }
            }
        }
        seen.len() == self.vertices.len()
    }

    /// The tessellation vertices of the subgraph, in increasing order.
    pub fn farey_part(&self) -> Vec<Fraction> {
        self.vertices
            .iter()
            .filter_map(|v| match v {
                VKey::Farey(x) => Some(*x),
                VKey::Fin(..) => None,
            })
            .collect()
    }
}

// ---------------------------------------------------------------------------
// Tessellation-convex hulls.

fn in_arc(u: Fraction, x: Fraction, w: Fraction) -> bool {
    if x == u || x == w {
        return false;
    }
    if u < w {
        u < x && x < w
    } else {
        x > u || x < w
    }
}

fn same_side(u: Fraction, w: Fraction, x: Fraction, z: Fraction) -> bool {
    in_arc(u, x, w) == in_arc(u, z, w)
}

fn sort3(mut t: [Fraction; 3]) -> [Fraction; 3] {
    t.sort();
    t
}

/// Whether some point of `v` other than the endpoints lies on the same side
/// of the chord `{u, w}` as `z`.
fn side_witnessed(u: Fraction, w: Fraction, z: Fraction, v: &[Fraction]) -> bool {
    v.iter()
        .any(|&p| p != u && p != w && same_side(u, w, p, z))
}

fn triangle_in_hull(t: [Fraction; 3], v: &[Fraction]) -> bool {
    for i in 0..3 {
        let (u, w, z) = (t[i], t[(i + 1) % 3], t[(i + 2) % 3]);
        if !side_witnessed(u, w, z, v) {
            return false;
        }
    }
    true
}

fn apexes(a: Fraction, b: Fraction) -> Result<[Fraction; 2]> {
    Ok([a.mediant(b)?, a.comediant(b)?])
}

/// The convex hull of a set of tessellation vertices inside the
/// tessellation: the smallest union of tessellation triangles bounded by
/// tessellation edges that contains the given points.  The result is a
/// triangulated polygon with all vertices on the boundary; for two points
/// joined by an edge it degenerates to that single edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FareyHull {
    pub vertices: Vec<Fraction>,
    pub edges: Vec<(Fraction, Fraction)>,
    pub triangles: Vec<[Fraction; 3]>,
    /// Hull vertices lying in exactly one triangle, in increasing order
    /// (deterministic ear choice picks the first).
    pub ears: Vec<Fraction>,
}

pub fn convex_hull_farey(points: &[Fraction], g: &FareyFins) -> Result<FareyHull> {
    let mut v: Vec<Fraction> = points.to_vec();
    v.sort();
    v.dedup();
    if v.len() < 2 {
        return Err(Error::DomainError);
    }
    for p in &v {
        if !g.farey_vertices.contains(p) {
            return Err(Error::BallTooSmall);
        }
    }
    if v.len() == 2 && unimodular(v[0], v[1]) {
        return Ok(FareyHull {
            vertices: v.clone(),
            edges: vec![(v[0], v[1])],
            triangles: Vec::new(),
            ears: Vec::new(),
        });
    }
    // Walk from the base triangle toward the hull: at most one edge of any
    // triangle can have all of `v` on its closed far side.
    let mut tri = sort3([Fraction::ZERO, Fraction::ONE, Fraction::INFINITY]);
    let mut steps = 0usize;
    while !triangle_in_hull(tri, &v) {
        let mut moved = false;
        for i in 0..3 {
            let (u, w, z) = (tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]);
            if !side_witnessed(u, w, z, &v) {
                let [m1, m2] = apexes(u, w)?;
                tri = sort3([u, w, if m1 == z { m2 } else { m1 }]);
                moved = true;
                break;
            }
        }
        steps += 1;
        if !moved || steps > 100_000 {
            return Err(Error::BallTooSmall);
        }
    }
    let mut kept: BTreeSet<[Fraction; 3]> = [tri].into();
    let mut queue = vec![tri];
    while let Some(t) = queue.pop() {
        if kept.len() > 100_000 {
            return Err(Error::BallTooSmall);
        }
        for i in 0..3 {
            let (u, w, z) = (t[i], t[(i + 1) % 3], t[(i + 2) % 3]);
            let [m1, m2] = apexes(u, w)?;
            let nt = sort3([u, w, if m1 == z { m2 } else { m1 }]);
            if !kept.contains(&nt) && triangle_in_hull(nt, &v) {
                kept.insert(nt);
                queue.push(nt);
            }
        }
    }
    let mut vertices: BTreeSet<Fraction> = BTreeSet::new();
    let mut edges: BTreeSet<(Fraction, Fraction)> = BTreeSet::new();
    let mut triangle_count: BTreeMap<Fraction, usize> = BTreeMap::new();
    for t in &kept {
        for i in 0..3 {
            vertices.insert(t[i]);
            edges.insert(fedge(t[i], t[(i + 1) % 3]));
            *triangle_count.entry(t[i]).or_insert(0) += 1;
        }
    }
    let ears: Vec<Fraction> = triangle_count
        .iter()
        .filter(|(_, &c)| c == 1)
        .map(|(&x, _)| x)
        .collect();
    Ok(FareyHull {
        vertices: vertices.into_iter().collect(),
        edges: edges.into_iter().collect(),
        triangles: kept.into_iter().collect(),
        ears,
    })
}

// ---------------------------------------------------------------------------
// Witness maps.

/// A locally injective simplicial map of a finite subgraph together with a
/// certificate that no automorphism of the complex restricts to it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "WitnessMapJson", try_from = "WitnessMapJson")]
pub struct WitnessMap {
    pub domain: Subgraph,
    pub map: BTreeMap<VKey, VKey>,
    /// Which case of the decision tree produced the witness.
    pub case: String,
    pub certificate: WitnessCertificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WitnessCertificate {
    /// An edge maps to an edge of the other type; automorphisms preserve
    /// edge types, so no automorphism restricts to the map.
    TypeSwap {
        edge: (VKey, VKey),
        image: (VKey, VKey),
    },
    /// At least three embeddings agree away from one edge and differ on it;
    /// at most two automorphisms fix an edge pointwise.
    EmbeddingFamily {
        fixed_edge: (VKey, VKey),
        embeddings: Vec<BTreeMap<VKey, VKey>>,
    },
}

#[derive(Serialize, Deserialize)]
struct WitnessMapJson {
    domain: Subgraph,
    map: Vec<(VKey, VKey)>,
    case: String,
    certificate: CertificateJson,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
enum CertificateJson {
    TypeSwap {
        edge: (VKey, VKey),
        image: (VKey, VKey),
    },
    EmbeddingFamily {
        fixed_edge: (VKey, VKey),
        embeddings: Vec<Vec<(VKey, VKey)>>,
    },
}

impl From<WitnessMap> for WitnessMapJson {
    fn from(w: WitnessMap) -> WitnessMapJson {
        WitnessMapJson {
            domain: w.domain,
            map: w.map.into_iter().collect(),
            case: w.case,
            certificate: match w.certificate {
                WitnessCertificate::TypeSwap { edge, image } => {
                    CertificateJson::TypeSwap { edge, image }
                }
                WitnessCertificate::EmbeddingFamily {
                    fixed_edge,
                    embeddings,
                } => CertificateJson::EmbeddingFamily {
                    fixed_edge,
                    embeddings: embeddings
                        .into_iter()
                        .map(|m| m.into_iter().collect())
                        .collect(),
                },
            },
        }
    }
}

impl TryFrom<WitnessMapJson> for WitnessMap {
    type Error = Error;

    fn try_from(json: WitnessMapJson) -> Result<WitnessMap> {
        for (u, v) in &json.map {
            u.well_formed()?;
            v.well_formed()?;
        }
        Ok(WitnessMap {
            domain: json.domain,
            map: json.map.into_iter().collect(),
            case: json.case,
            certificate: match json.certificate {
                CertificateJson::TypeSwap { edge, image } => {
                    WitnessCertificate::TypeSwap { edge, image }
                }
                CertificateJson::EmbeddingFamily {
                    fixed_edge,
                    embeddings,
                } => WitnessCertificate::EmbeddingFamily {
                    fixed_edge,
                    embeddings: embeddings
                        .into_iter()
                        .map(|m| m.into_iter().collect())
                        .collect(),
                },
            },
        })
    }
}

/// Collects every defect of a vertex map on a subgraph: totality,
/// simpliciality, and local injectivity on closed stars.
fn map_defects(x: &Subgraph, map: &BTreeMap<VKey, VKey>) -> Vec<String> {
    let mut reasons = Vec::new();
    for v in &x.vertices {
        match map.get(v) {
            None => reasons.push(format!("{v} has no image")),
            Some(img) => {
                if let Err(e) = img.well_formed() {
                    reasons.push(format!("image of {v}: {e}"));
                }
            }
        }
    }
    if !reasons.is_empty() {
        return reasons;
    }
    for (u, v) in &x.edges {
        let (iu, iv) = (map[u], map[v]);
        if iu == iv {
            reasons.push(format!("edge ({u}, {v}) collapses to {iu}"));
        } else if !is_complex_edge(iu, iv) {
            reasons.push(format!(
                "edge ({u}, {v}) maps to the non-edge ({iu}, {iv})"
            ));
        }
    }
    for v in &x.vertices {
        let mut star = x.neighbors(v);
        star.push(*v);
        for i in 0..star.len() {
            for j in (i + 1)..star.len() {
                if map[&star[i]] == map[&star[j]] {
                    reasons.push(format!(
                        "star of {v} is not embedded: {} and {} share the image {}",
                        star[i], star[j], map[&star[i]]
                    ));
                }
            }
        }
    }
    reasons
}

fn map_is_injective(x: &Subgraph, map: &BTreeMap<VKey, VKey>) -> bool {
    let images: BTreeSet<VKey> = x.vertices.iter().map(|v| map[v]).collect();
    images.len() == x.vertices.len()
}

/// Outcome of re-checking a witness; `ok` with the list of defects found.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessCheck {
    pub ok: bool,
    pub reasons: Vec<String>,
}

/// Re-checks a witness map from scratch: the domain must be a valid
/// subgraph, the map simplicial and locally injective, and the certificate's
/// non-extendability criterion must hold (a genuine type swap, or at least
/// three embeddings agreeing off the fixed edge).  Image vertices need not
/// lie in the generated ball; edges are checked arithmetically.
pub fn verify_witness(w: &WitnessMap, g: &FareyFins) -> WitnessCheck {
    let mut reasons = Vec::new();
    for v in &w.domain.vertices {
        if v.well_formed().is_err() {
            reasons.push(format!("malformed domain vertex {v}"));
        }
        if !g.contains(v) {
            reasons.push(format!("domain vertex {v} is outside the generated ball"));
        }
    }
    reasons.extend(map_defects(&w.domain, &w.map));
    if !reasons.is_empty() {
        return WitnessCheck { ok: false, reasons };
    }
    match &w.certificate {
        WitnessCertificate::TypeSwap { edge, image } => {
            if !w.domain.edges.contains(&sorted_pair(edge.0, edge.1)) {
                reasons.push(format!(
                    "swapped edge ({}, {}) is not in the domain",
                    edge.0, edge.1
                ));
            } else {
                let mapped = sorted_pair(w.map[&edge.0], w.map[&edge.1]);
                if mapped != sorted_pair(image.0, image.1) {
                    reasons.push("stored image disagrees with the map".into());
                }
                match (edge_kind(edge.0, edge.1), edge_kind(image.0, image.1)) {
                    (Some(k1), Some(k2)) if k1 != k2 => {}
                    (Some(_), Some(_)) => {
                        reasons.push("no edge type is swapped".into());
                    }
                    _ => reasons.push("certificate names a non-edge".into()),
                }
            }
        }
        WitnessCertificate::EmbeddingFamily {
            fixed_edge,
            embeddings,
        } => {
            if !w.domain.edges.contains(&sorted_pair(fixed_edge.0, fixed_edge.1)) {
                reasons.push("fixed edge is not in the domain".into());
            }
            if embeddings.len() < 3 {
                reasons.push(format!(
                    "only {} embeddings; at least three are needed",
                    embeddings.len()
                ));
            }
            for (i, f) in embeddings.iter().enumerate() {
                let defects = map_defects(&w.domain, f);
                if !defects.is_empty() {
                    reasons.push(format!("family member {i}: {}", defects.join("; ")));
                } else if !map_is_injective(&w.domain, f) {
                    reasons.push(format!("family member {i} is not an embedding"));
                }
            }
            if reasons.is_empty() {
                let off_edge: Vec<VKey> = w
                    .domain
                    .vertices
                    .iter()
                    .filter(|v| **v != fixed_edge.0 && **v != fixed_edge.1)
                    .copied()
                    .collect();
                for i in 0..embeddings.len() {
                    for j in (i + 1)..embeddings.len() {
                        if off_edge
                            .iter()
                            .any(|v| embeddings[i][v] != embeddings[j][v])
                        {
                            reasons.push(format!(
                                "members {i} and {j} disagree away from the fixed edge"
                            ));
                        }
                        if embeddings[i][&fixed_edge.0] == embeddings[j][&fixed_edge.0]
                            && embeddings[i][&fixed_edge.1] == embeddings[j][&fixed_edge.1]
                        {
                            reasons.push(format!("members {i} and {j} coincide"));
                        }
                    }
                }
                if !embeddings.contains(&w.map) {
                    reasons.push("the witness map is not a member of its family".into());
                }
            }
        }
    }
    WitnessCheck {
        ok: reasons.is_empty(),
        reasons,
    }
}

/// A deterministic enumeration of the tessellation neighbors of `v`,
/// spiraling out from a seed neighbor found by the extended Euclidean
/// algorithm.
fn neighbor_spiral(v: Fraction) -> impl Iterator<Item = Fraction> {
    let seed = neighbor_seed(v);
    (0u64..).map(move |i| {
        let k = if i % 2 == 0 {
            (i / 2) as i64
        } else {
            -((i / 2 + 1) as i64)
        };
        Fraction::new(seed.p + k * v.p, seed.q + k * v.q).expect("neighbor is a vertex")
    })
}

fn neighbor_seed(v: Fraction) -> Fraction {
    // Find r/s with p*s - q*r = 1 via the extended Euclidean algorithm.
    let (mut r0, mut r1) = (v.p, v.q);
    let (mut x0, mut x1) = (1i64, 0i64);
    let (mut y0, mut y1) = (0i64, 1i64);
    while r1 != 0 {
        let quot = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - quot * r1);
        (x0, x1) = (x1, x0 - quot * x1);
        (y0, y1) = (y1, y0 - quot * y1);
    }
    // r0 = gcd = ±1 since v is reduced; p*x0 + q*y0 = r0.
    let sign = r0.signum();
    Fraction::new(-y0 * sign, x0 * sign).expect("seed neighbor is a vertex")
}

fn identity_map(x: &Subgraph) -> BTreeMap<VKey, VKey> {
    x.vertices.iter().map(|v| (*v, *v)).collect()
}

/// Finds a non-rigidity witness for a connected subgraph with at least two
/// edges, following the case order: (1) a pendant edge at a tessellation
/// vertex is re-aimed three ways; (2) a pendant fin path is re-aimed across
/// its tessellation triangle, or at another tessellation vertex; (3) with no
/// pendant vertices, an ear of the convex hull of the tessellation part is
/// swapped with a fin.  The report records which case fired.
pub fn find_nonrigidity_witness(x: &Subgraph, g: &FareyFins) -> Result<WitnessMap> {
    for v in &x.vertices {
        v.well_formed()?;
        if !g.contains(v) {
            return Err(Error::BallTooSmall);
        }
    }
    if x.edges.len() < 2 {
        return Err(Error::ReducedCaseNote(format!(
            "subgraph has {} edge(s); the reduction needs at least two",
            x.edges.len()
        )));
    }
    if !x.is_connected() {
        return Err(Error::ReducedCaseNote(
            "subgraph is disconnected; treat each component separately".into(),
        ));
    }
    let pendant: Vec<VKey> = x
        .vertices
        .iter()
        .filter(|v| x.neighbors(v).len() == 1)
        .copied()
        .collect();

    // Case 1: a pendant edge hanging off a tessellation vertex can be
    // re-aimed at any other neighbor of that vertex.
    for u in &pendant {
        let anchor = x.neighbors(u)[0];
        let VKey::Farey(vf) = anchor else { continue };
        let mut embeddings = Vec::new();
        for t in neighbor_spiral(vf) {
            let target = VKey::Farey(t);
            if x.vertices.contains(&target) {
                continue;
            }
            let mut f = identity_map(x);
            f.insert(*u, target);
            if map_defects(x, &f).is_empty() && map_is_injective(x, &f) {
                embeddings.push(f);
                if embeddings.len() == 3 {
                    break;
                }
            }
        }
        let map = embeddings[0].clone();
        return Ok(WitnessMap {
            domain: x.clone(),
            map,
            case: "pendant edge at a tessellation vertex re-aimed three ways".into(),
            certificate: WitnessCertificate::EmbeddingFamily {
                fixed_edge: sorted_pair(*u, anchor),
                embeddings,
            },
        });
    }

    // Case 2: every pendant vertex hangs off a fin; re-aim the length-two
    // fin path across its tessellation triangle, or at another vertex.
    if let Some(u) = pendant.first() {
        let VKey::Farey(a) = *u else {
            unreachable!("a pendant fin has a tessellation neighbor, which is case 1");
        };
        let VKey::Fin(e1, e2) = x.neighbors(u)[0] else {
            unreachable!("case 1 handled tessellation anchors");
        };
        let fin = VKey::Fin(e1, e2);
        let b = if e1 == a { e2 } else { e1 };
        let mut parallel = apexes(a, b)?;
        parallel.sort();
        for m in parallel {
            let mut f = identity_map(x);
            f.insert(fin, VKey::Farey(m));
            if map_defects(x, &f).is_empty() {
                return Ok(WitnessMap {
                    domain: x.clone(),
                    map: f,
                    case: "pendant fin path re-aimed across its tessellation triangle".into(),
                    certificate: WitnessCertificate::TypeSwap {
                        edge: sorted_pair(*u, fin),
                        image: sorted_pair(VKey::Farey(a), VKey::Farey(m)),
                    },
                });
            }
        }
        let mut embeddings = Vec::new();
        for t in neighbor_spiral(b) {
            if t == a {
                continue;
            }
            let target = VKey::Farey(t);
            let target_fin = VKey::fin(t, b)?;
            if x.vertices.contains(&target) || x.vertices.contains(&target_fin) {
                continue;
            }
            let mut f = identity_map(x);
            f.insert(*u, target);
            f.insert(fin, target_fin);
            if map_defects(x, &f).is_empty() && map_is_injective(x, &f) {
                embeddings.push(f);
                if embeddings.len() == 3 {
                    break;
                }
            }
        }
        let map = embeddings[0].clone();
        return Ok(WitnessMap {
            domain: x.clone(),
            map,
            case: "pendant fin path re-aimed at another tessellation vertex".into(),
            certificate: WitnessCertificate::EmbeddingFamily {
                fixed_edge: sorted_pair(*u, fin),
                embeddings,
            },
        });
    }

    // Case 3: no pendant vertices.  Work at an ear of the convex hull of
    // the tessellation part.
    let farey_part = x.farey_part();
    let hull = convex_hull_farey(&farey_part, g)?;
    if hull.triangles.is_empty() {
        // The tessellation part spans a single edge, so the subgraph is the
        // fin triangle over it.
        let (a, b) = hull.edges[0];
        let fin = VKey::fin(a, b)?;
        if !x.vertices.contains(&fin) {
            return Err(Error::ReducedCaseNote(
                "two tessellation vertices without their fin span a single edge".into(),
            ));
        }
        let mut ms = apexes(a, b)?;
        ms.sort();
        let mut f = identity_map(x);
        f.insert(fin, VKey::Farey(ms[0]));
        return Ok(WitnessMap {
            domain: x.clone(),
            map: f,
            case: "fin triangle re-aimed onto the tessellation triangle".into(),
            certificate: WitnessCertificate::TypeSwap {
                edge: sorted_pair(VKey::Farey(a), fin),
                image: sorted_pair(VKey::Farey(a), VKey::Farey(ms[0])),
            },
        });
    }
    let ear = hull.ears[0];
    let tri = hull
        .triangles
        .iter()
        .find(|t| t.contains(&ear))
        .expect("an ear lies in one triangle");
    let others: Vec<Fraction> = tri.iter().copied().filter(|&z| z != ear).collect();
    let (a, b) = (others[0], others[1]);
    // An ear's neighbors in the subgraph can only be its two hull neighbors
    // and the fins over those edges.
    for (xv, third) in [(a, b), (b, a)] {
        let fin = VKey::fin(ear, xv)?;
        if !x.has_edge(VKey::Farey(ear), fin) {
            continue;
        }
        let [m1, m2] = apexes(ear, xv)?;
        let outer = if m1 == third { m2 } else { m1 };
        let mut f = identity_map(x);
        f.insert(fin, VKey::Farey(outer));
        return Ok(WitnessMap {
            domain: x.clone(),
            map: f,
            case: "ear fin re-aimed to the outer apex".into(),
            certificate: WitnessCertificate::TypeSwap {
                edge: sorted_pair(VKey::Farey(ear), fin),
                image: sorted_pair(VKey::Farey(ear), VKey::Farey(outer)),
            },
        });
    }
    // Only tessellation edges at the ear: swap it with the fin over the
    // opposite side of its triangle.
    let base_fin = VKey::fin(a, b)?;
    let mut f = identity_map(x);
    f.insert(VKey::Farey(ear), base_fin);
    let case;
    if x.vertices.contains(&base_fin) {
        f.insert(base_fin, VKey::Farey(ear));
        case = "ear and base fin exchanged";
    } else {
        case = "ear swapped onto the base fin";
    }
    Ok(WitnessMap {
        domain: x.clone(),
        map: f,
        case: case.into(),
        certificate: WitnessCertificate::TypeSwap {
            edge: sorted_pair(VKey::Farey(ear), VKey::Farey(a)),
            image: sorted_pair(VKey::Farey(a), base_fin),
        },
    })
}

/// Draws a connected subgraph of the ball with at least two edges and at
/// most `max_vertices` vertices (`max_vertices >= 3`), by growing a random
/// edge set from a random starting edge.
pub fn sample_connected_subgraph<R: Rng>(
    g: &FareyFins,
    rng: &mut R,
    max_vertices: usize,
) -> Subgraph {
    let all_edges = g.edges();
    loop {
        let start = all_edges[rng.gen_range(0..all_edges.len())];
        let mut vertices: BTreeSet<VKey> = [start.0, start.1].into();
        let mut edges: BTreeSet<(VKey, VKey)> = [start].into();
        let target = rng.gen_range(3..=max_vertices);
        while vertices.len() < target {
            let candidates: Vec<(VKey, VKey)> = all_edges
                .iter()
                .filter(|(u, v)| {
                    !edges.contains(&(*u, *v)) && (vertices.contains(u) || vertices.contains(v))
                })
                .copied()
                .collect();
            if candidates.is_empty() {
                break;
            }
            let (u, v) = candidates[rng.gen_range(0..candidates.len())];
            vertices.insert(u);
            vertices.insert(v);
            edges.insert((u, v));
        }
        if edges.len() >= 2 {
            return Subgraph::new(vertices.into_iter().collect(), edges.into_iter().collect())
                .expect("sampled edges come from the ball");
        }
    }
}

/// One round of the seeded battery.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatteryRound {
    pub vertices: usize,
    pub edges: usize,
    pub case: String,
    pub verified: bool,
    pub reasons: Vec<String>,
}

/// Outcome of [`witness_battery`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BatteryReport {
    pub depth: usize,
    pub seed: u64,
    pub rounds: Vec<BatteryRound>,
    pub verified_count: usize,
}

/// Runs the seeded battery: samples `rounds` connected subgraphs of the
/// ball and takes each through witness construction and verification.
pub fn witness_battery(
    g: &FareyFins,
    seed: u64,
    rounds: usize,
    max_vertices: usize,
) -> Result<BatteryReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(rounds);
    for _ in 0..rounds {
        let x = sample_connected_subgraph(g, &mut rng, max_vertices);
        let w = find_nonrigidity_witness(&x, g)?;
        let check = verify_witness(&w, g);
        out.push(BatteryRound {
            vertices: x.vertices().len(),
            edges: x.edges().len(),
            case: w.case.clone(),
            verified: check.ok,
            reasons: check.reasons,
        });
    }
    let verified_count = out.iter().filter(|r| r.verified).count();
    Ok(BatteryReport {
        depth: g.depth(),
        seed,
        rounds: out,
        verified_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn frac(p: i64, q: i64) -> Fraction {
        Fraction::new(p, q).unwrap()
    }

    fn fv(p: i64, q: i64) -> VKey {
        VKey::Farey(frac(p, q))
    }

    fn fin(a: (i64, i64), b: (i64, i64)) -> VKey {
        VKey::fin(frac(a.0, a.1), frac(b.0, b.1)).unwrap()
    }

    fn subgraph(edges: &[(VKey, VKey)]) -> Subgraph {
        let mut vertices = BTreeSet::new();
        for (u, v) in edges {
            vertices.insert(*u);
            vertices.insert(*v);
        }
        Subgraph::new(vertices.into_iter().collect(), edges.to_vec()).unwrap()
    }

    #[test]
    fn fraction_normalization_and_order() {
        assert_eq!(frac(2, 4), frac(1, 2));
        assert_eq!(frac(1, -2), frac(-1, 2));
        assert_eq!(frac(-3, 0), Fraction::INFINITY);
        assert!(Fraction::new(0, 0).is_err());
        assert!(frac(-1, 1) < frac(0, 1));
        assert!(frac(1, 2) < frac(2, 3));
        assert!(frac(100, 1) < Fraction::INFINITY);
        assert_eq!(frac(1, 2).to_string(), "1/2");
        assert_eq!(Fraction::INFINITY.to_string(), "inf");
        assert_eq!(frac(0, 1).mediant(frac(1, 1)).unwrap(), frac(1, 2));
        assert_eq!(frac(0, 1).comediant(frac(1, 1)).unwrap(), Fraction::INFINITY);
        assert_eq!(frac(0, 1).comediant(Fraction::INFINITY).unwrap(), frac(-1, 1));
    }

    #[test]
    fn ball_counts_at_small_depths() {
        let g0 = build_farey_fins(0);
        assert_eq!(g0.farey_vertex_count(), 3);
        assert_eq!(g0.farey_edge_count(), 3);
        assert_eq!(g0.vertex_count(), 6);
        assert_eq!(g0.edge_count(), 9);
        let g1 = build_farey_fins(1);
        assert_eq!(g1.farey_vertex_count(), 6);
        assert_eq!(g1.farey_edge_count(), 9);
        assert_eq!(g1.vertex_count(), 15);
        assert_eq!(g1.edge_count(), 27);
        assert!(g1.contains(&fv(1, 2)));
        assert!(g1.contains(&fv(2, 1)));
        assert!(g1.contains(&fv(-1, 1)));
        let g2 = build_farey_fins(2);
        assert_eq!(g2.farey_vertex_count(), 12);
        assert_eq!(g2.farey_edge_count(), 21);
        // Each level doubles the tessellation vertices: every new edge has
        // exactly one apex that is not yet present.
        let g6 = build_farey_fins(6);
        assert_eq!(g6.farey_vertex_count(), 192);
        assert_eq!(g6.farey_edge_count(), 381);
        assert_eq!(g6.vertex_count(), 573);
        assert_eq!(g6.edge_count(), 1143);
    }

    #[test]
    fn fins_have_valence_two_and_edges_are_unimodular() {
        let g = build_farey_fins(3);
        for v in g.vertices() {
            match v {
                VKey::Fin(..) => {
                    assert_eq!(g.neighbors(&v).len(), 2);
                    assert!(!g.has_unbounded_valence(&v));
                }
                VKey::Farey(_) => assert!(g.has_unbounded_valence(&v)),
            }
        }
        for (u, v) in g.edges() {
            assert!(is_complex_edge(u, v));
            if let (VKey::Farey(a), VKey::Farey(b)) = (u, v) {
                assert!(unimodular(a, b));
            }
        }
    }

    #[test]
    fn reflection_preserves_edge_types() {
        // x -> 1 - x extends to an automorphism of the complex; wherever
        // both images exist, edge types are preserved.
        let g = build_farey_fins(3);
        let reflect = |x: Fraction| {
            if x.is_infinite() {
                Fraction::INFINITY
            } else {
                Fraction::new(x.denominator() - x.numerator(), x.denominator()).unwrap()
            }
        };
        for (a, b) in &g.farey_edges {
            assert!(unimodular(reflect(*a), reflect(*b)));
        }
    }

    #[test]
    fn hull_base_triangle_and_single_triangle() {
        let g = build_farey_fins(2);
        let base = convex_hull_farey(&[frac(0, 1), frac(1, 1), Fraction::INFINITY], &g).unwrap();
        assert_eq!(
            base.triangles,
            vec![[frac(0, 1), frac(1, 1), Fraction::INFINITY]]
        );
        assert_eq!(base.ears.len(), 3);
        let single = convex_hull_farey(&[frac(0, 1), frac(1, 2), frac(1, 1)], &g).unwrap();
        assert_eq!(single.triangles, vec![[frac(0, 1), frac(1, 2), frac(1, 1)]]);
        assert_eq!(single.vertices, vec![frac(0, 1), frac(1, 2), frac(1, 1)]);
    }

    #[test]
    fn hull_completes_with_interior_boundary_vertices() {
        let g = build_farey_fins(3);
        let hull = convex_hull_farey(&[frac(0, 1), frac(1, 3), frac(1, 1)], &g).unwrap();
        // The smallest subcomplex hull picks up 1/2 on the boundary.
        assert_eq!(
            hull.vertices,
            vec![frac(0, 1), frac(1, 3), frac(1, 2), frac(1, 1)]
        );
        assert_eq!(hull.triangles.len(), 2);
        assert_eq!(hull.ears, vec![frac(1, 3), frac(1, 1)]);
        // Two non-adjacent vertices span a fan of triangles.
        let fan = convex_hull_farey(&[frac(0, 1), frac(3, 1)], &g).unwrap();
        assert_eq!(fan.triangles.len(), 3);
        assert_eq!(fan.ears, vec![frac(0, 1), frac(3, 1)]);
        // Two adjacent vertices degenerate to their edge.
        let edge = convex_hull_farey(&[frac(0, 1), frac(1, 1)], &g).unwrap();
        assert!(edge.triangles.is_empty());
        assert_eq!(edge.edges, vec![(frac(0, 1), frac(1, 1))]);
        assert_eq!(
            convex_hull_farey(&[frac(0, 1)], &g),
            Err(Error::DomainError)
        );
        assert_eq!(
            convex_hull_farey(&[frac(0, 1), frac(355, 113)], &g),
            Err(Error::BallTooSmall)
        );
    }

    #[test]
    fn hulls_are_triangulated_polygons_with_ears_in_the_input() {
        let g = build_farey_fins(5);
        let farey: Vec<Fraction> = g.farey_vertices.iter().copied().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..30 {
            let size = rng.gen_range(2..=6);
            let mut v: Vec<Fraction> = (0..size)
                .map(|_| farey[rng.gen_range(0..farey.len())])
                .collect();
            v.sort();
            v.dedup();
            if v.len() < 2 {
                continue;
            }
            let hull = convex_hull_farey(&v, &g).unwrap();
            if hull.triangles.is_empty() {
                continue;
            }
            // A triangulated polygon with all vertices on the boundary.
            assert_eq!(hull.triangles.len(), hull.vertices.len() - 2);
            assert_eq!(hull.edges.len(), 2 * hull.vertices.len() - 3);
            assert!(hull.ears.len() >= 2);
            for ear in &hull.ears {
                assert!(v.contains(ear), "ear {ear} outside the input set");
            }
            for p in &v {
                assert!(hull.vertices.contains(p));
            }
        }
    }

    #[test]
    fn witness_for_a_pendant_edge_is_a_family() {
        // A star of three tessellation edges around 0/1.
        let g = build_farey_fins(2);
        let x = subgraph(&[
            (fv(0, 1), fv(1, 1)),
            (fv(0, 1), VKey::Farey(Fraction::INFINITY)),
            (fv(0, 1), fv(-1, 1)),
        ]);
        let w = find_nonrigidity_witness(&x, &g).unwrap();
        assert!(w.case.contains("pendant edge"));
        match &w.certificate {
            WitnessCertificate::EmbeddingFamily { embeddings, .. } => {
                assert_eq!(embeddings.len(), 3)
            }
            other => panic!("expected a family, got {other:?}"),
        }
        assert!(verify_witness(&w, &g).ok);
    }

    #[test]
    fn witness_for_a_fin_path_lands_on_a_tessellation_path() {
        let g = build_farey_fins(2);
        let f01 = fin((0, 1), (1, 1));
        let x = subgraph(&[(fv(0, 1), f01), (f01, fv(1, 1))]);
        let w = find_nonrigidity_witness(&x, &g).unwrap();
        assert!(w.case.contains("across its tessellation triangle"));
        assert_eq!(w.map[&f01], fv(1, 2));
        match &w.certificate {
            WitnessCertificate::TypeSwap { image, .. } => {
                assert_eq!(*image, (fv(0, 1), fv(1, 2)));
            }
            other => panic!("expected a type swap, got {other:?}"),
        }
        assert!(verify_witness(&w, &g).ok);
    }

    #[test]
    fn witness_for_the_fin_triangle() {
        let g = build_farey_fins(2);
        let f01 = fin((0, 1), (1, 1));
        let x = subgraph(&[
            (fv(0, 1), fv(1, 1)),
            (fv(0, 1), f01),
            (f01, fv(1, 1)),
        ]);
        let w = find_nonrigidity_witness(&x, &g).unwrap();
        assert!(w.case.contains("fin triangle"));
        assert_eq!(w.map[&f01], fv(1, 2));
        assert!(verify_witness(&w, &g).ok);
    }

    #[test]
    fn witness_for_the_bare_triangle_swaps_an_ear() {
        let g = build_farey_fins(2);
        let x = subgraph(&[
            (fv(0, 1), fv(1, 1)),
            (fv(1, 1), VKey::Farey(Fraction::INFINITY)),
            (fv(0, 1), VKey::Farey(Fraction::INFINITY)),
        ]);
        let w = find_nonrigidity_witness(&x, &g).unwrap();
        assert!(w.case.contains("ear swapped onto the base fin"));
        let expected = VKey::fin(frac(1, 1), Fraction::INFINITY).unwrap();
        assert_eq!(w.map[&fv(0, 1)], expected);
        assert!(verify_witness(&w, &g).ok);
    }

    #[test]
    fn witness_for_the_loaded_triangle_exchanges_ear_and_fin() {
        let g = build_farey_fins(2);
        let inf = VKey::Farey(Fraction::INFINITY);
        let f1i = VKey::fin(frac(1, 1), Fraction::INFINITY).unwrap();
        let x = subgraph(&[
            (fv(0, 1), fv(1, 1)),
            (fv(1, 1), inf),
            (fv(0, 1), inf),
            (fv(1, 1), f1i),
            (inf, f1i),
        ]);
        let w = find_nonrigidity_witness(&x, &g).unwrap();
        assert!(w.case.contains("exchanged"));
        assert_eq!(w.map[&fv(0, 1)], f1i);
        assert_eq!(w.map[&f1i], fv(0, 1));
        assert!(verify_witness(&w, &g).ok);
    }

    #[test]
    fn witness_when_the_ear_carries_a_fin() {
        let g = build_farey_fins(4);
        let f013 = fin((0, 1), (1, 3));
        let f01 = fin((0, 1), (1, 1));
        let x = subgraph(&[
            (fv(0, 1), fv(1, 3)),
            (fv(0, 1), fv(1, 1)),
            (fv(0, 1), f013),
            (fv(1, 3), f013),
            (fv(0, 1), f01),
            (fv(1, 1), f01),
        ]);
        let w = find_nonrigidity_witness(&x, &g).unwrap();
        assert!(w.case.contains("outer apex"));
        assert_eq!(w.map[&f013], fv(1, 4));
        assert!(verify_witness(&w, &g).ok);
    }

    #[test]
    fn reduced_cases_are_reported() {
        let g = build_farey_fins(2);
        let single = subgraph(&[(fv(0, 1), fv(1, 1))]);
        assert!(matches!(
            find_nonrigidity_witness(&single, &g),
            Err(Error::ReducedCaseNote(_))
        ));
        let disconnected = Subgraph::new(
            vec![fv(0, 1), fv(1, 1), fv(2, 1), VKey::Farey(Fraction::INFINITY)],
            vec![
                (fv(0, 1), fv(1, 1)),
                (fv(2, 1), VKey::Farey(Fraction::INFINITY)),
            ],
        )
        .unwrap();
        assert!(matches!(
            find_nonrigidity_witness(&disconnected, &g),
            Err(Error::ReducedCaseNote(_))
        ));
        let deep = subgraph(&[
            (fv(355, 113), fin((355, 113), (352, 112))),
            (fv(352, 112), fin((355, 113), (352, 112))),
        ]);
        assert_eq!(
            find_nonrigidity_witness(&deep, &g),
            Err(Error::BallTooSmall)
        );
    }

    #[test]
    fn verification_rejects_broken_certificates() {
        let g = build_farey_fins(2);
        let f01 = fin((0, 1), (1, 1));
        let x = subgraph(&[(fv(0, 1), f01), (f01, fv(1, 1))]);
        // Identity map claiming a type swap.
        let identity = WitnessMap {
            domain: x.clone(),
            map: identity_map(&x),
            case: "fabricated".into(),
            certificate: WitnessCertificate::TypeSwap {
                edge: (fv(0, 1), f01),
                image: (fv(0, 1), f01),
            },
        };
        let check = verify_witness(&identity, &g);
        assert!(!check.ok);
        assert!(check.reasons.iter().any(|r| r.contains("no edge type")));
        // A family with only two members.
        let good = find_nonrigidity_witness(&x, &g).unwrap();
        let mut f1 = identity_map(&x);
        f1.insert(f01, fv(1, 2));
        let mut f2 = identity_map(&x);
        f2.insert(f01, fv(-1, 1));
        let small_family = WitnessMap {
            domain: x.clone(),
            map: f1.clone(),
            case: "fabricated".into(),
            certificate: WitnessCertificate::EmbeddingFamily {
                fixed_edge: (fv(0, 1), f01),
                embeddings: vec![f1, f2],
            },
        };
        let check = verify_witness(&small_family, &g);
        assert!(!check.ok);
        assert!(check.reasons.iter().any(|r| r.contains("at least three")));
        assert!(verify_witness(&good, &g).ok);
    }

    #[test]
    fn witness_json_round_trip() {
        let g = build_farey_fins(2);
        let f01 = fin((0, 1), (1, 1));
        let x = subgraph(&[(fv(0, 1), f01), (f01, fv(1, 1))]);
        let w = find_nonrigidity_witness(&x, &g).unwrap();
        let json = serde_json::to_string(&w).unwrap();
        let back: WitnessMap = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
        assert!(json.contains("type_swap"));
        // Subgraphs serialize fractions as pairs and fins as edge
        // references.
        let sub_json = serde_json::to_string(&x).unwrap();
        assert!(sub_json.contains("{\"farey\":[0,1]}"));
        assert!(sub_json.contains("{\"fin\":[[0,1],[1,1]]}"));
        let bad = "{\"vertices\":[{\"fin\":[[0,1],[2,1]]}],\"edges\":[]}";
        assert!(serde_json::from_str::<Subgraph>(bad).is_err());
    }

    #[test]
    fn dot_rendering_mentions_both_vertex_kinds() {
        let g = build_farey_fins(0);
        let dot = g.to_dot();
        assert!(dot.starts_with("graph farey_fins {"));
        assert!(dot.contains("\"0/1\" -- \"1/1\";"));
        assert!(dot.contains("\"fin(0/1,1/1)\" [shape=point];"));
        assert!(dot.contains("[style=dashed]"));
    }

    #[test]
    fn seeded_battery_of_fifty_subgraphs() {
        let g = build_farey_fins(6);
        let report = witness_battery(&g, 0, 50, 15).unwrap();
        assert_eq!(report.rounds.len(), 50);
        assert_eq!(report.verified_count, 50, "{:#?}", report.rounds);
        for round in &report.rounds {
            assert!(round.vertices <= 15);
            assert!(round.edges >= 2);
        }
        // The samples exercise more than one branch of the decision tree.
        let cases: BTreeSet<&str> = report.rounds.iter().map(|r| r.case.as_str()).collect();
        assert!(cases.len() >= 2, "{cases:?}");
    }
}
