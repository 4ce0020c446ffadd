//! Finite-graph automorphisms and locally injective map enumeration.
//!
//! Desk-scale engine: colour refinement plus backtracking, complete and
//! deterministic on the graphs this crate produces (a few dozen vertices).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default vertex-count bound for [`automorphism_group`].
pub const DEFAULT_AUT_BOUND: usize = 64;

/// Default domain-size bound for [`enumerate_locally_injective_maps`].
pub const DEFAULT_MAP_DOMAIN_BOUND: usize = 12;

/// A simple undirected graph with optional vertex colours, adjacency stored
/// as bitset rows.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "FiniteGraphJson", into = "FiniteGraphJson")]
pub struct FiniteGraph {
    n: usize,
    words: usize,
    adj: Vec<u64>,
    colors: Option<Vec<u32>>,
}

#[derive(Serialize, Deserialize)]
struct FiniteGraphJson {
    n: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    colors: Option<Vec<u32>>,
}

impl From<FiniteGraph> for FiniteGraphJson {
    fn from(g: FiniteGraph) -> FiniteGraphJson {
        FiniteGraphJson {
            n: g.n,
            edges: g.edges(),
            colors: g.colors.clone(),
        }
    }
}

impl TryFrom<FiniteGraphJson> for FiniteGraph {
    type Error = Error;

    fn try_from(json: FiniteGraphJson) -> Result<FiniteGraph> {
        let mut g = FiniteGraph::new(json.n);
        for (u, v) in json.edges {
            if u >= json.n || v >= json.n {
                return Err(Error::Json(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::Json(format!("loop at vertex {u} not allowed")));
            }
            g.add_edge(u, v);
        }
        if let Some(colors) = json.colors {
            if colors.len() != json.n {
                return Err(Error::Json("colour list length must equal n".into()));
            }
            g.colors = Some(colors);
        }
        Ok(g)
    }
}

impl std::fmt::Debug for FiniteGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FiniteGraph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

impl FiniteGraph {
    pub fn new(n: usize) -> FiniteGraph {
        let words = n.div_ceil(64).max(1);
        FiniteGraph {
            n,
            words,
            adj: vec![0; n * words],
            colors: None,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Adds an undirected edge.  Loops are not representable and indicate a
    /// caller bug.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n, "bad edge ({u},{v})");
        self.adj[u * self.words + v / 64] |= 1 << (v % 64);
        self.adj[v * self.words + u / 64] |= 1 << (u % 64);
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u * self.words + v / 64] & (1 << (v % 64)) != 0
    }

    pub fn degree(&self, u: usize) -> usize {
        self.row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    fn row(&self, u: usize) -> &[u64] {
        &self.adj[u * self.words..(u + 1) * self.words]
    }

    pub fn neighbors(&self, u: usize) -> Vec<usize> {
        (0..self.n).filter(|&v| self.adjacent(u, v)).collect()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if self.adjacent(u, v) {
                    out.push((u, v));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.edges().len()
    }

    pub fn set_colors(&mut self, colors: Vec<u32>) {
        assert_eq!(colors.len(), self.n);
        self.colors = Some(colors);
    }

    pub fn colors(&self) -> Option<&[u32]> {
        self.colors.as_deref()
    }

    /// Stable colour refinement (1-dimensional Weisfeiler–Leman): vertices
    /// end up in the same class only if no degree/colour statistic separates
    /// them.
    fn refined_colors(&self) -> Vec<u32> {
        let mut colors: Vec<u32> = match &self.colors {
            Some(c) => c.clone(),
            None => vec![0; self.n],
        };
        loop {
            let mut signatures: Vec<(u32, Vec<u32>)> = Vec::with_capacity(self.n);
            for u in 0..self.n {
                let mut nbr: Vec<u32> = self.neighbors(u).iter().map(|&v| colors[v]).collect();
                nbr.sort_unstable();
                signatures.push((colors[u], nbr));
            }
            let mut sorted: Vec<&(u32, Vec<u32>)> = signatures.iter().collect();
            sorted.sort();
            sorted.dedup();
            let next: Vec<u32> = signatures
                .iter()
                .map(|sig| sorted.binary_search(&sig).unwrap() as u32)
                .collect();
            if next == colors {
                return colors;
            }
            colors = next;
        }
    }
}

/// The full automorphism group of a small graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AutGroup {
    /// A strong generating set (possibly redundant), as vertex permutations.
    pub generators: Vec<Vec<usize>>,
    /// Exact group order.
    pub order: u64,
}

/// Computes the automorphism group with the default vertex bound.
pub fn automorphism_group(g: &FiniteGraph) -> Result<AutGroup> {
    automorphism_group_with_bound(g, DEFAULT_AUT_BOUND)
}

/// Computes the automorphism group of `g` by complete backtracking over the
/// colour-refined vertex classes.  Colour-preserving when colours are
/// present.
pub fn automorphism_group_with_bound(g: &FiniteGraph, bound: usize) -> Result<AutGroup> {
    if g.n > bound {
        return Err(Error::TooLarge(g.n, bound));
    }
    let colors = g.refined_colors();
    let mut all: Vec<Vec<usize>> = Vec::new();
    let mut perm = vec![usize::MAX; g.n];
    let mut used = vec![false; g.n];
    enumerate_automorphisms(g, &colors, 0, &mut perm, &mut used, &mut all);

    // Cross-check the order through the stabiliser chain of the enumerated
    // list; a mismatch would mean the backtracking lost solutions.
    let mut chain_order = 1u64;
    let mut level: Vec<&Vec<usize>> = all.iter().collect();
    let mut generators: Vec<Vec<usize>> = Vec::new();
    for v in 0..g.n {
        let mut images: Vec<usize> = level.iter().map(|p| p[v]).collect();
        images.sort_unstable();
        images.dedup();
        chain_order *= images.len() as u64;
        for &img in &images {
            if img != v {
                if let Some(rep) = level.iter().find(|p| p[v] == img) {
                    if !generators.contains(*rep) {
                        generators.push((*rep).clone());
                    }
                }
            }
        }
        level.retain(|p| p[v] == v);
    }
    debug_assert_eq!(chain_order, all.len() as u64);
    if generators.is_empty() {
        generators.push((0..g.n).collect());
    }
    Ok(AutGroup {
        generators,
        order: all.len() as u64,
    })
}

fn enumerate_automorphisms(
    g: &FiniteGraph,
    colors: &[u32],
    next: usize,
    perm: &mut Vec<usize>,
    used: &mut Vec<bool>,
    out: &mut Vec<Vec<usize>>,
) {
    if next == g.n {
        out.push(perm.clone());
        return;
    }
    'candidate: for img in 0..g.n {
        if used[img] || colors[img] != colors[next] {
            continue;
        }
        for prev in 0..next {
            if g.adjacent(next, prev) != g.adjacent(img, perm[prev]) {
                continue 'candidate;
            }
        }
        perm[next] = img;
        used[img] = true;
        enumerate_automorphisms(g, colors, next + 1, perm, used, out);
        used[img] = false;
        perm[next] = usize::MAX;
    }
}

/// The Kneser graph K(s,2): vertices are the 2-element subsets of `[s]` in
/// lexicographic order, edges join disjoint subsets.
pub fn kneser_graph(s: u8) -> FiniteGraph {
    let pairs = label_pairs(s);
    let mut g = FiniteGraph::new(pairs.len());
    for (i, &(a, b)) in pairs.iter().enumerate() {
        for (j, &(c, d)) in pairs.iter().enumerate().skip(i + 1) {
            if a != c && a != d && b != c && b != d {
                g.add_edge(i, j);
            }
        }
    }
    g
}

/// The 2-element subsets of `[s]` in lexicographic order, matching the
/// vertex numbering of [`kneser_graph`].
pub fn label_pairs(s: u8) -> Vec<(u8, u8)> {
    let mut pairs = Vec::new();
    for a in 1..=s {
        for b in (a + 1)..=s {
            pairs.push((a, b));
        }
    }
    pairs
}

/// Checks that the action of the symmetric group on 2-element subsets is
/// exactly the automorphism group of K(s,2): the induced permutations
/// preserve adjacency and the group orders agree (`s!`).  This is the
/// classical Whitney/Erdős–Ko–Rado regime, hence the `s ≥ 5` bound.
pub fn sym_action_matches(s: u8) -> Result<bool> {
    if s < 5 {
        return Err(Error::BelowWhitneyRegime(s));
    }
    let g = kneser_graph(s);
    let pairs = label_pairs(s);
    let index_of = |a: u8, b: u8| -> usize {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        pairs.iter().position(|&p| p == (a, b)).unwrap()
    };
    // A transposition and an s-cycle generate the symmetric group; if both
    // act as graph automorphisms, the whole action does.
    let transposition = |l: u8| -> u8 {
        match l {
            1 => 2,
            2 => 1,
            other => other,
        }
    };
    let cycle = |l: u8| -> u8 { if l == s { 1 } else { l + 1 } };
    for induced in [
        pairs
            .iter()
            .map(|&(a, b)| index_of(transposition(a), transposition(b)))
            .collect::<Vec<_>>(),
        pairs
            .iter()
            .map(|&(a, b)| index_of(cycle(a), cycle(b)))
            .collect::<Vec<_>>(),
    ] {
        for (u, v) in g.edges() {
            if !g.adjacent(induced[u], induced[v]) {
                return Ok(false);
            }
        }
    }
    let order = automorphism_group(&g)?.order;
    Ok(order == factorial(s))
}

fn factorial(s: u8) -> u64 {
    (1..=s as u64).product()
}

/// Result of a capped map enumeration.
#[derive(Clone, Debug, Serialize)]
pub struct MapsResult {
    /// Vertex maps in deterministic (lexicographic) order.
    pub maps: Vec<Vec<usize>>,
    /// False when the search budget ran out before the enumeration finished.
    pub complete: bool,
}

/// Enumerates all simplicial, star-injective maps from `x` into `g`.
///
/// A map is star-injective when it is injective on the closed star of every
/// vertex; together with edge preservation this is the local-injectivity
/// notion used throughout the crate.  `budget` caps the number of search
/// nodes; on exhaustion the result is marked incomplete rather than failing.
pub fn enumerate_locally_injective_maps(
    x: &FiniteGraph,
    g: &FiniteGraph,
    budget: u64,
) -> Result<MapsResult> {
    if x.n > DEFAULT_MAP_DOMAIN_BOUND {
        return Err(Error::TooLarge(x.n, DEFAULT_MAP_DOMAIN_BOUND));
    }
    // Two domain vertices must have distinct images when adjacent or sharing
    // a neighbour (they then lie in a common closed star).
    let mut must_differ = vec![vec![false; x.n]; x.n];
    for u in 0..x.n {
        for v in 0..x.n {
            if u != v && x.adjacent(u, v) {
                must_differ[u][v] = true;
            }
        }
    }
    for w in 0..x.n {
        let nbrs = x.neighbors(w);
        for (i, &u) in nbrs.iter().enumerate() {
            for &v in nbrs.iter().skip(i + 1) {
                must_differ[u][v] = true;
                must_differ[v][u] = true;
            }
        }
    }
    let mut result = MapsResult {
        maps: Vec::new(),
        complete: true,
    };
    let mut map = vec![usize::MAX; x.n];
    let mut nodes = 0u64;
    search_maps(x, g, &must_differ, 0, &mut map, budget, &mut nodes, &mut result);
    Ok(result)
}

#[allow(clippy::too_many_arguments)]
fn search_maps(
    x: &FiniteGraph,
    g: &FiniteGraph,
    must_differ: &[Vec<bool>],
    next: usize,
    map: &mut Vec<usize>,
    budget: u64,
    nodes: &mut u64,
    out: &mut MapsResult,
) {
    if !out.complete {
        return;
    }
    if next == x.n {
        out.maps.push(map.clone());
        return;
    }
    'candidate: for img in 0..g.n {
        *nodes += 1;
        if *nodes > budget {
            out.complete = false;
            return;
        }
        for prev in 0..next {
            if x.adjacent(next, prev) && !g.adjacent(img, map[prev]) {
                continue 'candidate;
            }
            if must_differ[next][prev] && map[prev] == img {
                continue 'candidate;
            }
        }
        if let (Some(xc), Some(gc)) = (&x.colors, &g.colors) {
            if xc[next] != gc[img] {
                continue 'candidate;
            }
        }
        map[next] = img;
        search_maps(x, g, must_differ, next + 1, map, budget, nodes, out);
        map[next] = usize::MAX;
    }
}
