//! The sphere complex of a punctured 3-sphere with `s` boundary components:
//! vertices are essential splits, edges are nested pairs, pants
//! decompositions are maximal nested families, and their dual graphs are
//! trees.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::autom::FiniteGraph;
use crate::error::{Error, Result};
use crate::splits::{self, Label, LabelSet, Split};

/// The full sphere complex of the `s`-punctured 3-sphere, as a graph on
/// essential splits with nesting as adjacency.
#[derive(Clone, Debug)]
pub struct PuncturedComplex {
    s: u8,
    vertices: Vec<Split>,
}

/// Builds the complex.  Essential splits need both pieces of size two, so
/// the smallest meaningful ground size is 4.
pub fn build_complex(s: u8) -> Result<PuncturedComplex> {
    if s < 4 {
        return Err(Error::NoEssentialSpheres(s));
    }
    Ok(PuncturedComplex {
        s,
        vertices: splits::essential_splits(s),
    })
}

impl PuncturedComplex {
    pub fn ground_size(&self) -> u8 {
        self.s
    }

    /// Vertices in canonical order.
    pub fn vertices(&self) -> &[Split] {
        &self.vertices
    }

    pub fn contains(&self, u: &Split) -> bool {
        u.ground_size() == self.s && u.is_essential()
    }

    /// Edges are nested (equivalently: disjointly realisable) pairs.
    pub fn are_adjacent(&self, u: &Split, v: &Split) -> Result<bool> {
        Ok(u != v && splits::is_nested(u, v)?)
    }

    /// The 1-skeleton as a plain graph, vertex order matching `vertices()`.
    pub fn skeleton(&self) -> FiniteGraph {
        let mut g = FiniteGraph::new(self.vertices.len());
        for i in 0..self.vertices.len() {
            for j in (i + 1)..self.vertices.len() {
                if splits::is_nested(&self.vertices[i], &self.vertices[j]).unwrap() {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// All pants decompositions: maximal families of pairwise nested
    /// essential splits.  Each has exactly `s − 3` members and the counts
    /// follow the double factorial `(2s−5)!!`.
    pub fn enumerate_pants(&self) -> Vec<TreePants> {
        let target = self.s as usize - 3;
        let mut out = Vec::new();
        let mut chosen: Vec<Split> = Vec::new();
        self.extend_pants(0, target, &mut chosen, &mut out);
        out
    }

    fn extend_pants(
        &self,
        from: usize,
        target: usize,
        chosen: &mut Vec<Split>,
        out: &mut Vec<TreePants>,
    ) {
        if chosen.len() == target {
            out.push(TreePants::new(self.s, chosen).expect("nested family of full size"));
            return;
        }
        if self.vertices.len() - from < target - chosen.len() {
            return;
        }
        for idx in from..self.vertices.len() {
            let cand = self.vertices[idx];
            if chosen
                .iter()
                .all(|c| splits::is_nested(c, &cand).unwrap())
            {
                chosen.push(cand);
                self.extend_pants(idx + 1, target, chosen, out);
                chosen.pop();
            }
        }
    }

    /// The induced subgraph on size-2 splits, which is the Kneser graph
    /// K(s,2).  Below `s = 5` the Whitney reconstruction argument giving its
    /// automorphisms does not apply, so smaller ground sets are rejected.
    /// Returns the graph and the vertex order used.
    pub fn kneser_subgraph(&self) -> Result<(FiniteGraph, Vec<Split>)> {
        if self.s < 5 {
            return Err(Error::BelowWhitneyRegime(self.s));
        }
        let vertices: Vec<Split> = crate::autom::label_pairs(self.s)
            .into_iter()
            .map(|(a, b)| Split::new(self.s, &[a, b]).unwrap())
            .collect();
        Ok((crate::autom::kneser_graph(self.s), vertices))
    }

    /// The set of size-2 splits disjoint from `u`.  For splits of size at
    /// least 3 this set determines `u` among all vertices (checked by
    /// [`PuncturedComplex::verify_unique`]).
    pub fn reconstruct_from_size2(&self, u: &Split) -> Result<BTreeSet<Split>> {
        self.check_reconstruct_input(u)?;
        Ok(self.size2_neighbors(u))
    }

    fn check_reconstruct_input(&self, u: &Split) -> Result<()> {
        if u.ground_size() != self.s {
            return Err(Error::GroundMismatch(u.ground_size(), self.s));
        }
        if !u.is_essential() {
            return Err(Error::InvalidSplit(format!("{u} is not essential")));
        }
        if splits::size(u) < 3 {
            return Err(Error::SizeTwoInput);
        }
        Ok(())
    }

    fn size2_neighbors(&self, u: &Split) -> BTreeSet<Split> {
        self.vertices
            .iter()
            .filter(|v| splits::size(v) == 2 && *v != u && splits::is_nested(u, v).unwrap())
            .copied()
            .collect()
    }

    /// Confirms that no other vertex of the complex has the same set of
    /// size-2 neighbours as `u`.
    pub fn verify_unique(&self, u: &Split) -> Result<bool> {
        self.check_reconstruct_input(u)?;
        let target = self.size2_neighbors(u);
        for v in &self.vertices {
            if v != u && self.size2_neighbors(v) == target {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// One boundary item of a complementary region of a nested split family:
/// either a boundary label itself or one side of a split in the family.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum TreeItem {
    /// A ground label lying in this region.
    Direct(Label),
    /// The cuff of split `k` as seen from inside its clade.
    Inner(usize),
    /// The cuff of split `k` as seen from the parent region.
    Outer(usize),
}

/// A complementary region of the family: a 3-holed piece of the dual tree.
#[derive(Clone, Debug)]
pub struct Region {
    /// The side of the defining split away from label 1 (`None` for the
    /// region containing label 1's outermost part).
    pub clade: Option<LabelSet>,
    /// Boundary items; for a pants decomposition there are exactly three.
    pub items: Vec<TreeItem>,
}

/// The complementary regions of a pairwise-nested family of essential
/// splits, organised as a laminar forest plus a root region.
#[derive(Clone, Debug)]
pub struct RegionForest {
    s: u8,
    /// The clade (side avoiding label 1) of each input split.
    pub clades: Vec<LabelSet>,
    /// Region 0 is the root; region `k+1` corresponds to `clades[k]`.
    pub regions: Vec<Region>,
    /// For each split: (region owning its outer cuff, region inside it).
    pub split_regions: Vec<(usize, usize)>,
}

impl RegionForest {
    /// Builds the region decomposition of `[s]` cut along the given nested
    /// splits.  The splits must be distinct and pairwise nested.
    pub fn new(s: u8, family: &[Split]) -> Result<RegionForest> {
        let clades: Vec<LabelSet> = family
            .iter()
            .map(|z| {
                if z.side().contains(1) {
                    z.coside()
                } else {
                    z.side()
                }
            })
            .collect();
        // parent[k] = index of the minimal clade strictly containing k.
        let mut parent: Vec<Option<usize>> = vec![None; family.len()];
        for k in 0..family.len() {
            for m in 0..family.len() {
                if m == k {
                    continue;
                }
                if clades[k].is_subset(clades[m]) && clades[k] != clades[m] {
                    match parent[k] {
                        Some(p) if clades[p].is_subset(clades[m]) => {}
                        _ => parent[k] = Some(m),
                    }
                }
            }
        }
        let mut regions = vec![
            Region {
                clade: None,
                items: Vec::new(),
            };
            family.len() + 1
        ];
        for (k, &clade) in clades.iter().enumerate() {
            regions[k + 1].clade = Some(clade);
        }
        // Direct labels: those in the clade but in no child clade.
        let mut covered = vec![LabelSet::EMPTY; family.len() + 1];
        for (k, &p) in parent.iter().enumerate() {
            let region = p.map_or(0, |m| m + 1);
            covered[region] = covered[region].union(clades[k]);
            regions[region].items.push(TreeItem::Outer(k));
            regions[k + 1].items.push(TreeItem::Inner(k));
        }
        for region in 0..regions.len() {
            let inside = match regions[region].clade {
                Some(c) => c,
                None => LabelSet::full(s),
            };
            for label in inside.difference(covered[region]).iter() {
                regions[region].items.push(TreeItem::Direct(label));
            }
            regions[region].items.sort();
        }
        let split_regions: Vec<(usize, usize)> = (0..family.len())
            .map(|k| (parent[k].map_or(0, |m| m + 1), k + 1))
            .collect();
        Ok(RegionForest {
            s,
            clades,
            regions,
            split_regions,
        })
    }

    /// The labels lying behind an item, viewed from inside its region.
    /// Over one region the far sets of its items partition `[s]`.
    pub fn far_set(&self, item: TreeItem) -> LabelSet {
        match item {
            TreeItem::Direct(l) => LabelSet::singleton(l),
            TreeItem::Inner(k) => self.clades[k].complement_in(self.s),
            TreeItem::Outer(k) => self.clades[k],
        }
    }
}

/// A pants decomposition of the punctured 3-sphere: `s − 3` pairwise nested
/// essential splits.  The dual graph is a tree with trivalent regions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "TreePantsJson", into = "TreePantsJson")]
pub struct TreePants {
    s: u8,
    splits: Vec<Split>,
}

#[derive(Serialize, Deserialize)]
struct TreePantsJson {
    s: u8,
    splits: Vec<Split>,
}

impl From<TreePants> for TreePantsJson {
    fn from(p: TreePants) -> TreePantsJson {
        TreePantsJson {
            s: p.s,
            splits: p.splits,
        }
    }
}

impl TryFrom<TreePantsJson> for TreePants {
    type Error = Error;

    fn try_from(json: TreePantsJson) -> Result<TreePants> {
        TreePants::new(json.s, &json.splits)
    }
}

impl std::fmt::Debug for TreePants {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "TreePants{:?}", self.splits)
    }
}

impl TreePants {
    pub fn new(s: u8, family: &[Split]) -> Result<TreePants> {
        let splits: BTreeSet<Split> = family.iter().copied().collect();
        if s < 4 {
            return Err(Error::NoEssentialSpheres(s));
        }
        let expected = s as usize - 3;
        if splits.len() != expected {
            return Err(Error::NotMaximal {
                expected,
                got: splits.len(),
            });
        }
        let splits: Vec<Split> = splits.into_iter().collect();
        for u in &splits {
            if u.ground_size() != s {
                return Err(Error::GroundMismatch(u.ground_size(), s));
            }
            if !u.is_essential() {
                return Err(Error::InvalidSplit(format!("{u} is not essential")));
            }
        }
        for (i, u) in splits.iter().enumerate() {
            for v in splits.iter().skip(i + 1) {
                if !splits::is_nested(u, v)? {
                    return Err(Error::NotDisjoint(u.to_string(), v.to_string()));
                }
            }
        }
        Ok(TreePants { s, splits })
    }

    pub fn ground_size(&self) -> u8 {
        self.s
    }

    /// Members in canonical order.
    pub fn splits(&self) -> &[Split] {
        &self.splits
    }

    pub fn contains(&self, u: &Split) -> bool {
        self.splits.binary_search(u).is_ok()
    }

    pub fn regions(&self) -> RegionForest {
        let forest = RegionForest::new(self.s, &self.splits).expect("validated family");
        debug_assert!(forest.regions.iter().all(|r| r.items.len() == 3));
        forest
    }

    fn index_of(&self, u: &Split) -> Result<usize> {
        self.splits.binary_search(u).map_err(|_| Error::NotMember)
    }

    /// Two members are adjacent when their dual tree edges share a region.
    pub fn adjacent(&self, a: &Split, b: &Split) -> Result<bool> {
        let (ia, ib) = (self.index_of(a)?, self.index_of(b)?);
        if ia == ib {
            return Ok(false);
        }
        let forest = self.regions();
        let (a0, a1) = forest.split_regions[ia];
        let (b0, b1) = forest.split_regions[ib];
        Ok(a0 == b0 || a0 == b1 || a1 == b0 || a1 == b1)
    }

    /// Dual trees have no loops, so no member is ever self-adjacent.
    pub fn self_adjacent(&self, a: &Split) -> Result<bool> {
        self.index_of(a)?;
        Ok(false)
    }

    /// The two split spheres for `(a, self)`: the spheres crossing `a` and
    /// nothing else in the decomposition.  They are the two other essential
    /// spheres of the 4-holed piece obtained by removing `a`, read off by
    /// pairing the four cuffs of that piece.
    pub fn split_spheres(&self, a: &Split) -> Result<[Split; 2]> {
        let idx = self.index_of(a)?;
        let forest = self.regions();
        let (outer_region, inner_region) = forest.split_regions[idx];
        let cuffs_in = |region: usize| -> Vec<TreeItem> {
            forest.regions[region]
                .items
                .iter()
                .copied()
                .filter(|&it| it != TreeItem::Inner(idx) && it != TreeItem::Outer(idx))
                .collect()
        };
        let inner = cuffs_in(inner_region);
        let outer = cuffs_in(outer_region);
        debug_assert_eq!(inner.len(), 2);
        debug_assert_eq!(outer.len(), 2);
        let side = |x: TreeItem, y: TreeItem| forest.far_set(x).union(forest.far_set(y));
        let mut out = [
            splits::canonicalize(self.s, side(inner[0], outer[0]))?,
            splits::canonicalize(self.s, side(inner[0], outer[1]))?,
        ];
        out.sort();
        Ok(out)
    }

    /// Replaces `a` by one of its split spheres, giving the adjacent pants
    /// decomposition.  The move is an involution: `a` is a split sphere for
    /// `b` in the result.
    pub fn exchange(&self, a: &Split, b: &Split) -> Result<TreePants> {
        if !self.split_spheres(a)?.contains(b) {
            return Err(Error::NotSplitSphere);
        }
        let mut family: Vec<Split> = self
            .splits
            .iter()
            .copied()
            .filter(|u| u != a)
            .collect();
        family.push(*b);
        TreePants::new(self.s, &family)
    }
}

/// A split pair for `c`, certified by two pants decompositions related by an
/// exchange move, together with the crossing "twin" spheres used to audit
/// it.
#[derive(Clone, Debug, Serialize)]
pub struct TreeSplitPair {
    pub c: Split,
    pub d: Split,
    pub e: Split,
    pub p1: TreePants,
    pub p2: TreePants,
    /// The third spheres of the 4-holed pieces spanned by (c,d) and (c,e).
    /// Each twin crosses both `d` and `e`; whether the twins cross each
    /// other as well depends on the configuration and is recorded, not
    /// required.
    pub twins: (Split, Split),
    pub twins_cross: bool,
}

impl TreeSplitPair {
    /// Re-checks every claim packaged in the certificate.
    pub fn verify(&self) -> Result<bool> {
        Ok(self.p1.contains(&self.c)
            && self.p2.contains(&self.c)
            && self.p1.split_spheres(&self.c)?.contains(&self.d)
            && self.p2.split_spheres(&self.c)?.contains(&self.e)
            && self.d != self.e
            && splits::is_nested(&self.d, &self.e)?
            && splits::intersects(&self.twins.0, &self.d)?
            && splits::intersects(&self.twins.0, &self.e)?
            && splits::intersects(&self.twins.1, &self.d)?
            && splits::intersects(&self.twins.1, &self.e)?)
    }
}

/// Builds the two split pairs for `c ∈ P` from a split sphere `b` for
/// `(a, P)`: the split spheres `d` of `(c, P)` pair with the split spheres
/// `e` of `(c, P′)` where `P′ = (P∖{a})∪{b}`, matched by disjointness.
pub fn construct_split_pairs(
    p: &TreePants,
    a: &Split,
    c: &Split,
    b: &Split,
) -> Result<[TreeSplitPair; 2]> {
    if !p.adjacent(a, c)? {
        return Err(Error::InvalidSplit(format!("{a} and {c} are not adjacent")));
    }
    let ds = p.split_spheres(c)?;
    let p_prime = p.exchange(a, b)?;
    let es = p_prime.split_spheres(c)?;
    let pair_for = |d: &Split| -> Result<TreeSplitPair> {
        let e = es
            .iter()
            .find(|e| splits::is_nested(d, e).unwrap() && *e != d)
            .ok_or(Error::NotSplitSphere)?;
        let twins = (
            splits::m04_third_sphere(c, d)?,
            splits::m04_third_sphere(c, e)?,
        );
        Ok(TreeSplitPair {
            c: *c,
            d: *d,
            e: *e,
            p1: p.clone(),
            p2: p_prime.clone(),
            twins,
            twins_cross: splits::intersects(&twins.0, &twins.1)?,
        })
    };
    Ok([pair_for(&ds[0])?, pair_for(&ds[1])?])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn split(s: u8, piece: &[Label]) -> Split {
        Split::new(s, piece).unwrap()
    }

    fn double_factorial(k: u64) -> u64 {
        match k {
            0 | 1 => 1,
            _ => k * double_factorial(k - 2),
        }
    }

    #[test]
    fn too_few_boundaries_rejected() {
        assert_eq!(build_complex(3).err(), Some(Error::NoEssentialSpheres(3)));
    }

    #[test]
    fn vertex_counts() {
        assert_eq!(build_complex(4).unwrap().vertices().len(), 3);
        assert_eq!(build_complex(5).unwrap().vertices().len(), 10);
        assert_eq!(build_complex(6).unwrap().vertices().len(), 25);
    }

    #[test]
    fn four_boundary_skeleton_is_edgeless() {
        let c = build_complex(4).unwrap();
        assert_eq!(c.skeleton().edge_count(), 0);
    }

    #[test]
    fn pants_counts_match_double_factorial() {
        for s in 4..=8u8 {
            let c = build_complex(s).unwrap();
            let pants = c.enumerate_pants();
            assert_eq!(
                pants.len() as u64,
                double_factorial(2 * s as u64 - 5),
                "s={s}"
            );
        }
    }

    #[test]
    fn kneser_subgraph_shapes() {
        let c5 = build_complex(5).unwrap();
        let (g5, v5) = c5.kneser_subgraph().unwrap();
        assert_eq!(g5.vertex_count(), 10);
        assert_eq!(g5.edge_count(), 15);
        assert!(v5.iter().all(|u| splits::size(u) == 2));
        let c6 = build_complex(6).unwrap();
        let (g6, _) = c6.kneser_subgraph().unwrap();
        assert_eq!(g6.vertex_count(), 15);
        assert!((0..15).all(|v| g6.degree(v) == 6));
        assert_eq!(
            build_complex(4).unwrap().kneser_subgraph().err(),
            Some(Error::BelowWhitneyRegime(4))
        );
    }

    #[test]
    fn reconstruction_from_size_two_example() {
        let c = build_complex(6).unwrap();
        let u = split(6, &[1, 2, 3]);
        let nbrs = c.reconstruct_from_size2(&u).unwrap();
        let expected: BTreeSet<Split> = [
            split(6, &[1, 2]),
            split(6, &[1, 3]),
            split(6, &[2, 3]),
            split(6, &[4, 5]),
            split(6, &[4, 6]),
            split(6, &[5, 6]),
        ]
        .into_iter()
        .collect();
        assert_eq!(nbrs, expected);
        assert!(c.verify_unique(&u).unwrap());
    }

    #[test]
    fn reconstruction_rejects_small_splits() {
        let c = build_complex(6).unwrap();
        assert_eq!(
            c.reconstruct_from_size2(&split(6, &[1, 2])).err(),
            Some(Error::SizeTwoInput)
        );
    }

    #[test]
    fn reconstruction_unique_for_all_size_three() {
        let c = build_complex(6).unwrap();
        for u in c.vertices() {
            if splits::size(u) >= 3 {
                assert!(c.verify_unique(u).unwrap(), "{u}");
            }
        }
    }

    #[test]
    fn regions_are_trivalent_and_partition_labels() {
        for s in 5..=7u8 {
            let c = build_complex(s).unwrap();
            for p in c.enumerate_pants() {
                let forest = p.regions();
                for region in &forest.regions {
                    assert_eq!(region.items.len(), 3);
                    let mut union = LabelSet::EMPTY;
                    let mut total = 0;
                    for &it in &region.items {
                        let far = forest.far_set(it);
                        total += far.len();
                        union = union.union(far);
                    }
                    assert_eq!(union, LabelSet::full(s));
                    assert_eq!(total, s as u32);
                }
            }
        }
    }

    /// Independent oracle: a split sphere for `(a, P)` is an essential split
    /// crossing `a` and nested with every other member.
    fn split_sphere_oracle(p: &TreePants, a: &Split) -> Vec<Split> {
        splits::essential_splits(p.ground_size())
            .into_iter()
            .filter(|x| {
                splits::intersects(x, a).unwrap()
                    && p.splits()
                        .iter()
                        .filter(|m| *m != a)
                        .all(|m| splits::is_nested(x, m).unwrap())
            })
            .collect()
    }

    #[test]
    fn split_spheres_match_oracle_exhaustively() {
        for s in 5..=6u8 {
            let c = build_complex(s).unwrap();
            for p in c.enumerate_pants() {
                for a in p.splits() {
                    let mut got = p.split_spheres(a).unwrap().to_vec();
                    got.sort();
                    let expected = split_sphere_oracle(&p, a);
                    assert_eq!(got, expected, "s={s} P={p:?} a={a}");
                    assert_eq!(got.len(), 2);
                    for b in &got {
                        let q = p.exchange(a, b).unwrap();
                        assert!(q.split_spheres(b).unwrap().contains(a));
                        assert_eq!(q.exchange(b, a).unwrap(), p);
                    }
                }
            }
        }
    }

    #[test]
    fn five_boundary_split_pair_reproduction() {
        let a = split(5, &[1, 2]);
        let b = split(5, &[2, 3]);
        let c = split(5, &[4, 5]);
        let p = TreePants::new(5, &[a, c]).unwrap();
        assert!(p.split_spheres(&a).unwrap().contains(&b));
        let pairs = construct_split_pairs(&p, &a, &c, &b).unwrap();
        let summary: Vec<(Split, Split)> = pairs.iter().map(|q| (q.d, q.e)).collect();
        assert_eq!(
            summary,
            vec![
                (split(5, &[3, 5]), split(5, &[1, 4])),
                (split(5, &[3, 4]), split(5, &[1, 5])),
            ]
        );
        for q in &pairs {
            assert!(q.verify().unwrap());
            // The d-twin here is nested with the e-twin: crossing of the
            // twins themselves is configuration-dependent.
            assert!(!q.twins_cross);
        }
        assert_eq!(pairs[0].twins, (split(5, &[3, 4]), split(5, &[1, 5])));
        assert_eq!(pairs[1].twins, (split(5, &[3, 5]), split(5, &[1, 4])));
    }

    #[test]
    fn exchange_requires_split_sphere() {
        let a = split(5, &[1, 2]);
        let c = split(5, &[4, 5]);
        let p = TreePants::new(5, &[a, c]).unwrap();
        // {1,4} crosses a but also crosses c, so it is not a split sphere.
        assert_eq!(
            p.exchange(&a, &split(5, &[1, 4])).err(),
            Some(Error::NotSplitSphere)
        );
        assert_eq!(
            p.exchange(&split(5, &[1, 4]), &a).err(),
            Some(Error::NotMember)
        );
    }

    #[test]
    fn pants_validation_errors() {
        assert_eq!(
            TreePants::new(6, &[split(6, &[1, 2])]).err(),
            Some(Error::NotMaximal {
                expected: 3,
                got: 1
            })
        );
        let crossing = TreePants::new(5, &[split(5, &[1, 2]), split(5, &[2, 3])]);
        assert!(matches!(crossing, Err(Error::NotDisjoint(_, _))));
    }

    #[test]
    fn tree_pants_json_round_trip() {
        let p = TreePants::new(5, &[split(5, &[1, 2]), split(5, &[4, 5])]).unwrap();
        let json = serde_json::to_string(&p).unwrap();
        let back: TreePants = serde_json::from_str(&json).unwrap();
        assert_eq!(back, p);
    }
}
