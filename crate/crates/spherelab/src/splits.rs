//! Two-piece partitions ("splits") of a finite ground set `[s] = {1, …, s}`.
//!
//! A split models an essential embedded sphere in a punctured 3-sphere with
//! `s` boundary components: the sphere is determined, up to isotopy, by how it
//! partitions the boundary labels into two pieces.  Two such spheres can be
//! made disjoint exactly when their partitions are nested, so all sphere
//! arithmetic in this crate reduces to set arithmetic on splits.

use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A boundary label, `1 ..= ground size`.
pub type Label = u8;

/// Largest supported ground size.  Labels are stored as bits of a `u32`.
pub const MAX_GROUND: u8 = 30;

/// A set of labels drawn from `1..=MAX_GROUND`, stored as a bitmask with bit
/// `i` standing for label `i`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabelSet(u32);

impl LabelSet {
    pub const EMPTY: LabelSet = LabelSet(0);

    /// The full set `{1, …, s}`.
    pub fn full(s: u8) -> LabelSet {
        debug_assert!(s <= MAX_GROUND);
        LabelSet(((1u32 << s) - 1) << 1)
    }

    pub fn singleton(label: Label) -> LabelSet {
        debug_assert!((1..=MAX_GROUND).contains(&label));
        LabelSet(1 << label)
    }

    pub fn contains(self, label: Label) -> bool {
        label <= MAX_GROUND && self.0 & (1 << label) != 0
    }

    pub fn insert(&mut self, label: Label) {
        debug_assert!((1..=MAX_GROUND).contains(&label));
        self.0 |= 1 << label;
    }

    pub fn with(mut self, label: Label) -> LabelSet {
        self.insert(label);
        self
    }

    pub fn remove(&mut self, label: Label) {
        self.0 &= !(1 << label);
    }

    pub fn without(mut self, label: Label) -> LabelSet {
        self.remove(label);
        self
    }

    pub fn len(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn is_subset(self, other: LabelSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 | other.0)
    }

    pub fn intersection(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 & other.0)
    }

    pub fn difference(self, other: LabelSet) -> LabelSet {
        LabelSet(self.0 & !other.0)
    }

    pub fn intersects(self, other: LabelSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Complement inside `{1, …, s}`.
    pub fn complement_in(self, s: u8) -> LabelSet {
        LabelSet(LabelSet::full(s).0 & !self.0)
    }

    /// Least label of the set, if any.
    pub fn min(self) -> Option<Label> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as Label)
        }
    }

    pub fn iter(self) -> impl Iterator<Item = Label> {
        (1..=MAX_GROUND).filter(move |&l| self.contains(l))
    }

    pub fn to_vec(self) -> Vec<Label> {
        self.iter().collect()
    }

    /// Raw bitmask, for compact hashing and ordering tricks.
    pub fn bits(self) -> u32 {
        self.0
    }
}

impl FromIterator<Label> for LabelSet {
    fn from_iter<T: IntoIterator<Item = Label>>(iter: T) -> Self {
        let mut set = LabelSet::EMPTY;
        for l in iter {
            set.insert(l);
        }
        set
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, l) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for LabelSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_vec().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabelSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<Label>::deserialize(deserializer)?;
        let mut set = LabelSet::EMPTY;
        for l in labels {
            if !(1..=MAX_GROUND).contains(&l) {
                return Err(D::Error::custom(format!("label {l} out of range")));
            }
            if set.contains(l) {
                return Err(D::Error::custom(format!("duplicate label {l}")));
            }
            set.insert(l);
        }
        Ok(set)
    }
}

/// A two-piece partition of `{1, …, s}`, stored in canonical form: `side` is
/// the piece containing label 1.  Equality and ordering are therefore
/// partition equality, independent of which piece was named first.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "SplitJson", into = "SplitJson")]
pub struct Split {
    s: u8,
    side: LabelSet,
}

#[derive(Serialize, Deserialize)]
struct SplitJson {
    s: u8,
    side: Vec<Label>,
}

impl From<Split> for SplitJson {
    fn from(split: Split) -> SplitJson {
        SplitJson {
            s: split.s,
            side: split.side.to_vec(),
        }
    }
}

impl TryFrom<SplitJson> for Split {
    type Error = Error;

    fn try_from(json: SplitJson) -> Result<Split> {
        let piece: LabelSet = json.side.iter().copied().collect();
        if piece.len() as usize != json.side.len() {
            return Err(Error::InvalidSplit(format!(
                "side list {:?} contains a repeated label",
                json.side
            )));
        }
        canonicalize(json.s, piece)
    }
}

/// Builds the canonical form of the partition `{piece, [s] ∖ piece}`.
///
/// Either piece may be passed in; the stored side is always the one holding
/// label 1.  Both pieces must be nonempty, so `piece` must be a nonempty
/// proper subset of `[s]`.
pub fn canonicalize(s: u8, piece: LabelSet) -> Result<Split> {
    if !(4..=MAX_GROUND).contains(&s) {
        return Err(Error::InvalidSplit(format!(
            "ground size {s} out of range 4..={MAX_GROUND}"
        )));
    }
    let full = LabelSet::full(s);
    if !piece.is_subset(full) {
        return Err(Error::InvalidSplit(format!(
            "piece {piece} not contained in ground set of size {s}"
        )));
    }
    if piece.is_empty() || piece == full {
        return Err(Error::InvalidSplit(
            "both pieces of a split must be nonempty".into(),
        ));
    }
    let side = if piece.contains(1) {
        piece
    } else {
        piece.complement_in(s)
    };
    Ok(Split { s, side })
}

impl Split {
    /// Convenience constructor from explicit labels of one piece.
    pub fn new(s: u8, piece: &[Label]) -> Result<Split> {
        canonicalize(s, piece.iter().copied().collect())
    }

    pub fn ground_size(&self) -> u8 {
        self.s
    }

    /// The canonical piece (the one containing label 1).
    pub fn side(&self) -> LabelSet {
        self.side
    }

    /// The other piece.
    pub fn coside(&self) -> LabelSet {
        self.side.complement_in(self.s)
    }

    /// The piece containing the given label.
    pub fn piece_containing(&self, label: Label) -> LabelSet {
        if self.side.contains(label) {
            self.side
        } else {
            self.coside()
        }
    }

    /// The piece not containing the given label.
    pub fn piece_avoiding(&self, label: Label) -> LabelSet {
        if self.side.contains(label) {
            self.coside()
        } else {
            self.side
        }
    }

    /// A split is essential when both pieces have at least two labels;
    /// singleton pieces correspond to spheres parallel to one boundary
    /// component.
    pub fn is_essential(&self) -> bool {
        let k = self.side.len();
        2 <= k && k + 2 <= self.s as u32
    }

    fn check_ground(&self, other: &Split) -> Result<()> {
        if self.s != other.s {
            Err(Error::GroundMismatch(self.s, other.s))
        } else {
            Ok(())
        }
    }
}

/// The size of a split: the cardinality of its smaller piece.
pub fn size(u: &Split) -> u32 {
    u.side.len().min(u.s as u32 - u.side.len())
}

/// Two splits are nested when some piece of one is contained in some piece of
/// the other; the corresponding spheres can then be isotoped off each other.
/// Equal splits are nested.
pub fn is_nested(u: &Split, v: &Split) -> Result<bool> {
    u.check_ground(v)?;
    let (a, b) = (u.side, v.side);
    let (ac, bc) = (u.coside(), v.coside());
    Ok(a.is_subset(b) || a.is_subset(bc) || ac.is_subset(b) || ac.is_subset(bc))
}

/// Two splits intersect exactly when they are not nested.
pub fn intersects(u: &Split, v: &Split) -> Result<bool> {
    Ok(!is_nested(u, v)?)
}

/// Given two crossing splits `u = A|A′` and `v = B|B′`, the complementary
/// piece of their union is a 4-holed sphere whose third essential sphere is
/// the split `(A∩B) ∪ (A′∩B′)`.  Which of the two mixed unions is produced is
/// immaterial: the other one is its complement.
pub fn m04_third_sphere(u: &Split, v: &Split) -> Result<Split> {
    u.check_ground(v)?;
    if !intersects(u, v)? {
        return Err(Error::NotIntersecting);
    }
    let piece = u
        .side
        .intersection(v.side)
        .union(u.coside().intersection(v.coside()));
    canonicalize(u.s, piece)
}

/// All splits of `[s]`, essential or not, in canonical order.
pub fn all_splits(s: u8) -> Vec<Split> {
    let mut out = Vec::new();
    if !(4..=MAX_GROUND).contains(&s) {
        return out;
    }
    // Canonical sides are exactly the subsets containing label 1, except the
    // full set and {1} ∪ nothing-else complement cases handled by validity.
    let rest: Vec<Label> = (2..=s).collect();
    for mask in 0..(1u32 << rest.len()) {
        let mut piece = LabelSet::singleton(1);
        for (k, &l) in rest.iter().enumerate() {
            if mask & (1 << k) != 0 {
                piece.insert(l);
            }
        }
        if let Ok(split) = canonicalize(s, piece) {
            out.push(split);
        }
    }
    out.sort();
    out
}

/// All essential splits of `[s]`, in canonical order.
pub fn essential_splits(s: u8) -> Vec<Split> {
    all_splits(s).into_iter().filter(Split::is_essential).collect()
}

impl fmt::Debug for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.side, self.coside())
    }
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.side, self.coside())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn split(s: u8, piece: &[Label]) -> Split {
        Split::new(s, piece).unwrap()
    }

    #[test]
    fn canonical_side_contains_label_one() {
        let u = split(6, &[4, 5, 6]);
        assert_eq!(u.side().to_vec(), vec![1, 2, 3]);
        assert_eq!(u, split(6, &[1, 2, 3]));
    }

    #[test]
    fn rejects_degenerate_pieces() {
        assert!(Split::new(6, &[]).is_err());
        assert!(Split::new(6, &[1, 2, 3, 4, 5, 6]).is_err());
        assert!(Split::new(3, &[1]).is_err());
        assert!(Split::new(6, &[7]).is_err());
    }

    #[test]
    fn size_is_smaller_piece() {
        assert_eq!(size(&split(6, &[1, 2])), 2);
        assert_eq!(size(&split(6, &[3, 4, 5, 6])), 2);
        assert_eq!(size(&split(7, &[1, 2, 3])), 3);
    }

    #[test]
    fn nesting_examples() {
        let u = split(6, &[1, 2]);
        let v = split(6, &[1, 2, 3]);
        let w = split(6, &[3, 4]);
        assert!(is_nested(&u, &v).unwrap());
        assert!(is_nested(&u, &u).unwrap());
        // {2,3} sits inside {1,2,3}, so the pair is nested even though
        // neither named side contains the other.
        assert!(is_nested(&v, &split(6, &[2, 3])).unwrap());
        assert!(!is_nested(&v, &w).unwrap());
        assert!(intersects(&v, &w).unwrap());
    }

    #[test]
    fn ground_mismatch_is_rejected() {
        let u = split(6, &[1, 2]);
        let v = split(7, &[1, 2]);
        assert_eq!(is_nested(&u, &v), Err(Error::GroundMismatch(6, 7)));
        assert_eq!(m04_third_sphere(&u, &v), Err(Error::GroundMismatch(6, 7)));
    }

    #[test]
    fn third_sphere_of_nested_pair_is_rejected() {
        let u = split(6, &[1, 2]);
        let v = split(6, &[1, 2, 3]);
        assert_eq!(m04_third_sphere(&u, &v), Err(Error::NotIntersecting));
    }

    /// The six-boundary worked example: a = {1,2,3}, b = {1,6}, c = {3,4}
    /// produce the crossing partners b′ = {1,4,5} and c′ = {3,5,6}.
    #[test]
    fn evil_twins_six_boundaries() {
        let a = split(6, &[1, 2, 3]);
        let b = split(6, &[1, 6]);
        let c = split(6, &[3, 4]);
        let b_twin = m04_third_sphere(&a, &b).unwrap();
        let c_twin = m04_third_sphere(&a, &c).unwrap();
        assert_eq!(b_twin, split(6, &[1, 4, 5]));
        assert_eq!(c_twin, split(6, &[3, 5, 6]));
        // The crossing pattern used downstream: the twins cross each other
        // and both cross b and c.
        assert!(intersects(&b_twin, &c_twin).unwrap());
        assert!(intersects(&b_twin, &b).unwrap());
        assert!(intersects(&b_twin, &c).unwrap());
        assert!(intersects(&c_twin, &b).unwrap());
        assert!(intersects(&c_twin, &c).unwrap());
    }

    /// Same construction one boundary down, frozen from independent
    /// enumeration: ({1,2}, {2,3}) in [5] has third sphere {1,3}|{2,4,5}.
    #[test]
    fn third_sphere_five_boundaries() {
        let u = split(5, &[1, 2]);
        let v = split(5, &[2, 3]);
        assert_eq!(m04_third_sphere(&u, &v).unwrap(), split(5, &[1, 3]));
    }

    #[test]
    fn vertex_count_formula_matches_enumeration() {
        for s in 4..=9u8 {
            let expected = 2u32.pow(s as u32 - 1) - s as u32 - 1;
            assert_eq!(essential_splits(s).len() as u32, expected, "s={s}");
        }
    }

    #[test]
    fn json_round_trip_is_canonical() {
        let u: Split = serde_json::from_str(r#"{"s":6,"side":[4,5,6]}"#).unwrap();
        assert_eq!(u, split(6, &[1, 2, 3]));
        assert_eq!(
            serde_json::to_string(&u).unwrap(),
            r#"{"s":6,"side":[1,2,3]}"#
        );
        assert!(serde_json::from_str::<Split>(r#"{"s":6,"side":[]}"#).is_err());
        assert!(serde_json::from_str::<Split>(r#"{"s":6,"side":[1,1]}"#).is_err());
    }

    fn arb_piece(s: u8) -> impl Strategy<Value = LabelSet> {
        (1u32..(1 << (s - 1))).prop_map(move |mask| {
            // Mask over labels 2..=s; keep label 1 out so pieces vary freely.
            let mut piece = LabelSet::EMPTY;
            for l in 2..=s {
                if mask & (1 << (l - 2)) != 0 {
                    piece.insert(l);
                }
            }
            if piece.is_empty() || piece == LabelSet::full(s).without(1) {
                piece = LabelSet::singleton(2)
            }
            piece
        })
    }

    proptest! {
        #[test]
        fn canonicalize_is_complement_stable(s in 4u8..=9, mask in 1u32..510) {
            let full = LabelSet::full(s);
            let piece = LabelSet((mask << 1) & full.bits());
            prop_assume!(!piece.is_empty() && piece != full);
            let u = canonicalize(s, piece).unwrap();
            let v = canonicalize(s, piece.complement_in(s)).unwrap();
            prop_assert_eq!(u, v);
            prop_assert!(u.side().contains(1));
        }

        #[test]
        fn nesting_is_symmetric(s in 4u8..=8, a_mask in 1u32..254, b_mask in 1u32..254) {
            let full = LabelSet::full(s);
            let a = LabelSet((a_mask << 1) & full.bits());
            let b = LabelSet((b_mask << 1) & full.bits());
            prop_assume!(!a.is_empty() && a != full && !b.is_empty() && b != full);
            let u = canonicalize(s, a).unwrap();
            let v = canonicalize(s, b).unwrap();
            prop_assert_eq!(is_nested(&u, &v).unwrap(), is_nested(&v, &u).unwrap());
            prop_assert_eq!(intersects(&u, &v).unwrap(), !is_nested(&u, &v).unwrap());
        }

        #[test]
        fn third_sphere_crosses_both_parents(s in 4u8..=8, piece in arb_piece(8)) {
            let full = LabelSet::full(s);
            let a = piece.intersection(full);
            prop_assume!(!a.is_empty() && a != full);
            let u = canonicalize(s, a).unwrap();
            for v in essential_splits(s) {
                if intersects(&u, &v).unwrap() {
                    let t = m04_third_sphere(&u, &v).unwrap();
                    // Complement consistency: both mixed unions name the same
                    // partition.
                    let other = u.side().intersection(v.coside())
                        .union(u.coside().intersection(v.side()));
                    prop_assert_eq!(t, canonicalize(s, other).unwrap());
                    prop_assert!(intersects(&t, &u).unwrap());
                    prop_assert!(intersects(&t, &v).unwrap());
                }
            }
        }
    }
}
