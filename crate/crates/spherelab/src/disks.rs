//! Disk calculus on a punctured 3-sphere.
//!
//! A properly embedded disk with boundary on the `i`-th boundary sphere is
//! recorded by the partition it induces on the other boundary labels.  Disks
//! are the building blocks for handle-crossing spheres: gluing two disks
//! along a tube yields a sphere, and every pants/disjointness question about
//! such spheres reduces to the predicates in this module.

use serde::{Deserialize, Serialize};

use crate::error::{Error, GoodnessFailure, Result};
use crate::splits::{self, Label, LabelSet, Split, MAX_GROUND};

/// A disk on boundary sphere `on`, identified by the partition of the
/// remaining labels.  `side` is canonical: the piece containing the least
/// label of `[s] ∖ {on}`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "DiskJson", into = "DiskJson")]
pub struct Disk {
    s: u8,
    on: Label,
    side: LabelSet,
}

#[derive(Serialize, Deserialize)]
struct DiskJson {
    s: u8,
    on: Label,
    side: Vec<Label>,
}

impl From<Disk> for DiskJson {
    fn from(d: Disk) -> DiskJson {
        DiskJson {
            s: d.s,
            on: d.on,
            side: d.side.to_vec(),
        }
    }
}

impl TryFrom<DiskJson> for Disk {
    type Error = Error;

    fn try_from(json: DiskJson) -> Result<Disk> {
        Disk::new(json.s, json.on, json.side.into_iter().collect())
    }
}

impl std::fmt::Debug for Disk {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "D(on {} ~ {}|{})", self.on, self.side, self.coside())
    }
}

impl std::fmt::Display for Disk {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

impl Disk {
    /// Builds the disk on boundary `on` splitting the other labels into
    /// `piece` and its complement.  Either piece may be passed; boundary
    /// parallel data (an empty piece) is rejected.
    pub fn new(s: u8, on: Label, piece: LabelSet) -> Result<Disk> {
        if !(4..=MAX_GROUND).contains(&s) {
            return Err(Error::InvalidDisk(format!("ground size {s} out of range")));
        }
        if !(1..=s).contains(&on) {
            return Err(Error::InvalidDisk(format!("boundary label {on} not in ground set")));
        }
        let others = LabelSet::full(s).without(on);
        if !piece.is_subset(others) {
            return Err(Error::InvalidDisk(format!(
                "piece {piece} must avoid the base label and stay in the ground set"
            )));
        }
        if piece.is_empty() || piece == others {
            return Err(Error::InvalidDisk(
                "boundary-parallel disk: both pieces must be nonempty".into(),
            ));
        }
        let least = others.min().expect("s >= 4");
        let side = if piece.contains(least) {
            piece
        } else {
            others.difference(piece)
        };
        Ok(Disk { s, on, side })
    }

    pub fn from_labels(s: u8, on: Label, piece: &[Label]) -> Result<Disk> {
        Disk::new(s, on, piece.iter().copied().collect())
    }

    pub fn ground_size(&self) -> u8 {
        self.s
    }

    pub fn on(&self) -> Label {
        self.on
    }

    /// The canonical piece.
    pub fn side(&self) -> LabelSet {
        self.side
    }

    /// The other piece.
    pub fn coside(&self) -> LabelSet {
        LabelSet::full(self.s).without(self.on).difference(self.side)
    }

    /// The piece containing a given label (which must not be the base).
    pub fn piece_containing(&self, label: Label) -> LabelSet {
        debug_assert_ne!(label, self.on);
        if self.side.contains(label) {
            self.side
        } else {
            self.coside()
        }
    }

    /// The piece not containing a given label (which must not be the base).
    pub fn piece_avoiding(&self, label: Label) -> LabelSet {
        debug_assert_ne!(label, self.on);
        if self.side.contains(label) {
            self.coside()
        } else {
            self.side
        }
    }

    fn check_ground(&self, s: u8) -> Result<()> {
        if self.s != s {
            Err(Error::GroundMismatch(self.s, s))
        } else {
            Ok(())
        }
    }
}

/// A sphere arising from capping off one side of a disk: either parallel to
/// a single boundary sphere or an essential split.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundarySphere {
    Peripheral(Label),
    Split(Split),
}

impl BoundarySphere {
    /// The sphere as a (possibly inessential) split of the full ground set.
    pub fn as_split(&self, s: u8) -> Split {
        match self {
            BoundarySphere::Peripheral(l) => {
                splits::canonicalize(s, LabelSet::singleton(*l)).expect("valid piece")
            }
            BoundarySphere::Split(z) => *z,
        }
    }
}

/// The boundary of the pants neighbourhood of `boundary sphere i ∪ disk d`:
/// the disk cuts sphere `i` in two, and capping each half gives one sphere
/// per piece of `d`.  Returned with the sphere from the canonical piece
/// first.
pub fn pants_boundary(i: Label, d: &Disk) -> Result<(BoundarySphere, BoundarySphere)> {
    if d.on() != i {
        return Err(Error::InvalidDisk(format!(
            "disk lies on boundary {}, not {i}",
            d.on()
        )));
    }
    let cap = |piece: LabelSet| -> BoundarySphere {
        if piece.len() == 1 {
            BoundarySphere::Peripheral(piece.min().unwrap())
        } else {
            BoundarySphere::Split(splits::canonicalize(d.ground_size(), piece).unwrap())
        }
    };
    Ok((cap(d.side()), cap(d.coside())))
}

/// Disjointness of two disks.
///
/// On a common boundary sphere this is nesting of the induced partitions.
/// Across boundary spheres `i ≠ j`, the disks are disjoint exactly when some
/// piece `E` of the first contains `j` together with a whole piece of the
/// second: `F ⊆ E ∖ {j}`.  The rule is symmetric in its arguments.
pub fn disks_disjoint(d: &Disk, e: &Disk) -> Result<bool> {
    d.check_ground(e.ground_size())?;
    if d.on() == e.on() {
        let (a, ac) = (d.side(), d.coside());
        let (b, bc) = (e.side(), e.coside());
        return Ok(a.is_subset(b) || a.is_subset(bc) || ac.is_subset(b) || ac.is_subset(bc));
    }
    let j = e.on();
    let big = d.piece_containing(j).without(j);
    Ok(e.side().is_subset(big) || e.coside().is_subset(big))
}

/// Disjointness of a disk (on boundary `i`) from an interior sphere: the
/// sphere's piece away from `i` must sit inside a single piece of the disk.
pub fn disk_sphere_disjoint(d: &Disk, z: &Split) -> Result<bool> {
    d.check_ground(z.ground_size())?;
    if !z.is_essential() {
        return Err(Error::InvalidSplit(format!("{z} is not essential")));
    }
    let away = z.piece_avoiding(d.on());
    Ok(away.is_subset(d.side()) || away.is_subset(d.coside()))
}

/// The verified data of a good sphere candidate: two disks on distinct
/// boundary spheres, each cutting off a single cap, with all six boundary
/// spheres of the associated pants pieces pairwise distinct.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GoodnessData {
    pub s: u8,
    pub a_plus: Label,
    pub a_minus: Label,
    pub d_plus: Disk,
    pub d_minus: Disk,
    /// The capped-off labels on the plus and minus sides.
    pub cap_plus: Label,
    pub cap_minus: Label,
    /// The two essential boundary spheres.
    pub interior_boundary: (Split, Split),
    /// The four boundary spheres other than the base spheres.
    pub partial_boundary: [BoundarySphere; 4],
    /// All six boundary spheres.
    pub full_boundary: [BoundarySphere; 6],
}

/// Checks the goodness conditions for a handle-crossing sphere built from
/// `d_plus` on `a_plus` and `d_minus` on `a_minus`.
pub fn goodness(
    a_plus: Label,
    a_minus: Label,
    d_plus: &Disk,
    d_minus: &Disk,
) -> Result<GoodnessData> {
    d_plus.check_ground(d_minus.ground_size())?;
    let s = d_plus.ground_size();
    if d_plus.on() != a_plus || d_minus.on() != a_minus {
        return Err(Error::InvalidDisk(
            "disks must lie on the stated boundary spheres".into(),
        ));
    }
    if a_plus == a_minus {
        return Err(Error::InvalidDisk(
            "the two boundary spheres must be distinct".into(),
        ));
    }
    let singleton = |d: &Disk| -> Result<Label> {
        let (a, b) = (d.side(), d.coside());
        if a.len() == 1 {
            Ok(a.min().unwrap())
        } else if b.len() == 1 {
            Ok(b.min().unwrap())
        } else {
            Err(Error::NotGood(GoodnessFailure::NoPeripheralCap { on: d.on() }))
        }
    };
    let cap_plus = singleton(d_plus)?;
    let cap_minus = singleton(d_minus)?;
    let s3 = Split::new(s, &[a_plus, cap_plus])?;
    let s4 = Split::new(s, &[a_minus, cap_minus])?;
    let full = [
        BoundarySphere::Peripheral(a_plus),
        BoundarySphere::Peripheral(a_minus),
        BoundarySphere::Peripheral(cap_plus),
        BoundarySphere::Peripheral(cap_minus),
        BoundarySphere::Split(s3),
        BoundarySphere::Split(s4),
    ];
    for (i, x) in full.iter().enumerate() {
        for y in full.iter().skip(i + 1) {
            if x == y {
                return Err(Error::NotGood(GoodnessFailure::CoincidentSpheres));
            }
        }
    }
    Ok(GoodnessData {
        s,
        a_plus,
        a_minus,
        d_plus: *d_plus,
        d_minus: *d_minus,
        cap_plus,
        cap_minus,
        interior_boundary: (s3, s4),
        partial_boundary: [
            BoundarySphere::Peripheral(cap_plus),
            BoundarySphere::Peripheral(cap_minus),
            BoundarySphere::Split(s3),
            BoundarySphere::Split(s4),
        ],
        full_boundary: full,
    })
}

/// Checks whether two good spheres over the same boundary pair form a good
/// pair: their full boundaries meet only in the two base spheres and the
/// four cross disk pairs are disjoint.
pub fn good_pair_check(g1: &GoodnessData, g2: &GoodnessData) -> Result<bool> {
    if g1.s != g2.s {
        return Err(Error::GroundMismatch(g1.s, g2.s));
    }
    if (g1.a_plus, g1.a_minus) != (g2.a_plus, g2.a_minus) {
        return Err(Error::LabelMismatch);
    }
    let base = [
        BoundarySphere::Peripheral(g1.a_plus),
        BoundarySphere::Peripheral(g1.a_minus),
    ];
    let mut common: Vec<BoundarySphere> = g1
        .full_boundary
        .iter()
        .filter(|x| g2.full_boundary.contains(x))
        .copied()
        .collect();
    common.sort();
    let mut expected = base.to_vec();
    expected.sort();
    if common != expected {
        return Ok(false);
    }
    for d in [&g1.d_plus, &g1.d_minus] {
        for e in [&g2.d_plus, &g2.d_minus] {
            if !disks_disjoint(d, e)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// All disks on boundary `on` of the ground set `[s]`, in canonical order.
pub fn all_disks_on(s: u8, on: Label) -> Vec<Disk> {
    let others: Vec<Label> = (1..=s).filter(|&l| l != on).collect();
    let mut out = Vec::new();
    for mask in 1u32..((1 << others.len()) - 1) {
        let piece: LabelSet = others
            .iter()
            .enumerate()
            .filter(|(k, _)| mask & (1 << k) != 0)
            .map(|(_, &l)| l)
            .collect();
        let d = Disk::new(s, on, piece).unwrap();
        if !out.contains(&d) {
            out.push(d);
        }
    }
    out.sort();
    out
}
