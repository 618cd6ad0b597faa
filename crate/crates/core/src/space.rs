//! Topological spaces as seen by schemes and games.

use alloc::vec::Vec;
use core::fmt;

use crate::cylinders::{self, minimal_antichain, CylExpr};
use crate::seq::{diagonal, BranchRule, FinSeq, Nat};

/// The operations schemes and games need from a space.
///
/// `pi_base_member(o, ·)` enumerates a π-base of the subspace `o` for a
/// nonempty open `o`: every member is a nonempty open subset of `o`, every
/// nonempty open subset of `o` contains a member, and member `0` is `o`
/// itself.
pub trait SpaceModel {
    type Open: Clone + PartialEq + fmt::Debug + fmt::Display;
    type Point: Clone + fmt::Debug;

    fn whole(&self) -> Self::Open;
    fn empty(&self) -> Self::Open;
    fn is_empty(&self, o: &Self::Open) -> bool;
    fn intersect(&self, a: &Self::Open, b: &Self::Open) -> Self::Open;
    fn union(&self, a: &Self::Open, b: &Self::Open) -> Self::Open;
    fn subset(&self, a: &Self::Open, b: &Self::Open) -> bool;
    fn contains(&self, o: &Self::Open, x: &Self::Point) -> bool;
    fn pi_base_member(&self, o: &Self::Open, m: Nat) -> Self::Open;

    fn equal(&self, a: &Self::Open, b: &Self::Open) -> bool {
        self.subset(a, b) && self.subset(b, a)
    }

    /// Whether `o` belongs to the topology (not merely to the set algebra
    /// used for opens).
    fn is_open(&self, _o: &Self::Open) -> bool {
        true
    }

    /// Number of points, for models where it is finite.
    fn finite_size(&self) -> Option<usize> {
        None
    }
}

/// `ω^ω` with opens represented by cylinder expressions.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BaireSpaceModel;

impl SpaceModel for BaireSpaceModel {
    type Open = CylExpr;
    type Point = BranchRule;

    fn whole(&self) -> CylExpr {
        CylExpr::Full
    }

    fn empty(&self) -> CylExpr {
        CylExpr::Empty
    }

    fn is_empty(&self, o: &CylExpr) -> bool {
        cylinders::is_empty(o)
    }

    fn intersect(&self, a: &CylExpr, b: &CylExpr) -> CylExpr {
        a.clone().intersect(b.clone())
    }

    fn union(&self, a: &CylExpr, b: &CylExpr) -> CylExpr {
        a.clone().union(b.clone())
    }

    fn subset(&self, a: &CylExpr, b: &CylExpr) -> bool {
        cylinders::subset(a, b)
    }

    fn contains(&self, o: &CylExpr, x: &BranchRule) -> bool {
        o.contains_branch(x)
    }

    /// `0 ↦ o`; otherwise the proper sub-cylinders `S_{c⌢e}` (`e ≠ ⟨⟩`) of the
    /// minimal cylinders `c` of `o`, paired fairly.
    fn pi_base_member(&self, o: &CylExpr, m: Nat) -> CylExpr {
        if m == 0 {
            return o.clone();
        }
        let Ok(chain) = minimal_antichain(o) else {
            return o.clone();
        };
        let (i, j) = match chain.finite_len() {
            Some(k) => {
                let k = k as Nat;
                ((m - 1) % k, (m - 1) / k)
            }
            None => diagonal::unpair(m - 1),
        };
        let c = chain.member(i).expect("index within antichain");
        CylExpr::cylinder(c.concat(&FinSeq::from_code(j + 1)))
    }
}

/// A set of points of a finite space, as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointSet(pub u64);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn all(n: usize) -> PointSet {
        if n >= 64 {
            PointSet(u64::MAX)
        } else {
            PointSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(x: usize) -> PointSet {
        PointSet(1 << x)
    }

    pub fn from_points(points: impl IntoIterator<Item = usize>) -> PointSet {
        PointSet(points.into_iter().fold(0, |acc, x| acc | (1 << x)))
    }

    pub fn contains(self, x: usize) -> bool {
        x < 64 && self.0 & (1 << x) != 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_subset(self, other: PointSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn points(self) -> impl Iterator<Item = usize> {
        (0..64).filter(move |&x| self.contains(x))
    }
}

impl core::ops::BitAnd for PointSet {
    type Output = PointSet;
    fn bitand(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 & rhs.0)
    }
}

impl core::ops::BitOr for PointSet {
    type Output = PointSet;
    fn bitor(self, rhs: PointSet) -> PointSet {
        PointSet(self.0 | rhs.0)
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.points().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceError {
    TooManyPoints(usize),
    /// An open mentions a point outside the space.
    StrayPoint(PointSet),
    MissingEmptyOrWhole,
    NotClosedUnderUnion(PointSet, PointSet),
    NotClosedUnderIntersection(PointSet, PointSet),
}

impl fmt::Display for SpaceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpaceError::TooManyPoints(n) => write!(f, "{n} points exceed the limit of 64"),
            SpaceError::StrayPoint(o) => write!(f, "open {o} has points outside the space"),
            SpaceError::MissingEmptyOrWhole => {
                f.write_str("the open family must contain the empty set and the whole space")
            }
            SpaceError::NotClosedUnderUnion(a, b) => write!(f, "{a} ∪ {b} is not open"),
            SpaceError::NotClosedUnderIntersection(a, b) => write!(f, "{a} ∩ {b} is not open"),
        }
    }
}

/// An explicit topology on at most 64 points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteSpaceModel {
    points: usize,
    /// Sorted by bitmask value.
    opens: Vec<PointSet>,
}

impl FiniteSpaceModel {
    /// Validates closure under pairwise union and intersection exhaustively.
    pub fn new(
        points: usize,
        opens: impl IntoIterator<Item = PointSet>,
    ) -> Result<Self, SpaceError> {
        if points > 64 {
            return Err(SpaceError::TooManyPoints(points));
        }
        let whole = PointSet::all(points);
        let mut opens: Vec<PointSet> = opens.into_iter().collect();
        opens.sort();
        opens.dedup();
        if let Some(o) = opens.iter().find(|o| !o.is_subset(whole)) {
            return Err(SpaceError::StrayPoint(*o));
        }
        if opens.binary_search(&PointSet::EMPTY).is_err() || opens.binary_search(&whole).is_err() {
            return Err(SpaceError::MissingEmptyOrWhole);
        }
        for (i, &a) in opens.iter().enumerate() {
            for &b in &opens[i + 1..] {
                if opens.binary_search(&(a | b)).is_err() {
                    return Err(SpaceError::NotClosedUnderUnion(a, b));
                }
                if opens.binary_search(&(a & b)).is_err() {
                    return Err(SpaceError::NotClosedUnderIntersection(a, b));
                }
            }
        }
        Ok(FiniteSpaceModel { points, opens })
    }

    pub fn discrete(points: usize) -> Self {
        assert!(points <= 16, "discrete topology enumerates every subset");
        let opens = (0..(1u64 << points)).map(PointSet);
        FiniteSpaceModel::new(points, opens).expect("power set is a topology")
    }

    /// Points `{0, 1}`, opens `∅, {1}, {0,1}`.
    pub fn sierpinski() -> Self {
        FiniteSpaceModel::new(2, [PointSet(0), PointSet(0b10), PointSet(0b11)])
            .expect("Sierpiński space")
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn opens(&self) -> &[PointSet] {
        &self.opens
    }

    /// Nonempty opens contained in `o`, in bitmask order.
    pub fn nonempty_opens_within(&self, o: PointSet) -> impl Iterator<Item = PointSet> + '_ {
        self.opens.iter().copied().filter(move |u| !u.is_empty() && u.is_subset(o))
    }

    /// Every topology on `points` points (`points ≤ 4`), each validated.
    pub fn all_topologies(points: usize) -> Vec<FiniteSpaceModel> {
        assert!(points <= 4, "topology enumeration is doubly exponential");
        let whole = PointSet::all(points);
        // candidate members other than ∅ and the whole set
        let middle: Vec<PointSet> =
            (1..whole.0).map(PointSet).filter(|&s| s != whole).collect();
        let mut out = Vec::new();
        for mask in 0u64..(1u64 << middle.len()) {
            let mut opens = alloc::vec![PointSet::EMPTY, whole];
            opens.extend(
                middle.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, &s)| s),
            );
            if let Ok(space) = FiniteSpaceModel::new(points, opens) {
                out.push(space);
            }
        }
        out
    }
}

impl SpaceModel for FiniteSpaceModel {
    type Open = PointSet;
    type Point = usize;

    fn whole(&self) -> PointSet {
        PointSet::all(self.points)
    }

    fn empty(&self) -> PointSet {
        PointSet::EMPTY
    }

    fn is_empty(&self, o: &PointSet) -> bool {
        o.is_empty()
    }

    fn intersect(&self, a: &PointSet, b: &PointSet) -> PointSet {
        *a & *b
    }

    fn union(&self, a: &PointSet, b: &PointSet) -> PointSet {
        *a | *b
    }

    fn subset(&self, a: &PointSet, b: &PointSet) -> bool {
        a.is_subset(*b)
    }

    fn contains(&self, o: &PointSet, x: &usize) -> bool {
        o.contains(*x)
    }

    /// `0 ↦ o`, then the nonempty opens inside `o` cyclically.
    fn pi_base_member(&self, o: &PointSet, m: Nat) -> PointSet {
        if m == 0 {
            return *o;
        }
        let within: Vec<PointSet> = self.nonempty_opens_within(*o).collect();
        if within.is_empty() {
            return *o;
        }
        within[((m - 1) % within.len() as Nat) as usize]
    }

    fn is_open(&self, o: &PointSet) -> bool {
        self.opens.binary_search(o).is_ok()
    }

    fn finite_size(&self) -> Option<usize> {
        Some(self.points)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn topology_counts() {
        // number of topologies on n labelled points: 1, 1, 4, 29, 355
        let counts: Vec<usize> = (0..=4).map(|n| FiniteSpaceModel::all_topologies(n).len()).collect();
        assert_eq!(counts, [1, 1, 4, 29, 355]);
    }

    #[test]
    fn validation_rejects_non_topologies() {
        let bad = FiniteSpaceModel::new(2, [PointSet(0), PointSet(1), PointSet(2), PointSet(3)]);
        assert!(bad.is_ok());
        let bad = FiniteSpaceModel::new(3, [PointSet(0), PointSet(1), PointSet(2), PointSet(7)]);
        assert_eq!(bad, Err(SpaceError::NotClosedUnderUnion(PointSet(1), PointSet(2))));
        let bad = FiniteSpaceModel::new(2, [PointSet(1), PointSet(3)]);
        assert_eq!(bad, Err(SpaceError::MissingEmptyOrWhole));
        let bad = FiniteSpaceModel::new(1, [PointSet(0), PointSet(1), PointSet(2)]);
        assert_eq!(bad, Err(SpaceError::StrayPoint(PointSet(2))));
    }

    #[test]
    fn sierpinski_pi_base_alternates() {
        let s = FiniteSpaceModel::sierpinski();
        let x = s.whole();
        let got: Vec<PointSet> = (0..5).map(|m| s.pi_base_member(&x, m)).collect();
        assert_eq!(got, [x, PointSet(0b10), x, PointSet(0b10), x]);
    }

    #[test]
    fn baire_pi_base_members_are_proper_subcylinders() {
        let b = BaireSpaceModel;
        let o = CylExpr::Full.minus(CylExpr::cylinder([0, 2]));
        assert_eq!(b.pi_base_member(&o, 0), o);
        for m in 1..60 {
            let w = b.pi_base_member(&o, m);
            let d = cylinders::single_cylinder(&w).expect("a cylinder");
            assert!(d.len() >= 2);
            assert!(b.subset(&w, &o));
            assert!(!b.equal(&w, &o));
        }
        let s = CylExpr::cylinder([3]);
        assert_eq!(b.pi_base_member(&s, 1), CylExpr::cylinder([3, 0]));
    }

    #[test]
    fn point_set_rendering() {
        assert_eq!(alloc::format!("{}", PointSet(0b101)), "{0,2}");
        assert_eq!(alloc::format!("{}", PointSet::EMPTY), "{}");
    }
}
