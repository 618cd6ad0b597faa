use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::decide::{intersects, subset};
use super::{CylError, CylExpr};
use crate::seq::{FinSeq, Nat};

/// `{stem⌢j : j ∉ excluded}`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct AntichainFamily {
    pub stem: FinSeq,
    pub excluded: BTreeSet<Nat>,
}

impl AntichainFamily {
    /// The `j`-th admitted child, counting upwards and skipping excluded values.
    pub fn member(&self, j: Nat) -> FinSeq {
        let mut remaining = j;
        let mut v: Nat = 0;
        loop {
            if !self.excluded.contains(&v) {
                if remaining == 0 {
                    return self.stem.append(v);
                }
                remaining -= 1;
            }
            v += 1;
        }
    }

    pub fn contains(&self, c: &FinSeq) -> bool {
        c.parent().as_ref() == Some(&self.stem)
            && c.last().is_some_and(|v| !self.excluded.contains(&v))
    }
}

/// A possibly infinite antichain of stems: finitely many concrete members
/// followed by finitely many infinite families.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LazyAntichain {
    concrete: Vec<FinSeq>,
    families: Vec<AntichainFamily>,
}

impl LazyAntichain {
    pub fn concrete(&self) -> &[FinSeq] {
        &self.concrete
    }

    pub fn families(&self) -> &[AntichainFamily] {
        &self.families
    }

    pub fn is_finite(&self) -> bool {
        self.families.is_empty()
    }

    /// Number of members when finite.
    pub fn finite_len(&self) -> Option<usize> {
        self.is_finite().then_some(self.concrete.len())
    }

    /// Member at index `n`: the concrete members first, then the families
    /// round-robin. Bijective onto the denoted set; `None` past the end of a
    /// finite antichain.
    pub fn member(&self, n: Nat) -> Option<FinSeq> {
        let k = self.concrete.len() as Nat;
        if n < k {
            return Some(self.concrete[n as usize].clone());
        }
        if self.families.is_empty() {
            return None;
        }
        let rest = n - k;
        let f = self.families.len() as Nat;
        Some(self.families[(rest % f) as usize].member(rest / f))
    }

    pub fn iter(&self) -> impl Iterator<Item = FinSeq> + '_ {
        (0..).map_while(move |n| self.member(n))
    }

    pub fn contains(&self, c: &FinSeq) -> bool {
        self.concrete.contains(c) || self.families.iter().any(|fam| fam.contains(c))
    }
}

/// The minimal stems `c` with `S_c ⊆ e`, i.e. `S_c ⊆ e` and `S_{c↾(lh(c)−1)} ⊄ e`.
///
/// Descends the mention tree. Children whose value no mention uses at that
/// depth all behave alike, so they are handled as one family.
pub fn minimal_antichain(e: &CylExpr) -> Result<LazyAntichain, CylError> {
    if super::is_empty(e) {
        return Err(CylError::EmptySet);
    }
    let mut out = LazyAntichain { concrete: Vec::new(), families: Vec::new() };
    if subset(&CylExpr::Full, e) {
        out.concrete.push(FinSeq::empty());
        return Ok(out);
    }
    let mentions = e.mentions();
    descend(e, &mentions, FinSeq::empty(), &mut out);
    out.concrete.sort();
    out.families.sort();
    Ok(out)
}

fn descend(e: &CylExpr, mentions: &BTreeSet<FinSeq>, c: FinSeq, out: &mut LazyAntichain) {
    let here = CylExpr::cylinder(c.clone());
    if subset(&here, e) {
        out.concrete.push(c);
        return;
    }
    if !intersects(&here, e) {
        return;
    }
    let relevant: BTreeSet<Nat> = mentions
        .iter()
        .filter(|m| m.len() > c.len() && c.is_prefix_of(m))
        .map(|m| m.entries()[c.len()])
        .collect();
    for &v in &relevant {
        descend(e, mentions, c.append(v), out);
    }
    let fresh = (0..).find(|v| !relevant.contains(v)).expect("finite exclusion set");
    // No mention extends c⌢fresh, so S_{c⌢fresh} is either inside e or disjoint.
    if subset(&CylExpr::cylinder(c.append(fresh)), e) {
        out.families.push(AntichainFamily { stem: c, excluded: relevant });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn full_gives_the_empty_stem() {
        let a = minimal_antichain(&CylExpr::Full).unwrap();
        assert_eq!(a.concrete(), &[FinSeq::empty()]);
        assert!(a.is_finite());
        assert_eq!(a.member(1), None);
    }

    #[test]
    fn single_cylinder_is_its_own_cover() {
        let a = minimal_antichain(&CylExpr::cylinder([3])).unwrap();
        assert_eq!(a.concrete(), &[FinSeq::from([3])]);
        assert!(a.families().is_empty());
    }

    #[test]
    fn complement_of_a_deep_cylinder() {
        let e = CylExpr::Full.minus(CylExpr::cylinder([0, 2]));
        let a = minimal_antichain(&e).unwrap();
        assert!(a.concrete().is_empty());
        let expect = vec![
            AntichainFamily { stem: FinSeq::empty(), excluded: [0].into_iter().collect() },
            AntichainFamily { stem: FinSeq::from([0]), excluded: [2].into_iter().collect() },
        ];
        assert_eq!(a.families(), expect.as_slice());
        // every denoted member is minimal inside e
        for c in a.iter().take(40) {
            assert!(subset(&CylExpr::cylinder(c.clone()), &e));
            let parent = CylExpr::cylinder(c.parent().unwrap());
            assert!(!subset(&parent, &e));
        }
    }

    #[test]
    fn empty_input_is_an_error() {
        assert_eq!(minimal_antichain(&CylExpr::Empty), Err(CylError::EmptySet));
    }

    #[test]
    fn member_enumeration_is_injective() {
        let e = CylExpr::Full.minus(CylExpr::cylinder([0, 2])).union(CylExpr::cylinder([0, 2, 5]));
        let a = minimal_antichain(&e).unwrap();
        let firsts: Vec<FinSeq> = a.iter().take(60).collect();
        let set: BTreeSet<_> = firsts.iter().cloned().collect();
        assert_eq!(set.len(), firsts.len());
        for c in &firsts {
            assert!(a.contains(c));
        }
    }

    #[test]
    fn family_members_skip_exclusions() {
        let fam = AntichainFamily { stem: FinSeq::from([1]), excluded: [0, 2].into_iter().collect() };
        assert_eq!(fam.member(0), FinSeq::from([1, 1]));
        assert_eq!(fam.member(1), FinSeq::from([1, 3]));
        assert!(fam.contains(&FinSeq::from([1, 4])));
        assert!(!fam.contains(&FinSeq::from([1, 2])));
    }
}
