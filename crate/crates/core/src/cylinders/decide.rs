use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::CylExpr;
use crate::seq::{FinSeq, Nat};

/// The set of mentions a branch extends: `{b ∈ M : b ⊑ top}`, or the empty
/// chain when `top` is `None`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TypeChain {
    top: Option<FinSeq>,
    members: Vec<FinSeq>,
}

impl TypeChain {
    pub fn top(&self) -> Option<&FinSeq> {
        self.top.as_ref()
    }

    pub fn members(&self) -> &[FinSeq] {
        &self.members
    }

    pub fn contains(&self, a: &FinSeq) -> bool {
        self.members.binary_search(a).is_ok()
    }

    /// The stem a realizing branch must extend (`⟨⟩` for the empty chain).
    pub fn stem(&self) -> FinSeq {
        self.top.clone().unwrap_or_default()
    }
}

/// All realizable chains over a mention set, empty chain first (when
/// realizable), then by maximum in sequence order.
pub fn realizable_chains(mentions: &BTreeSet<FinSeq>) -> Vec<TypeChain> {
    let mut out = Vec::with_capacity(mentions.len() + 1);
    if !mentions.contains(&FinSeq::empty()) {
        out.push(TypeChain { top: None, members: Vec::new() });
    }
    for m in mentions {
        // BTreeSet iteration is sorted, so members come out sorted too.
        let members = mentions.iter().filter(|b| b.is_prefix_of(m)).cloned().collect();
        out.push(TypeChain { top: Some(m.clone()), members });
    }
    out
}

fn satisfying_chain(e: &CylExpr) -> Option<(TypeChain, BTreeSet<FinSeq>)> {
    let mentions = e.mentions();
    realizable_chains(&mentions)
        .into_iter()
        .find(|c| e.eval_with(&mut |a| c.contains(a)))
        .map(|c| (c, mentions))
}

pub fn is_empty(e: &CylExpr) -> bool {
    satisfying_chain(e).is_none()
}

/// `e₁ ⊆ e₂`.
pub fn subset(e1: &CylExpr, e2: &CylExpr) -> bool {
    is_empty(&e1.clone().minus(e2.clone()))
}

pub fn equal(e1: &CylExpr, e2: &CylExpr) -> bool {
    subset(e1, e2) && subset(e2, e1)
}

pub fn intersects(e1: &CylExpr, e2: &CylExpr) -> bool {
    !is_empty(&e1.clone().intersect(e2.clone()))
}

/// Smallest value `≥ floor` that no mention carries at position `pos`.
fn fresh_value(mentions: &BTreeSet<FinSeq>, pos: usize, floor: Nat) -> Nat {
    let used: BTreeSet<Nat> = mentions.iter().filter_map(|m| m.get(pos)).collect();
    (floor..).find(|v| !used.contains(v)).expect("finitely many used values")
}

/// A stem `w` with `S_w ⊆ e`, or `None` iff `e` is empty.
///
/// Takes the first satisfying chain and extends its top by the smallest value
/// fresh at that position, so every branch through `w` has exactly that type.
pub fn witness_cylinder(e: &CylExpr) -> Option<FinSeq> {
    witness_cylinder_above(e, 0)
}

/// As [`witness_cylinder`], with the appended fresh value forced `≥ floor`.
pub fn witness_cylinder_above(e: &CylExpr, floor: Nat) -> Option<FinSeq> {
    let (chain, mentions) = satisfying_chain(e)?;
    let stem = chain.stem();
    let v = fresh_value(&mentions, stem.len(), floor);
    Some(stem.append(v))
}

/// A stem `c` with `S_c ⊊ e`: the witness extended by `0`.
pub fn strict_witness(e: &CylExpr) -> Option<FinSeq> {
    witness_cylinder(e).map(|w| w.append(0))
}

/// `Some(d)` iff `e = S_d` exactly.
pub fn single_cylinder(e: &CylExpr) -> Option<FinSeq> {
    if is_empty(e) {
        return None;
    }
    let chain = super::minimal_antichain(e).ok()?;
    match (chain.concrete(), chain.families()) {
        ([d], []) => Some(d.clone()),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s<const N: usize>(a: [Nat; N]) -> CylExpr {
        CylExpr::cylinder(a)
    }

    #[test]
    fn emptiness_examples() {
        assert!(is_empty(&s([0]).intersect(s([1]))));
        assert!(!is_empty(&CylExpr::Full.minus(s([0]))));
        assert!(!is_empty(&s([0]).union(s([1])).minus(s([0]))));
        assert!(is_empty(&CylExpr::Empty));
        assert!(is_empty(&s([0]).minus(s([]))));
    }

    #[test]
    fn subset_examples() {
        assert!(subset(&s([0, 1]), &s([0])));
        assert!(!subset(&s([0]), &s([0]).minus(s([0, 0]))));
        assert!(subset(&CylExpr::Empty, &s([5])));
        assert!(equal(&s([]), &CylExpr::Full));
    }

    #[test]
    fn chains_over_mentions() {
        let m: BTreeSet<FinSeq> = [FinSeq::from([0]), FinSeq::from([0, 1]), FinSeq::from([2])]
            .into_iter()
            .collect();
        let chains = realizable_chains(&m);
        assert_eq!(chains.len(), 4);
        assert_eq!(chains[0].top(), None);
        let deep = chains.iter().find(|c| c.top() == Some(&FinSeq::from([0, 1]))).unwrap();
        assert_eq!(deep.members(), &[FinSeq::from([0]), FinSeq::from([0, 1])]);
        // ⟨⟩ mentioned: the empty chain is not realizable.
        let m: BTreeSet<FinSeq> = [FinSeq::empty()].into_iter().collect();
        assert_eq!(realizable_chains(&m).len(), 1);
    }

    #[test]
    fn witness_examples() {
        assert_eq!(witness_cylinder(&CylExpr::Empty), None);
        assert_eq!(witness_cylinder(&CylExpr::Full.minus(s([0]))), Some(FinSeq::from([1])));
        assert_eq!(witness_cylinder(&s([2])), Some(FinSeq::from([2, 0])));
        assert_eq!(witness_cylinder(&CylExpr::Full), Some(FinSeq::from([0])));
    }

    #[test]
    fn strict_witness_examples() {
        assert_eq!(strict_witness(&CylExpr::Empty), None);
        let c = strict_witness(&CylExpr::Full).unwrap();
        assert_eq!(c, FinSeq::from([0, 0]));
        assert!(subset(&CylExpr::Atom(c.clone()), &CylExpr::Full));
        assert!(!equal(&CylExpr::Atom(c), &CylExpr::Full));

        let e = s([0]).minus(s([0, 0]));
        let c = strict_witness(&e).unwrap();
        assert!(subset(&CylExpr::Atom(c.clone()), &e));
        assert!(!equal(&CylExpr::Atom(c), &e));
    }

    #[test]
    fn single_cylinder_recognition() {
        assert_eq!(single_cylinder(&s([3, 1])), Some(FinSeq::from([3, 1])));
        assert_eq!(single_cylinder(&CylExpr::Full), Some(FinSeq::empty()));
        assert_eq!(single_cylinder(&s([0, 0]).union(s([0]))), Some(FinSeq::from([0])));
        assert_eq!(single_cylinder(&s([0]).union(s([1]))), None);
        assert_eq!(single_cylinder(&s([0]).minus(s([0, 1]))), None);
        assert_eq!(single_cylinder(&CylExpr::Empty), None);
    }
}
