//! Souslin schemes `⟨V_a⟩_{a ∈ ω^{<ω}}` given by a lazily evaluated node rule,
//! and their finite-window checks.
//!
//! A [`Window`] of depth `d` and breadth `m` is the set of nodes of length
//! `≤ d` with entries `< m`. Predicates that quantify over all of `ω^{<ω}`
//! (covering, completeness, strict branches) are checked on a window and
//! reported three-valued where the finite check is only one-sided.

mod transform;

use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use crate::cylinders::{self, CylExpr};
use crate::report::{Report, Status};
use crate::seq::{BranchRule, FinSeq, Nat};
use crate::space::{BaireSpaceModel, SpaceModel};

pub use transform::{perm_identity_check, transform_g, vg_window_checks};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    /// `depth + 1`; zero for the empty window.
    levels: usize,
    breadth: Nat,
}

impl Window {
    /// A window with no nodes at all.
    pub const EMPTY: Window = Window { levels: 0, breadth: 0 };

    pub fn new(depth: usize, breadth: Nat) -> Self {
        Window { levels: depth + 1, breadth }
    }

    pub fn depth(&self) -> Option<usize> {
        self.levels.checked_sub(1)
    }

    pub fn breadth(&self) -> Nat {
        self.breadth
    }

    pub fn is_empty(&self) -> bool {
        self.levels == 0
    }

    pub fn nodes(&self) -> Vec<FinSeq> {
        match self.depth() {
            Some(d) => FinSeq::window(d, self.breadth),
            None => Vec::new(),
        }
    }

    pub fn contains(&self, a: &FinSeq) -> bool {
        self.depth().is_some_and(|d| a.len() <= d)
            && a.entries().iter().all(|&x| x < self.breadth)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SchemeError {
    /// A probe's target does not meet the node it starts from.
    EmptyTarget,
    /// The node rule could not produce a value.
    Rule { node: FinSeq, message: String },
}

impl fmt::Display for SchemeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeError::EmptyTarget => f.write_str("target open set misses the starting node"),
            SchemeError::Rule { node, message } => write!(f, "node {node}: {message}"),
        }
    }
}

pub type NodeRule<M> =
    Box<dyn Fn(&Scheme<M>, &FinSeq) -> Result<<M as SpaceModel>::Open, SchemeError>>;

/// A total rule `FinSeq → open set`, memoized per node.
///
/// The rule receives the scheme itself so it can consult other nodes (for
/// instance the parent in a recursive construction). The memo is a `RefCell`:
/// a scheme is confined to one thread, its evaluated values are not.
pub struct Scheme<M: SpaceModel> {
    space: M,
    rule: NodeRule<M>,
    memo: RefCell<BTreeMap<FinSeq, M::Open>>,
}

impl<M: SpaceModel> Scheme<M> {
    pub fn new(
        space: M,
        rule: impl Fn(&Scheme<M>, &FinSeq) -> Result<M::Open, SchemeError> + 'static,
    ) -> Self {
        Scheme { space, rule: Box::new(rule), memo: RefCell::new(BTreeMap::new()) }
    }

    /// A scheme whose rule cannot fail.
    pub fn from_fn(space: M, rule: impl Fn(&FinSeq) -> M::Open + 'static) -> Self {
        Scheme::new(space, move |_, a| Ok(rule(a)))
    }

    pub fn space(&self) -> &M {
        &self.space
    }

    pub fn try_node(&self, a: &FinSeq) -> Result<M::Open, SchemeError> {
        if let Some(v) = self.memo.borrow().get(a) {
            return Ok(v.clone());
        }
        let v = (self.rule)(self, a)?;
        self.memo.borrow_mut().entry(a.clone()).or_insert(v.clone());
        Ok(v)
    }

    /// # Panics
    /// If the node rule fails; use [`Scheme::try_node`] for fallible rules.
    pub fn node(&self, a: &FinSeq) -> M::Open {
        match self.try_node(a) {
            Ok(v) => v,
            Err(e) => panic!("scheme node evaluation failed: {e}"),
        }
    }

    pub fn evaluated_nodes(&self) -> usize {
        self.memo.borrow().len()
    }

    /// Memoized nodes in sequence order.
    pub fn evaluated(&self) -> Vec<(FinSeq, M::Open)> {
        self.memo.borrow().iter().map(|(k, v)| (k.clone(), v.clone())).collect()
    }
}

impl<M: SpaceModel> fmt::Debug for Scheme<M> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Scheme").field("evaluated", &self.evaluated_nodes()).finish()
    }
}

/// `a ↦ S_a` over the Baire space.
pub fn standard_scheme() -> Scheme<BaireSpaceModel> {
    Scheme::from_fn(BaireSpaceModel, |a| CylExpr::cylinder(a.clone()))
}

fn node_or_report<M: SpaceModel>(
    v: &Scheme<M>,
    a: &FinSeq,
    report: &mut Report,
) -> Option<M::Open> {
    match v.try_node(a) {
        Ok(o) => Some(o),
        Err(e) => {
            report.push("node.eval", Some(a), Status::Violation, format!("{e}"));
            None
        }
    }
}

/// `V_⟨⟩ = X`, `V_{a⌢n} ⊆ V_a` (exact, hard) and `V_a ⊆ ⋃_{n<m} V_{a⌢n}`
/// (verified when it holds, otherwise unresolved: later children may cover
/// the rest).
pub fn covers_check<M: SpaceModel>(v: &Scheme<M>, window: &Window) -> Report {
    let mut report = Report::new();
    if window.is_empty() {
        return report;
    }
    let space = v.space();
    let root = FinSeq::empty();
    if let Some(r) = node_or_report(v, &root, &mut report) {
        report.expect("covers.root", Some(&root), space.equal(&r, &space.whole()), "V_⟨⟩ ≠ X");
    }
    for a in window.nodes() {
        let Some(va) = node_or_report(v, &a, &mut report) else { continue };
        let mut union = space.empty();
        for n in 0..window.breadth() {
            let child = a.append(n);
            let Some(vc) = node_or_report(v, &child, &mut report) else { continue };
            report.expect("covers.child_sub", Some(&child), space.subset(&vc, &va), format!("V_{child} ⊄ V_{a}"));
            union = space.union(&union, &vc);
        }
        if space.subset(&va, &union) {
            report.pass("covers.union", Some(&a));
        } else {
            report.push(
                "covers.union",
                Some(&a),
                Status::Unresolved,
                format!("V_{a} not covered by its first {} children", window.breadth()),
            );
        }
    }
    report
}

/// [`covers_check`] plus exact pairwise disjointness of the children in the
/// window.
pub fn partitions_check<M: SpaceModel>(v: &Scheme<M>, window: &Window) -> Report {
    let mut report = covers_check(v, window);
    let space = v.space();
    for a in window.nodes() {
        let children: Vec<Option<M::Open>> =
            (0..window.breadth()).map(|n| v.try_node(&a.append(n)).ok()).collect();
        let mut clash = None;
        'pairs: for i in 0..children.len() {
            for j in i + 1..children.len() {
                if let (Some(x), Some(y)) = (&children[i], &children[j]) {
                    if !space.is_empty(&space.intersect(x, y)) {
                        clash = Some((i, j));
                        break 'pairs;
                    }
                }
            }
        }
        match clash {
            None => report.pass("partitions.disjoint", Some(&a)),
            Some((i, j)) => report.push(
                "partitions.disjoint",
                Some(&a),
                Status::Violation,
                format!("children {i} and {j} overlap"),
            ),
        }
    }
    report
}

/// `⋂_{k≤n} V_{p↾k}`.
pub fn fruit_approx<M: SpaceModel>(v: &Scheme<M>, p: &BranchRule, n: usize) -> M::Open {
    let space = v.space();
    (1..=n).fold(v.node(&FinSeq::empty()), |acc, k| space.intersect(&acc, &v.node(&p.restrict(k))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BranchProbe {
    pub nonempty: bool,
    /// Largest `ℓ` such that the approximate fruit lies in one cylinder of
    /// length `ℓ`.
    pub precision: usize,
    /// `precision ≥ n`: the fruit is narrowing as fast as the depth grows.
    pub precise_to_depth: bool,
}

/// Finite-depth evidence for a singleton fruit along `p`; never a proof.
pub fn strict_branch_probe(v: &Scheme<BaireSpaceModel>, p: &BranchRule, n: usize) -> BranchProbe {
    let fruit = fruit_approx(v, p, n);
    let Some(w) = cylinders::witness_cylinder(&fruit) else {
        return BranchProbe { nonempty: false, precision: 0, precise_to_depth: false };
    };
    // Any cylinder holding the fruit is S_{w↾ℓ}; S_w ⊆ fruit caps ℓ below lh(w).
    let precision = (0..w.len())
        .rev()
        .find(|&l| cylinders::subset(&fruit, &CylExpr::cylinder(w.restrict(l).unwrap())))
        .unwrap_or(0);
    BranchProbe { nonempty: true, precision, precise_to_depth: precision >= n }
}

/// Searches `b ⊒ a` in fair order (`b = a⌢from_code(i)`, `i < budget`) for a
/// nonempty `V_b ⊆ u`.
pub fn pi_net_probe<M: SpaceModel>(
    v: &Scheme<M>,
    a: &FinSeq,
    u: &M::Open,
    budget: Nat,
) -> Result<Option<FinSeq>, SchemeError> {
    let space = v.space();
    if space.is_empty(&space.intersect(u, &v.try_node(a)?)) {
        return Err(SchemeError::EmptyTarget);
    }
    for i in 0..budget {
        let b = a.concat(&FinSeq::from_code(i));
        let vb = v.try_node(&b)?;
        if !space.is_empty(&vb) && space.subset(&vb, u) {
            return Ok(Some(b));
        }
    }
    Ok(None)
}

/// Window nodes `a` with `x ∈ V_a`, explored downward from the root.
pub fn branches_window<M: SpaceModel>(
    v: &Scheme<M>,
    x: &M::Point,
    window: &Window,
) -> BTreeSet<FinSeq> {
    let mut out = BTreeSet::new();
    let Some(depth) = window.depth() else { return out };
    let mut stack = alloc::vec![FinSeq::empty()];
    while let Some(a) = stack.pop() {
        if !v.space().contains(&v.node(&a), x) {
            continue;
        }
        if a.len() < depth {
            stack.extend((0..window.breadth()).map(|n| a.append(n)));
        }
        out.insert(a);
    }
    out
}

/// At every window node holding `x`, looks for two distinct children
/// `n ≠ m < breadth` that both hold `x`. Nodes where that fails are reported
/// as violations of the splitting premise.
pub fn dense_in_itself_probe<M: SpaceModel>(
    v: &Scheme<M>,
    x: &M::Point,
    window: &Window,
) -> Report {
    let mut report = Report::new();
    if window.is_empty() {
        return report;
    }
    if !v.space().contains(&v.node(&FinSeq::empty()), x) {
        report.push("dense.flesh", None, Status::Breach, "point outside V_⟨⟩");
        return report;
    }
    for a in branches_window(v, x, window) {
        let holders: Vec<Nat> = (0..window.breadth())
            .filter(|&n| v.space().contains(&v.node(&a.append(n)), x))
            .take(2)
            .collect();
        report.expect(
            "dense.split",
            Some(&a),
            holders.len() == 2,
            format!("only {} child(ren) of {a} hold the point", holders.len()),
        );
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{FiniteSpaceModel, PointSet};

    #[test]
    fn standard_scheme_nodes() {
        let s = standard_scheme();
        assert_eq!(s.node(&FinSeq::empty()), CylExpr::Full);
        assert_eq!(s.node(&FinSeq::from([2, 1])), CylExpr::cylinder([2, 1]));
        assert_eq!(s.node(&FinSeq::from([2, 1])), s.node(&FinSeq::from([2, 1])));
        assert_eq!(s.evaluated_nodes(), 2);
    }

    #[test]
    fn standard_scheme_partitions_but_union_is_unresolved() {
        let s = standard_scheme();
        let r = partitions_check(&s, &Window::new(3, 4));
        assert!(r.is_clean());
        assert_eq!(r.count(Status::Unresolved), FinSeq::window(3, 4).len());
        assert_eq!(r.status_at("covers.root", &FinSeq::empty()), Some(Status::Pass));
    }

    #[test]
    fn escaping_child_is_a_hard_violation() {
        let bad = Scheme::from_fn(BaireSpaceModel, |a| {
            if a == &FinSeq::from([0]) {
                CylExpr::cylinder([7])
            } else {
                CylExpr::cylinder(a.clone())
            }
        });
        let bad_root = Scheme::from_fn(BaireSpaceModel, |a| match a.len() {
            0 => CylExpr::cylinder([1]),
            _ => CylExpr::cylinder(a.clone()),
        });
        let r = covers_check(&bad_root, &Window::new(1, 2));
        assert_eq!(r.status_at("covers.root", &FinSeq::empty()), Some(Status::Violation));
        // ⟨0⟩ below a root of S⟨1⟩ escapes as well
        assert_eq!(r.status_at("covers.child_sub", &FinSeq::from([0])), Some(Status::Violation));
        // V_⟨0⟩ = S⟨7⟩ fits under the root but its own children escape it
        let r = covers_check(&bad, &Window::new(1, 2));
        assert_eq!(r.status_at("covers.child_sub", &FinSeq::from([0])), Some(Status::Pass));
        assert_eq!(r.status_at("covers.child_sub", &FinSeq::from([0, 0])), Some(Status::Violation));
        assert!(!r.is_clean());
    }

    #[test]
    fn duplicated_children_overlap() {
        let dup = Scheme::from_fn(BaireSpaceModel, |a| match a.entries() {
            [0] | [1] => CylExpr::cylinder([0]),
            _ => CylExpr::cylinder(a.clone()),
        });
        let r = partitions_check(&dup, &Window::new(0, 3));
        assert_eq!(r.status_at("partitions.disjoint", &FinSeq::empty()), Some(Status::Violation));
    }

    #[test]
    fn finite_scheme_covering_by_pi_base_is_verified() {
        let space = FiniteSpaceModel::sierpinski();
        let sp = space.clone();
        let v = Scheme::from_fn(space.clone(), move |a| {
            a.entries().iter().fold(sp.whole(), |acc, &n| sp.pi_base_member(&acc, n))
        });
        let r = covers_check(&v, &Window::new(3, 3));
        assert!(r.is_clean());
        assert_eq!(r.count(Status::Unresolved), 0);
    }

    #[test]
    fn fruit_of_standard_scheme_is_a_cylinder() {
        let s = standard_scheme();
        let p = BranchRule::from_fn(|i| i as Nat % 3);
        assert_eq!(fruit_approx(&s, &p, 0), CylExpr::Full);
        for n in 0..5 {
            let f = fruit_approx(&s, &p, n);
            assert!(cylinders::equal(&f, &CylExpr::cylinder(p.restrict(n))));
            let probe = strict_branch_probe(&s, &p, n);
            assert!(probe.nonempty);
            assert_eq!(probe.precision, n);
            assert!(probe.precise_to_depth);
        }
    }

    #[test]
    fn constant_full_scheme_never_narrows() {
        let full = Scheme::from_fn(BaireSpaceModel, |_| CylExpr::Full);
        let p = BranchRule::constant(4);
        for n in 0..4 {
            let probe = strict_branch_probe(&full, &p, n);
            assert!(probe.nonempty);
            assert_eq!(probe.precision, 0);
        }
    }

    #[test]
    fn finite_fruit_stabilizes() {
        let space = FiniteSpaceModel::discrete(3);
        let sp = space.clone();
        // V_a = {points ≥ number of 1-entries in a}, empty set excluded by capping.
        let v = Scheme::from_fn(space, move |a| {
            let ones = a.entries().iter().filter(|&&x| x == 1).count().min(2);
            PointSet::from_points(ones..3) & sp.whole()
        });
        let p = BranchRule::constant(1);
        let vals: Vec<PointSet> = (0..6).map(|n| fruit_approx(&v, &p, n)).collect();
        assert_eq!(vals[2], PointSet::singleton(2));
        assert!(vals[2..].iter().all(|&x| x == vals[2]));
        assert!(vals.windows(2).all(|w| w[1].is_subset(w[0])));
    }

    #[test]
    fn pi_net_probe_examples() {
        let s = standard_scheme();
        let found = pi_net_probe(&s, &FinSeq::empty(), &CylExpr::cylinder([4]), 100).unwrap();
        assert_eq!(found, Some(FinSeq::from([4])));
        let found = pi_net_probe(&s, &FinSeq::from([1]), &CylExpr::cylinder([1, 2]), 100).unwrap();
        assert_eq!(found, Some(FinSeq::from([1, 2])));
        assert_eq!(
            pi_net_probe(&s, &FinSeq::from([1]), &CylExpr::cylinder([2]), 100),
            Err(SchemeError::EmptyTarget)
        );
        assert_eq!(pi_net_probe(&s, &FinSeq::empty(), &CylExpr::cylinder([4]), 3), Ok(None));
    }

    #[test]
    fn branches_of_a_point_in_the_standard_scheme() {
        let s = standard_scheme();
        let p = BranchRule::from_fn(|i| (i % 2) as Nat);
        let tree = branches_window(&s, &p, &Window::new(3, 2));
        let expect: BTreeSet<FinSeq> = (0..=3).map(|k| p.restrict(k)).collect();
        assert_eq!(tree, expect);
        let outside = Scheme::from_fn(BaireSpaceModel, |_| CylExpr::cylinder([9]));
        assert!(branches_window(&outside, &p, &Window::new(3, 2)).is_empty());
    }

    #[test]
    fn partitions_never_split_points() {
        let s = standard_scheme();
        let p = BranchRule::constant(1);
        let r = dense_in_itself_probe(&s, &p, &Window::new(2, 3));
        assert!(r.checks.iter().all(|c| c.status == Status::Violation));
        assert_eq!(r.checks.len(), 3);
        assert!(dense_in_itself_probe(&s, &p, &Window::EMPTY).checks.is_empty());
    }

    #[test]
    fn window_membership() {
        let w = Window::new(2, 3);
        assert!(w.contains(&FinSeq::from([2, 2])));
        assert!(!w.contains(&FinSeq::from([3])));
        assert!(!w.contains(&FinSeq::from([0, 0, 0])));
        assert!(Window::EMPTY.nodes().is_empty());
        assert_eq!(Window::new(0, 0).nodes(), [FinSeq::empty()]);
    }
}
