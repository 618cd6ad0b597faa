//! Locally constant surjections `f : ω^ω → X` onto finite spaces, the
//! pushforward scheme `a ↦ f[S_a]`, and exact checks of the image identities
//! a selector satisfies. Also the basic sets `f⁻¹[U] ∩ S_a` of the topology
//! `σ_{τ,f}` and the trivial selector of a strict-branch scheme.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::report::{Report, Status};
use crate::schemes::{fruit_approx, Scheme, Window};
use crate::seq::{BranchRule, FinSeq, Nat};
use crate::space::{FiniteSpaceModel, PointSet};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SelectorError {
    StemLength { stem: FinSeq, depth: usize },
    PointOutOfRange(usize),
    NotSurjective(usize),
    EmptyBasic,
    EmptyFruit,
    NotStrict(PointSet),
}

impl fmt::Display for SelectorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectorError::StemLength { stem, depth } => write!(f, "stem {stem} does not have length {depth}"),
            SelectorError::PointOutOfRange(x) => write!(f, "point {x} is not in the target"),
            SelectorError::NotSurjective(x) => write!(f, "point {x} has no preimage"),
            SelectorError::EmptyBasic => f.write_str("the basic set is empty"),
            SelectorError::EmptyFruit => f.write_str("the fruit is empty"),
            SelectorError::NotStrict(s) => write!(f, "the fruit {s} is not a singleton"),
        }
    }
}

/// `f(p)` depends only on `p↾depth`: listed stems map by the table, every
/// other stem (in particular any stem with an entry `≥ alphabet`) maps to
/// `default`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixMap {
    target: FiniteSpaceModel,
    depth: usize,
    table: BTreeMap<FinSeq, usize>,
    default: usize,
    /// One more than the largest entry of a listed stem.
    alphabet: Nat,
}

impl PrefixMap {
    pub fn new(
        target: FiniteSpaceModel,
        depth: usize,
        table: impl IntoIterator<Item = (FinSeq, usize)>,
        default: usize,
    ) -> Result<Self, SelectorError> {
        let table: BTreeMap<FinSeq, usize> = table.into_iter().collect();
        let n = target.points();
        for (stem, &x) in &table {
            if stem.len() != depth {
                return Err(SelectorError::StemLength { stem: stem.clone(), depth });
            }
            if x >= n {
                return Err(SelectorError::PointOutOfRange(x));
            }
        }
        if default >= n {
            return Err(SelectorError::PointOutOfRange(default));
        }
        let alphabet = table.keys().flat_map(|s| s.entries().iter().copied()).max().map_or(0, |m| m + 1);
        let map = PrefixMap { target, depth, table, default, alphabet };
        let hit = map.image(&FinSeq::empty());
        if let Some(x) = (0..n).find(|&x| !hit.contains(x)) {
            return Err(SelectorError::NotSurjective(x));
        }
        Ok(map)
    }

    pub fn target(&self) -> &FiniteSpaceModel {
        &self.target
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn table(&self) -> &BTreeMap<FinSeq, usize> {
        &self.table
    }

    pub fn default_point(&self) -> usize {
        self.default
    }

    /// Entries `< alphabet` are named; `alphabet` itself stands for every
    /// larger value.
    pub fn alphabet(&self) -> Nat {
        self.alphabet
    }

    /// `f` on any branch extending `stem`; `stem` must have length `≥ depth`.
    pub fn resolve(&self, stem: &FinSeq) -> usize {
        assert!(stem.len() >= self.depth, "stem {stem} is shorter than the table depth");
        let key = FinSeq::from(&stem.entries()[..self.depth]);
        self.table.get(&key).copied().unwrap_or(self.default)
    }

    pub fn apply(&self, p: &BranchRule) -> usize {
        self.resolve(&p.restrict(self.depth))
    }

    /// Representatives of the stems `c ⊒ a` of length `max(depth, lh(a))`,
    /// one per equivalence class under `f`-relevant entries.
    fn completions(&self, a: &FinSeq) -> Vec<FinSeq> {
        let mut out = alloc::vec![a.clone()];
        for _ in a.len()..self.depth {
            out = out.iter().flat_map(|c| (0..=self.alphabet).map(move |x| c.append(x))).collect();
        }
        out
    }

    /// `f[S_a]` by enumerating completions.
    pub fn image(&self, a: &FinSeq) -> PointSet {
        PointSet::from_points(self.completions(a).iter().map(|c| self.resolve(c)))
    }

    /// `f[f⁻¹[u] ∩ S_a]`, through the classes of `f⁻¹[u] ∩ S_a`.
    pub fn image_of_preimage(&self, u: PointSet, a: &FinSeq) -> PointSet {
        let preimage: Vec<FinSeq> = self.completions(a).into_iter().filter(|c| u.contains(self.resolve(c))).collect();
        PointSet::from_points(preimage.iter().map(|c| self.resolve(c)))
    }

    /// Small named maps used by the selector suite.
    pub fn presets() -> Vec<(&'static str, PrefixMap)> {
        let two = FiniteSpaceModel::discrete(2);
        let three = FiniteSpaceModel::new(
            3,
            [0b000, 0b001, 0b011, 0b111].map(PointSet),
        )
        .expect("chain topology");
        alloc::vec![
            ("split", PrefixMap::new(two, 1, [(FinSeq::from([0]), 0)], 1).expect("preset")),
            (
                "sierpinski",
                PrefixMap::new(FiniteSpaceModel::sierpinski(), 1, [(FinSeq::from([0]), 1)], 0).expect("preset"),
            ),
            (
                "chain",
                PrefixMap::new(
                    three,
                    2,
                    [(FinSeq::from([0, 0]), 0), (FinSeq::from([0, 1]), 1), (FinSeq::from([1, 0]), 2)],
                    1,
                )
                .expect("preset"),
            ),
        ]
    }
}

/// `a ↦ f[S_a]`: a singleton at `lh(a) ≥ depth`, the union of the children
/// `0..=alphabet` above it.
pub fn pushforward_scheme(f: PrefixMap) -> Scheme<FiniteSpaceModel> {
    let space = f.target.clone();
    Scheme::new(space, move |v, a| {
        if a.len() >= f.depth {
            return Ok(PointSet::singleton(f.resolve(a)));
        }
        (0..=f.alphabet).try_fold(PointSet::EMPTY, |acc, n| Ok(acc | v.try_node(&a.append(n))?))
    })
}

/// `f[S_a] = V_a` at every window node.
pub fn selector_identity_check(f: &PrefixMap, v: &Scheme<FiniteSpaceModel>, window: &Window) -> Report {
    let mut report = Report::new();
    for a in window.nodes() {
        match v.try_node(&a) {
            Ok(va) => {
                let fa = f.image(&a);
                report.expect("selector.identity", Some(&a), fa == va, format!("f[S_{a}] = {fa}, V_{a} = {va}"));
            }
            Err(e) => report.push("selector.identity", Some(&a), Status::Violation, format!("{e}")),
        }
    }
    report
}

/// `f[f⁻¹[u] ∩ S_a] = u ∩ f[S_a]`.
pub fn image_identity_check(f: &PrefixMap, u: PointSet, a: &FinSeq) -> Report {
    let mut report = Report::new();
    let lhs = f.image_of_preimage(u, a);
    let rhs = u & f.image(a);
    if lhs == rhs {
        report.pass("image.identity", Some(a));
    } else {
        report.push("image.identity", Some(a), Status::Violation, format!("f[f⁻¹[{u}] ∩ S_{a}] = {lhs}, {u} ∩ f[S_{a}] = {rhs}"));
    }
    report
}

/// Every window node `a` whose `V_a` holds `x` has a stem `c ⊒ a` with
/// `f(c) = x`.
pub fn fiber_density_check(f: &PrefixMap, v: &Scheme<FiniteSpaceModel>, window: &Window) -> Report {
    let mut report = Report::new();
    for a in window.nodes() {
        let va = v.node(&a);
        let reached = PointSet::from_points(f.completions(&a).iter().map(|c| f.resolve(c)));
        let missing: Vec<usize> = va.points().filter(|&x| !reached.contains(x)).collect();
        report.expect("selector.fiber", Some(&a), missing.is_empty(), format!("no stem above {a} maps to {missing:?}"));
    }
    report
}

/// `f⁻¹[u] ∩ S_a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaBasic {
    pub u: PointSet,
    pub a: FinSeq,
}

impl SigmaBasic {
    pub fn new(u: PointSet, a: FinSeq) -> Self {
        SigmaBasic { u, a }
    }

    pub fn is_empty(&self, f: &PrefixMap) -> bool {
        (self.u & f.image(&self.a)).is_empty()
    }

    pub fn contains(&self, f: &PrefixMap, p: &BranchRule) -> bool {
        self.a.is_prefix_of_branch(p) && self.u.contains(f.apply(p))
    }

    /// Whether every branch through `c` lies in the set; `c` must have
    /// length `≥ depth`.
    pub fn contains_stem(&self, f: &PrefixMap, c: &FinSeq) -> bool {
        self.a.is_prefix_of(c) && self.u.contains(f.resolve(c))
    }
}

/// `(u₁ ∩ u₂, longer of a₁, a₂)` for comparable stems; `None` (the empty
/// set) otherwise.
pub fn sigma_basic_intersect(b1: &SigmaBasic, b2: &SigmaBasic) -> Option<SigmaBasic> {
    if !b1.a.comparable(&b2.a) {
        return None;
    }
    let a = if b1.a.len() >= b2.a.len() { b1.a.clone() } else { b2.a.clone() };
    Some(SigmaBasic { u: b1.u & b2.u, a })
}

/// First `c = a⌢from_code(i)`, `i < budget`, with `f[S_c] ⊆ u`, so that
/// `S_c ⊆ f⁻¹[u] ∩ S_a`.
pub fn pi_space_probe(f: &PrefixMap, b: &SigmaBasic, budget: Nat) -> Result<Option<FinSeq>, SelectorError> {
    if b.is_empty(f) {
        return Err(SelectorError::EmptyBasic);
    }
    Ok((0..budget)
        .map(|i| b.a.concat(&FinSeq::from_code(i)))
        .find(|c| f.image(c).is_subset(b.u)))
}

/// The point of the fruit of `p` in a strict-branch scheme, read off at
/// `horizon`.
pub fn trivial_selector(v: &Scheme<FiniteSpaceModel>, p: &BranchRule, horizon: usize) -> Result<usize, SelectorError> {
    let fruit = fruit_approx(v, p, horizon);
    match fruit.len() {
        0 => Err(SelectorError::EmptyFruit),
        1 => Ok(fruit.points().next().expect("one point")),
        _ => Err(SelectorError::NotStrict(fruit)),
    }
}

/// Runs [`image_identity_check`] for every subset `u` of the target's points
/// and every window node.
pub fn image_identity_window(f: &PrefixMap, window: &Window) -> Report {
    let mut report = Report::new();
    let n = f.target().points();
    for bits in 0..(1u64 << n) {
        for a in window.nodes() {
            report.extend(image_identity_check(f, PointSet(bits), &a));
        }
    }
    report
}

/// Every nonempty basic `(u, a)` with `u` open and `a` in the window gets a
/// probe hit below `budget`.
pub fn pi_space_window(f: &PrefixMap, window: &Window, budget: Nat) -> Report {
    let mut report = Report::new();
    for a in window.nodes() {
        for &u in f.target().opens() {
            let b = SigmaBasic::new(u, a.clone());
            if b.is_empty(f) {
                continue;
            }
            match pi_space_probe(f, &b, budget) {
                Ok(Some(_)) => report.pass("selector.pi_space", Some(&a)),
                Ok(None) => report.push("selector.pi_space", Some(&a), Status::Violation, format!("no hit for {u} below {budget}")),
                Err(e) => report.push("selector.pi_space", Some(&a), Status::Violation, format!("{e}")),
            }
        }
    }
    report
}

/// Every surjective prefix map onto `target` with the given depth whose table
/// lists all stems over `{0, …, alphabet−1}`, in a fixed order.
pub fn all_prefix_maps(target: &FiniteSpaceModel, depth: usize, alphabet: Nat) -> Vec<PrefixMap> {
    let stems = FinSeq::window(depth, alphabet).into_iter().filter(|s| s.len() == depth).collect::<Vec<_>>();
    let n = target.points() as u64;
    let slots = stems.len() as u32 + 1;
    let mut out = Vec::new();
    for code in 0..n.pow(slots) {
        let mut rest = code;
        let mut digit = || {
            let d = (rest % n) as usize;
            rest /= n;
            d
        };
        let table: Vec<(FinSeq, usize)> = stems.iter().map(|s| (s.clone(), digit())).collect();
        let default = digit();
        if let Ok(f) = PrefixMap::new(target.clone(), depth, table, default) {
            out.push(f);
        }
    }
    out
}

/// One-line rendering of the table, for diagnostics.
pub fn describe(f: &PrefixMap) -> String {
    let rows: Vec<String> = f.table.iter().map(|(s, x)| format!("{s}→{x}")).collect();
    format!("depth {} [{}] default {}", f.depth, rows.join(", "), f.default)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinders::{self, CylExpr};

    fn split() -> PrefixMap {
        PrefixMap::new(FiniteSpaceModel::discrete(2), 1, [(FinSeq::from([0]), 0)], 1).unwrap()
    }

    #[test]
    fn pushforward_nodes_by_table_lookup() {
        let v = pushforward_scheme(split());
        assert_eq!(v.node(&FinSeq::empty()), PointSet::from_points([0, 1]));
        assert_eq!(v.node(&FinSeq::from([0])), PointSet::singleton(0));
        assert_eq!(v.node(&FinSeq::from([7])), PointSet::singleton(1));
        for a in FinSeq::window(3, 3) {
            for n in 0..3 {
                assert!(v.node(&a.append(n)).is_subset(v.node(&a)));
            }
        }
        let r = crate::schemes::covers_check(&v, &Window::new(2, 3));
        assert!(r.is_clean());
        assert_eq!(r.count(Status::Unresolved), 0);
    }

    #[test]
    fn non_surjective_table_is_rejected() {
        let e = PrefixMap::new(FiniteSpaceModel::discrete(3), 1, [(FinSeq::from([0]), 0)], 1);
        assert_eq!(e, Err(SelectorError::NotSurjective(2)));
        let e = PrefixMap::new(FiniteSpaceModel::discrete(2), 2, [(FinSeq::from([0]), 0)], 1);
        assert!(matches!(e, Err(SelectorError::StemLength { .. })));
    }

    #[test]
    fn selector_identity_and_enlarged_node() {
        let f = split();
        let v = pushforward_scheme(f.clone());
        assert!(selector_identity_check(&f, &v, &Window::new(2, 3)).is_clean());
        assert_eq!(selector_identity_check(&f, &v, &Window::new(0, 3)).checks.len(), 1);
        let enlarged = Scheme::from_fn(f.target().clone(), |a| {
            if *a == FinSeq::from([0]) {
                PointSet::from_points([0, 1])
            } else {
                PrefixMap::new(FiniteSpaceModel::discrete(2), 1, [(FinSeq::from([0]), 0)], 1).unwrap().image(a)
            }
        });
        let r = selector_identity_check(&f, &enlarged, &Window::new(1, 3));
        assert_eq!(r.status_at("selector.identity", &FinSeq::from([0])), Some(Status::Violation));
        assert_eq!(r.hard_failures().count(), 1);
    }

    #[test]
    fn image_identity_edge_cases() {
        let f = split();
        let a = FinSeq::from([3]);
        let whole = PointSet::all(2);
        assert_eq!(f.image_of_preimage(whole, &a), f.image(&a));
        assert!(image_identity_check(&f, whole, &a).is_clean());
        assert_eq!(f.image_of_preimage(PointSet::EMPTY, &a), PointSet::EMPTY);
        assert!(image_identity_check(&f, PointSet::EMPTY, &a).is_clean());
    }

    #[test]
    fn image_identity_small_exhaustive() {
        for n in 1..=3 {
            let target = FiniteSpaceModel::discrete(n);
            for depth in 0..=2 {
                for f in all_prefix_maps(&target, depth, 2) {
                    let r = image_identity_window(&f, &Window::new(depth + 1, 3));
                    assert!(r.is_clean(), "{}", describe(&f));
                }
            }
        }
    }

    #[test]
    fn sigma_basic_intersections() {
        let f = split();
        let u = PointSet::singleton(1);
        let whole = PointSet::all(2);
        let got = sigma_basic_intersect(&SigmaBasic::new(u, FinSeq::empty()), &SigmaBasic::new(whole, FinSeq::from([1])));
        assert_eq!(got, Some(SigmaBasic::new(u, FinSeq::from([1]))));
        assert_eq!(
            sigma_basic_intersect(&SigmaBasic::new(u, FinSeq::from([0])), &SigmaBasic::new(u, FinSeq::from([1]))),
            None
        );
        let b1 = SigmaBasic::new(whole, FinSeq::from([0]));
        let b2 = SigmaBasic::new(PointSet::singleton(0), FinSeq::from([0, 1]));
        let b = sigma_basic_intersect(&b1, &b2).unwrap();
        assert_eq!(b, SigmaBasic::new(PointSet::singleton(0), FinSeq::from([0, 1])));
        for c in FinSeq::window(3, 3).into_iter().filter(|c| c.len() == 3) {
            let both = b1.contains_stem(&f, &c) && b2.contains_stem(&f, &c);
            assert_eq!(b.contains_stem(&f, &c), both, "{c}");
        }
        // the stem part agrees with the cylinder algebra
        let cyl = CylExpr::cylinder(b1.a.clone()).intersect(CylExpr::cylinder(b2.a.clone()));
        assert!(cylinders::equal(&cyl, &CylExpr::cylinder(b.a.clone())));
    }

    #[test]
    fn pi_space_probe_examples() {
        let f = split();
        let y = PointSet::singleton(1);
        assert_eq!(pi_space_probe(&f, &SigmaBasic::new(y, FinSeq::empty()), 50), Ok(Some(FinSeq::from([1]))));
        let a = FinSeq::from([0, 4]);
        assert_eq!(pi_space_probe(&f, &SigmaBasic::new(PointSet::all(2), a.clone()), 50), Ok(Some(a)));
        assert_eq!(pi_space_probe(&f, &SigmaBasic::new(y, FinSeq::empty()), 0), Ok(None));
        assert_eq!(
            pi_space_probe(&f, &SigmaBasic::new(y, FinSeq::from([0])), 50),
            Err(SelectorError::EmptyBasic)
        );
    }

    #[test]
    fn presets_are_pi_spaces_within_budget() {
        for (name, f) in PrefixMap::presets() {
            let r = pi_space_window(&f, &Window::new(2, f.alphabet() + 1), 50);
            assert!(r.is_clean(), "{name}: {:?}", r.hard_failures().next());
        }
    }

    #[test]
    fn trivial_selector_agrees_with_the_map() {
        for (_, f) in PrefixMap::presets() {
            let v = pushforward_scheme(f.clone());
            for a in FinSeq::window(f.depth(), f.alphabet() + 1).into_iter().filter(|a| a.len() == f.depth()) {
                let p = BranchRule::extending(&a, 0);
                assert_eq!(trivial_selector(&v, &p, f.depth()), Ok(f.apply(&p)));
            }
            assert!(fiber_density_check(&f, &v, &Window::new(2, 3)).is_clean());
        }
        let fat = Scheme::from_fn(FiniteSpaceModel::discrete(2), |_| PointSet::all(2));
        let p = BranchRule::constant(0);
        assert_eq!(trivial_selector(&fat, &p, 3), Err(SelectorError::NotStrict(PointSet::all(2))));
    }

    #[test]
    fn fiber_density_flags_unreachable_points() {
        let f = split();
        let wrong = Scheme::from_fn(f.target().clone(), |_| PointSet::all(2));
        let r = fiber_density_check(&f, &wrong, &Window::new(1, 2));
        assert_eq!(r.status_at("selector.fiber", &FinSeq::from([0])), Some(Status::Violation));
    }
}
