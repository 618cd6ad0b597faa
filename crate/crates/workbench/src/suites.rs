//! The verification suites behind `souslin verify`. Every randomized section
//! draws from a ChaCha stream seeded by `(seed, section)`, so a report is a
//! function of the run configuration alone.

use std::collections::BTreeSet;
use std::fmt;
use std::rc::Rc;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use souslin_core::choquet::{
    copy_strategy, cylinder_length_audit, cylinder_strategy, exhaustive_finite_check, extract_schemes,
    extraction_check, modify_strategy, remove_redundant, run_game, FnI, GameError, GameHistory, StrategyII,
};
use souslin_core::cylinders::{self, nd_witness, trace_window, CylExpr, NdTree};
use souslin_core::lusin::{build_lusin, LusinInput};
use souslin_core::schemes::{
    dense_in_itself_probe, fruit_approx, perm_identity_check, standard_scheme, transform_g, vg_window_checks,
};
use souslin_core::selectors::{
    all_prefix_maps, describe, fiber_density_check, image_identity_window, pi_space_window, pushforward_scheme,
    selector_identity_check, sigma_basic_intersect, PrefixMap, SigmaBasic,
};
use souslin_core::{
    BaireSpaceModel, BranchRule, FinSeq, FiniteSpaceModel, Nat, NatMap, PointSet, Scheme, SpaceModel, Status,
    Window,
};

use crate::tally::{Counts, Finding, Tally};

pub const MAX_DEPTH: usize = 8;
pub const MAX_BREADTH: Nat = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum SuiteName {
    CylindersOracle,
    SchemesVg,
    Lusin,
    ChoquetFinite,
    ChoquetExtract,
    Selectors,
}

impl SuiteName {
    pub const ALL: [SuiteName; 6] = [
        SuiteName::CylindersOracle,
        SuiteName::SchemesVg,
        SuiteName::Lusin,
        SuiteName::ChoquetFinite,
        SuiteName::ChoquetExtract,
        SuiteName::Selectors,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SuiteName::CylindersOracle => "cylinders-oracle",
            SuiteName::SchemesVg => "schemes-vg",
            SuiteName::Lusin => "lusin",
            SuiteName::ChoquetFinite => "choquet-finite",
            SuiteName::ChoquetExtract => "choquet-extract",
            SuiteName::Selectors => "selectors",
        }
    }

    /// `(depth, breadth)` used when the flags are absent.
    pub fn default_window(self) -> (usize, Nat) {
        match self {
            SuiteName::CylindersOracle => (3, 3),
            SuiteName::SchemesVg => (3, 6),
            SuiteName::Lusin => (4, 6),
            SuiteName::ChoquetFinite => (4, 4),
            SuiteName::ChoquetExtract => (3, 4),
            SuiteName::Selectors => (2, 2),
        }
    }
}

impl fmt::Display for SuiteName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SuiteName {
    type Err = ConfigError;

    fn from_str(s: &str) -> Result<Self, ConfigError> {
        SuiteName::ALL
            .into_iter()
            .find(|n| n.as_str() == s)
            .ok_or_else(|| ConfigError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("unknown suite \"{0}\" (expected one of cylinders-oracle, schemes-vg, lusin, choquet-finite, choquet-extract, selectors)")]
    UnknownSuite(String),
    #[error("depth {0} exceeds the limit {MAX_DEPTH}")]
    DepthTooLarge(usize),
    #[error("breadth {0} exceeds the limit {MAX_BREADTH}")]
    BreadthTooLarge(Nat),
    #[error("unknown strategy \"{0}\" (expected copy or cylinder)")]
    UnknownStrategy(String),
    #[error("{0}")]
    Space(String),
    #[error("{0}")]
    Invalid(String),
}

/// `baire`, `sierpinski`, `discrete:N`, or a JSON file `{points, opens}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpaceSpec {
    Baire,
    Finite(FiniteSpaceModel),
}

impl SpaceSpec {
    pub fn parse(text: &str) -> Result<SpaceSpec, ConfigError> {
        match text {
            "baire" => return Ok(SpaceSpec::Baire),
            "sierpinski" => return Ok(SpaceSpec::Finite(FiniteSpaceModel::sierpinski())),
            _ => {}
        }
        if let Some(n) = text.strip_prefix("discrete:") {
            let n: usize = n.parse().map_err(|_| ConfigError::Space(format!("bad point count in \"{text}\"")))?;
            if !(1..=16).contains(&n) {
                return Err(ConfigError::Space(format!("discrete spaces need 1 to 16 points, not {n}")));
            }
            return Ok(SpaceSpec::Finite(FiniteSpaceModel::discrete(n)));
        }
        let json = crate::formats::read_json(std::path::Path::new(text)).map_err(|e| ConfigError::Space(e.to_string()))?;
        crate::formats::space_from_json(&json).map(SpaceSpec::Finite).map_err(|e| ConfigError::Space(e.to_string()))
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub suite: SuiteName,
    pub depth: usize,
    pub breadth: Nat,
    pub seed: u64,
    pub space: Option<SpaceSpec>,
}

impl RunConfig {
    pub fn new(suite: SuiteName) -> Self {
        let (depth, breadth) = suite.default_window();
        RunConfig { suite, depth, breadth, seed: 1, space: None }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.depth > MAX_DEPTH {
            return Err(ConfigError::DepthTooLarge(self.depth));
        }
        if self.breadth > MAX_BREADTH {
            return Err(ConfigError::BreadthTooLarge(self.breadth));
        }
        if self.breadth == 0 {
            return Err(ConfigError::Invalid("breadth must be positive".into()));
        }
        Ok(())
    }

    fn window(&self) -> Window {
        Window::new(self.depth, self.breadth)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub seed: u64,
    pub depth: usize,
    pub breadth: Nat,
    pub passed: bool,
    pub total: Counts,
    pub summary: std::collections::BTreeMap<String, Counts>,
    pub findings: Vec<Finding>,
}

impl SuiteReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

pub fn run_suite(config: &RunConfig) -> Result<SuiteReport, ConfigError> {
    config.validate()?;
    let seed = config.seed;
    let window = config.window();
    let mut t = Tally::new();
    match config.suite {
        SuiteName::CylindersOracle => {
            t.merge(oracle_equivalence(seed, 600, config.depth, config.breadth));
            t.merge(nd_witness_suite(seed, 100));
        }
        SuiteName::SchemesVg => t.merge(vg_suite(seed, &window, 64)),
        SuiteName::Lusin => t.merge(lusin_suite(&window)),
        SuiteName::ChoquetFinite => {
            t.merge(paper_example());
            let spaces = finite_spaces(config, 4)?;
            t.merge(modified_wins(&spaces, config.depth));
            t.merge(random_play_legality(seed, &spaces, 200, config.depth.max(1)));
        }
        SuiteName::ChoquetExtract => {
            match &config.space {
                Some(SpaceSpec::Baire) => {}
                _ => t.merge(extraction_finite(&finite_spaces(config, 4)?, &window)),
            }
            if !matches!(config.space, Some(SpaceSpec::Finite(_))) {
                t.merge(extraction_baire(seed, 20, 6));
            }
        }
        SuiteName::Selectors => t.merge(selector_suite(seed, config.depth.min(2))),
    }
    let total = t.total();
    Ok(SuiteReport {
        suite: config.suite.as_str(),
        seed,
        depth: config.depth,
        breadth: config.breadth,
        passed: total.hard() == 0,
        total,
        summary: t.counts,
        findings: t.findings,
    })
}

fn finite_spaces(config: &RunConfig, max_points: usize) -> Result<Vec<FiniteSpaceModel>, ConfigError> {
    match &config.space {
        Some(SpaceSpec::Finite(s)) => Ok(vec![s.clone()]),
        Some(SpaceSpec::Baire) => Err(ConfigError::Space("this suite needs a finite space".into())),
        None => Ok(all_spaces(max_points)),
    }
}

/// Every topology on `1..=max_points` points.
pub fn all_spaces(max_points: usize) -> Vec<FiniteSpaceModel> {
    (1..=max_points).flat_map(FiniteSpaceModel::all_topologies).collect()
}

fn rng_for(seed: u64, section: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ section)
}

pub fn random_stem(rng: &mut impl Rng, max_len: usize, bound: Nat) -> FinSeq {
    let len = rng.gen_range(0..=max_len);
    FinSeq::from((0..len).map(|_| rng.gen_range(0..bound)).collect::<Vec<_>>())
}

/// A random expression with `1..=max_atoms` leaves over stems of length
/// `≤ max_len` with entries `< bound`.
pub fn random_expr(rng: &mut impl Rng, max_atoms: usize, max_len: usize, bound: Nat) -> CylExpr {
    fn grow(rng: &mut impl Rng, atoms: usize, max_len: usize, bound: Nat) -> CylExpr {
        if atoms <= 1 {
            return match rng.gen_range(0..10) {
                0 => CylExpr::Empty,
                1 => CylExpr::Full,
                _ => CylExpr::cylinder(random_stem(rng, max_len, bound)),
            };
        }
        let left = rng.gen_range(1..atoms);
        let a = grow(rng, left, max_len, bound);
        let b = grow(rng, atoms - left, max_len, bound);
        match rng.gen_range(0..3) {
            0 => a.union(b),
            1 => a.intersect(b),
            _ => a.minus(b),
        }
    }
    let atoms = rng.gen_range(1..=max_atoms);
    grow(rng, atoms, max_len, bound)
}

fn random_branch(rng: &mut impl Rng, bound: Nat) -> BranchRule {
    let head = random_stem(rng, 5, bound);
    BranchRule::extending(&head, rng.gen_range(0..bound))
}

struct Oracle {
    depth: usize,
    breadth: Nat,
}

impl Oracle {
    fn trace(&self, e: &CylExpr) -> BTreeSet<FinSeq> {
        trace_window(e, self.depth, self.breadth).expect("generated mentions fit the oracle window")
    }

    fn holds(&self, e: &CylExpr, p: &BranchRule) -> bool {
        let word = cylinders::clamp_to_window(&p.restrict(self.depth), self.depth, self.breadth);
        self.trace(e).contains(&word)
    }
}

/// `is_empty`, `subset` and `contains_branch` against the window oracle on
/// `random` random expressions plus every atom and binary combination over
/// stems of length `≤ 2` with entries `< 2`.
pub fn oracle_equivalence(seed: u64, random: usize, max_len: usize, bound: Nat) -> Tally {
    let mut rng = rng_for(seed, 1);
    let oracle = Oracle { depth: max_len, breadth: bound };
    let mut t = Tally::new();
    let check = |t: &mut Tally, e: &CylExpr, f: &CylExpr, p: &BranchRule| {
        let (te, tf) = (oracle.trace(e), oracle.trace(f));
        t.check("oracle.is_empty", cylinders::is_empty(e) == te.is_empty(), || e.to_string());
        t.check("oracle.subset", cylinders::subset(e, f) == te.is_subset(&tf), || format!("{e} ⊆ {f}"));
        t.check("oracle.contains", e.contains_branch(p) == oracle.holds(e, p), || {
            format!("{e} ∋ {}", p.restrict(max_len + 2))
        });
    };

    let exprs: Vec<CylExpr> = (0..random).map(|_| random_expr(&mut rng, 4, max_len, bound)).collect();
    for (i, e) in exprs.iter().enumerate() {
        let f = &exprs[(i + 1) % exprs.len()];
        for _ in 0..3 {
            let p = random_branch(&mut rng, bound + 3);
            check(&mut t, e, f, &p);
        }
    }

    let stems = FinSeq::window(2.min(max_len), 2.min(bound));
    let mut grid: Vec<CylExpr> = stems.iter().cloned().map(CylExpr::cylinder).collect();
    for a in &stems {
        for b in &stems {
            let (x, y) = (CylExpr::cylinder(a.clone()), CylExpr::cylinder(b.clone()));
            grid.push(x.clone().union(y.clone()));
            grid.push(x.clone().intersect(y.clone()));
            grid.push(x.minus(y));
        }
    }
    let words: Vec<BranchRule> = FinSeq::window(max_len, bound + 1)
        .into_iter()
        .filter(|w| w.len() == max_len)
        .map(|w| BranchRule::extending(&w, 0))
        .collect();
    let traces: Vec<BTreeSet<FinSeq>> = grid.iter().map(|e| oracle.trace(e)).collect();
    for (i, e) in grid.iter().enumerate() {
        t.check("oracle.grid.is_empty", cylinders::is_empty(e) == traces[i].is_empty(), || e.to_string());
        for (j, f) in grid.iter().enumerate() {
            t.check("oracle.grid.subset", cylinders::subset(e, f) == traces[i].is_subset(&traces[j]), || {
                format!("{e} ⊆ {f}")
            });
        }
        for p in &words {
            t.check("oracle.grid.contains", e.contains_branch(p) == oracle.holds(e, p), || {
                format!("{e} ∋ {}", p.restrict(max_len))
            });
        }
    }
    t
}

/// `nd_witness` on random nonempty `U` and pruned trees `T`; the answer `c`
/// is checked by enumerating a window that covers `c`, `U` and `T`.
pub fn nd_witness_suite(seed: u64, pairs: usize) -> Tally {
    let mut rng = rng_for(seed, 8);
    let mut t = Tally::new();
    for _ in 0..pairs {
        let u = loop {
            let e = random_expr(&mut rng, 4, 3, 3);
            if !cylinders::is_empty(&e) {
                break e;
            }
        };
        let beta = rng.gen_range(1..=3);
        let forbidden: BTreeSet<FinSeq> = (0..rng.gen_range(0..4))
            .map(|_| {
                let len = rng.gen_range(1..=2);
                FinSeq::from((0..len).map(|_| rng.gen_range(0..beta)).collect::<Vec<_>>())
            })
            .collect();
        let tree = NdTree::pruned(beta, forbidden.clone(), 4);
        let context = || format!("U = {u}, β = {beta}, pruned at {forbidden:?}");
        t.check("nd.shape", tree.check_shape().is_ok(), context);
        let c = match nd_witness(&u, &tree) {
            Ok(c) => c,
            Err(e) => {
                t.record("nd.witness", context, Status::Violation, || e.to_string());
                continue;
            }
        };
        let depth = c.len().max(3) + 1;
        let breadth = c.entries().iter().copied().max().map_or(0, |m| m + 1).max(3).max(beta);
        let sc = trace_window(&CylExpr::cylinder(c.clone()), depth, breadth).expect("window covers c");
        let tu = trace_window(&u, depth, breadth).expect("window covers U");
        t.check("nd.inside", sc.is_subset(&tu), || format!("{}: S_{c} ⊄ U", context()));
        t.check("nd.avoids", sc.iter().all(|w| !tree.admits_path(w)), || format!("{}: S_{c} meets [T]", context()));
    }
    t
}

/// Replies with the smallest nonempty open inside `U` and remembers the
/// histories it is consulted with.
struct Recorder(std::cell::RefCell<Vec<GameHistory<PointSet>>>);

impl StrategyII<FiniteSpaceModel> for Recorder {
    fn reply(&self, space: &FiniteSpaceModel, s: &GameHistory<PointSet>, u: &PointSet) -> Result<PointSet, GameError> {
        self.0.borrow_mut().push(s.clone());
        Ok(space.nonempty_opens_within(*u).min_by_key(|o| o.len()).expect("U is nonempty"))
    }

    fn name(&self) -> String {
        "smallest".into()
    }
}

/// The worked example of redundant-pair removal and each clause of `Γ′`.
pub fn paper_example() -> Tally {
    let mut t = Tally::new();
    let x = PointSet::all(3);
    let y = PointSet::from_points([0, 1]);
    let z = PointSet::singleton(0);
    let space = FiniteSpaceModel::new(3, [PointSet::EMPTY, z, y, x]).expect("chain topology");
    let s = GameHistory::from_pairs(vec![(x, x), (x, x), (y, y), (y, y), (z, z)]);
    let f = remove_redundant(&space, &s);
    let ctx = || "X ⊃ Y ⊃ Z on three points".to_string();
    t.check("paper.f_example", f.as_ref().is_ok_and(|f| f.pairs() == [(y, y), (z, z)]), ctx);
    t.check(
        "paper.f_idempotent",
        f.as_ref().is_ok_and(|f| remove_redundant(&space, f).as_ref() == Ok(f)),
        ctx,
    );

    let g = modify_strategy(Recorder(Default::default()));
    let empty = GameHistory::new();
    t.check("paper.clause_whole", g.reply(&space, &empty, &x) == Ok(x), || "Γ′(⟨⟩, X)".into());
    t.check("paper.clause_whole", g.inner().0.borrow().is_empty(), || "Γ consulted for X".into());
    t.check("paper.clause_first", g.reply(&space, &empty, &y) == Ok(z), || "Γ′(⟨⟩, Y)".into());
    let s = GameHistory::from_pairs(vec![(x, x), (x, x), (y, y)]);
    let before = g.inner().0.borrow().len();
    t.check("paper.clause_echo", g.reply(&space, &s, &y) == Ok(y), || "U_{n+1} = V_n".into());
    t.check("paper.clause_echo", g.inner().0.borrow().len() == before, || "Γ consulted on echo".into());
    t.check("paper.clause_delegate", g.reply(&space, &s, &z) == Ok(z), || "U_{n+1} ⊊ V_n".into());
    let seen = g.inner().0.borrow().last().cloned();
    t.check("paper.clause_delegate", seen.is_some_and(|h| h.pairs() == [(y, y)]), || {
        "Γ must see f(s) = ⟨⟨Y,Y⟩⟩".into()
    });
    t
}

/// `Γ′` of the copy strategy against every legal script of length
/// `≤ max_len` on each space.
pub fn modified_wins(spaces: &[FiniteSpaceModel], max_len: usize) -> Tally {
    let mut t = Tally::new();
    let gamma = modify_strategy(copy_strategy());
    for space in spaces {
        t.absorb(&exhaustive_finite_check(space, &gamma, max_len), || format!("{space:?}"));
    }
    t
}

/// Random player I against `Γ′` of copy: every reply is legal, and on
/// non-echo moves `Γ′` agrees with copy.
pub fn random_play_legality(seed: u64, spaces: &[FiniteSpaceModel], games: usize, rounds: usize) -> Tally {
    let mut rng = rng_for(seed, 3);
    let mut t = Tally::new();
    let gamma = modify_strategy(copy_strategy());
    for _ in 0..games {
        let space = spaces.choose(&mut rng).expect("at least one space").clone();
        let mut i = FnI(|space: &FiniteSpaceModel, s: &GameHistory<PointSet>| {
            let within = s.last_v().copied().unwrap_or_else(|| space.whole());
            let options: Vec<PointSet> = space.nonempty_opens_within(within).collect();
            *options.choose(&mut rng).expect("nonempty")
        });
        let ctx = || format!("{space:?}");
        match run_game(&space, &mut i, &gamma, rounds) {
            Ok(out) => {
                t.check("game.legal", true, ctx);
                let agrees = out.history.pairs().iter().all(|(u, v)| u == v);
                t.check("game.copy_agrees", agrees, ctx);
                t.check("game.ii_wins", out.verdict.ii_wins() == Some(true), ctx);
            }
            Err(e) => t.record("game.legal", ctx, Status::Violation, || e.to_string()),
        }
    }
    t
}

/// Lusin synthesis over the standard base: conditions, certificate and
/// determinism across two independent builds.
pub fn lusin_suite(window: &Window) -> Tally {
    let mut t = Tally::new();
    let first = build_lusin(LusinInput::standard());
    let r1 = first.conditions_check(window);
    t.absorb(&r1, || "standard base".into());
    let second = build_lusin(LusinInput::standard());
    let r2 = second.conditions_check(window);
    let same_nodes = window.nodes().iter().all(|a| first.node(a) == second.node(a));
    t.check("lusin.deterministic", same_nodes && r1 == r2, || "two builds differ".into());
    t
}

fn lusin_point(l: &Scheme<BaireSpaceModel>, q: &BranchRule, depth: usize) -> BranchRule {
    let fruit = fruit_approx(l, q, depth);
    let w = cylinders::witness_cylinder(&fruit).expect("Lusin fruits are nonempty at finite depth");
    BranchRule::extending(&w, 0)
}

/// Permutation identities, inherited properties of `V^g` and the splitting
/// probe, on the standard scheme and the Lusin output.
pub fn vg_suite(seed: u64, window: &Window, budget: Nat) -> Tally {
    let mut rng = rng_for(seed, 5);
    let mut t = Tally::new();
    let depth = window.depth().unwrap_or(0);
    let lusin = build_lusin(LusinInput::standard());
    let schemes: Vec<(&str, Rc<Scheme<BaireSpaceModel>>)> =
        vec![("standard", Rc::new(standard_scheme())), ("lusin", lusin.shared())];
    for (name, v) in &schemes {
        for g in [NatMap::identity(), NatMap::halve(), NatMap::swap_pair()] {
            let ctx = || format!("{name}, g = {}", g.name());
            t.absorb(&perm_identity_check(v, &g, window), ctx);
            t.absorb(&vg_window_checks(v.clone(), &g, window, budget), ctx);
            let fibers_split = (0..window.breadth() / 2).all(|n| g.preimage(n, 2 * window.breadth()).is_some())
                && g.name() == "halve";
            if !fibers_split {
                continue;
            }
            let vg = transform_g(v.clone(), g.clone());
            let half = (window.breadth() / 2).max(1);
            for _ in 0..3 {
                let q = BranchRule::from_fn({
                    let entries: Vec<Nat> = (0..=depth + 1).map(|_| rng.gen_range(0..half)).collect();
                    move |i| entries.get(i).copied().unwrap_or(0)
                });
                let x = if *name == "lusin" { lusin_point(v, &q, depth + 1) } else { q.clone() };
                t.absorb(&dense_in_itself_probe(&vg, &x, window), || {
                    format!("{} with x through {}", ctx(), q.restrict(depth + 1))
                });
            }
        }
    }
    t
}

/// Extraction from `Γ′` of copy on each finite space. On finite spaces the
/// covering and π-base checks are decidable, so an unresolved covering
/// check counts as a failure here.
pub fn extraction_finite(spaces: &[FiniteSpaceModel], window: &Window) -> Tally {
    let mut t = Tally::new();
    for space in spaces {
        let samples = space.opens().len() as Nat;
        let ex = extract_schemes(space.clone(), copy_strategy());
        let r = extraction_check(&ex, window, samples, samples + 1);
        let ctx = || format!("{space:?}");
        t.check("extract.decided", r.count(Status::Unresolved) == 0, ctx);
        t.absorb(&r, ctx);
    }
    t
}

/// Extraction from `Γ′` of the cylinder strategy on the Baire model: along
/// random branches with nonzero entries every `V_{p↾k}` is a cylinder of
/// length `≥ k`.
pub fn extraction_baire(seed: u64, branches: usize, depth: usize) -> Tally {
    let mut rng = rng_for(seed, 6);
    let mut t = Tally::new();
    let ex = extract_schemes(BaireSpaceModel, cylinder_strategy());
    for _ in 0..branches {
        let entries: Vec<Nat> = (0..depth).map(|_| rng.gen_range(1..=5)).collect();
        let p = BranchRule::extending(&FinSeq::from(entries.clone()), 1);
        t.absorb(&cylinder_length_audit(&ex, &p, depth), || format!("branch {}", FinSeq::from(entries.clone())));
    }
    t.absorb(&extraction_check(&ex, &Window::new(2, 3), 4, 16), || "baire, cylinder strategy".into());
    t
}

/// Image identities exhaustively over small prefix maps, π-space probes on
/// the presets, and `σ` basic intersections against stem enumeration.
pub fn selector_suite(seed: u64, max_depth: usize) -> Tally {
    let mut rng = rng_for(seed, 7);
    let mut t = Tally::new();
    for n in 1..=4 {
        let target = FiniteSpaceModel::discrete(n);
        for depth in 0..=max_depth {
            let alphabets: &[Nat] = if depth == 0 { &[0] } else { &[1, 2] };
            for &alphabet in alphabets {
                for f in all_prefix_maps(&target, depth, alphabet) {
                    let window = Window::new(depth + 1, f.alphabet() + 1);
                    let ctx = || describe(&f);
                    t.absorb(&image_identity_window(&f, &window), ctx);
                    let v = pushforward_scheme(f.clone());
                    t.absorb(&selector_identity_check(&f, &v, &window), ctx);
                    t.absorb(&fiber_density_check(&f, &v, &window), ctx);
                }
            }
        }
    }
    for (name, f) in PrefixMap::presets() {
        let ctx = || name.to_string();
        t.absorb(&pi_space_window(&f, &Window::new(2, f.alphabet() + 1), 50), ctx);
        let opens = f.target().opens().to_vec();
        let len = f.depth().max(3);
        let stems: Vec<FinSeq> = FinSeq::window(len, f.alphabet() + 1).into_iter().filter(|c| c.len() == len).collect();
        for _ in 0..100 {
            let b1 = SigmaBasic::new(*opens.choose(&mut rng).unwrap(), random_stem(&mut rng, 2, f.alphabet() + 1));
            let b2 = SigmaBasic::new(*opens.choose(&mut rng).unwrap(), random_stem(&mut rng, 2, f.alphabet() + 1));
            let r = sigma_basic_intersect(&b1, &b2);
            let agrees = stems.iter().all(|c| {
                let both = b1.contains_stem(&f, c) && b2.contains_stem(&f, c);
                both == r.as_ref().is_some_and(|r| r.contains_stem(&f, c))
            });
            t.check("sigma.intersect", agrees, || format!("{name}: {b1:?} ∩ {b2:?}"));
        }
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_parse() {
        for s in SuiteName::ALL {
            assert_eq!(s.as_str().parse::<SuiteName>().unwrap(), s);
        }
        assert!(matches!("bogus".parse::<SuiteName>(), Err(ConfigError::UnknownSuite(_))));
    }

    #[test]
    fn guardrails() {
        let mut c = RunConfig::new(SuiteName::Lusin);
        c.depth = 20;
        assert!(matches!(run_suite(&c), Err(ConfigError::DepthTooLarge(20))));
        c.depth = 2;
        c.breadth = 17;
        assert!(matches!(run_suite(&c), Err(ConfigError::BreadthTooLarge(17))));
    }

    #[test]
    fn space_specs() {
        assert_eq!(SpaceSpec::parse("baire").unwrap(), SpaceSpec::Baire);
        assert_eq!(SpaceSpec::parse("discrete:2").unwrap(), SpaceSpec::Finite(FiniteSpaceModel::discrete(2)));
        assert!(SpaceSpec::parse("/no/such/file.json").is_err());
    }

    #[test]
    fn paper_example_passes() {
        let t = paper_example();
        assert!(t.is_clean(), "{:?}", t.first_failure());
    }

    #[test]
    fn small_oracle_run_passes() {
        let t = oracle_equivalence(7, 50, 3, 3);
        assert!(t.is_clean(), "{:?}", t.first_failure());
        assert!(nd_witness_suite(7, 20).is_clean());
    }
}
