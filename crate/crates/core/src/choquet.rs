//! The Choquet game on a [`SpaceModel`]: histories, strategies for both
//! players, the redundant-pair removal `f(s)`, the modification `Γ′` of a
//! strategy `Γ`, and the extraction of a pair of schemes `U`, `V` from `Γ′`.
//!
//! Histories keep every pair, redundant or not; `f(s)` is recomputed when a
//! modified strategy needs it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::rc::Rc;
use alloc::string::String;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::fmt;

use crate::cylinders::{self, CylExpr};
use crate::report::{Report, Status};
use crate::schemes::{covers_check, Scheme, SchemeError, Window};
use crate::seq::{BranchRule, FinSeq, Nat};
use crate::space::{BaireSpaceModel, FiniteSpaceModel, PointSet, SpaceModel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Player {
    I,
    II,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Player::I => "I",
            Player::II => "II",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GameError {
    /// `player` made an illegal move in round `round`.
    IllegalMove { player: Player, round: usize, message: String },
    /// A recorded history breaks the nesting rules at pair `index`.
    IllegalHistory { index: usize, message: String },
    /// A strategy could not produce a move at all.
    NoMove { player: Player, round: usize, message: String },
    NoRounds,
}

impl GameError {
    pub fn player(&self) -> Option<Player> {
        match self {
            GameError::IllegalMove { player, .. } | GameError::NoMove { player, .. } => Some(*player),
            _ => None,
        }
    }
}

impl fmt::Display for GameError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GameError::IllegalMove { player, round, message } => {
                write!(f, "illegal move by player {player} in round {round}: {message}")
            }
            GameError::IllegalHistory { index, message } => {
                write!(f, "illegal history at pair {index}: {message}")
            }
            GameError::NoMove { player, round, message } => {
                write!(f, "player {player} has no move in round {round}: {message}")
            }
            GameError::NoRounds => f.write_str("a game needs at least one round"),
        }
    }
}

/// `⟨⟨U_0,V_0⟩, …, ⟨U_n,V_n⟩⟩`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameHistory<O> {
    pairs: Vec<(O, O)>,
}

impl<O> Default for GameHistory<O> {
    fn default() -> Self {
        GameHistory { pairs: Vec::new() }
    }
}

impl<O: Clone> GameHistory<O> {
    pub fn new() -> Self {
        GameHistory::default()
    }

    /// No legality check; see [`GameHistory::validate`].
    pub fn from_pairs(pairs: Vec<(O, O)>) -> Self {
        GameHistory { pairs }
    }

    pub fn pairs(&self) -> &[(O, O)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn last_v(&self) -> Option<&O> {
        self.pairs.last().map(|(_, v)| v)
    }

    pub fn push(&mut self, u: O, v: O) {
        self.pairs.push((u, v));
    }

    /// The history of the first `n` rounds.
    pub fn truncate(&self, n: usize) -> Self {
        GameHistory { pairs: self.pairs[..n.min(self.pairs.len())].to_vec() }
    }

    /// `U_0 ⊇ V_0 ⊇ U_1 ⊇ …`, every entry a nonempty open.
    pub fn validate<M: SpaceModel<Open = O>>(&self, space: &M) -> Result<(), GameError> {
        let bad = |index, message: &str| GameError::IllegalHistory { index, message: message.into() };
        for (k, (u, v)) in self.pairs.iter().enumerate() {
            if space.is_empty(u) || space.is_empty(v) {
                return Err(bad(k, "empty move"));
            }
            if !space.is_open(u) || !space.is_open(v) {
                return Err(bad(k, "move is not open"));
            }
            if !space.subset(v, u) {
                return Err(bad(k, "V_k ⊄ U_k"));
            }
            if k > 0 && !space.subset(u, &self.pairs[k - 1].1) {
                return Err(bad(k, "U_k ⊄ V_{k-1}"));
            }
        }
        Ok(())
    }
}

/// `f(s)`: drops `⟨U_0,V_0⟩` when `V_0 = U_0 = X` and `⟨U_k,V_k⟩` (`k > 0`)
/// when `V_k = U_k = V_{k−1}`.
pub fn remove_redundant<M: SpaceModel>(
    space: &M,
    s: &GameHistory<M::Open>,
) -> Result<GameHistory<M::Open>, GameError> {
    s.validate(space)?;
    let x = space.whole();
    let pairs = s.pairs();
    let kept = pairs
        .iter()
        .enumerate()
        .filter(|(k, (u, v))| {
            let prev = if *k == 0 { &x } else { &pairs[k - 1].1 };
            !(space.equal(v, u) && space.equal(u, prev))
        })
        .map(|(_, p)| p.clone())
        .collect();
    Ok(GameHistory::from_pairs(kept))
}

/// A reply rule for player II.
pub trait StrategyII<M: SpaceModel> {
    fn reply(&self, space: &M, s: &GameHistory<M::Open>, u: &M::Open) -> Result<M::Open, GameError>;

    fn name(&self) -> String;
}

impl<M: SpaceModel, T: StrategyII<M> + ?Sized> StrategyII<M> for Rc<T> {
    fn reply(&self, space: &M, s: &GameHistory<M::Open>, u: &M::Open) -> Result<M::Open, GameError> {
        (**self).reply(space, s, u)
    }

    fn name(&self) -> String {
        (**self).name()
    }
}

/// A move rule for player I.
pub trait StrategyI<M: SpaceModel> {
    fn play(&mut self, space: &M, s: &GameHistory<M::Open>) -> Result<M::Open, GameError>;
}

/// Calls `ii` and checks that the reply is a nonempty open subset of `u`.
pub fn checked_reply<M: SpaceModel, G: StrategyII<M> + ?Sized>(
    ii: &G,
    space: &M,
    s: &GameHistory<M::Open>,
    u: &M::Open,
) -> Result<M::Open, GameError> {
    let v = ii.reply(space, s, u)?;
    let illegal = |message: &str| GameError::IllegalMove {
        player: Player::II,
        round: s.len(),
        message: format!("{}: {message}", ii.name()),
    };
    if space.is_empty(&v) {
        return Err(illegal("empty reply"));
    }
    if !space.is_open(&v) {
        return Err(illegal("reply is not open"));
    }
    if !space.subset(&v, u) {
        return Err(illegal("reply is not inside U"));
    }
    Ok(v)
}

fn check_i_move<M: SpaceModel>(space: &M, s: &GameHistory<M::Open>, u: &M::Open) -> Result<(), GameError> {
    let illegal = |message: &str| GameError::IllegalMove {
        player: Player::I,
        round: s.len(),
        message: message.into(),
    };
    if space.is_empty(u) {
        return Err(illegal("empty move"));
    }
    if !space.is_open(u) {
        return Err(illegal("move is not open"));
    }
    if let Some(v) = s.last_v() {
        if !space.subset(u, v) {
            return Err(illegal("U_{k+1} ⊄ V_k"));
        }
    }
    Ok(())
}

/// `V := U`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CopyStrategy;

pub fn copy_strategy() -> CopyStrategy {
    CopyStrategy
}

impl<M: SpaceModel> StrategyII<M> for CopyStrategy {
    fn reply(&self, _: &M, _: &GameHistory<M::Open>, u: &M::Open) -> Result<M::Open, GameError> {
        Ok(u.clone())
    }

    fn name(&self) -> String {
        "copy".into()
    }
}

/// On the Baire model: reply to `U` after `n` rounds with `S_c`, where `c` is
/// the witness cylinder of `U` padded with zeros to length `≥ n + 1`.
#[derive(Debug, Clone, Copy, Default)]
pub struct CylinderStrategy;

pub fn cylinder_strategy() -> CylinderStrategy {
    CylinderStrategy
}

impl StrategyII<BaireSpaceModel> for CylinderStrategy {
    fn reply(&self, _: &BaireSpaceModel, s: &GameHistory<CylExpr>, u: &CylExpr) -> Result<CylExpr, GameError> {
        let mut c = cylinders::witness_cylinder(u).ok_or_else(|| GameError::NoMove {
            player: Player::II,
            round: s.len(),
            message: "U is empty".into(),
        })?;
        while c.len() < s.len() + 1 {
            c = c.append(0);
        }
        Ok(CylExpr::cylinder(c))
    }

    fn name(&self) -> String {
        "cylinder".into()
    }
}

/// `Γ′`:
///
/// * `Γ′(⟨⟩, X) = X` and `Γ′(⟨⟩, U_0) = Γ(⟨⟩, U_0)` for `U_0 ≠ X`;
/// * `Γ′(s, U_{n+1}) = V_n` when `U_{n+1} = V_n`;
/// * `Γ′(s, U_{n+1}) = Γ(f(s), U_{n+1})` otherwise.
#[derive(Debug, Clone)]
pub struct Modified<G> {
    inner: G,
}

pub fn modify_strategy<G>(gamma: G) -> Modified<G> {
    Modified { inner: gamma }
}

impl<G> Modified<G> {
    pub fn inner(&self) -> &G {
        &self.inner
    }
}

impl<M: SpaceModel, G: StrategyII<M>> StrategyII<M> for Modified<G> {
    fn reply(&self, space: &M, s: &GameHistory<M::Open>, u: &M::Open) -> Result<M::Open, GameError> {
        match s.last_v() {
            None if space.equal(u, &space.whole()) => Ok(u.clone()),
            None => checked_reply(&self.inner, space, s, u),
            Some(v) if space.equal(u, v) => Ok(v.clone()),
            Some(_) => checked_reply(&self.inner, space, &remove_redundant(space, s)?, u),
        }
    }

    fn name(&self) -> String {
        format!("{}'", self.inner.name())
    }
}

/// Plays the listed moves, then echoes II's last reply (`U_{n+1} = V_n`).
#[derive(Debug, Clone)]
pub struct ScriptedI<O> {
    moves: Vec<O>,
}

impl<O> ScriptedI<O> {
    pub fn new(moves: Vec<O>) -> Self {
        ScriptedI { moves }
    }
}

impl<M: SpaceModel> StrategyI<M> for ScriptedI<M::Open> {
    fn play(&mut self, space: &M, s: &GameHistory<M::Open>) -> Result<M::Open, GameError> {
        Ok(match self.moves.get(s.len()) {
            Some(u) => u.clone(),
            None => s.last_v().cloned().unwrap_or_else(|| space.whole()),
        })
    }
}

/// The opponent that generates a scheme branch: `X` first, then
/// `W_{p(k)}`, the `p(k)`-th π-base member of `V_k`.
#[derive(Debug, Clone)]
pub struct PiBaseFollower {
    path: BranchRule,
}

impl PiBaseFollower {
    pub fn new(path: BranchRule) -> Self {
        PiBaseFollower { path }
    }
}

impl<M: SpaceModel> StrategyI<M> for PiBaseFollower {
    fn play(&mut self, space: &M, s: &GameHistory<M::Open>) -> Result<M::Open, GameError> {
        Ok(match s.last_v() {
            None => space.whole(),
            Some(v) => space.pi_base_member(v, self.path.at(s.len() - 1)),
        })
    }
}

/// Player I driven by a closure.
pub struct FnI<F>(pub F);

impl<M: SpaceModel, F> StrategyI<M> for FnI<F>
where
    F: FnMut(&M, &GameHistory<M::Open>) -> M::Open,
{
    fn play(&mut self, space: &M, s: &GameHistory<M::Open>) -> Result<M::Open, GameError> {
        Ok((self.0)(space, s))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict<O> {
    /// Finite space. Every continuation is a decreasing chain of nonempty
    /// opens in a finite lattice, so `⋂_n V_n` is its eventual value and is
    /// nonempty: `ii_wins` is decided. `intersection` is `⋂` of the recorded
    /// replies; `stabilized` says the last round left it unchanged.
    Decided { ii_wins: bool, intersection: O, stabilized: bool },
    /// Infinite space: all recorded replies are nonempty. No claim about the
    /// infinite run.
    Alive { last: O },
}

impl<O> Verdict<O> {
    pub fn ii_wins(&self) -> Option<bool> {
        match self {
            Verdict::Decided { ii_wins, .. } => Some(*ii_wins),
            Verdict::Alive { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GameOutcome<O> {
    pub history: GameHistory<O>,
    pub verdict: Verdict<O>,
}

/// Plays `rounds` rounds with per-move legality checks.
pub fn run_game<M, I, G>(
    space: &M,
    player_i: &mut I,
    player_ii: &G,
    rounds: usize,
) -> Result<GameOutcome<M::Open>, GameError>
where
    M: SpaceModel,
    I: StrategyI<M> + ?Sized,
    G: StrategyII<M> + ?Sized,
{
    if rounds == 0 {
        return Err(GameError::NoRounds);
    }
    let mut history = GameHistory::new();
    for _ in 0..rounds {
        let u = player_i.play(space, &history)?;
        check_i_move(space, &history, &u)?;
        let v = checked_reply(player_ii, space, &history, &u)?;
        history.push(u, v);
    }
    let last = history.last_v().cloned().expect("at least one round");
    let verdict = if space.finite_size().is_some() {
        let n = history.len();
        let stabilized = n >= 2 && space.equal(&history.pairs()[n - 2].1, &last);
        Verdict::Decided { ii_wins: !space.is_empty(&last), intersection: last, stabilized }
    } else {
        Verdict::Alive { last }
    };
    Ok(GameOutcome { history, verdict })
}

/// Every legal script of player I with length `1..=max_len` against `ii`,
/// each played out with one extra echo round; reports a violation for any
/// illegal reply, lost run, or run that fails to stabilize under the echo.
pub fn exhaustive_finite_check<G: StrategyII<FiniteSpaceModel>>(
    space: &FiniteSpaceModel,
    ii: &G,
    max_len: usize,
) -> Report {
    let mut report = Report::new();
    let mut runs = 0usize;
    let mut failures = 0usize;
    let mut first_failure = None;
    let mut stack: Vec<Vec<PointSet>> = space.nonempty_opens_within(space.whole()).map(|u| alloc::vec![u]).collect();
    while let Some(script) = stack.pop() {
        runs += 1;
        let len = script.len();
        let outcome = run_game(space, &mut ScriptedI::new(script.clone()), ii, len + 1);
        let ok = match &outcome {
            Ok(GameOutcome { verdict: Verdict::Decided { ii_wins, stabilized, .. }, .. }) => *ii_wins && *stabilized,
            _ => false,
        };
        if !ok {
            failures += 1;
            if first_failure.is_none() {
                first_failure = Some(format!("script {script:?}: {outcome:?}"));
            }
            continue;
        }
        if len < max_len {
            let history = outcome.expect("checked above").history;
            let v = history.pairs()[len - 1].1;
            for u in space.nonempty_opens_within(v) {
                let mut next = script.clone();
                next.push(u);
                stack.push(next);
            }
        }
    }
    match first_failure {
        None => report.push("game.exhaustive", None, Status::Pass, format!("{runs} runs")),
        Some(f) => report.push(
            "game.exhaustive",
            None,
            Status::Violation,
            format!("{failures} of {runs} runs failed; first: {f}"),
        ),
    }
    report
}

/// The schemes `U`, `V` built from `Γ′`: `U_⟨⟩ = X`, `V_⟨⟩ = Γ′(⟨⟩, X)`,
/// `U_{a⌢m} = W_m` (the `m`-th π-base member of `V_a`, with `W_0 = V_a`) and
/// `V_{a⌢m} = Γ′(⟨⟨U_{a↾0},V_{a↾0}⟩, …, ⟨U_a,V_a⟩⟩, W_m)`.
pub struct Extraction<M: SpaceModel, G> {
    space: M,
    gamma: Modified<G>,
    memo: RefCell<BTreeMap<FinSeq, (M::Open, M::Open)>>,
}

pub fn extract_schemes<M: SpaceModel, G: StrategyII<M>>(space: M, gamma: G) -> Rc<Extraction<M, G>> {
    Rc::new(Extraction { space, gamma: modify_strategy(gamma), memo: RefCell::new(BTreeMap::new()) })
}

impl<M: SpaceModel, G: StrategyII<M>> Extraction<M, G> {
    pub fn space(&self) -> &M {
        &self.space
    }

    pub fn strategy(&self) -> &Modified<G> {
        &self.gamma
    }

    /// The run along `a`: pairs `⟨U_{a↾k}, V_{a↾k}⟩` for `k ≤ lh(a)`.
    pub fn history(&self, a: &FinSeq) -> Result<GameHistory<M::Open>, GameError> {
        let mut history = GameHistory::new();
        for k in 0..=a.len() {
            let b = FinSeq::from(&a.entries()[..k]);
            let cached = self.memo.borrow().get(&b).cloned();
            let (u, v) = match cached {
                Some(p) => p,
                None => {
                    let u = match history.last_v() {
                        None => self.space.whole(),
                        Some(v) => self.space.pi_base_member(v, a.entries()[k - 1]),
                    };
                    let v = checked_reply(&self.gamma, &self.space, &history, &u)?;
                    self.memo.borrow_mut().insert(b, (u.clone(), v.clone()));
                    (u, v)
                }
            };
            history.push(u, v);
        }
        Ok(history)
    }

    pub fn pair(&self, a: &FinSeq) -> Result<(M::Open, M::Open), GameError> {
        Ok(self.history(a)?.pairs.pop().expect("history includes the root"))
    }
}

impl<M, G> Extraction<M, G>
where
    M: SpaceModel + Clone + 'static,
    G: StrategyII<M> + 'static,
{
    fn view(self: &Rc<Self>, pick: fn((M::Open, M::Open)) -> M::Open) -> Scheme<M> {
        let ex = self.clone();
        Scheme::new(self.space.clone(), move |_, a| {
            ex.pair(a)
                .map(pick)
                .map_err(|e| SchemeError::Rule { node: a.clone(), message: format!("{e}") })
        })
    }

    pub fn u_scheme(self: &Rc<Self>) -> Scheme<M> {
        self.view(|(u, _)| u)
    }

    pub fn v_scheme(self: &Rc<Self>) -> Scheme<M> {
        self.view(|(_, v)| v)
    }
}

/// Window checks of an extraction:
///
/// * the covering checks of [`covers_check`] on `V`;
/// * `extract.nonempty`: every `V_a` is nonempty;
/// * `extract.u_child`: `U_{a⌢m} = W_m`;
/// * `extract.pi_base`: for each sample `O = W_j ⊆ V_a` (`j < samples`) some
///   child `V_{a⌢m}`, `m < budget`, lies inside `O`;
/// * `extract.replay`: the recorded run along each leaf of the window equals
///   a fresh run of `Γ′` against [`PiBaseFollower`].
pub fn extraction_check<M, G>(ex: &Rc<Extraction<M, G>>, window: &Window, samples: Nat, budget: Nat) -> Report
where
    M: SpaceModel + Clone + 'static,
    G: StrategyII<M> + 'static,
{
    let mut report = Report::new();
    let Some(depth) = window.depth() else { return report };
    let v = ex.v_scheme();
    report.extend(covers_check(&v, window));
    let space = ex.space();
    for a in window.nodes() {
        let Ok(va) = v.try_node(&a) else { continue };
        report.expect("extract.nonempty", Some(&a), !space.is_empty(&va), format!("V_{a} = ∅"));
        for m in 0..window.breadth() {
            let child = a.append(m);
            let ok = ex.pair(&child).is_ok_and(|(u, _)| space.equal(&u, &space.pi_base_member(&va, m)));
            report.expect("extract.u_child", Some(&child), ok, "U_{a⌢m} ≠ W_m");
        }
        if a.len() < depth {
            let miss = (0..samples).map(|j| space.pi_base_member(&va, j)).find(|o| {
                !(0..budget).any(|m| {
                    v.try_node(&a.append(m)).is_ok_and(|c| !space.is_empty(&c) && space.subset(&c, o))
                })
            });
            match miss {
                None => report.pass("extract.pi_base", Some(&a)),
                Some(_) if space.finite_size().is_none() => report.push(
                    "extract.pi_base",
                    Some(&a),
                    Status::Unresolved,
                    format!("a sample has no child inside it below {budget}"),
                ),
                Some(_) => report.push(
                    "extract.pi_base",
                    Some(&a),
                    Status::Violation,
                    format!("a sample has no child inside it below {budget}"),
                ),
            }
        }
        if a.len() == depth {
            let recorded = ex.history(&a);
            let mut follower = PiBaseFollower::new(BranchRule::extending(&a, 0));
            let fresh = run_game(space, &mut follower, ex.strategy(), depth + 1).map(|o| o.history);
            let ok = match (&recorded, &fresh) {
                (Ok(r), Ok(f)) => {
                    r.len() == f.len()
                        && r.pairs().iter().zip(f.pairs()).all(|((u1, v1), (u2, v2))| {
                            space.equal(u1, u2) && space.equal(v1, v2)
                        })
                }
                _ => false,
            };
            report.expect("extract.replay", Some(&a), ok, "recorded run differs from replay");
        }
    }
    report
}

/// Along `p`, each `V_{p↾k}` is a single cylinder whose length is at least
/// the number of nonzero entries of `p↾k` (zero entries replay `W_0 = V_a`
/// and are echoed by `Γ′`).
pub fn cylinder_length_audit<G>(ex: &Rc<Extraction<BaireSpaceModel, G>>, p: &BranchRule, depth: usize) -> Report
where
    G: StrategyII<BaireSpaceModel> + 'static,
{
    let mut report = Report::new();
    for k in 0..=depth {
        let a = p.restrict(k);
        let need = a.entries().iter().filter(|&&x| x != 0).count();
        match ex.pair(&a) {
            Ok((_, v)) => {
                let len = cylinders::single_cylinder(&v).map(|c| c.len());
                report.expect(
                    "extract.cylinder_length",
                    Some(&a),
                    len.is_some_and(|l| l >= need),
                    format!("V_{a} = {v}, needed a cylinder of length ≥ {need}"),
                );
            }
            Err(e) => report.push("extract.cylinder_length", Some(&a), Status::Violation, format!("{e}")),
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> (FiniteSpaceModel, PointSet, PointSet, PointSet) {
        let x = PointSet::all(3);
        let y = PointSet::from_points([0, 1]);
        let z = PointSet::singleton(0);
        let space = FiniteSpaceModel::new(3, [PointSet::EMPTY, z, y, x]).unwrap();
        (space, x, y, z)
    }

    #[test]
    fn redundant_pairs_example() {
        let (space, x, y, z) = chain3();
        let s = GameHistory::from_pairs(alloc::vec![(x, x), (x, x), (y, y), (y, y), (z, z)]);
        let f = remove_redundant(&space, &s).unwrap();
        assert_eq!(f.pairs(), &[(y, y), (z, z)]);
        assert_eq!(remove_redundant(&space, &f).unwrap(), f);
    }

    #[test]
    fn single_whole_pair_is_redundant() {
        let (space, x, ..) = chain3();
        let s = GameHistory::from_pairs(alloc::vec![(x, x)]);
        assert!(remove_redundant(&space, &s).unwrap().is_empty());
    }

    #[test]
    fn strictly_shrinking_history_is_kept() {
        let (space, x, y, z) = chain3();
        let s = GameHistory::from_pairs(alloc::vec![(x, y), (z, z)]);
        assert_eq!(remove_redundant(&space, &s).unwrap(), s);
    }

    #[test]
    fn illegal_history_is_rejected() {
        let (space, x, y, z) = chain3();
        let s = GameHistory::from_pairs(alloc::vec![(z, z), (y, y), (x, x)]);
        assert!(matches!(remove_redundant(&space, &s), Err(GameError::IllegalHistory { index: 1, .. })));
    }

    /// Replies with the smallest nonempty open inside `U` and records the
    /// histories it was consulted with.
    struct Shrink(RefCell<Vec<GameHistory<PointSet>>>);

    impl StrategyII<FiniteSpaceModel> for Shrink {
        fn reply(&self, space: &FiniteSpaceModel, s: &GameHistory<PointSet>, u: &PointSet) -> Result<PointSet, GameError> {
            self.0.borrow_mut().push(s.clone());
            Ok(space.nonempty_opens_within(*u).min_by_key(|o| o.len()).unwrap())
        }

        fn name(&self) -> String {
            "shrink".into()
        }
    }

    #[test]
    fn modified_strategy_clauses() {
        let (space, x, y, z) = chain3();
        let g = modify_strategy(Shrink(RefCell::new(Vec::new())));
        let empty = GameHistory::new();
        assert_eq!(g.reply(&space, &empty, &x).unwrap(), x);
        assert_eq!(g.reply(&space, &empty, &y).unwrap(), z);

        let s = GameHistory::from_pairs(alloc::vec![(x, x), (x, y)]);
        assert_eq!(g.reply(&space, &s, &y).unwrap(), y);
        assert!(g.inner().0.borrow().len() == 1);
        assert_eq!(g.reply(&space, &s, &z).unwrap(), z);
        let seen = g.inner().0.borrow();
        assert_eq!(seen.last().unwrap().pairs(), &[(x, y)]);
    }

    #[test]
    fn modified_surfaces_inner_illegality() {
        struct Escape;
        impl StrategyII<FiniteSpaceModel> for Escape {
            fn reply(&self, space: &FiniteSpaceModel, _: &GameHistory<PointSet>, _: &PointSet) -> Result<PointSet, GameError> {
                Ok(space.whole())
            }
            fn name(&self) -> String {
                "escape".into()
            }
        }
        let (space, _, y, _) = chain3();
        let err = modify_strategy(Escape).reply(&space, &GameHistory::new(), &y).unwrap_err();
        assert_eq!(err.player(), Some(Player::II));
    }

    #[test]
    fn sierpinski_copy_run() {
        let space = FiniteSpaceModel::sierpinski();
        let one = PointSet::singleton(1);
        assert_eq!(copy_strategy().reply(&space, &GameHistory::new(), &one).unwrap(), one);
        let out = run_game(&space, &mut ScriptedI::new(alloc::vec![one, one, one]), &copy_strategy(), 5).unwrap();
        assert_eq!(out.verdict, Verdict::Decided { ii_wins: true, intersection: one, stabilized: true });
    }

    #[test]
    fn illegal_first_player_move_is_flagged() {
        let space = FiniteSpaceModel::sierpinski();
        let one = PointSet::singleton(1);
        let all = PointSet::all(2);
        let err = run_game(&space, &mut ScriptedI::new(alloc::vec![one, all]), &copy_strategy(), 2).unwrap_err();
        assert!(matches!(err, GameError::IllegalMove { player: Player::I, round: 1, .. }));
        let err = run_game(&space, &mut ScriptedI::new(alloc::vec![PointSet::singleton(0)]), &copy_strategy(), 1);
        assert_eq!(err.unwrap_err().player(), Some(Player::I));
        assert_eq!(run_game(&space, &mut ScriptedI::new(alloc::vec![one]), &copy_strategy(), 0), Err(GameError::NoRounds));
    }

    #[test]
    fn cylinder_strategy_lengths() {
        let b = BaireSpaceModel;
        let v = cylinder_strategy().reply(&b, &GameHistory::new(), &CylExpr::Full).unwrap();
        assert!(cylinders::single_cylinder(&v).unwrap().len() >= 1);

        let s = GameHistory::from_pairs(alloc::vec![(CylExpr::Full, CylExpr::Full), (CylExpr::Full, CylExpr::Full)]);
        let v = cylinder_strategy().reply(&b, &s, &CylExpr::cylinder([3])).unwrap();
        let c = cylinders::single_cylinder(&v).unwrap();
        assert!(FinSeq::from([3]).is_prefix_of(&c) && c.len() >= 3);

        let mut i = FnI(|space: &BaireSpaceModel, s: &GameHistory<CylExpr>| match s.last_v() {
            None => CylExpr::Full,
            Some(v) => space.pi_base_member(v, 1),
        });
        let out = run_game(&b, &mut i, &cylinder_strategy(), 6).unwrap();
        let lens: Vec<usize> =
            out.history.pairs().iter().map(|(_, v)| cylinders::single_cylinder(v).unwrap().len()).collect();
        assert!(lens.windows(2).all(|w| w[0] < w[1]), "{lens:?}");
        assert!(matches!(out.verdict, Verdict::Alive { .. }));
    }

    #[test]
    fn modified_copy_wins_on_small_spaces() {
        for n in 1..=3 {
            for space in FiniteSpaceModel::all_topologies(n) {
                let r = exhaustive_finite_check(&space, &modify_strategy(copy_strategy()), 3);
                assert!(r.is_clean(), "{space:?}: {:?}", r.checks);
            }
        }
    }

    #[test]
    fn sierpinski_extraction() {
        let space = FiniteSpaceModel::sierpinski();
        let ex = extract_schemes(space, copy_strategy());
        let x = PointSet::all(2);
        let one = PointSet::singleton(1);
        assert_eq!(ex.pair(&FinSeq::empty()).unwrap(), (x, x));
        assert_eq!(ex.pair(&FinSeq::from([0])).unwrap(), (x, x));
        assert_eq!(ex.pair(&FinSeq::from([1])).unwrap(), (one, one));
        let r = extraction_check(&ex, &Window::new(3, 3), 4, 4);
        assert!(r.is_clean(), "{:?}", r.hard_failures().next());
        assert_eq!(r.count(Status::Unresolved), 0);
    }

    #[test]
    fn one_point_extraction_is_constant() {
        let ex = extract_schemes(FiniteSpaceModel::discrete(1), copy_strategy());
        let v = ex.v_scheme();
        let u = ex.u_scheme();
        for a in FinSeq::window(3, 3) {
            assert_eq!(v.node(&a), PointSet::all(1));
            assert_eq!(u.node(&a), PointSet::all(1));
        }
    }

    #[test]
    fn baire_extraction_lengths_grow() {
        let ex = extract_schemes(BaireSpaceModel, cylinder_strategy());
        let p = BranchRule::from_fn(|i| (i % 3 + 1) as Nat);
        let r = cylinder_length_audit(&ex, &p, 5);
        assert!(r.is_clean(), "{:?}", r.hard_failures().next());
        let with_zeros = BranchRule::from_fn(|i| (i % 2) as Nat);
        assert!(cylinder_length_audit(&ex, &with_zeros, 5).is_clean());
    }
}
