//! Terminal session in which a person plays player I against `Γ′`.
//!
//! Each prompt lists some legal moves. Input is a set (`{0,1}`, `1`, `{}`)
//! on finite spaces and a cylinder expression on the Baire model.
//! `:quit` ends the session, `:dump FILE` writes the transcript as JSON.

use std::io::{self, BufRead, Write};

use souslin_core::choquet::{checked_reply, modify_strategy, GameHistory, StrategyII};
use souslin_core::cylinders::{self, CylExpr};
use souslin_core::{BaireSpaceModel, FiniteSpaceModel, PointSet, SpaceModel};

use crate::formats::{transcript, OpenJson};

/// Reading, printing and suggesting moves for one space model.
pub trait Notation: OpenJson {
    fn parse_open(&self, text: &str) -> Result<Self::Open, String>;
    fn show(&self, o: &Self::Open) -> String;
    fn suggestions(&self, within: &Self::Open) -> Vec<Self::Open>;
}

impl Notation for FiniteSpaceModel {
    fn parse_open(&self, text: &str) -> Result<PointSet, String> {
        let inner = text.trim().trim_start_matches('{').trim_end_matches('}');
        let mut set = PointSet::EMPTY;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let x: usize = part.parse().map_err(|_| format!("\"{part}\" is not a point"))?;
            if x >= self.points() {
                return Err(format!("point {x} is not in the space"));
            }
            set = set | PointSet::singleton(x);
        }
        Ok(set)
    }

    fn show(&self, o: &PointSet) -> String {
        o.to_string()
    }

    fn suggestions(&self, within: &PointSet) -> Vec<PointSet> {
        self.nonempty_opens_within(*within).collect()
    }
}

impl Notation for BaireSpaceModel {
    fn parse_open(&self, text: &str) -> Result<CylExpr, String> {
        text.parse::<CylExpr>().map_err(|e| e.to_string())
    }

    fn show(&self, o: &CylExpr) -> String {
        o.to_string()
    }

    fn suggestions(&self, within: &CylExpr) -> Vec<CylExpr> {
        let mut out: Vec<CylExpr> = match cylinders::minimal_antichain(within) {
            Ok(chain) => chain.iter().take(3).map(CylExpr::cylinder).collect(),
            Err(_) => Vec::new(),
        };
        out.extend((1..3).map(|m| self.pi_base_member(within, m)));
        out
    }
}

fn legality<M: SpaceModel>(space: &M, history: &GameHistory<M::Open>, u: &M::Open) -> Result<(), &'static str> {
    if space.is_empty(u) {
        return Err("moves must be nonempty");
    }
    if !space.is_open(u) {
        return Err("that set is not open");
    }
    if history.last_v().is_some_and(|v| !space.subset(u, v)) {
        return Err("the move must lie inside the machine's last reply");
    }
    Ok(())
}

/// Runs the session until `:quit` or end of input and returns the history.
pub fn play<M, G>(space: &M, gamma: G, input: impl BufRead, out: &mut dyn Write) -> io::Result<GameHistory<M::Open>>
where
    M: Notation,
    G: StrategyII<M>,
{
    let gamma = modify_strategy(gamma);
    let mut history = GameHistory::new();
    writeln!(out, "playing I against {}; :quit to stop, :dump FILE to save", gamma.name())?;
    let mut lines = input.lines();
    loop {
        let within = history.last_v().cloned().unwrap_or_else(|| space.whole());
        let legal: Vec<String> = space.suggestions(&within).iter().map(|o| space.show(o)).collect();
        writeln!(out, "legal moves include: {}", legal.join("  "))?;
        write!(out, "I> ")?;
        out.flush()?;
        let Some(line) = lines.next() else { break };
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line == ":quit" {
            break;
        }
        if let Some(path) = line.strip_prefix(":dump") {
            let path = path.trim();
            if path.is_empty() {
                writeln!(out, "usage: :dump FILE")?;
                continue;
            }
            let text = serde_json::to_string_pretty(&transcript(space, &history)).expect("transcripts serialize");
            match std::fs::write(path, text + "\n") {
                Ok(()) => writeln!(out, "wrote {path}")?,
                Err(e) => writeln!(out, "cannot write {path}: {e}")?,
            }
            continue;
        }
        if line.starts_with(':') {
            writeln!(out, "unknown command {line}")?;
            continue;
        }
        let u = match space.parse_open(line) {
            Ok(u) => u,
            Err(e) => {
                writeln!(out, "parse error: {e}")?;
                continue;
            }
        };
        if let Err(why) = legality(space, &history, &u) {
            writeln!(out, "illegal move: {why}")?;
            continue;
        }
        let v = match checked_reply(&gamma, space, &history, &u) {
            Ok(v) => v,
            Err(e) => {
                writeln!(out, "strategy failed: {e}")?;
                continue;
            }
        };
        writeln!(out, "II: {}", space.show(&v))?;
        history.push(u, v.clone());
        let moves: Vec<String> =
            history.pairs().iter().map(|(u, v)| format!("⟨{}, {}⟩", space.show(u), space.show(v))).collect();
        writeln!(out, "history: {}", moves.join(" "))?;
        if space.finite_size().is_some() {
            let n = history.len();
            let stable = n >= 2 && space.equal(&history.pairs()[n - 2].1, &v);
            writeln!(
                out,
                "intersection so far {} (nonempty, so II wins every continuation); {}",
                space.show(&v),
                if stable { "stable over the last round" } else { "still shrinking" }
            )?;
        }
    }
    writeln!(out)?;
    Ok(history)
}

#[cfg(test)]
mod tests {
    use super::*;
    use souslin_core::choquet::{copy_strategy, cylinder_strategy};

    fn session<M: Notation, G: StrategyII<M>>(space: &M, g: G, input: &str) -> (GameHistory<M::Open>, String) {
        let mut out = Vec::new();
        let h = play(space, g, input.as_bytes(), &mut out).unwrap();
        (h, String::from_utf8(out).unwrap())
    }

    #[test]
    fn sierpinski_copy_echoes() {
        let s = FiniteSpaceModel::sierpinski();
        let (h, text) = session(&s, copy_strategy(), "{1}\n:quit\n");
        assert_eq!(h.pairs(), &[(PointSet::singleton(1), PointSet::singleton(1))]);
        assert!(text.contains("II: {1}"), "{text}");
    }

    #[test]
    fn illegal_and_malformed_moves_keep_the_state() {
        let s = FiniteSpaceModel::sierpinski();
        let (h, text) = session(&s, copy_strategy(), "{1}\n{0,1}\n{0}\n7\n{1}\n");
        assert_eq!(h.len(), 2);
        assert!(text.contains("illegal move"));
        assert!(text.contains("not open"));
        assert!(text.contains("parse error"));
    }

    #[test]
    fn baire_reply_is_a_longer_cylinder() {
        let (h, text) = session(&BaireSpaceModel, cylinder_strategy(), "S(0,\nS(0,1)\n");
        assert!(text.contains("parse error"));
        let c = cylinders::single_cylinder(&h.pairs()[0].1).unwrap();
        assert!(c.len() > 2 && souslin_core::FinSeq::from([0, 1]).is_prefix_of(&c));
    }

    #[test]
    fn replays_are_identical() {
        let input = "S(1)\nS(1,0,0)\nS(1,0,0,0,0)\n";
        let a = session(&BaireSpaceModel, cylinder_strategy(), input);
        let b = session(&BaireSpaceModel, cylinder_strategy(), input);
        assert_eq!(a.1, b.1);
        assert_eq!(a.0, b.0);
    }

    #[test]
    fn dump_writes_a_transcript() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.json");
        let s = FiniteSpaceModel::sierpinski();
        session(&s, copy_strategy(), &format!("{{0,1}}\n:dump {}\n", path.display()));
        let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
        assert_eq!(v, serde_json::json!([{"player": "I", "set": [0, 1]}, {"player": "II", "set": [0, 1]}]));
    }
}
