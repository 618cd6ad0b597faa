use alloc::collections::BTreeSet;

use super::{CylError, CylExpr};
use crate::seq::{FinSeq, Nat};

/// All length-`depth` words over `{0,…,breadth}` whose branches lie in `e`.
///
/// The letter `breadth` stands for every value no mention uses. When all
/// mention entries are `< breadth` and mention lengths are `≤ depth`, this
/// finite set determines `e` exactly: a branch belongs to `e` iff its clamped
/// prefix (see [`clamp_to_window`]) is in the trace.
pub fn trace_window(e: &CylExpr, depth: usize, breadth: Nat) -> Result<BTreeSet<FinSeq>, CylError> {
    let fits = e
        .mentions()
        .iter()
        .all(|m| m.len() <= depth && m.entries().iter().all(|&x| x < breadth));
    if !fits {
        return Err(CylError::WindowTooSmall { depth, breadth });
    }
    let mut out = BTreeSet::new();
    let mut word = alloc::vec![0; depth];
    loop {
        let s = FinSeq::from(word.clone());
        if e.contains_prefix(&s) {
            out.insert(s);
        }
        // odometer over {0..=breadth}^depth
        let mut i = depth;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if word[i] < breadth {
                word[i] += 1;
                break;
            }
            word[i] = 0;
        }
    }
}

/// Length-`depth` prefix of `s` (padded with the fresh letter) with every
/// entry `≥ breadth` replaced by `breadth`.
pub fn clamp_to_window(s: &FinSeq, depth: usize, breadth: Nat) -> FinSeq {
    (0..depth)
        .map(|i| s.get(i).map_or(breadth, |x| x.min(breadth)))
        .collect::<alloc::vec::Vec<_>>()
        .into()
}
