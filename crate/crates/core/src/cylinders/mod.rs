//! Finite boolean combinations of basic clopen cylinders `S_a` of the Baire
//! space, with exact decision procedures.
//!
//! A branch `p` satisfies an atom `S_a` iff `a ⊑ p`. Over a finite mention set
//! `M` the atoms a branch satisfies form a chain `{b ∈ M : b ⊑ m}` for some
//! `m ∈ M` (or the empty chain), and every such chain is realized by a branch:
//! extend `m` with a value that no mention uses at that position. Emptiness,
//! inclusion and witness extraction therefore reduce to evaluating the formula
//! on at most `|M| + 1` chains.

mod antichain;
mod decide;
mod nd;
mod oracle;
mod parse;

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use core::fmt;

use crate::seq::{BranchRule, FinSeq, Nat};

pub use antichain::{minimal_antichain, AntichainFamily, LazyAntichain};
pub use decide::{
    equal, intersects, is_empty, realizable_chains, single_cylinder, strict_witness, subset,
    witness_cylinder, witness_cylinder_above, TypeChain,
};
pub use nd::{nd_witness, NdTree};
pub use oracle::{clamp_to_window, trace_window};
pub use parse::ParseError;

/// A symbolic clopen subset of `ω^ω`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum CylExpr {
    Empty,
    Full,
    Atom(FinSeq),
    Union(Box<CylExpr>, Box<CylExpr>),
    Intersection(Box<CylExpr>, Box<CylExpr>),
    Difference(Box<CylExpr>, Box<CylExpr>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CylError {
    /// An operation that needs a nonempty set was given an empty one.
    EmptySet,
    /// `trace_window` called with a window that does not cover the mentions.
    WindowTooSmall { depth: usize, breadth: Nat },
}

impl fmt::Display for CylError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CylError::EmptySet => f.write_str("expression denotes the empty set"),
            CylError::WindowTooSmall { depth, breadth } => write!(
                f,
                "window (depth {depth}, breadth {breadth}) does not cover the expression's mentions"
            ),
        }
    }
}

impl CylExpr {
    /// `S_a`. The empty stem gives [`CylExpr::Full`].
    pub fn cylinder(a: impl Into<FinSeq>) -> Self {
        let a = a.into();
        if a.is_empty() {
            CylExpr::Full
        } else {
            CylExpr::Atom(a)
        }
    }

    pub fn union(self, other: CylExpr) -> Self {
        CylExpr::Union(Box::new(self), Box::new(other))
    }

    pub fn intersect(self, other: CylExpr) -> Self {
        CylExpr::Intersection(Box::new(self), Box::new(other))
    }

    pub fn minus(self, other: CylExpr) -> Self {
        CylExpr::Difference(Box::new(self), Box::new(other))
    }

    /// Every atom stem occurring in the expression. `Full` counts as `⟨⟩`.
    pub fn mentions(&self) -> BTreeSet<FinSeq> {
        let mut out = BTreeSet::new();
        self.collect_mentions(&mut out);
        out
    }

    fn collect_mentions(&self, out: &mut BTreeSet<FinSeq>) {
        match self {
            CylExpr::Empty => {}
            CylExpr::Full => {
                out.insert(FinSeq::empty());
            }
            CylExpr::Atom(a) => {
                out.insert(a.clone());
            }
            CylExpr::Union(l, r) | CylExpr::Intersection(l, r) | CylExpr::Difference(l, r) => {
                l.collect_mentions(out);
                r.collect_mentions(out);
            }
        }
    }

    /// Longest mention; membership of a branch depends only on this prefix.
    pub fn max_mention_len(&self) -> usize {
        self.mentions().iter().map(FinSeq::len).max().unwrap_or(0)
    }

    pub fn atom_count(&self) -> usize {
        match self {
            CylExpr::Empty | CylExpr::Full => 0,
            CylExpr::Atom(_) => 1,
            CylExpr::Union(l, r) | CylExpr::Intersection(l, r) | CylExpr::Difference(l, r) => {
                l.atom_count() + r.atom_count()
            }
        }
    }

    /// Evaluate the boolean formula with each atom decided by `holds`.
    pub fn eval_with(&self, holds: &mut impl FnMut(&FinSeq) -> bool) -> bool {
        match self {
            CylExpr::Empty => false,
            CylExpr::Full => true,
            CylExpr::Atom(a) => holds(a),
            CylExpr::Union(l, r) => l.eval_with(holds) | r.eval_with(holds),
            CylExpr::Intersection(l, r) => l.eval_with(holds) & r.eval_with(holds),
            CylExpr::Difference(l, r) => l.eval_with(holds) & !r.eval_with(holds),
        }
    }

    /// Exact membership of an infinite branch; reads `p` only up to
    /// [`CylExpr::max_mention_len`].
    pub fn contains_branch(&self, p: &BranchRule) -> bool {
        let prefix = p.restrict(self.max_mention_len());
        self.contains_prefix(&prefix)
    }

    /// Membership of any branch extending `s`, valid when `s` is at least as
    /// long as every mention.
    pub fn contains_prefix(&self, s: &FinSeq) -> bool {
        self.eval_with(&mut |a| a.is_prefix_of(s))
    }
}

impl fmt::Debug for CylExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
