use alloc::collections::BTreeSet;
use alloc::sync::Arc;

use super::{witness_cylinder_above, CylError, CylExpr};
use crate::seq::{FinSeq, Nat};

/// A downward-closed tree `T ⊆ ω^{<ω}` in which every node `a⌢j` has
/// `j < beta`. Its branch set `[T]` is closed and nowhere dense.
#[derive(Clone)]
pub struct NdTree {
    member: Arc<dyn Fn(&FinSeq) -> bool + Send + Sync>,
    beta: Nat,
    inspect_depth: usize,
}

impl NdTree {
    /// `rule` must describe a downward-closed set; see [`NdTree::check_shape`].
    pub fn new(
        rule: impl Fn(&FinSeq) -> bool + Send + Sync + 'static,
        beta: Nat,
        inspect_depth: usize,
    ) -> Self {
        NdTree { member: Arc::new(rule), beta, inspect_depth }
    }

    /// All sequences with entries `< beta`.
    pub fn full(beta: Nat, inspect_depth: usize) -> Self {
        NdTree::new(move |a| a.entries().iter().all(|&x| x < beta), beta, inspect_depth)
    }

    /// Sequences with entries `< beta` having no prefix in `forbidden`.
    pub fn pruned(beta: Nat, forbidden: BTreeSet<FinSeq>, inspect_depth: usize) -> Self {
        NdTree::new(
            move |a| {
                a.entries().iter().all(|&x| x < beta)
                    && (0..=a.len()).all(|i| !forbidden.contains(&a.restrict(i).unwrap()))
            },
            beta,
            inspect_depth,
        )
    }

    pub fn beta(&self) -> Nat {
        self.beta
    }

    pub fn inspect_depth(&self) -> usize {
        self.inspect_depth
    }

    pub fn contains(&self, a: &FinSeq) -> bool {
        (self.member)(a)
    }

    /// Every prefix of `s` lies in `T`, i.e. `S_s` may meet `[T]`.
    pub fn admits_path(&self, s: &FinSeq) -> bool {
        (0..=s.len()).all(|i| self.contains(&s.restrict(i).unwrap()))
    }

    /// Exhaustive check, up to the inspection depth, of downward closure and
    /// the branching bound. Returns the first offending node.
    pub fn check_shape(&self) -> Result<(), FinSeq> {
        // values up to beta suffice: anything larger is handled like beta
        for a in FinSeq::window(self.inspect_depth, self.beta + 1) {
            if !self.contains(&a) {
                continue;
            }
            if a.last().is_some_and(|j| j >= self.beta) {
                return Err(a);
            }
            if let Some(p) = a.parent() {
                if !self.contains(&p) {
                    return Err(a);
                }
            }
        }
        Ok(())
    }
}

impl core::fmt::Debug for NdTree {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.debug_struct("NdTree")
            .field("beta", &self.beta)
            .field("inspect_depth", &self.inspect_depth)
            .finish_non_exhaustive()
    }
}

/// A stem `c` with `S_c ⊆ u` and `S_c ∩ [T] = ∅`.
///
/// Extends the top of a satisfying type chain by a value `≥ beta` fresh to
/// `u`'s mentions: `c ∉ T`, so by downward closure no branch through `c` is
/// in `[T]`.
pub fn nd_witness(u: &CylExpr, tree: &NdTree) -> Result<FinSeq, CylError> {
    witness_cylinder_above(u, tree.beta()).ok_or(CylError::EmptySet)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cylinders::subset;

    fn zero_stems() -> NdTree {
        NdTree::new(|a| a.entries().iter().all(|&x| x == 0), 1, 4)
    }

    #[test]
    fn leaves_the_zero_tree() {
        let t = zero_stems();
        assert!(t.check_shape().is_ok());
        let c = nd_witness(&CylExpr::Full, &t).unwrap();
        assert_eq!(c, FinSeq::from([1]));
        assert!(!t.contains(&c));

        let u = CylExpr::cylinder([0]);
        let c = nd_witness(&u, &t).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c.get(0), Some(0));
        assert!(c.get(1).unwrap() >= 1);
        assert!(!t.contains(&c));
        assert!(subset(&CylExpr::Atom(c), &u));
    }

    #[test]
    fn empty_target_is_an_error() {
        assert_eq!(nd_witness(&CylExpr::Empty, &zero_stems()), Err(CylError::EmptySet));
    }

    #[test]
    fn shape_violations_are_found() {
        let not_closed = NdTree::new(|a| a.len() != 1, 2, 3);
        assert!(not_closed.check_shape().is_err());
        let too_wide = NdTree::new(|_| true, 2, 2);
        assert!(too_wide.check_shape().is_err());
        let pruned = NdTree::pruned(2, [FinSeq::from([1, 0])].into_iter().collect(), 4);
        assert!(pruned.check_shape().is_ok());
        assert!(!pruned.contains(&FinSeq::from([1, 0, 1])));
        assert!(pruned.contains(&FinSeq::from([1, 1, 0])));
    }
}
