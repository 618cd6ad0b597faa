//! Exact, allocation-only core of the Souslin scheme workbench.
//!
//! * [`seq`]: finite sequences, lazy branches and fair pairing.
//! * [`cylinders`]: boolean combinations of basic clopen cylinders with
//!   exact emptiness, inclusion and witness extraction.
//! * [`space`]: the topology interface, with a symbolic Baire model and
//!   explicit finite topologies.
//! * [`schemes`]: lazily memoized Souslin schemes and finite-window checks.
//! * [`lusin`]: synthesis of partitioning schemes from a countable base.
//! * [`choquet`]: the Choquet game, the modified strategy and scheme
//!   extraction from a winning strategy.
//! * [`selectors`]: locally constant surjections onto finite targets and
//!   their image identities.

#![no_std]

extern crate alloc;

pub mod choquet;
pub mod cylinders;
pub mod lusin;
pub mod report;
pub mod schemes;
pub mod selectors;
pub mod seq;
pub mod space;

pub use cylinders::CylExpr;
pub use report::{Report, Status};
pub use schemes::{Scheme, Window};
pub use seq::{BranchRule, FinSeq, Nat, NatMap};
pub use space::{BaireSpaceModel, FiniteSpaceModel, PointSet, SpaceModel};
