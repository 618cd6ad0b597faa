//! Std companion of `souslin-core`: JSON file formats, the seeded
//! verification suites, the interactive game session and the `souslin`
//! command line.

pub mod cli;
pub mod formats;
pub mod repl;
pub mod suites;
pub mod tally;

pub use suites::{run_suite, RunConfig, SpaceSpec, SuiteName, SuiteReport};
