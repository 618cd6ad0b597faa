//! Per-check outcomes of the finite-window verifiers.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::seq::FinSeq;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Status {
    /// Decided and holds.
    Pass,
    /// Decided and fails.
    Violation,
    /// Not decidable within the budget; one-sided evidence only.
    Unresolved,
    /// A precondition of the check does not hold.
    Breach,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Violation => "violation",
            Status::Unresolved => "unresolved",
            Status::Breach => "breach",
        }
    }

    pub fn is_hard_failure(self) -> bool {
        matches!(self, Status::Violation | Status::Breach)
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    /// Stable identifier, e.g. `covers.sub`.
    pub id: String,
    pub node: Option<FinSeq>,
    pub status: Status,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(
        &mut self,
        id: impl Into<String>,
        node: Option<&FinSeq>,
        status: Status,
        detail: impl Into<String>,
    ) {
        self.checks.push(Check {
            id: id.into(),
            node: node.cloned(),
            status,
            detail: detail.into(),
        });
    }

    pub fn pass(&mut self, id: &str, node: Option<&FinSeq>) {
        self.push(id, node, Status::Pass, "");
    }

    /// Records `Pass` when `ok`, otherwise `Violation` with `detail`.
    pub fn expect(&mut self, id: &str, node: Option<&FinSeq>, ok: bool, detail: impl Into<String>) {
        if ok {
            self.pass(id, node);
        } else {
            self.push(id, node, Status::Violation, detail);
        }
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn hard_failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status.is_hard_failure())
    }

    pub fn is_clean(&self) -> bool {
        self.hard_failures().next().is_none()
    }

    pub fn with_id<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.checks.iter().filter(move |c| c.id == id)
    }

    pub fn status_at(&self, id: &str, node: &FinSeq) -> Option<Status> {
        self.checks
            .iter()
            .find(|c| c.id == id && c.node.as_ref() == Some(node))
            .map(|c| c.status)
    }
}
