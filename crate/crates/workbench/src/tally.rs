//! Aggregated suite results. Passing checks are only counted; every other
//! check is kept with its node and detail.

use std::collections::BTreeMap;

use serde::Serialize;
use souslin_core::{Report, Status};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub pass: u64,
    pub violation: u64,
    pub unresolved: u64,
    pub breach: u64,
}

impl Counts {
    fn bump(&mut self, s: Status) {
        match s {
            Status::Pass => self.pass += 1,
            Status::Violation => self.violation += 1,
            Status::Unresolved => self.unresolved += 1,
            Status::Breach => self.breach += 1,
        }
    }

    pub fn hard(&self) -> u64 {
        self.violation + self.breach
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Finding {
    pub id: String,
    /// Where the check ran: a space, a map, an expression, ...
    pub context: String,
    pub node: Option<String>,
    pub status: &'static str,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Tally {
    pub counts: BTreeMap<String, Counts>,
    pub findings: Vec<Finding>,
}

impl Tally {
    pub fn new() -> Self {
        Tally::default()
    }

    pub fn record(&mut self, id: &str, context: impl FnOnce() -> String, status: Status, detail: impl FnOnce() -> String) {
        self.counts.entry(id.to_string()).or_default().bump(status);
        if status != Status::Pass {
            self.findings.push(Finding {
                id: id.to_string(),
                context: context(),
                node: None,
                status: status.as_str(),
                detail: detail(),
            });
        }
    }

    pub fn check(&mut self, id: &str, ok: bool, context: impl FnOnce() -> String) {
        let status = if ok { Status::Pass } else { Status::Violation };
        self.record(id, context, status, String::new);
    }

    pub fn absorb(&mut self, report: &Report, context: impl Fn() -> String) {
        for c in &report.checks {
            self.counts.entry(c.id.clone()).or_default().bump(c.status);
            if c.status != Status::Pass {
                self.findings.push(Finding {
                    id: c.id.clone(),
                    context: context(),
                    node: c.node.as_ref().map(|n| n.to_string()),
                    status: c.status.as_str(),
                    detail: c.detail.clone(),
                });
            }
        }
    }

    pub fn merge(&mut self, other: Tally) {
        for (id, c) in other.counts {
            let e = self.counts.entry(id).or_default();
            e.pass += c.pass;
            e.violation += c.violation;
            e.unresolved += c.unresolved;
            e.breach += c.breach;
        }
        self.findings.extend(other.findings);
    }

    pub fn total(&self) -> Counts {
        self.counts.values().fold(Counts::default(), |mut acc, c| {
            acc.pass += c.pass;
            acc.violation += c.violation;
            acc.unresolved += c.unresolved;
            acc.breach += c.breach;
            acc
        })
    }

    pub fn hard_failures(&self) -> u64 {
        self.total().hard()
    }

    pub fn is_clean(&self) -> bool {
        self.hard_failures() == 0
    }

    pub fn first_failure(&self) -> Option<&Finding> {
        self.findings.iter().find(|f| f.status == "violation" || f.status == "breach")
    }
}
