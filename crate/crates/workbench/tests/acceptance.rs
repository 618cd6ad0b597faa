//! The acceptance criteria, one line each. Exits non-zero if any fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use souslin_core::Window;
use souslin_workbench::suites::{
    all_spaces, extraction_baire, extraction_finite, lusin_suite, modified_wins, nd_witness_suite, oracle_equivalence,
    paper_example, selector_suite, vg_suite,
};
use souslin_workbench::tally::Tally;

const SEED: u64 = 1;

struct Criterion {
    number: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Tally,
}

fn lusin_twice() -> Tally {
    let w = Window::new(4, 6);
    let mut a = lusin_suite(&w);
    let b = lusin_suite(&w);
    let same = a == b;
    a.check("acceptance.lusin.repeat", same, || "two runs".into());
    a
}

fn extraction() -> Tally {
    let mut t = extraction_finite(&all_spaces(4), &Window::new(3, 4));
    t.merge(extraction_baire(SEED, 20, 6));
    t
}

const CRITERIA: [Criterion; 8] = [
    Criterion {
        number: 1,
        name: "cylinder oracle equivalence",
        limit: Some(Duration::from_secs(10)),
        run: || oracle_equivalence(SEED, 600, 3, 3),
    },
    Criterion { number: 2, name: "redundancy removal example and clause dispatch", limit: None, run: paper_example },
    Criterion {
        number: 3,
        name: "modified strategy wins on finite spaces",
        limit: Some(Duration::from_secs(60)),
        run: || modified_wins(&all_spaces(4), 4),
    },
    Criterion { number: 4, name: "Lusin synthesis", limit: Some(Duration::from_secs(10)), run: lusin_twice },
    Criterion { number: 5, name: "V^g transform", limit: None, run: || vg_suite(SEED, &Window::new(3, 6), 64) },
    Criterion { number: 6, name: "extraction end to end", limit: None, run: extraction },
    Criterion { number: 7, name: "selector identities", limit: None, run: || selector_suite(SEED, 2) },
    Criterion { number: 8, name: "nowhere dense witnesses", limit: None, run: || nd_witness_suite(SEED, 100) },
];

fn main() -> ExitCode {
    let mut failed = 0;
    for c in &CRITERIA {
        let start = Instant::now();
        let tally = (c.run)();
        let elapsed = start.elapsed();
        let total = tally.total();
        let slow = c.limit.is_some_and(|l| elapsed >= l);
        let ok = tally.is_clean() && !slow && total.pass > 0;
        let mut line = format!(
            "criterion {}: {} {} ({} checks passed, {} violations, {} unresolved, {:.2}s)",
            c.number,
            if ok { "PASS" } else { "FAIL" },
            c.name,
            total.pass,
            total.hard(),
            total.unresolved,
            elapsed.as_secs_f64()
        );
        if slow {
            line += &format!(" over the {}s limit", c.limit.unwrap().as_secs());
        }
        if let Some(f) = tally.first_failure() {
            line += &format!(" first: {} [{}] {:?} {}", f.id, f.context, f.node, f.detail);
        }
        println!("{line}");
        if !ok {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
