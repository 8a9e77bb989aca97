//! Acceptance checklist: one PASS/FAIL line per criterion, with the failing
//! checks listed underneath. Exits non-zero if any criterion fails.

use std::process::ExitCode;

use k3nl::verify::{run_criterion, CRITERIA};
use k3nl::Strategy;

fn main() -> ExitCode {
    let mut failures = 0;
    for (id, _) in CRITERIA {
        let report = run_criterion(id, Strategy::Parallel).expect("known criterion");
        let status = if report.passed { "PASS" } else { "FAIL" };
        println!("{status} criterion {id}: {}", report.title);
        for c in report.checks.iter().filter(|c| !c.passed) {
            println!("    {}: expected {}, got {}", c.name, c.expected, c.actual);
        }
        if !report.passed {
            failures += 1;
        }
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failures, CRITERIA.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
