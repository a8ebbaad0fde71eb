//! One line per acceptance criterion. Every check is an exact identity, so
//! the only tolerance is the wall-clock budget of each criterion.

use std::process::ExitCode;
use std::time::Instant;

use satake_core::campaign::{acceptance_suite, run_checks};
use satake_core::report::Status;

fn main() -> ExitCode {
    let mut failed = 0;
    for criterion in acceptance_suite() {
        let start = Instant::now();
        let reports = run_checks(&criterion.checks);
        let secs = start.elapsed().as_secs_f64();
        let passed = reports.iter().filter(|r| r.status == Status::Pass).count();
        let ok = passed == reports.len() && secs < criterion.budget_secs as f64;
        println!(
            "criterion {:>2} {}  {} ({}/{} checks, {:.1}s of {}s)",
            criterion.number,
            if ok { "PASS" } else { "FAIL" },
            criterion.title,
            passed,
            reports.len(),
            secs,
            criterion.budget_secs
        );
        for r in reports.iter().filter(|r| r.status != Status::Pass) {
            println!("    {} {:?}: {}", r.identity_id, r.params, r.witness.as_deref().unwrap_or(""));
        }
        if !ok {
            failed += 1;
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
