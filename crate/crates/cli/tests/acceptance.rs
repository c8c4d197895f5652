//! One line per acceptance criterion, with its runtime limit.
//!
//! Positional arguments select criteria by number; the default is all ten.
//! Criterion 9 is budget-gated: set `CARTANKIT_EXTENDED_BUDGET` to a node
//! count (or `max`) to run it; otherwise it is reported as skipped.

use std::process::ExitCode;
use std::time::Duration;

use cartankit_cli::suite::{run_check, Status, CHECKS};

/// Runtime limit per criterion; the extended one has none.
fn limit(id: u32) -> Option<Duration> {
    let secs = match id {
        1 | 2 => 10,
        3 | 5 | 6 => 1,
        4 | 8 => 60,
        7 | 10 => 120,
        _ => return None,
    };
    Some(Duration::from_secs(secs))
}

fn extended_budget() -> Option<u64> {
    std::env::var("CARTANKIT_EXTENDED_BUDGET").ok().map(|b| {
        if b == "max" {
            u64::MAX
        } else {
            b.parse().expect("CARTANKIT_EXTENDED_BUDGET is a node count or max")
        }
    })
}

fn criterion(id: u32) -> bool {
    let budget = if id == 9 { extended_budget() } else { None };
    let c = run_check(id, budget);
    let name = CHECKS[id as usize - 1].1;
    let limit = limit(id);
    let within = limit.is_none_or(|l| Duration::from_millis(c.ms) <= l);
    let status = if c.status == Status::Pass && !within {
        Status::Fail
    } else {
        c.status
    };
    let limit = limit.map_or("none".to_string(), |l| format!("{} ms", l.as_millis()));
    println!(
        "criterion {id:2} {} {name}: {} [{} ms, limit {limit}]",
        status.label(),
        c.detail,
        c.ms
    );
    status != Status::Fail
}

fn main() -> ExitCode {
    // Flags such as `--nocapture` from the test runner are ignored.
    let mut ids: Vec<u32> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    if ids.is_empty() {
        ids = CHECKS.iter().map(|(id, _)| *id).collect();
    }
    let failed: Vec<u32> = ids.into_iter().filter(|&id| !criterion(id)).collect();
    if failed.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("failed criteria: {failed:?}");
        ExitCode::FAILURE
    }
}
