//! Command-line front end for `cartankit`.
//!
//! [`run`] parses an argument vector, dispatches to the core library and
//! renders a [`RunReport`]. Exit codes: 0 success, 1 a verdict failed,
//! 2 usage, parse or precondition errors, 3 an exhausted search budget.

pub mod commands;
pub mod input;
pub mod oracle;
pub mod report;
pub mod suite;

use std::time::Instant;

use clap::Parser;

pub use report::{RunReport, Verdict};

/// Everything a process invocation would produce.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match commands::Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome {
                    exit_code: 2,
                    stdout: String::new(),
                    stderr: text,
                }
            } else {
                Outcome {
                    exit_code: 0,
                    stdout: text,
                    stderr: String::new(),
                }
            };
        }
    };
    let start = Instant::now();
    let budgets = commands::Budgets { explicit: cli.budget };
    match commands::dispatch(&cli.command, budgets) {
        Ok(mut report) => {
            report.timing_ms = start.elapsed().as_millis() as u64;
            let stdout = if cli.json { report.to_json() } else { report.to_text() };
            Outcome {
                exit_code: if report.all_pass() { 0 } else { 1 },
                stdout,
                stderr: String::new(),
            }
        }
        Err(e) => Outcome {
            exit_code: commands::exit_code(&e),
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}
