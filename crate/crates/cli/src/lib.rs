//! Argument parsing and command dispatch for the `rklab` binary.

mod args;
mod run;

pub use args::{parse_args, Format, Job, OperatorSpec, Output, RunConfig, UsageError, DEFAULT_MAX_N};
pub use run::execute;

/// Exit codes.
pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
