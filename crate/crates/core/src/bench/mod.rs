//! Comparison harness: scenario files, the five commands behind the
//! `tullock` binary, and their CSV/JSON artifacts.

pub mod commands;
pub mod output;
pub mod scenario;
pub mod verify;

pub use commands::{
    compare, optimize_benchmark, population_study, simulate, solve_opf, verify, Comparison,
    ComparisonRow, Overrides, PopulationRow, TabulatedStrategy,
};
pub use scenario::Scenario;
pub use verify::{Check, Status, VerifyOptions, VerifyReport};

/// Exit code when `verify` ran to completion but a check failed.
pub const EXIT_CHECK_FAILED: i32 = 3;
