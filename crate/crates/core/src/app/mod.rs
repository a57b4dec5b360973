//! Scenario files, the run driver, CSV output and the command-line front end.

pub mod cli;
pub mod output;
pub mod runner;
pub mod scenario;

pub use runner::{run, run_with, Reference, RunOutput, Snapshot};
pub use scenario::{builtin, parse_scenario, Scenario, BUILTINS};
