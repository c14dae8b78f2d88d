//! Command-line front end for `weylwalks-core`: exact counts, asymptotic
//! estimates, oracle validation runs and regime sweeps, with JSON and CSV output.

pub mod cli;
pub mod report;

pub use cli::{run, Cli, ExitCode};
