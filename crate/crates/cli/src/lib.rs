//! File formats, verification suites and command runners behind the
//! `orbit-site` binary.

pub mod battery;
pub mod codec;
pub mod coeff;
pub mod commands;
pub mod report;
pub mod verify;

pub use commands::{guards_from_env, run, Cli, CliError, Output};
