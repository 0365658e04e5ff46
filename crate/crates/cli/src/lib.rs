//! Configuration parsing and command dispatch for the `boussinesq` binary.

pub mod calibration;
pub mod config;
pub mod dispatch;
pub mod error;
pub mod report;

pub use config::{parse_config, Command, RunConfig};
pub use dispatch::{dispatch, Outcome, RunOptions};
pub use error::{CliError, CliResult};
