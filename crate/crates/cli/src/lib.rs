//! Command-line driver for the duality and generalized-stabilizer checks.

pub mod commands;
pub mod config;
pub mod formats;
pub mod report;

pub use commands::{run, Command};
pub use config::{Format, Options, RunConfig};
pub use report::{Cell, Report};
