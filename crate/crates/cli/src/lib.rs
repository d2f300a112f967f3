//! Command-line plumbing around the `bistrip` library: config files, sweeps,
//! reports and the self-verification suite.

pub mod config;
pub mod error;
pub mod report;
pub mod sweep;
pub mod verify;

pub use error::{CliError, ExitCode};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
