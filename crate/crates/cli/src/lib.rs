//! Command-line driver: configuration, suites, reports and plots.

pub mod commands;
pub mod config;
pub mod plot;
pub mod report;
pub mod suites;

use std::fmt;

pub use commands::{execute, Cli, Command};
pub use report::Report;

/// A bad flag, config file or parameter choice; exits with status 2.
#[derive(Debug, Clone, PartialEq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub const EXIT_PASS: u8 = 0;
pub const EXIT_FAIL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

/// Exit status for an error: parameter and config problems are usage errors.
pub fn exit_code_for(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return EXIT_USAGE;
    }
    match err.downcast_ref::<koranyi_core::Error>() {
        Some(koranyi_core::Error::InvalidParameter(_))
        | Some(koranyi_core::Error::Domain(_))
        | Some(koranyi_core::Error::DimensionMismatch { .. }) => EXIT_USAGE,
        _ => EXIT_FAIL,
    }
}

/// Caps the global thread pool at `KORANYI_THREADS` when set.
pub fn init_threads() -> Result<(), UsageError> {
    let Ok(raw) = std::env::var("KORANYI_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| UsageError(format!("KORANYI_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| UsageError(format!("cannot size the thread pool: {e}")))
}
