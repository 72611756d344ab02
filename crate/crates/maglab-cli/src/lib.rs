//! Command-line surface for the magnitude engines.
//!
//! The `maglab` binary parses flags into the argument structs in [`config`],
//! runs one of the [`commands`] and writes its [`output::Artifacts`]. JSON
//! artifacts carry `"schema": 1` and echo the resolved [`config::RunConfig`],
//! so identical flags give byte-identical files.
//!
//! Exit codes: `0` success, `2` usage, `3` engine failure, `4` tolerance
//! failure.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{run, CONVENTION};
pub use config::{parse_r_grid, Cli, Command, RunConfig, SCHEMA};
pub use error::CliError;
pub use output::{Artifacts, Table};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "MAGLAB_THREADS";

/// Sizes the global thread pool from [`THREADS_ENV`] when set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{value}`")))?;
    #[cfg(feature = "parallel")]
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Engine(e.to_string()))?;
    #[cfg(not(feature = "parallel"))]
    log::info!("{THREADS_ENV}={n} ignored in a sequential build");
    Ok(())
}
