//! `tracelab` command-line front end. [`run`] parses arguments, resolves
//! the configuration and dispatches to the `cmd_*` functions.
//!
//! Exit codes: 0 when no FAIL verdict was produced, 1 when at least one
//! was, 2 for usage and configuration errors.

pub mod catalogue;
pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use commands::{
    cmd_probe, cmd_repro, cmd_search, cmd_sweep, cmd_verify, execute, Streams, EXIT_FAIL, EXIT_OK,
    EXIT_USAGE,
};
pub use config::{resolve, Cli, RunConfig, UsageError};
pub use output::emit_plot_data;

/// Full invocation with explicit streams and seed environment value.
pub fn run<I, T>(args: I, env_seed: Option<&str>, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let cfg = match resolve(&cli, env_seed) {
        Ok(cfg) => cfg,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let mut streams = Streams { stdout, stderr };
    match execute(&cfg, &mut streams) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(streams.stderr, "error: {e:#}");
            EXIT_USAGE
        }
    }
}
