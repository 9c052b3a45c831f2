//! Command-line front end for `thermoboost`.
//!
//! Subcommands: `fixed-point`, `sweep`, `evolve`, `mc-validate`,
//! `entropy-probe` and `flux`. Artifacts are CSV (header row, LF line ends,
//! `# key=value` footer lines where a subcommand reports summary values) or
//! JSON, written to `--output` or standard output.

pub mod commands;
pub mod config;
pub mod error;

pub use commands::run;
pub use config::{parse_config, Cli, RunConfig};
pub use error::{exit, CliError};
