//! Library side of the `qat` command-line tool: configuration, output
//! formatting and the subcommand implementations.

pub mod commands;
pub mod config;
pub mod output;

pub use commands::{run, CliError, Command, Rendered};
pub use config::{ConfigError, Format, Loaded, RunConfig};
