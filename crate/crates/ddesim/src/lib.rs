//! Command-line driver for `ddesim-core`: run configuration, the
//! subcommands, and CSV/JSON output.

pub mod commands;
pub mod config;
pub mod executor;
pub mod output;

pub use commands::{run, Command, Report, RunError};
pub use config::{load_config, parse_config, RunConfig};
