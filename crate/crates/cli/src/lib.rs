//! Library half of the `qwalk` command-line tool: argument sources, output
//! encodings and the subcommand implementations.

pub mod angle;
pub mod commands;
pub mod config;
pub mod output;
pub mod plot;

pub use angle::parse_angle;
pub use config::{parse_config_text, Command, ConfigError, RunConfig};
