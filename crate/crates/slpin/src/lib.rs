//! Configuration files, CSV output and the `slpin` command line for
//! [`slpin_core`] experiments.
//!
//! The binary wraps [`commands`]; everything it does is also callable from
//! here, which is how the integration tests drive it.

pub mod commands;
pub mod config;
pub mod edgelist;
pub mod output;

pub use commands::CliError;
pub use config::{load_config, parse_config, resolve, ConfigError, Overrides, RawConfig, Resolved};
