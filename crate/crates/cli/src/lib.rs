//! File formats and the command-line front end for `lindeg-core`.

pub mod commands;
pub mod error;
pub mod formats;

pub use commands::{run, Cli, Command};
pub use error::CliError;
pub use formats::{from_json, to_json, Format};
