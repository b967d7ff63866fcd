//! IO, file formats, bundled fixtures and the command implementations
//! behind the `sboxkit` binary.

pub mod commands;
pub mod error;
pub mod fixtures;
pub mod formats;
pub mod parallel;
pub mod report;
pub mod verify;

pub use error::{CliError, CliResult};
