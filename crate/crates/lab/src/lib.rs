//! File formats, configuration and command-line driver for `cbs-core`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod shard;
pub mod verify;

pub use config::{Config, Mode, Overrides};
pub use error::{LabError, Result};
