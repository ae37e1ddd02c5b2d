//! Configuration loading and experiment runners behind the `umi` binary.

pub mod config;
pub mod experiments;
pub mod table;

pub use config::ExperimentConfig;
pub use table::{Format, Table};
