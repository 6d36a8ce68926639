//! Scenario runner for the skyrmag engine: TOML configs, initial states,
//! checkpoints and result files.

pub mod checkpoint;
pub mod config;
pub mod error;
pub mod init;
pub mod output;
pub mod run;
