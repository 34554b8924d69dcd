//! Configuration and subcommands of the `qho-phase` binary.

pub mod commands;
pub mod config;
