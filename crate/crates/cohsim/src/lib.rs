//! File formats, configuration and command implementations behind the
//! `cohsim` binary.

pub mod angle;
pub mod cli;
pub mod commands;
pub mod config;
pub mod format;
pub mod output;
pub mod parallel;
pub mod quil;
