//! Experiment orchestration around `tandem-core`: configuration files,
//! UCI engine processes, the shared evaluation cache, parallel match
//! execution, and the on-disk record/report formats.

pub mod agents;
pub mod commands;
pub mod config;
pub mod evaluator;
pub mod formats;
pub mod induced;
pub mod runner;
pub mod uci;
