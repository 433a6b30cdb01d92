//! Scenario files, the sweep runner, result formats and the command-line
//! front end of the noisy probabilistic flooding simulator.
//!
//! The simulation engine itself lives in [`noisyflood_core`].

pub mod cli;
pub mod config;
pub mod oracle_check;
pub mod results;
pub mod runner;

pub use noisyflood_core as core;
