//! Scenario files, CSV output, parallel kernel evolution and the experiments
//! behind the `qfho` command-line tool, built on [`qfho_core`].

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod parallel;

pub use config::{Packet, Scenario, Schedule};
pub use error::{Error, Result};
