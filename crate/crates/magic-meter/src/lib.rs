//! File formats, parallel execution and the `magic-meter` command line on
//! top of [`magic_meter_core`].

pub mod circuit_io;
pub mod cli;
pub mod config;
pub mod error;
pub mod output;
pub mod parallel;

pub use error::{Error, Result};
