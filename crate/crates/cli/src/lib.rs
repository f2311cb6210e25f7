//! Config handling, staged pipeline and output writing behind the `sciai` binary.

pub mod config;
pub mod emit;
pub mod pipeline;
pub mod report;

pub use config::Config;
pub use pipeline::{run, RunReport, Stage};
