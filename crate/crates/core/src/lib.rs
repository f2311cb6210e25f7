//! Direct and potential AI impact scoring for research fields.

pub mod ai;
pub mod analytics;
pub mod corpus;
pub mod counts;
pub mod error;
pub mod scoring;
pub mod stats;
pub mod synth;
pub mod tasks;
pub mod text;

pub use counts::Counts;
pub use error::{Error, Result};
