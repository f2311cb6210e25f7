//! Downstream analyses over labeled papers, scores and authors.

pub mod careers;
pub mod collab;
pub mod demographics;
pub mod education;
pub mod grouping;
pub mod hits;

pub use careers::*;
pub use collab::*;
pub use demographics::*;
pub use education::*;
pub use grouping::*;
pub use hits::*;
