//! File formats, reports and the command-line driver for `bwrum-core`.

pub mod cli;
pub mod files;
pub mod fixtures;
pub mod labels;
pub mod report;

pub use cli::{run, Exit};
pub use labels::Labels;
