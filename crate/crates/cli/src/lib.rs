//! Library half of the `murmur` binary: the experiment catalog, the run
//! pipeline, table caching, CSV output and SVG plots.

pub mod catalog;
mod error;
pub mod ingest;
pub mod render;
pub mod run;
pub mod svg;
pub mod tables;

pub use error::CliError;
