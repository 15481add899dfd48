//! Standard-library companion to `hoq-core`: parameter search, file
//! formats, heatmaps and the `hoq` command-line pipelines.

pub mod cli;
pub mod error;
pub mod formats;
pub mod search;
pub mod svg;

pub use error::{Error, Result};
