//! File formats, configuration and stage orchestration for the `stylus` CLI.

pub mod config;
pub mod data;
pub mod formats;
pub mod pipeline;
pub mod tables;

pub use config::RunConfig;
pub use data::DataFiles;
pub use pipeline::{run_pipeline, Stage, StageError, Workbench};
