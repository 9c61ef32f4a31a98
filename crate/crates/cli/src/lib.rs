//! Metric catalog, `.gmet` files and verification pipelines behind `gfc`.

pub mod catalog;
pub mod gmet;
pub mod pipeline;

pub use catalog::{parse_metric_file, resolve};
pub use gmet::{parse_metric, Classification, GmetError, MetricSpec};
pub use pipeline::{run_pipeline, show, Mode, Outcome, PipelineOptions, Report, ShowWhat};
