//! Command-line pipeline around the `wnet` core: configuration, per-year
//! processing, report bundles and the binary/weighted comparison table.

pub mod bundle;
pub mod compare;
pub mod config;
pub mod error;
pub mod pipeline;

pub use bundle::{ReportBundle, MANIFEST};
pub use compare::{compare_views, ComparisonTable, LabelThresholds};
pub use config::{Analysis, PipelineArgs, PipelineConfig, YearSelection};
pub use error::CliError;
pub use pipeline::{run_pipeline, run_pipeline_with};
