//! Config-driven orchestration of geometry, bound, horn and eigensolver
//! runs, with JSON reports and columnar plot files.

pub mod config;
pub mod pipeline;

pub use config::{BoundConfig, EigsConfig, GeometryConfig, HornConfig, OutputConfig, ProfileConfig, RunConfig};
pub use pipeline::{
    emit_plot_data, run, ComparisonRow, EigenSummary, FailureManifest, GeometrySummary, HornRow,
    MomentRow, MultiArmTotal, RunOutcome, RunReport, Stage,
};
