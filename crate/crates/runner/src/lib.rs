//! Experiment runner for XXZ-chain entanglement studies: configuration,
//! parallel ensemble averaging, CSV/SVG output, run manifests and the figure
//! drivers behind the `xxz` command.

pub mod config;
pub mod csv;
mod error;
pub mod experiments;
pub mod manifest;
pub mod simulate;
pub mod svg;

pub use config::{RunConfig, VariantSpec, WORKERS_ENV};
pub use error::{Result, RunError};
pub use experiments::{
    Outcome, RunReport, SweepAxis, run_fig1, run_fig2, run_fig3, run_sweep, selftest,
};
pub use manifest::RunManifest;
pub use simulate::{Simulator, TrajectorySource};
