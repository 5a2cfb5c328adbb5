//! Monte Carlo drivers and the restriction pipeline behind the `experiments`
//! binary. Reports are deterministic functions of the config and its seeds.

mod config;
mod error;
mod mc;
mod pipeline;
mod report;

pub use config::{ExperimentConfig, OutputPaths, SwitchingConfig};
pub use error::ExperimentError;
pub use mc::{run_switch_mc, switch_trial};
pub use pipeline::run_pipeline;
pub use report::{wilson95, RateEstimate, RoundSummary, TrialReport, TrialRow};
