//! Batch experiment runner: JSON configurations in, JSON reports and CSV
//! point data out, plus the acceptance suite.

pub mod config;
pub mod error;
pub mod experiments;
pub mod record;
pub mod suite;

pub use config::{Experiment, ExperimentConfig, Kind};
pub use error::{LabError, Result};
pub use experiments::{Assertion, Outcome, Table};
pub use record::{emit_plot_data, resolve_output_dir, run, RunRecord, OUTPUT_ROOT_ENV};
pub use suite::{verify_suite, CriterionResult, Level, SuiteSummary};
