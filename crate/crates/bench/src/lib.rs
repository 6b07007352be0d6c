//! Benchmark harness and report plumbing behind the `reliacut` command.

pub mod config;
pub mod error;
pub mod experiment;
pub mod format;
pub mod inspect;
pub mod report;
pub mod stats;

pub use config::{ExperimentConfig, NetworkEntry};
pub use error::{BenchError, Result};
pub use experiment::{run_experiment, RunOptions};
pub use report::{emit_report, parse_json_report, ReportFormat, RunReport};
pub use stats::welch_p_value;
