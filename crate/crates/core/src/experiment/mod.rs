//! Sweep configuration, preset families, the parallel runner and result
//! files.

mod config;
mod family;
mod output;
mod runner;

pub use config::{ConfigError, ExperimentConfig, OneOrMany, RunSpec, Series};
pub use family::{Family, SPEED_FAMILY_SETPOINT_MPS};
pub use output::{
    aggregate, emit_plot_data, read_rows, write_outputs, write_rows, AggregateRow, OutputError, Outputs,
    AGGREGATE_HEADER, PLOT_METRICS,
};
pub use runner::{row_order, run_sweep, threads_from_env, RunFailure, SweepResult, THREADS_ENV};
