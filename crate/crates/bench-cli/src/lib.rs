//! Batch runner for deletion-scheme comparisons.
//!
//! A config file describes one problem and a grid of selection schemes,
//! deletion schemes and population sizes. Every grid cell is run
//! `repetitions` times with seeds `base_seed + run_index`, and results go to
//! a CSV with one row per run and one aggregate row per cell.

pub mod config;
pub mod experiment;

pub use config::{parse_config, Cell, ConfigError, ConfigErrors, ExperimentConfig, ProblemSpec};
pub use experiment::{
    check_instance, diversity_csv, histogram_csv, results_csv, run_experiment, write_file, BenchError,
    ExperimentResult, RESULT_COLUMNS,
};
