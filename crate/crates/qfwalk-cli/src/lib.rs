//! Configuration parsing and mode drivers behind the `qfwalk` binary.

pub mod config;
pub mod run;

pub use config::{parse_config, ConfigError, ExperimentConfig, Mode, TestData};
pub use run::{convergence_csv, fmt17, run_suite, SuiteReport};
