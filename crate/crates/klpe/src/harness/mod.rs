//! Config-driven experiment harness: testbed generation, sweep execution,
//! CSV emission and the command-line front end.

pub mod cli;
pub mod config;
pub mod sweep;
pub mod testbed;

pub use cli::{cli_dispatch, run_cli};
pub use config::ExperimentConfig;
pub use sweep::{
    bootstrap_mean_ci, design_for, emit_csv, parse_csv, run_single, run_sweep, run_with_design,
    write_csv, Method, RunRecord,
};
pub use testbed::{generate_testbed, read_testbed_file, write_testbed_file};
