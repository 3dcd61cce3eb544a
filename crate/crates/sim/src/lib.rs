//! Scenario sweeps, matrix inspection and self-validation on top of
//! `helicity-core`. The `helicity-sim` binary is a thin CLI over this crate.

pub mod config;
pub mod error;
pub mod matrix;
pub mod sweep;
pub mod validate;

pub use config::ScenarioConfig;
pub use error::{SimError, SimResult};
pub use matrix::print_matrix;
pub use sweep::{run_single, run_sweep, SweepResult};
pub use validate::{validate, validate_with, ValidationReport};
