//! Std companion to `sectorial-core`: matrix files, campaign configs,
//! randomized sweeps, harness self-tests and CSV curves.

pub mod config;
pub mod curve;
pub mod error;
pub mod hunt;
pub mod io;
pub mod sweep;

pub use config::SweepConfig;
pub use error::{HarnessError, EXIT_INPUT, EXIT_OK, EXIT_VIOLATION};
pub use sweep::{run_sweep, SweepOutcome, TrialRecord};
