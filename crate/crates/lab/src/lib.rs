//! Experiment harness for the `ctm-core` processes: seeded runs, seed sweeps,
//! Monte Carlo martingale checks, and the CSV/JSON artifacts they produce.

pub mod config;
mod error;
pub mod format;
pub mod run;
pub mod stats;
pub mod sweep;
pub mod validate;

pub use error::LabError;

pub type Result<T, E = LabError> = std::result::Result<T, E>;
