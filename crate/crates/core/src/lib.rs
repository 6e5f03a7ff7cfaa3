//! Online testing of the IID assumption on binary data with a single changepoint.
//!
//! The crate is `no_std` (it needs `alloc`) and contains only pure computation:
//!
//! - [`model`]: changepoint configuration, seeded data generation, prefix counts.
//! - [`conformal`]: smoothed conformal p-values under the identity score.
//! - [`calibrators`]: two-level betting functions and the oracle-tuned variants.
//! - [`oracles`]: the likelihood ratio and the inf likelihood ratio benchmarks.
//! - [`engines`]: Simple Jumper, Sleeper/Chooser and the oracle-tuned conformal
//!   capital processes.
//!
//! All processes report capital as base-10 logarithms ([`Trajectory`]).

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod calibrators;
pub mod conformal;
pub mod engines;
mod error;
pub mod model;
pub mod oracles;
pub mod rng;
mod trajectory;

pub use error::Error;
pub use model::{BinarySequence, ExperimentConfig};
pub use conformal::PValueSequence;
pub use trajectory::{Process, Trajectory};

pub type Result<T, E = Error> = core::result::Result<T, E>;
