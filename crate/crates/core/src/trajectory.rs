use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::{Error, Result};

/// The processes the crate can evaluate on one experiment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Process {
    /// Likelihood ratio of the true model to the pre-change model (oracle benchmark).
    LikelihoodRatio,
    /// Infimum over IID Bernoulli models of the likelihood ratio (oracle benchmark).
    InfLikelihoodRatio,
    OptimalCtm,
    PseudoCtm,
    SimpleJumper,
    SleeperChooser,
}

impl Process {
    pub const ALL: [Process; 6] = [
        Process::LikelihoodRatio,
        Process::InfLikelihoodRatio,
        Process::OptimalCtm,
        Process::PseudoCtm,
        Process::SimpleJumper,
        Process::SleeperChooser,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Process::LikelihoodRatio => "lr",
            Process::InfLikelihoodRatio => "inf_lr",
            Process::OptimalCtm => "optimal_ctm",
            Process::PseudoCtm => "pseudo_ctm",
            Process::SimpleJumper => "simple_jumper",
            Process::SleeperChooser => "sleeper_chooser",
        }
    }

    /// Whether the process is a test martingale for the IID model.
    pub fn is_iid_test_martingale(self) -> bool {
        matches!(
            self,
            Process::OptimalCtm | Process::SimpleJumper | Process::SleeperChooser
        )
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Process {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Process::ALL
            .into_iter()
            .find(|p| p.name() == s)
            .ok_or(Error::Contract("unknown process name"))
    }
}

/// A capital process `S_1..S_N` stored as base-10 logarithms.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub process: Process,
    pub log10_values: Vec<f64>,
}

impl Trajectory {
    pub fn new(process: Process, log10_values: Vec<f64>) -> Self {
        Self {
            process,
            log10_values,
        }
    }

    /// `log10 S_N`, or 0 (the initial capital) for an empty trajectory.
    pub fn final_log10(&self) -> f64 {
        self.log10_values.last().copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.log10_values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.log10_values.is_empty()
    }
}
