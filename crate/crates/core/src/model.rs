//! Binary changepoint model: IID Bernoulli(`pi0`) observations followed by
//! IID Bernoulli(`pi1`) observations.

use alloc::vec::Vec;

use crate::rng::{self, Stream};
use crate::{Error, Result};

/// Parameters of one experiment: the changepoint model, the engine
/// parameters and the master seed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentConfig {
    /// Pre-change probability of a 1.
    pub pi0: f64,
    /// Post-change probability of a 1.
    pub pi1: f64,
    /// Total number of observations.
    pub n_total: usize,
    /// Number of pre-change observations; the change happens after index `n_pre`.
    pub n_pre: usize,
    /// Simple Jumper jump rate.
    pub jumper_rate: f64,
    /// Sleeper/Chooser rate at which sleeping capital is shared out.
    pub share_rate: f64,
    /// Sleeper/Chooser grid resolution; the grid is `{1/G, ..., (G-1)/G}`.
    pub grid_size: usize,
    pub seed: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            pi0: 0.1,
            pi1: 0.4,
            n_total: 10_000,
            n_pre: 5_000,
            jumper_rate: 0.01,
            share_rate: 0.001,
            grid_size: 100,
            seed: 0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(0.0..=1.0).contains(&self.pi0) {
            return Err(Error::Config("pi0 must lie in [0, 1]"));
        }
        if !(0.0..=1.0).contains(&self.pi1) {
            return Err(Error::Config("pi1 must lie in [0, 1]"));
        }
        if self.n_total == 0 {
            return Err(Error::Config("n_total must be positive"));
        }
        if self.n_pre > self.n_total {
            return Err(Error::Config("n_pre must not exceed n_total"));
        }
        if !(self.jumper_rate > 0.0 && self.jumper_rate < 1.0) {
            return Err(Error::Config("jumper_rate must lie in (0, 1)"));
        }
        if !(self.share_rate > 0.0 && self.share_rate < 1.0) {
            return Err(Error::Config("share_rate must lie in (0, 1)"));
        }
        if self.grid_size < 2 {
            return Err(Error::Config("grid_size must be at least 2"));
        }
        Ok(())
    }

    /// Success probability of observation `index` (zero-based).
    #[inline]
    pub fn probability_at(&self, index: usize) -> f64 {
        if index < self.n_pre {
            self.pi0
        } else {
            self.pi1
        }
    }
}

/// Observations `x_1..x_N` together with the prefix counts `k(0..=N)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinarySequence {
    observations: Vec<u8>,
    prefix_ones: Vec<usize>,
}

impl BinarySequence {
    pub fn new(observations: Vec<u8>) -> Result<Self> {
        let prefix_ones = prefix_ones(&observations)?;
        Ok(Self {
            observations,
            prefix_ones,
        })
    }

    pub fn observations(&self) -> &[u8] {
        &self.observations
    }

    /// `prefix_ones()[n]` is the number of 1s among the first `n` observations.
    pub fn prefix_ones(&self) -> &[usize] {
        &self.prefix_ones
    }

    /// Number of 1s among the first `n` observations.
    #[inline]
    pub fn ones(&self, n: usize) -> usize {
        self.prefix_ones[n]
    }

    pub fn len(&self) -> usize {
        self.observations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observations.is_empty()
    }
}

/// Cumulative count of 1s, starting with `k(0) = 0`.
pub fn prefix_ones(observations: &[u8]) -> Result<Vec<usize>> {
    let mut out = Vec::with_capacity(observations.len() + 1);
    let mut k = 0usize;
    out.push(k);
    for (index, &value) in observations.iter().enumerate() {
        if value > 1 {
            return Err(Error::NonBinary { index, value });
        }
        k += usize::from(value);
        out.push(k);
    }
    Ok(out)
}

/// Draws the observations from `stream`: Bernoulli(`pi0`) before `n_pre`,
/// Bernoulli(`pi1`) afterwards.
pub fn generate_sequence(config: &ExperimentConfig, stream: &mut Stream) -> Result<BinarySequence> {
    config.validate()?;
    let observations = (0..config.n_total)
        .map(|i| stream.bernoulli(config.probability_at(i)))
        .collect();
    BinarySequence::new(observations)
}

/// [`generate_sequence`] on the observation substream of `config.seed`.
pub fn generate_seeded(config: &ExperimentConfig) -> Result<BinarySequence> {
    generate_sequence(config, &mut Stream::new(config.seed, rng::OBSERVATIONS))
}
