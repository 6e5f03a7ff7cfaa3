//! Betting functions (calibrators) on `[0, 1]`.
//!
//! Every calibrator here is a two-valued step function with unit integral:
//! it pays one amount when the p-value is at or below a threshold and another
//! amount above it.

use crate::error::check_open_unit;
use crate::model::ExperimentConfig;
use crate::{Error, Result};

/// `f_{a,b}(p) = b/a` for `p <= a`, `(1-b)/(1-a)` otherwise.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoLevel {
    threshold: f64,
    lower: f64,
    upper: f64,
}

impl TwoLevel {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        check_open_unit("a", a)?;
        check_open_unit("b", b)?;
        Ok(Self {
            threshold: a,
            lower: b / a,
            upper: (1.0 - b) / (1.0 - a),
        })
    }

    #[inline]
    pub fn evaluate(&self, p: f64) -> f64 {
        if p <= self.threshold {
            self.lower
        } else {
            self.upper
        }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Payoffs `(at or below threshold, above threshold)`.
    pub fn levels(&self) -> (f64, f64) {
        (self.lower, self.upper)
    }

    /// Closed-form integral over `[0, 1]`.
    pub fn integral(&self) -> f64 {
        self.threshold * self.lower + (1.0 - self.threshold) * self.upper
    }
}

fn check_model_probabilities(config: &ExperimentConfig) -> Result<()> {
    check_open_unit("pi0", config.pi0)?;
    check_open_unit("pi1", config.pi1)
}

/// Likelihood-ratio betting function at step `n > n_pre`, tuned to the true
/// model: the threshold is the expected fraction of 1s after `n` observations
/// and the lower payoff is `pi1` divided by it.
pub fn optimal_betting(n: usize, config: &ExperimentConfig) -> Result<TwoLevel> {
    check_model_probabilities(config)?;
    if n <= config.n_pre {
        return Err(Error::Contract("no betting during the first n_pre steps"));
    }
    let n_f = n as f64;
    let pre = config.n_pre as f64;
    let post = (n - config.n_pre) as f64;
    let expected_ones = pre * config.pi0 + post * config.pi1;
    let expected_zeros = pre * (1.0 - config.pi0) + post * (1.0 - config.pi1);
    Ok(TwoLevel {
        threshold: expected_ones / n_f,
        lower: n_f * config.pi1 / expected_ones,
        upper: n_f * (1.0 - config.pi1) / expected_zeros,
    })
}

/// Variant of [`optimal_betting`] that uses the realized fraction `k_n / n`
/// in place of its expectation. It looks at the current observation, so the
/// resulting capital process is only a pseudomartingale.
///
/// `k_n = 0` always pays the upper level and `k_n = n` always the lower one.
pub fn pseudo_betting(n: usize, k_n: usize, config: &ExperimentConfig) -> Result<TwoLevel> {
    check_model_probabilities(config)?;
    if n == 0 || k_n > n {
        return Err(Error::Contract("pseudo betting needs 1 <= n and k_n <= n"));
    }
    let n_f = n as f64;
    let k_f = k_n as f64;
    let (threshold, lower, upper) = if k_n == 0 {
        (-1.0, f64::NAN, 1.0 - config.pi1)
    } else if k_n == n {
        (1.0, config.pi1, f64::NAN)
    } else {
        (
            k_f / n_f,
            n_f * config.pi1 / k_f,
            n_f * (1.0 - config.pi1) / (n_f - k_f),
        )
    };
    Ok(TwoLevel {
        threshold,
        lower,
        upper,
    })
}

/// Any of the betting functions used by the engines.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Calibrator {
    /// Constant 1: the capital does not bet.
    Unit,
    TwoLevel(TwoLevel),
}

impl Calibrator {
    #[inline]
    pub fn evaluate(&self, p: f64) -> f64 {
        match self {
            Calibrator::Unit => 1.0,
            Calibrator::TwoLevel(f) => f.evaluate(p),
        }
    }
}

impl From<TwoLevel> for Calibrator {
    fn from(f: TwoLevel) -> Self {
        Calibrator::TwoLevel(f)
    }
}
