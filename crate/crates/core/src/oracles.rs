//! Oracle benchmarks that know the true data-generating mechanism.
//!
//! Likelihoods are handled as natural logs throughout (raw likelihoods of ten
//! thousand observations underflow) and converted to base 10 only when the
//! [`Trajectory`] is built.

use alloc::vec::Vec;
use core::f64::consts::LN_10;

use libm::log;

use crate::error::check_open_unit;
use crate::model::{BinarySequence, ExperimentConfig};
use crate::{Process, Result, Trajectory};

/// `count * ln(p)` with `0 * ln(0) = 0`.
#[inline]
fn xlogy(count: usize, p: f64) -> f64 {
    if count == 0 {
        0.0
    } else {
        count as f64 * log(p)
    }
}

/// `ln(pi^k (1 - pi)^(n - k))`.
pub fn iid_log_likelihood(k: usize, n: usize, pi: f64) -> f64 {
    xlogy(k, pi) + xlogy(n - k, 1.0 - pi)
}

/// `ln((k/n)^k (1 - k/n)^(n - k))`, the maximum over `pi` of
/// [`iid_log_likelihood`], with `0^0 = 1`. Zero for `n = 0`.
pub fn max_iid_log_likelihood(k: usize, n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let freq = k as f64 / n as f64;
    xlogy(k, freq) + xlogy(n - k, 1.0 - freq)
}

/// Log-likelihood of the first `n` observations under the changepoint model.
pub fn changepoint_log_likelihood(seq: &BinarySequence, n: usize, config: &ExperimentConfig) -> f64 {
    let pre_len = n.min(config.n_pre);
    let k_pre = seq.ones(pre_len);
    let pre = iid_log_likelihood(k_pre, pre_len, config.pi0);
    if n <= config.n_pre {
        pre
    } else {
        pre + iid_log_likelihood(seq.ones(n) - k_pre, n - config.n_pre, config.pi1)
    }
}

fn check_inputs(seq: &BinarySequence, config: &ExperimentConfig) -> Result<()> {
    check_open_unit("pi0", config.pi0)?;
    check_open_unit("pi1", config.pi1)?;
    if config.n_pre > seq.len() {
        return Err(crate::Error::Contract("sequence is shorter than n_pre"));
    }
    Ok(())
}

/// Likelihood ratio of the true changepoint model to Bernoulli(`pi0`) for the
/// whole sequence: 1 up to the changepoint, then the post-change ratio.
pub fn likelihood_ratio_trajectory(seq: &BinarySequence, config: &ExperimentConfig) -> Result<Trajectory> {
    check_inputs(seq, config)?;
    let log_ratio_one = log(config.pi1 / config.pi0);
    let log_ratio_zero = log((1.0 - config.pi1) / (1.0 - config.pi0));
    let k_pre = seq.ones(config.n_pre);
    let values = (1..=seq.len())
        .map(|n| {
            if n <= config.n_pre {
                0.0
            } else {
                let ones = (seq.ones(n) - k_pre) as f64;
                let zeros = (n - config.n_pre) as f64 - ones;
                (ones * log_ratio_one + zeros * log_ratio_zero) / LN_10
            }
        })
        .collect();
    Ok(Trajectory::new(Process::LikelihoodRatio, values))
}

/// Likelihood of the changepoint model divided by the best IID Bernoulli
/// likelihood of the same prefix.
pub fn inf_likelihood_ratio_trajectory(seq: &BinarySequence, config: &ExperimentConfig) -> Result<Trajectory> {
    check_inputs(seq, config)?;
    let values: Vec<f64> = (1..=seq.len())
        .map(|n| {
            (changepoint_log_likelihood(seq, n, config) - max_iid_log_likelihood(seq.ones(n), n)) / LN_10
        })
        .collect();
    Ok(Trajectory::new(Process::InfLikelihoodRatio, values))
}
