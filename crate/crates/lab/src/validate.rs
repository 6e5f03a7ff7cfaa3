//! Monte Carlo check of the test-martingale property: under IID
//! Bernoulli(`pi`) data the expected capital after `n` steps is 1.

use ctm_core::model::generate_sequence;
use ctm_core::rng::{derive_seed, Stream, OBSERVATIONS, TIE_BREAKING};
use ctm_core::{conformal, engines, ExperimentConfig, Process};
use rayon::prelude::*;
use serde::Serialize;

use crate::{LabError, Result};

pub const MIN_REPS: usize = 100;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MartingaleReport {
    pub engine: String,
    pub pi: f64,
    pub n: usize,
    pub reps: usize,
    /// Mean of `S_n` over the replications.
    pub mean: f64,
    pub std_error: f64,
    /// `|mean - 1| <= 3 * std_error`.
    pub pass: bool,
}

/// Estimates `E[S_n]` for `engine` on `reps` independent IID Bernoulli(`pi`)
/// sequences. Engine parameters come from `engine_config` (`jumper_rate`,
/// `share_rate`, `grid_size`, and `pi0`, `pi1`, `n_pre` for `optimal_ctm`).
/// Replication `r` uses seed `derive_seed(seed, r)`.
pub fn validate_martingale(
    engine: Process,
    pi: f64,
    n: usize,
    reps: usize,
    seed: u64,
    engine_config: &ExperimentConfig,
) -> Result<MartingaleReport> {
    if engine == Process::PseudoCtm {
        return Err(LabError::Usage(
            "pseudo_ctm is a conformal e-pseudomartingale, not a martingale; it cannot be validated as one".into(),
        ));
    }
    if !engine.is_iid_test_martingale() {
        return Err(LabError::Usage(format!(
            "{engine} is an oracle benchmark, not a conformal test martingale"
        )));
    }
    if reps < MIN_REPS {
        return Err(LabError::Usage(format!("reps must be at least {MIN_REPS}")));
    }
    if n == 0 {
        return Err(LabError::Usage("n must be positive".into()));
    }
    let data_config = ExperimentConfig {
        pi0: pi,
        pi1: pi,
        n_total: n,
        n_pre: n,
        ..*engine_config
    };
    data_config.validate()?;
    let engine_config = ExperimentConfig {
        n_total: n,
        n_pre: engine_config.n_pre.min(n),
        ..*engine_config
    };

    let finals = (0..reps as u64)
        .into_par_iter()
        .map(|rep| {
            let rep_seed = derive_seed(seed, rep);
            let seq = generate_sequence(&data_config, &mut Stream::new(rep_seed, OBSERVATIONS))?;
            let pvalues = conformal::pvalue_sequence(&seq, &mut Stream::new(rep_seed, TIE_BREAKING))?;
            let trajectory = match engine {
                Process::SimpleJumper => engines::simple_jumper(&pvalues, engine_config.jumper_rate)?,
                Process::SleeperChooser => {
                    engines::sleeper_chooser(&pvalues, engine_config.share_rate, engine_config.grid_size)?
                }
                Process::OptimalCtm => engines::optimal_ctm(&pvalues, &engine_config)?,
                _ => unreachable!("checked above"),
            };
            Ok(10f64.powf(trajectory.final_log10()))
        })
        .collect::<Result<Vec<f64>>>()?;

    let mean = crate::stats::mean(&finals);
    let std_error = crate::stats::std_dev(&finals) / (reps as f64).sqrt();
    Ok(MartingaleReport {
        engine: engine.name().to_owned(),
        pi,
        n,
        reps,
        mean,
        std_error,
        pass: (mean - 1.0).abs() <= 3.0 * std_error,
    })
}
