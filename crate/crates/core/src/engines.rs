//! Betting martingales driven by conformal p-values.
//!
//! - [`SimpleJumper`]: mixture of three linear betting functions with jumps.
//! - [`AccountGrid`]: Sleeper/Chooser, a sleeping account that leaks capital
//!   into a grid of two-level calibrators.
//! - [`optimal_ctm`] and [`pseudo_ctm`]: single-calibrator processes tuned to
//!   the true changepoint model.

use alloc::vec;
use alloc::vec::Vec;

use libm::{floor, log10, pow};

use crate::calibrators::{optimal_betting, pseudo_betting, TwoLevel};
use crate::conformal::PValueSequence;
use crate::error::check_open_unit;
use crate::model::{BinarySequence, ExperimentConfig};
use crate::{Error, Process, Result, Trajectory};

/// Betting directions of Simple Jumper; `f_e(p) = 1 + e (p - 1/2)`.
const JUMPER_DIRECTIONS: [f64; 3] = [-1.0, 0.0, 1.0];

/// Simple Jumper: capital split over the three betting functions
/// `1 + e (p - 1/2)`, `e` in {-1, 0, 1}. After each bet a fraction `J` of the
/// capital of every function is pooled and shared out equally.
///
/// Capital is tracked as a log10 total plus the share of each function.
#[derive(Debug, Clone)]
pub struct SimpleJumper {
    jump_rate: f64,
    shares: [f64; 3],
    log10_capital: f64,
}

impl SimpleJumper {
    pub fn new(jump_rate: f64) -> Result<Self> {
        check_open_unit("jumper_rate", jump_rate)?;
        Ok(Self::unchecked(jump_rate))
    }

    fn unchecked(jump_rate: f64) -> Self {
        Self {
            jump_rate,
            shares: [1.0 / 3.0; 3],
            log10_capital: 0.0,
        }
    }

    /// Processes one p-value and returns `log10 S_n`.
    pub fn step(&mut self, p: f64) -> f64 {
        let mut growth = 0.0;
        for (share, eps) in self.shares.iter_mut().zip(JUMPER_DIRECTIONS) {
            *share *= 1.0 + eps * (p - 0.5);
            growth += *share;
        }
        self.log10_capital += log10(growth);
        for share in &mut self.shares {
            *share = (1.0 - self.jump_rate) * (*share / growth) + self.jump_rate / 3.0;
        }
        self.log10_capital
    }

    pub fn log10_capital(&self) -> f64 {
        self.log10_capital
    }
}

/// Runs [`SimpleJumper`] over a p-value sequence.
pub fn simple_jumper(pvalues: &PValueSequence, jump_rate: f64) -> Result<Trajectory> {
    let mut engine = SimpleJumper::new(jump_rate)?;
    let values = pvalues.pvalues.iter().map(|&p| engine.step(p)).collect();
    Ok(Trajectory::new(Process::SimpleJumper, values))
}

/// Stored accounts are rescaled by a power of ten once the largest leaves
/// `[RESCALE_LOW, RESCALE_HIGH]`.
const RESCALE_HIGH: f64 = 1e100;
const RESCALE_LOW: f64 = 1e-100;

/// Sleeper/Chooser capital state.
///
/// The active account `(i, j)`, `1 <= i, j <= G-1`, bets with the calibrator
/// `f_{a,b}` where `a = i/G`, `b = j/G`; it is stored at `(i-1)*(G-1) + (j-1)`.
/// True capital equals the stored value times `10^log10_offset`.
#[derive(Debug, Clone)]
pub struct AccountGrid {
    share_rate: f64,
    side: usize,
    sleeping: f64,
    active: Vec<f64>,
    log10_offset: f64,
    thresholds: Vec<f64>,
    lower: Vec<f64>,
    upper: Vec<f64>,
}

impl AccountGrid {
    pub fn new(share_rate: f64, grid_size: usize) -> Result<Self> {
        check_open_unit("share_rate", share_rate)?;
        if grid_size < 2 {
            return Err(Error::Parameter {
                name: "grid_size",
                value: grid_size as f64,
                expected: "integers >= 2",
            });
        }
        let side = grid_size - 1;
        let g = grid_size as f64;
        let mut thresholds = Vec::with_capacity(side);
        let mut lower = Vec::with_capacity(side * side);
        let mut upper = Vec::with_capacity(side * side);
        for i in 1..grid_size {
            thresholds.push(i as f64 / g);
            for j in 1..grid_size {
                let (lo, up) = TwoLevel::new(i as f64 / g, j as f64 / g)?.levels();
                lower.push(lo);
                upper.push(up);
            }
        }
        Ok(Self {
            share_rate,
            side,
            sleeping: 1.0,
            active: vec![0.0; side * side],
            log10_offset: 0.0,
            thresholds,
            lower,
            upper,
        })
    }

    /// Processes one p-value and returns `log10 S_n`.
    pub fn step(&mut self, p: f64) -> f64 {
        self.bet(p);
        let emitted = log10(self.stored_total()) + self.log10_offset;
        self.share();
        self.rescale();
        emitted
    }

    fn bet(&mut self, p: f64) {
        let side = self.side;
        for (row, &a) in self.thresholds.iter().enumerate() {
            let range = row * side..(row + 1) * side;
            let factors = if p <= a {
                &self.lower[range.clone()]
            } else {
                &self.upper[range.clone()]
            };
            for (account, &f) in self.active[range].iter_mut().zip(factors) {
                *account *= f;
            }
        }
    }

    fn share(&mut self) {
        let transfer = self.share_rate * self.sleeping / (self.side * self.side) as f64;
        for account in &mut self.active {
            *account += transfer;
        }
        self.sleeping *= 1.0 - self.share_rate;
    }

    fn rescale(&mut self) {
        let largest = self.active.iter().copied().fold(self.sleeping, f64::max);
        if largest > RESCALE_HIGH || (largest > 0.0 && largest < RESCALE_LOW) {
            let shift = floor(log10(largest));
            let factor = pow(10.0, -shift);
            self.sleeping *= factor;
            for account in &mut self.active {
                *account *= factor;
            }
            self.log10_offset += shift;
        }
    }

    fn stored_total(&self) -> f64 {
        self.sleeping + self.active.iter().sum::<f64>()
    }

    /// Current total capital as `log10`.
    pub fn log10_capital(&self) -> f64 {
        log10(self.stored_total()) + self.log10_offset
    }

    /// Stored sleeping capital (scaled by `10^-log10_offset`).
    pub fn sleeping(&self) -> f64 {
        self.sleeping
    }

    /// Stored active capital, row-major over `(a, b)`.
    pub fn active(&self) -> &[f64] {
        &self.active
    }

    pub fn log10_offset(&self) -> f64 {
        self.log10_offset
    }
}

/// Runs Sleeper/Chooser with share rate `share_rate` on the grid of
/// resolution `grid_size`.
pub fn sleeper_chooser(pvalues: &PValueSequence, share_rate: f64, grid_size: usize) -> Result<Trajectory> {
    let mut grid = AccountGrid::new(share_rate, grid_size)?;
    let values = pvalues.pvalues.iter().map(|&p| grid.step(p)).collect();
    Ok(Trajectory::new(Process::SleeperChooser, values))
}

/// Conformal test martingale that stays at 1 for the first `n_pre` steps and
/// then bets with [`optimal_betting`].
pub fn optimal_ctm(pvalues: &PValueSequence, config: &ExperimentConfig) -> Result<Trajectory> {
    let mut log10_capital = 0.0;
    let values = pvalues
        .pvalues
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let n = i + 1;
            if n > config.n_pre {
                log10_capital += log10(optimal_betting(n, config)?.evaluate(p));
            }
            Ok(log10_capital)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory::new(Process::OptimalCtm, values))
}

/// Conformal e-pseudomartingale: like [`optimal_ctm`] but betting with
/// [`pseudo_betting`] on the realized count `k(n)`.
pub fn pseudo_ctm(seq: &BinarySequence, pvalues: &PValueSequence, config: &ExperimentConfig) -> Result<Trajectory> {
    if seq.len() != pvalues.len() {
        return Err(Error::Contract("sequence and p-values differ in length"));
    }
    let mut log10_capital = 0.0;
    let values = pvalues
        .pvalues
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let n = i + 1;
            if n > config.n_pre {
                log10_capital += log10(pseudo_betting(n, seq.ones(n), config)?.evaluate(p));
            }
            Ok(log10_capital)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory::new(Process::PseudoCtm, values))
}
