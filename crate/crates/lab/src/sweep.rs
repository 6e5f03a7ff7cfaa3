//! Final values of many seeds, evaluated in parallel and merged in seed order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use ctm_core::{ExperimentConfig, Process};
use rayon::prelude::*;

use crate::format::format_log10;
use crate::run::evaluate;
use crate::stats::{summarize, Summary};
use crate::{LabError, Result};

/// Parses `a..b`, `a..=b`, or a comma-separated list (items may be ranges).
pub fn parse_seeds(spec: &str) -> Result<Vec<u64>> {
    let bad = || LabError::Usage(format!("invalid seed list `{spec}`"));
    let mut seeds = Vec::new();
    for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if let Some((lo, hi)) = item.split_once("..") {
            let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
            let (hi, inclusive) = match hi.strip_prefix('=') {
                Some(h) => (h, true),
                None => (hi, false),
            };
            let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
            if inclusive {
                seeds.extend(lo..=hi);
            } else {
                seeds.extend(lo..hi);
            }
        } else {
            seeds.push(item.parse().map_err(|_| bad())?);
        }
    }
    Ok(seeds)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub seed: u64,
    /// Final log10 value per process, in the table's process order.
    pub finals: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub processes: Vec<Process>,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    /// Finals of `process` across seeds, in seed order.
    pub fn column(&self, process: Process) -> Option<Vec<f64>> {
        let idx = self.processes.iter().position(|&p| p == process)?;
        Some(self.rows.iter().map(|r| r.finals[idx]).collect())
    }

    pub fn summaries(&self) -> BTreeMap<String, Summary> {
        self.processes
            .iter()
            .map(|&p| (p.name().to_owned(), summarize(&self.column(p).unwrap())))
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("seed");
        for p in &self.processes {
            out.push(',');
            out.push_str(p.name());
        }
        out.push('\n');
        for row in &self.rows {
            let _ = write!(out, "{}", row.seed);
            for v in &row.finals {
                let _ = write!(out, ",{}", format_log10(*v));
            }
            out.push('\n');
        }
        out
    }

    /// Writes `sweep.csv` and `summary.json` into `dir`.
    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir).map_err(LabError::io(dir))?;
        let csv = dir.join("sweep.csv");
        std::fs::write(&csv, self.to_csv()).map_err(LabError::io(&csv))?;
        let json = dir.join("summary.json");
        let mut text = serde_json::to_string_pretty(&self.summaries()).expect("summary serializes");
        text.push('\n');
        std::fs::write(&json, text).map_err(LabError::io(&json))
    }
}

/// Runs `processes` for every seed (the seed field of `config` is replaced).
pub fn sweep_seeds(config: &ExperimentConfig, seeds: &[u64], processes: &[Process]) -> Result<SweepTable> {
    if seeds.is_empty() {
        return Err(LabError::Usage("seed list is empty".into()));
    }
    config.validate()?;
    let rows = seeds
        .par_iter()
        .map(|&seed| {
            let trajectories = evaluate(&ExperimentConfig { seed, ..*config }, processes)?;
            Ok(SweepRow {
                seed,
                finals: trajectories.iter().map(|t| t.final_log10()).collect(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepTable {
        processes: processes.to_vec(),
        rows,
    })
}
