//! One seeded experiment: data, p-values, the requested processes, and the
//! run directory holding one CSV per process plus `manifest.json`.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use ctm_core::{conformal, engines, model, oracles};
use ctm_core::{ExperimentConfig, Process, Trajectory};
use serde::{Deserialize, Serialize};

use crate::config::ConfigEcho;
use crate::format::{rounded, trajectory_csv};
use crate::{LabError, Result};

pub const MANIFEST_FILE: &str = "manifest.json";

/// Parses a comma-separated process list; `all` selects every process.
pub fn parse_processes(list: &str) -> Result<Vec<Process>> {
    let mut out = Vec::new();
    for name in list.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        if name == "all" {
            out.extend(Process::ALL);
            continue;
        }
        let process = name
            .parse::<Process>()
            .map_err(|_| LabError::Usage(format!("unknown process `{name}`")))?;
        out.push(process);
    }
    if out.is_empty() {
        return Err(LabError::Usage("no processes selected".into()));
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Runs `processes` on the data and p-values drawn from `config.seed`.
pub fn evaluate(config: &ExperimentConfig, processes: &[Process]) -> Result<Vec<Trajectory>> {
    config.validate()?;
    let seq = model::generate_seeded(config)?;
    let pvalues = conformal::pvalue_sequence_seeded(&seq, config.seed)?;
    processes
        .iter()
        .map(|&process| {
            let trajectory = match process {
                Process::LikelihoodRatio => oracles::likelihood_ratio_trajectory(&seq, config)?,
                Process::InfLikelihoodRatio => oracles::inf_likelihood_ratio_trajectory(&seq, config)?,
                Process::OptimalCtm => engines::optimal_ctm(&pvalues, config)?,
                Process::PseudoCtm => engines::pseudo_ctm(&seq, &pvalues, config)?,
                Process::SimpleJumper => engines::simple_jumper(&pvalues, config.jumper_rate)?,
                Process::SleeperChooser => {
                    engines::sleeper_chooser(&pvalues, config.share_rate, config.grid_size)?
                }
            };
            Ok(trajectory)
        })
        .collect()
}

/// What a process is evidence of.
pub fn process_kind(process: Process) -> &'static str {
    match process {
        Process::LikelihoodRatio | Process::InfLikelihoodRatio => "oracle_benchmark",
        Process::PseudoCtm => "conformal_e_pseudomartingale",
        _ => "conformal_test_martingale",
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: ConfigEcho,
    /// Final log10 value per process, equal to the last CSV row.
    pub finals: BTreeMap<String, f64>,
    /// CSV file name per process, relative to the run directory.
    pub files: BTreeMap<String, String>,
    pub kinds: BTreeMap<String, String>,
    pub version: String,
    /// Wall-clock seconds; `null` unless timing was requested, which keeps
    /// repeated runs byte-identical.
    pub duration_seconds: Option<f64>,
}

impl RunManifest {
    pub fn read(run_dir: &Path) -> Result<Self> {
        let path = run_dir.join(MANIFEST_FILE);
        let text = fs::read_to_string(&path).map_err(LabError::io(&path))?;
        serde_json::from_str(&text).map_err(|source| LabError::Json { path, source })
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RunOptions {
    pub record_timing: bool,
}

/// Evaluates `processes` and writes `<process>.csv` files and the manifest
/// into `out_dir`. Files are written to a private sibling directory first and
/// renamed into place; an existing `out_dir` is replaced only if it is empty
/// or holds a previous run.
pub fn run_experiment(
    config: &ExperimentConfig,
    processes: &[Process],
    out_dir: &Path,
    options: RunOptions,
) -> Result<RunManifest> {
    let start = Instant::now();
    let trajectories = evaluate(config, processes)?;

    let mut manifest = RunManifest {
        config: config.into(),
        finals: BTreeMap::new(),
        files: BTreeMap::new(),
        kinds: BTreeMap::new(),
        version: env!("CARGO_PKG_VERSION").to_owned(),
        duration_seconds: None,
    };
    let staging = staging_dir(out_dir)?;
    let written = (|| {
        fs::create_dir_all(&staging).map_err(LabError::io(&staging))?;
        for t in &trajectories {
            let name = t.process.name();
            let file = format!("{name}.csv");
            let path = staging.join(&file);
            fs::write(&path, trajectory_csv(t)).map_err(LabError::io(&path))?;
            manifest.finals.insert(name.to_owned(), rounded(t.final_log10()));
            manifest.files.insert(name.to_owned(), file);
            manifest.kinds.insert(name.to_owned(), process_kind(t.process).to_owned());
        }
        if options.record_timing {
            manifest.duration_seconds = Some(start.elapsed().as_secs_f64());
        }
        let path = staging.join(MANIFEST_FILE);
        let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        json.push('\n');
        fs::write(&path, json).map_err(LabError::io(&path))?;
        replace_dir(&staging, out_dir)
    })();
    if written.is_err() {
        let _ = fs::remove_dir_all(&staging);
    }
    written.map(|()| manifest)
}

fn staging_dir(out_dir: &Path) -> Result<PathBuf> {
    let name = out_dir
        .file_name()
        .ok_or_else(|| LabError::Usage(format!("invalid output directory {}", out_dir.display())))?;
    let mut staged = std::ffi::OsString::from(".");
    staged.push(name);
    staged.push(format!(".partial-{}", std::process::id()));
    Ok(out_dir.with_file_name(staged))
}

fn replace_dir(staging: &Path, out_dir: &Path) -> Result<()> {
    if out_dir.exists() {
        let is_previous_run = out_dir.join(MANIFEST_FILE).is_file();
        let is_empty = fs::read_dir(out_dir)
            .map_err(LabError::io(out_dir))?
            .next()
            .is_none();
        if !(is_previous_run || is_empty) {
            return Err(LabError::Usage(format!(
                "{} exists and is not a run directory; refusing to overwrite",
                out_dir.display()
            )));
        }
        fs::remove_dir_all(out_dir).map_err(LabError::io(out_dir))?;
    }
    fs::rename(staging, out_dir).map_err(LabError::io(out_dir))
}
