//! Flat JSON configuration files and the manifest echo of a configuration.

use std::path::Path;

use ctm_core::ExperimentConfig;
use serde::{Deserialize, Serialize};

use crate::{LabError, Result};

/// Every field of [`ExperimentConfig`], all optional. Used both for config
/// files and for CLI overrides.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    pub pi0: Option<f64>,
    pub pi1: Option<f64>,
    pub n_total: Option<usize>,
    pub n_pre: Option<usize>,
    pub jumper_rate: Option<f64>,
    pub share_rate: Option<f64>,
    pub grid_size: Option<usize>,
    pub seed: Option<u64>,
}

impl ConfigOverrides {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(LabError::io(path))?;
        serde_json::from_str(&text).map_err(|source| LabError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    /// Values set in `other` win.
    pub fn overridden_by(self, other: &ConfigOverrides) -> Self {
        Self {
            pi0: other.pi0.or(self.pi0),
            pi1: other.pi1.or(self.pi1),
            n_total: other.n_total.or(self.n_total),
            n_pre: other.n_pre.or(self.n_pre),
            jumper_rate: other.jumper_rate.or(self.jumper_rate),
            share_rate: other.share_rate.or(self.share_rate),
            grid_size: other.grid_size.or(self.grid_size),
            seed: other.seed.or(self.seed),
        }
    }

    /// Applies the set fields on top of `base`, without validating.
    pub fn apply(&self, base: ExperimentConfig) -> ExperimentConfig {
        ExperimentConfig {
            pi0: self.pi0.unwrap_or(base.pi0),
            pi1: self.pi1.unwrap_or(base.pi1),
            n_total: self.n_total.unwrap_or(base.n_total),
            n_pre: self.n_pre.unwrap_or(base.n_pre),
            jumper_rate: self.jumper_rate.unwrap_or(base.jumper_rate),
            share_rate: self.share_rate.unwrap_or(base.share_rate),
            grid_size: self.grid_size.unwrap_or(base.grid_size),
            seed: self.seed.unwrap_or(base.seed),
        }
    }

    /// Defaults, then `file` (if any), then `self` (CLI flags); validated.
    pub fn resolve(&self, file: Option<&Path>) -> Result<ExperimentConfig> {
        let base = match file {
            Some(path) => ConfigOverrides::from_file(path)?,
            None => ConfigOverrides::default(),
        };
        let config = base.overridden_by(self).apply(ExperimentConfig::default());
        config.validate()?;
        Ok(config)
    }
}

/// Serialized form of a complete [`ExperimentConfig`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub pi0: f64,
    pub pi1: f64,
    pub n_total: usize,
    pub n_pre: usize,
    pub jumper_rate: f64,
    pub share_rate: f64,
    pub grid_size: usize,
    pub seed: u64,
}

impl From<&ExperimentConfig> for ConfigEcho {
    fn from(c: &ExperimentConfig) -> Self {
        Self {
            pi0: c.pi0,
            pi1: c.pi1,
            n_total: c.n_total,
            n_pre: c.n_pre,
            jumper_rate: c.jumper_rate,
            share_rate: c.share_rate,
            grid_size: c.grid_size,
            seed: c.seed,
        }
    }
}

impl From<ConfigEcho> for ExperimentConfig {
    fn from(c: ConfigEcho) -> Self {
        Self {
            pi0: c.pi0,
            pi1: c.pi1,
            n_total: c.n_total,
            n_pre: c.n_pre,
            jumper_rate: c.jumper_rate,
            share_rate: c.share_rate,
            grid_size: c.grid_size,
            seed: c.seed,
        }
    }
}
