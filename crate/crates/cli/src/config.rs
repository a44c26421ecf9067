//! Versioned JSON run configuration. Command-line flags override any field.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use isoprime_core::signatures::GaloisModel;
use isoprime_core::type2::Pipeline;
use isoprime_core::{Error, Result};

use crate::output::Format;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EffortCfg {
    Fast,
    Deep,
}

impl From<EffortCfg> for isoprime_core::ntheory::FactorEffort {
    fn from(e: EffortCfg) -> Self {
        match e {
            EffortCfg::Fast => isoprime_core::ntheory::FactorEffort::Fast,
            EffortCfg::Deep => isoprime_core::ntheory::FactorEffort::Deep,
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: Option<u32>,
    pub degree: Option<u32>,
    pub q_max: Option<u64>,
    pub galois_model: Option<GaloisModel>,
    pub pipeline: Option<Pipeline>,
    pub format: Option<Format>,
    pub checkpoint: Option<PathBuf>,
    pub segment: Option<u64>,
    pub workers: Option<usize>,
    pub effort: Option<EffortCfg>,
    pub type1_extras: Option<PathBuf>,
    pub constants: Option<PathBuf>,
    pub stabilize_window: Option<u32>,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let data = std::fs::read_to_string(path)?;
        let cfg: RunConfig =
            serde_json::from_str(&data).map_err(|e| Error::Domain(format!("config: {e}")))?;
        if let Some(v) = cfg.version {
            if v != CONFIG_VERSION {
                return Err(Error::Domain(format!(
                    "config version {v} unsupported (expected {CONFIG_VERSION})"
                )));
            }
        }
        if let Some(w) = cfg.workers {
            if w == 0 {
                return Err(Error::Domain("workers must be >= 1".into()));
            }
        }
        if let Some(q) = cfg.q_max {
            if q < 2 {
                return Err(Error::Domain("q_max must be >= 2".into()));
            }
        }
        Ok(cfg)
    }
}
