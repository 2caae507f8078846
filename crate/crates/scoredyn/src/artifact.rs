//! Versioned JSON artifacts: fitted models, sport configurations and
//! synthetic-league ground truth.

use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use scoredyn_core::estimate::{BalanceModel, TempoModel};
use scoredyn_core::synth::GroundTruth;
use scoredyn_core::SportConfig;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// `major.minor`; readers accept any minor of their own major.
pub const SCHEMA_VERSION: &str = "1.0";

fn major(version: &str) -> Option<u64> {
    version.split('.').next()?.parse().ok()
}

/// Parses a versioned document, rejecting unknown majors before looking at
/// the rest of the payload.
pub fn from_versioned_str<T: DeserializeOwned>(text: &str) -> Result<T> {
    let value: serde_json::Value = serde_json::from_str(text)?;
    let version = value
        .get("schema_version")
        .and_then(|v| v.as_str())
        .context("missing schema_version")?;
    let ours = major(SCHEMA_VERSION).expect("valid constant");
    match major(version) {
        Some(m) if m == ours => {}
        Some(m) => bail!("unsupported schema major version {m} (this build reads {ours})"),
        None => bail!("malformed schema_version {version:?}"),
    }
    Ok(serde_json::from_value(value)?)
}

fn read_versioned<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    from_versioned_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// A fitted tempo and balance model for one sport.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelArtifact {
    pub schema_version: String,
    pub sport: SportConfig,
    pub games: usize,
    pub events: usize,
    pub tempo: TempoModel,
    pub balance: BalanceModel,
}

impl ModelArtifact {
    pub fn new(sport: SportConfig, games: usize, events: usize, tempo: TempoModel, balance: BalanceModel) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            sport,
            games,
            events,
            tempo,
            balance,
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        let art: Self = read_versioned(path)?;
        if art.tempo.profile.len() != art.sport.regulation_length() as usize + 1 {
            bail!("{}: tempo profile does not cover the sport's clock", path.display());
        }
        Ok(art)
    }
}

/// Ground-truth parameters written next to a synthetic corpus.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TruthSidecar {
    pub schema_version: String,
    pub ground_truth: GroundTruth,
}

impl TruthSidecar {
    pub fn new(ground_truth: GroundTruth) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            ground_truth,
        }
    }

    pub fn read(path: &Path) -> Result<Self> {
        read_versioned(path)
    }
}

/// A custom sport configuration file (the bare [`SportConfig`] object).
pub fn read_sport_config(path: &Path) -> Result<SportConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
