//! Layered configuration: command-line flags over a JSON config file over
//! built-in defaults.
//!
//! Every subcommand's argument struct doubles as its config-file section.
//! All fields are optional so that "not given" is distinguishable from a
//! value, and layering is a field-wise overlay of the two JSON objects.

use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::commands::{
    bench::BenchArgs, bound::BoundArgs, cv::CvArgs, cv::GridArgs, dist::DistArgs, features::FeaturesArgs, fit::FitArgs,
    generate::GenerateArgs, pd::PdArgs,
};
use crate::report::Format;

pub const SEED_ENV: &str = "TOPOCLASS_SEED";
pub const CONFIG_VERSION: u32 = 1;

/// A usage or configuration problem, reported with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub version: Option<u32>,
    pub seed: Option<u64>,
    pub jobs: Option<usize>,
    pub format: Option<Format>,
    pub generate: Option<GenerateArgs>,
    pub pd: Option<PdArgs>,
    pub dist: Option<DistArgs>,
    pub features: Option<FeaturesArgs>,
    pub cv: Option<CvArgs>,
    pub grid: Option<GridArgs>,
    pub fit: Option<FitArgs>,
    pub bound: Option<BoundArgs>,
    pub bench: Option<BenchArgs>,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
        let cfg: ConfigFile =
            serde_json::from_str(&text).map_err(|e| usage(format!("config {}: {e}", path.display())))?;
        if let Some(v) = cfg.version {
            if v != CONFIG_VERSION {
                return Err(usage(format!("config {}: unsupported version {v}", path.display())));
            }
        }
        Ok(cfg)
    }
}

/// Overlays the flags that were given onto the config-file section.
pub fn layer<T: Serialize + DeserializeOwned>(flags: &T, file: Option<&T>) -> anyhow::Result<T> {
    let mut merged = match file {
        Some(f) => serde_json::to_value(f)?,
        None => Value::Object(Default::default()),
    };
    if let (Value::Object(base), Value::Object(over)) = (&mut merged, serde_json::to_value(flags)?) {
        for (k, v) in over {
            if !v.is_null() {
                base.insert(k, v);
            }
        }
    }
    serde_json::from_value(merged).map_err(|e| usage(format!("configuration: {e}")))
}

/// Run-wide settings after layering.
#[derive(Debug, Clone)]
pub struct Globals {
    pub seed: Option<u64>,
    pub format: Format,
}

impl Globals {
    /// The seed for a stochastic subcommand; its absence is a usage error.
    pub fn require_seed(&self, what: &str) -> anyhow::Result<u64> {
        self.seed
            .ok_or_else(|| usage(format!("{what} is stochastic: pass --seed, set `seed` in the config, or export {SEED_ENV}")))
    }
}

/// Seed precedence: flag, then config file, then the environment.
pub fn resolve_seed(flag: Option<u64>, file: Option<u64>) -> anyhow::Result<Option<u64>> {
    if let Some(s) = flag.or(file) {
        return Ok(Some(s));
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| usage(format!("{SEED_ENV}=`{v}` is not an unsigned integer"))),
        Err(_) => Ok(None),
    }
}

/// Inputs must exist before any work starts.
pub fn existing(path: Option<&PathBuf>, flag: &str) -> anyhow::Result<PathBuf> {
    let p = path.ok_or_else(|| usage(format!("missing required --{flag}")))?;
    if !p.exists() {
        return Err(usage(format!("--{flag}: {} does not exist", p.display())));
    }
    Ok(p.clone())
}

/// Parses an enum through its serde names, so flags and config files
/// accept the same spellings.
pub fn parse_serde<T: DeserializeOwned>(s: &str) -> Result<T, String> {
    serde_json::from_value(Value::String(s.to_string())).map_err(|e| e.to_string())
}
