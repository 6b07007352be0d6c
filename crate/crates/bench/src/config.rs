//! Experiment configuration files.
//!
//! ```json
//! {"networks": ["bridge.net"], "methods": ["crude", "cbatmcs"],
//!  "nsim": [1000, 10000], "beta": 2, "nrun": 30, "seed": 7}
//! ```
//!
//! Relative network paths are resolved against the config file's directory.

use std::path::{Path, PathBuf};

use reliacut::Method;
use serde::Deserialize;

use crate::error::{BenchError, Result};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    networks: Vec<PathBuf>,
    methods: Vec<String>,
    nsim: Vec<u64>,
    #[serde(default = "default_beta")]
    beta: usize,
    nrun: usize,
    seed: u64,
}

fn default_beta() -> usize {
    2
}

/// A network file and the label used for it in reports.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkEntry {
    /// The path exactly as written in the config.
    pub label: String,
    pub path: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub networks: Vec<NetworkEntry>,
    pub methods: Vec<Method>,
    /// One budget per tier; tiers are reported as Ex1, Ex2, ...
    pub nsim: Vec<u64>,
    pub beta: usize,
    pub nrun: usize,
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn from_json(text: &str, base_dir: &Path) -> Result<Self> {
        let raw: RawConfig =
            serde_json::from_str(text).map_err(|e| BenchError::Config(e.to_string()))?;
        let methods = raw
            .methods
            .iter()
            .map(|m| {
                m.parse::<Method>()
                    .map_err(|e| BenchError::Config(e.to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        let cfg = ExperimentConfig {
            networks: raw
                .networks
                .into_iter()
                .map(|p| NetworkEntry {
                    label: p.display().to_string(),
                    path: if p.is_relative() {
                        base_dir.join(&p)
                    } else {
                        p
                    },
                })
                .collect(),
            methods,
            nsim: raw.nsim,
            beta: raw.beta,
            nrun: raw.nrun,
            seed: raw.seed,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|source| BenchError::Config(format!("{}: {source}", path.display())))?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::from_json(&text, base)
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(BenchError::Config(msg.to_string()));
        if self.networks.is_empty() {
            return fail("no networks listed");
        }
        if self.methods.is_empty() {
            return fail("no methods listed");
        }
        let mut seen = self.methods.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != self.methods.len() {
            return fail("methods listed more than once");
        }
        if self.nsim.is_empty() {
            return fail("no nsim tiers listed");
        }
        if self.nsim.contains(&0) {
            return fail("nsim values must be positive");
        }
        if self.nrun < 2 {
            return fail("nrun must be at least 2");
        }
        if self.methods.contains(&Method::BatMcs) && self.beta == 0 {
            return fail("beta must be at least 1");
        }
        Ok(())
    }
}
