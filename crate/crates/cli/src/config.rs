//! Experiment configuration files: a human-editable TOML schema with an
//! explicit version, hashed canonically so every artifact can name the
//! exact configuration that produced it.

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use tandem_core::agent::EvaluatorSpec;
use tandem_core::framework::{BitstringPool, Framework, MatchSpec, TeamSpec};

pub const CONFIG_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoolConfig {
    pub seed: u64,
    #[serde(default = "default_pool_length")]
    pub length: usize,
    pub count: usize,
}

fn default_pool_length() -> usize {
    tandem_core::board::DEFAULT_MAX_PLIES
}

/// One experiment: a framework, two teams, and the run parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(default = "default_schema")]
    pub schema: u32,
    #[serde(default)]
    pub name: Option<String>,
    pub framework: Framework,
    pub games: u64,
    pub master_seed: u64,
    #[serde(default)]
    pub max_plies: Option<usize>,
    #[serde(default)]
    pub workers: Option<usize>,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub pool: Option<PoolConfig>,
    pub focal: TeamSpec,
    pub alter: TeamSpec,
    /// Evaluator for annotation and reporting.
    #[serde(default)]
    pub evaluator: Option<EvaluatorSpec>,
    /// Cap on concurrently running UCI engine processes.
    #[serde(default)]
    pub uci_instance_limit: Option<usize>,
}

fn default_schema() -> u32 {
    CONFIG_SCHEMA_VERSION
}

/// A config file holds either a single experiment or a suite sharing one
/// pool and evaluator.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SuiteFile {
    #[serde(default = "default_schema")]
    pub schema: u32,
    #[serde(default)]
    pub pool: Option<PoolConfig>,
    #[serde(default)]
    pub evaluator: Option<EvaluatorSpec>,
    #[serde(rename = "experiments")]
    pub members: Vec<ExperimentConfig>,
}

#[derive(Debug, Clone)]
pub enum ConfigFile {
    Single(ExperimentConfig),
    Suite(SuiteFile),
}

pub fn load_config(path: &Path) -> Result<ConfigFile> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<ConfigFile> {
    // Suites are recognized by their [[experiments]] tables.
    if text.contains("[[experiments]]") {
        let suite: SuiteFile = toml::from_str(text).context("parsing suite config")?;
        if suite.schema != CONFIG_SCHEMA_VERSION {
            bail!("unsupported config schema {}", suite.schema);
        }
        if suite.members.is_empty() {
            bail!("suite has no experiments");
        }
        Ok(ConfigFile::Suite(suite))
    } else {
        let config: ExperimentConfig = toml::from_str(text).context("parsing config")?;
        if config.schema != CONFIG_SCHEMA_VERSION {
            bail!("unsupported config schema {}", config.schema);
        }
        Ok(ConfigFile::Single(config))
    }
}

impl ExperimentConfig {
    /// Stable short hash over the canonical JSON form.
    pub fn hash(&self) -> String {
        let canonical = serde_json::to_string(self).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let mut out = String::with_capacity(12);
        for byte in digest.iter().take(6) {
            out.push_str(&format!("{byte:02x}"));
        }
        out
    }

    pub fn effective_workers(&self, override_workers: Option<usize>) -> usize {
        let default = std::thread::available_parallelism()
            .map(|n| n.get().saturating_sub(1).max(1))
            .unwrap_or(1);
        let mut workers = override_workers.or(self.workers).unwrap_or(default).max(1);
        if let Some(limit) = self.uci_instance_limit {
            if self.uses_uci() {
                workers = workers.min(limit.max(1));
            }
        }
        workers
    }

    fn uses_uci(&self) -> bool {
        fn spec_uses_uci(spec: &tandem_core::agent::AgentSpec) -> bool {
            use tandem_core::agent::AgentSpec::*;
            match spec {
                Uci { .. } => true,
                Tree { params, .. } => spec_uses_uci(&params.model),
                ExpectorStt { params } | ExpectorHb { params } => {
                    [
                        &params.base_strong,
                        &params.opponent_senior,
                        &params.opponent_junior,
                        &params.partner_junior,
                        &params.own_hand,
                    ]
                    .into_iter()
                    .flatten()
                    .any(|s| spec_uses_uci(s))
                        || spec_uses_uci(&params.evaluator.engine)
                }
                _ => false,
            }
        }
        [&self.focal, &self.alter].into_iter().any(|team| {
            spec_uses_uci(&team.senior)
                || team.junior.as_ref().map(spec_uses_uci).unwrap_or(false)
        })
    }

    /// Resolve into a playable match spec, generating or loading the
    /// bitstring pool as needed.
    pub fn to_match_spec(&self, pool_path: Option<&Path>) -> Result<(MatchSpec, Option<BitstringPool>)> {
        let pool = match (self.framework, &self.pool) {
            (Framework::TagTeam, Some(cfg)) => Some(resolve_pool(cfg, pool_path)?),
            (Framework::TagTeam, None) => {
                bail!("tag-team experiments need a [pool] section")
            }
            _ => None,
        };
        let spec = MatchSpec {
            framework: self.framework,
            games: self.games,
            focal: self.focal.clone(),
            alter: self.alter.clone(),
            master_seed: self.master_seed,
            max_plies: self.max_plies.unwrap_or(tandem_core::board::DEFAULT_MAX_PLIES),
            pool: pool.clone(),
        };
        spec.validate()?;
        Ok((spec, pool))
    }
}

/// Load a persisted pool when the path exists, otherwise generate it
/// from the config (and persist if a path was given). An existing file
/// must agree with the config header so a suite cannot silently mix
/// pools.
pub fn resolve_pool(cfg: &PoolConfig, path: Option<&Path>) -> Result<BitstringPool> {
    if let Some(path) = path {
        if path.exists() {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading pool {}", path.display()))?;
            let pool: BitstringPool = serde_json::from_str(&text).context("parsing pool file")?;
            if pool.seed != cfg.seed || pool.length != cfg.length || pool.len() < cfg.count {
                bail!(
                    "pool file {} does not match config (seed {} length {} count {})",
                    path.display(),
                    cfg.seed,
                    cfg.length,
                    cfg.count
                );
            }
            if pool.fingerprint() != pool.pool_id {
                bail!("pool file {} is corrupt (fingerprint mismatch)", path.display());
            }
            return Ok(pool);
        }
    }
    let pool = BitstringPool::generate(cfg.seed, cfg.length, cfg.count);
    if let Some(path) = path {
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent).ok();
        }
        std::fs::write(path, serde_json::to_string(&pool)?)
            .with_context(|| format!("writing pool {}", path.display()))?;
    }
    Ok(pool)
}
