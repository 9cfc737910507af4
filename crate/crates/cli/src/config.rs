use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use riex::classify::{ForestConfig, DEFAULT_K};
use riex::corpus::DEFAULT_THETA;
use riex::embedding::EmbeddingConfig;
use riex::eval::TrialConfig;
use serde::{Deserialize, Serialize};

/// File locations shared by the subcommands. Relative paths in a config file
/// are resolved against the file's directory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub corpus: Option<PathBuf>,
    pub stats: Option<PathBuf>,
    pub store: Option<PathBuf>,
    pub registry: Option<PathBuf>,
    pub candidates: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub output: Option<PathBuf>,
}

/// Declarative pipeline settings. Seeds inside the nested sections are
/// ignored; `seed` drives every random choice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub paths: Paths,
    pub attribute: Option<String>,
    pub seed: u64,
    pub theta: f64,
    pub k: usize,
    pub embedding: EmbeddingConfig,
    pub forest: ForestConfig,
    pub trials: TrialConfig,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            paths: Paths::default(),
            attribute: None,
            seed: 0,
            theta: DEFAULT_THETA,
            k: DEFAULT_K,
            embedding: EmbeddingConfig::default(),
            forest: ForestConfig::default(),
            trials: TrialConfig::default(),
        }
    }
}

impl PipelineConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg: Self = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        let base = path.parent().unwrap_or_else(|| Path::new(""));
        let p = &mut cfg.paths;
        for slot in [
            &mut p.corpus,
            &mut p.stats,
            &mut p.store,
            &mut p.registry,
            &mut p.candidates,
            &mut p.labels,
            &mut p.model,
            &mut p.output,
        ] {
            if let Some(rel) = slot.as_mut() {
                if rel.is_relative() {
                    *rel = base.join(&*rel);
                }
            }
        }
        Ok(cfg)
    }

    /// Pushes the single seed and `k` into the nested sections.
    pub fn settle(&mut self) {
        self.embedding.master_seed = self.seed;
        self.forest.seed = self.seed;
        self.trials.base_seed = self.seed;
        self.trials.k = self.k;
    }
}

/// A flag value, else the config value, else an error naming the flag.
pub fn need(flag: &Option<PathBuf>, configured: &Option<PathBuf>, name: &str) -> Result<PathBuf> {
    flag.clone()
        .or_else(|| configured.clone())
        .with_context(|| {
            format!("missing --{name} (not given on the command line or in the config file)")
        })
}
