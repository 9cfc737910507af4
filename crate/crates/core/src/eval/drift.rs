use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use super::{run_trials, ExperimentTag, TrialConfig, TrialSummary};
use crate::classify::ForestConfig;
use crate::corpus::{Document, DEFAULT_THETA};
use crate::embedding::EmbeddingConfig;
use crate::pipeline::{frozen_stats, labeled_dataset, train_store, DocumentIndex};
use crate::recognize::CandidateAnnotation;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub embedding: EmbeddingConfig,
    pub theta: f64,
    pub trials: TrialConfig,
    pub forest: ForestConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            embedding: EmbeddingConfig::default(),
            theta: DEFAULT_THETA,
            trials: TrialConfig::default(),
            forest: ForestConfig::default(),
        }
    }
}

/// Retrains statistics and representations on each of a sequence of nested
/// corpora and reruns the same trials on a fixed labeled candidate set.
/// Returns one summary per corpus.
pub fn drift_experiment(
    corpora: &[(String, Vec<Document>)],
    candidate_docs: &[Document],
    candidates: &[CandidateAnnotation],
    attribute: &str,
    cfg: &ExperimentConfig,
) -> Result<Vec<TrialSummary>> {
    let mut previous: HashSet<&str> = HashSet::new();
    let mut out = Vec::with_capacity(corpora.len());
    for (name, docs) in corpora {
        let ids: HashSet<&str> = docs.iter().map(|d| d.doc_id.as_str()).collect();
        if !previous.is_subset(&ids) {
            return Err(Error::Config(format!(
                "corpus {name:?} does not contain its predecessor"
            )));
        }
        let stats = frozen_stats(docs, cfg.theta)?;
        let store = train_store(docs, &stats, cfg.embedding)?;
        let index = DocumentIndex::normalized(candidate_docs, &stats);
        let (before, after) = (cfg.embedding.before, cfg.embedding.after);
        let ds = labeled_dataset(candidates, attribute, &index, &store, before, after)?;
        let tag = ExperimentTag::new("drift", name.clone(), attribute);
        out.push(run_trials(&ds, &tag, &cfg.trials, &cfg.forest)?);
        previous = ids;
    }
    Ok(out)
}
