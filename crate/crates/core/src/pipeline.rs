//! Glue between the stages: statistics, normalization, training and
//! featurization of labeled candidates.

use std::collections::HashMap;

use crate::classify::{featurize_annotation, LabeledDataset};
use crate::corpus::{
    compute_corpus_stats, normalize_sequence, tokenize, CorpusStats, Document, TokenSequence,
};
use crate::embedding::{EmbeddingConfig, VectorStore};
use crate::recognize::CandidateAnnotation;
use crate::{Error, Result};

/// Statistics over `docs`, frozen.
pub fn frozen_stats(docs: &[Document], theta: f64) -> Result<CorpusStats> {
    let mut stats = compute_corpus_stats(docs, theta)?;
    stats.freeze();
    Ok(stats)
}

pub fn normalized(doc: &Document, stats: &CorpusStats) -> TokenSequence {
    normalize_sequence(&tokenize(doc), stats)
}

/// Extends `store` with `docs`, normalized against `stats`.
pub fn extend_store(store: &mut VectorStore, docs: &[Document], stats: &CorpusStats) -> Result<()> {
    for doc in docs {
        store.train_sequence(&normalized(doc, stats))?;
    }
    Ok(())
}

pub fn train_store(
    docs: &[Document],
    stats: &CorpusStats,
    cfg: EmbeddingConfig,
) -> Result<VectorStore> {
    let mut store = VectorStore::new(cfg)?;
    extend_store(&mut store, docs, stats)?;
    Ok(store)
}

/// Normalized token sequences addressed by document id.
#[derive(Debug, Clone, Default)]
pub struct DocumentIndex {
    docs: HashMap<String, TokenSequence>,
}

impl DocumentIndex {
    pub fn normalized(docs: &[Document], stats: &CorpusStats) -> Self {
        Self {
            docs: docs
                .iter()
                .map(|d| (d.doc_id.clone(), normalized(d, stats)))
                .collect(),
        }
    }

    pub fn get(&self, doc_id: &str) -> Result<&TokenSequence> {
        self.docs
            .get(doc_id)
            .ok_or_else(|| Error::UnknownDocument(doc_id.to_owned()))
    }
}

pub fn featurize_candidates(
    candidates: &[CandidateAnnotation],
    index: &DocumentIndex,
    store: &VectorStore,
    before: usize,
    after: usize,
) -> Result<Vec<Vec<f64>>> {
    candidates
        .iter()
        .map(|c| featurize_annotation(c, index.get(&c.doc_id)?, store, before, after))
        .collect()
}

/// Dataset of the labeled candidates for `attribute`; each sample's origin
/// is its index in `candidates`.
pub fn labeled_dataset(
    candidates: &[CandidateAnnotation],
    attribute: &str,
    index: &DocumentIndex,
    store: &VectorStore,
    before: usize,
    after: usize,
) -> Result<LabeledDataset> {
    let mut ds = LabeledDataset::new(store.dim());
    for (n, c) in candidates.iter().enumerate() {
        if c.attribute != attribute {
            continue;
        }
        if let Some(label) = c.label.as_bool() {
            let fv = featurize_annotation(c, index.get(&c.doc_id)?, store, before, after)?;
            ds.push(fv, label, Some(n))?;
        }
    }
    Ok(ds)
}
