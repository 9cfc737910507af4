use std::borrow::Borrow;
use std::collections::{BTreeMap, HashSet};
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{tokenize, Document, TokenSequence};
use crate::{Error, Result};

/// Default rare-unit threshold: units in fewer than 1% of documents.
pub const DEFAULT_THETA: f64 = 0.01;

/// Document frequencies over the initial corpus.
///
/// Statistics are accumulated until [`CorpusStats::freeze`] is called. After
/// that they never change, so unit classes stay stable while the embedding
/// keeps consuming a stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusStats {
    doc_count: u64,
    doc_freq: BTreeMap<String, u64>,
    theta: f64,
    frozen: bool,
}

impl CorpusStats {
    pub fn new(theta: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&theta) {
            return Err(Error::Config(format!(
                "theta must lie in [0, 1], got {theta}"
            )));
        }
        Ok(Self {
            doc_count: 0,
            doc_freq: BTreeMap::new(),
            theta,
            frozen: false,
        })
    }

    /// Counts each distinct canon token of `seq` once.
    pub fn add_sequence(&mut self, seq: &TokenSequence) -> Result<()> {
        if self.frozen {
            return Err(Error::StatsFrozen);
        }
        self.doc_count += 1;
        let distinct: HashSet<&str> = seq.tokens.iter().map(|t| t.canon.as_str()).collect();
        for canon in distinct {
            match self.doc_freq.get_mut(canon) {
                Some(n) => *n += 1,
                None => {
                    self.doc_freq.insert(canon.to_owned(), 1);
                }
            }
        }
        Ok(())
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    pub fn doc_count(&self) -> u64 {
        self.doc_count
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn doc_freq(&self, canon: &str) -> u64 {
        self.doc_freq.get(canon).copied().unwrap_or(0)
    }

    pub fn vocabulary_size(&self) -> usize {
        self.doc_freq.len()
    }

    /// Fraction of documents containing `canon`; 0 for an empty corpus.
    pub fn doc_fraction(&self, canon: &str) -> f64 {
        if self.doc_count == 0 {
            return 0.0;
        }
        self.doc_freq(canon) as f64 / self.doc_count as f64
    }

    /// True when `canon` occurs in strictly fewer than `theta` of the documents.
    /// Nothing is rare in an empty corpus.
    pub fn is_rare(&self, canon: &str) -> bool {
        self.doc_count > 0 && self.doc_fraction(canon) < self.theta
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        serde_json::to_writer(&mut out, self)?;
        out.write_all(b"\n")?;
        out.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let stats: Self = serde_json::from_reader(BufReader::new(File::open(path)?))?;
        if stats.doc_freq.values().any(|&n| n > stats.doc_count) {
            return Err(Error::Config(
                "document frequency exceeds document count".into(),
            ));
        }
        Ok(stats)
    }
}

/// Folds a finite stream of documents into unfrozen statistics.
pub fn compute_corpus_stats<I>(docs: I, theta: f64) -> Result<CorpusStats>
where
    I: IntoIterator,
    I::Item: Borrow<Document>,
{
    let mut stats = CorpusStats::new(theta)?;
    for doc in docs {
        stats.add_sequence(&tokenize(doc.borrow()))?;
    }
    Ok(stats)
}
