//! High-recall candidate generation.
//!
//! A recognizer decides whether tokens `i..=j` of a document are an instance
//! of its attribute. Recognizers only need high recall: precision is recovered
//! later by the contextual classifier, so new sources can be added freely.

mod gazetteer;
mod pattern;
mod registry;

use std::collections::HashSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::corpus::{Token, TokenSequence};
use crate::Result;

pub use gazetteer::{read_gazetteer_file, Gazetteer};
pub use pattern::{NamedPattern, NumericRange, PatternConfig, PatternSet};
pub use registry::{load_registry, RegistryEntry, RegistryFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RecognizerKind {
    Gazetteer,
    Pattern,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecognizerSpec {
    pub name: String,
    pub attribute: String,
    pub kind: RecognizerKind,
    /// Where the entries or patterns came from; informational.
    #[serde(default)]
    pub source: Option<PathBuf>,
    /// Documented expected recall. Not enforced.
    #[serde(default)]
    pub expected_recall: Option<f64>,
}

impl RecognizerSpec {
    pub fn new(
        name: impl Into<String>,
        attribute: impl Into<String>,
        kind: RecognizerKind,
    ) -> Self {
        Self {
            name: name.into(),
            attribute: attribute.into(),
            kind,
            source: None,
            expected_recall: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    #[default]
    Unlabeled,
    Correct,
    Incorrect,
}

impl Label {
    pub fn as_bool(self) -> Option<bool> {
        match self {
            Label::Unlabeled => None,
            Label::Correct => Some(true),
            Label::Incorrect => Some(false),
        }
    }
}

/// A proposed attribute value covering 1-indexed tokens `i..=j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CandidateAnnotation {
    pub doc_id: String,
    pub attribute: String,
    pub i: usize,
    pub j: usize,
    pub surface: String,
    pub recognizer: String,
    #[serde(default)]
    pub label: Label,
}

impl CandidateAnnotation {
    pub fn span(&self) -> (usize, usize) {
        (self.i, self.j)
    }

    pub fn is_valid_for(&self, seq: &TokenSequence) -> bool {
        self.i >= 1 && self.i <= self.j && self.j <= seq.len()
    }
}

pub(crate) fn span_surface(tokens: &[Token]) -> String {
    tokens
        .iter()
        .map(|t| t.surface.as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Debug, Clone)]
enum Matcher {
    Gazetteer(Gazetteer),
    Pattern(PatternSet),
}

#[derive(Debug, Clone)]
pub struct Recognizer {
    spec: RecognizerSpec,
    matcher: Matcher,
}

pub fn build_gazetteer_recognizer<I, S>(spec: RecognizerSpec, entries: I) -> Result<Recognizer>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    Ok(Recognizer {
        spec,
        matcher: Matcher::Gazetteer(Gazetteer::from_entries(entries)?),
    })
}

pub fn build_pattern_recognizer(
    spec: RecognizerSpec,
    patterns: &PatternConfig,
) -> Result<Recognizer> {
    Ok(Recognizer {
        spec,
        matcher: Matcher::Pattern(PatternSet::compile(patterns)?),
    })
}

impl Recognizer {
    pub fn spec(&self) -> &RecognizerSpec {
        &self.spec
    }

    pub fn name(&self) -> &str {
        &self.spec.name
    }

    pub fn attribute(&self) -> &str {
        &self.spec.attribute
    }

    /// Whether 1-indexed tokens `i..=j` form an instance.
    pub fn matches(&self, seq: &TokenSequence, i: usize, j: usize) -> bool {
        if i == 0 || i > j || j > seq.len() {
            return false;
        }
        let canons = seq.canons();
        let span = &canons[i - 1..j];
        match &self.matcher {
            Matcher::Gazetteer(g) => g.contains(span),
            Matcher::Pattern(p) => p.matches(span),
        }
    }

    fn longest_at(&self, canons: &[&str], start: usize) -> Option<usize> {
        match &self.matcher {
            Matcher::Gazetteer(g) => g.longest_match(&canons[start..]),
            Matcher::Pattern(p) => p.longest_match(&canons[start..]),
        }
    }
}

/// Leftmost-longest non-overlapping matches in document order.
pub fn recognize_spans(rec: &Recognizer, seq: &TokenSequence) -> Vec<CandidateAnnotation> {
    let canons = seq.canons();
    let mut out = Vec::new();
    let mut start = 0;
    while start < canons.len() {
        match rec.longest_at(&canons, start) {
            Some(len) => {
                out.push(CandidateAnnotation {
                    doc_id: seq.doc_id.clone(),
                    attribute: rec.attribute().to_owned(),
                    i: start + 1,
                    j: start + len,
                    surface: span_surface(&seq.tokens[start..start + len]),
                    recognizer: rec.name().to_owned(),
                    label: Label::Unlabeled,
                });
                start += len;
            }
            None => start += 1,
        }
    }
    out
}

/// Union of per-recognizer candidates for one document, de-duplicated on
/// (attribute, span) with the first proposal kept, sorted by span.
pub fn merge_candidates<I>(lists: I) -> Vec<CandidateAnnotation>
where
    I: IntoIterator,
    I::Item: IntoIterator<Item = CandidateAnnotation>,
{
    let mut seen = HashSet::new();
    let mut merged: Vec<CandidateAnnotation> = lists
        .into_iter()
        .flatten()
        .filter(|c| seen.insert((c.attribute.clone(), c.i, c.j)))
        .collect();
    merged.sort_by(|a, b| (a.i, a.j, &a.attribute).cmp(&(b.i, b.j, &b.attribute)));
    merged
}

/// Runs every recognizer over `seq` and merges the results.
pub fn recognize_document(
    recognizers: &[Recognizer],
    seq: &TokenSequence,
) -> Vec<CandidateAnnotation> {
    merge_candidates(recognizers.iter().map(|r| recognize_spans(r, seq)))
}

pub fn read_candidates(path: impl AsRef<Path>) -> Result<Vec<CandidateAnnotation>> {
    crate::jsonl::read_all(path)
}

pub fn write_candidates(path: impl AsRef<Path>, candidates: &[CandidateAnnotation]) -> Result<()> {
    crate::jsonl::write_all(path, candidates)
}
