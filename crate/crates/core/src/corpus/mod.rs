//! Documents, tokenization, corpus statistics and compound-unit normalization.

mod stats;
pub(crate) mod tokenize;
mod units;

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::jsonl::JsonLines;
use crate::Result;

pub use stats::{compute_corpus_stats, CorpusStats, DEFAULT_THETA};
pub use tokenize::tokenize;
pub use units::{classify_token, normalize_sequence, UnitClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Text,
    Title,
}

/// One raw field of a scraped page.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub doc_id: String,
    pub field: Field,
    pub raw: String,
}

impl Document {
    pub fn new(doc_id: impl Into<String>, field: Field, raw: impl Into<String>) -> Self {
        Self {
            doc_id: doc_id.into(),
            field,
            raw: raw.into(),
        }
    }

    pub fn text(doc_id: impl Into<String>, raw: impl Into<String>) -> Self {
        Self::new(doc_id, Field::Text, raw)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    /// Substring of the raw document.
    pub surface: String,
    /// Lowercased surface, or a compound-unit symbol after normalization.
    pub canon: String,
}

impl Token {
    pub fn new(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        let canon = surface.to_lowercase();
        Self { surface, canon }
    }
}

/// Tokens of one document in document order. Positions are 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TokenSequence {
    pub doc_id: String,
    pub tokens: Vec<Token>,
}

impl TokenSequence {
    pub fn new(doc_id: impl Into<String>, tokens: Vec<Token>) -> Self {
        Self {
            doc_id: doc_id.into(),
            tokens,
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    /// Token at 1-indexed `position`.
    pub fn get(&self, position: usize) -> Option<&Token> {
        position.checked_sub(1).and_then(|p| self.tokens.get(p))
    }

    pub fn canons(&self) -> Vec<&str> {
        self.tokens.iter().map(|t| t.canon.as_str()).collect()
    }
}

/// Reads a JSON-lines corpus, rejecting empty or duplicate document ids.
pub fn read_corpus(path: impl AsRef<Path>) -> Result<Vec<Document>> {
    let mut lines = JsonLines::<_, Document>::open(path)?;
    let mut seen = HashSet::new();
    let mut docs = Vec::new();
    while let Some(doc) = lines.next() {
        let doc = doc?;
        if doc.doc_id.is_empty() {
            return Err(lines.parse_error("empty doc_id"));
        }
        if !seen.insert(doc.doc_id.clone()) {
            return Err(lines.parse_error(format!("duplicate doc_id {:?}", doc.doc_id)));
        }
        docs.push(doc);
    }
    Ok(docs)
}

pub fn write_corpus(path: impl AsRef<Path>, docs: &[Document]) -> Result<()> {
    crate::jsonl::write_all(path, docs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    #[test]
    fn corpus_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let docs = vec![
            Document::text("1", "Location: Bossier City/Shreveport"),
            Document::new("1-title", Field::Title, ""),
        ];
        write_corpus(&path, &docs).unwrap();
        assert_eq!(read_corpus(&path).unwrap(), docs);
    }

    #[test]
    fn duplicate_ids_report_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let mut f = std::fs::File::create(&path).unwrap();
        writeln!(f, r#"{{"doc_id":"a","field":"text","raw":"x"}}"#).unwrap();
        writeln!(f).unwrap();
        writeln!(f, r#"{{"doc_id":"a","field":"title","raw":"y"}}"#).unwrap();
        drop(f);
        let err = read_corpus(&path).unwrap_err().to_string();
        assert!(err.contains(":3:"), "{err}");
    }

    #[test]
    fn malformed_line_reports_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        std::fs::write(
            &path,
            "{\"doc_id\":\"a\",\"field\":\"text\",\"raw\":\"x\"}\n{oops\n",
        )
        .unwrap();
        let err = read_corpus(&path).unwrap_err().to_string();
        assert!(err.contains(":2:"), "{err}");
    }

    #[test]
    fn positions_are_one_indexed() {
        let seq = tokenize(&Document::text("d", "a b"));
        assert_eq!(seq.get(1).unwrap().canon, "a");
        assert_eq!(seq.get(2).unwrap().canon, "b");
        assert!(seq.get(0).is_none());
        assert!(seq.get(3).is_none());
    }
}
