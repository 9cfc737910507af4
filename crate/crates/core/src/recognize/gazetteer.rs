use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use crate::corpus::tokenize::tokenize_str;
use crate::{Error, Result};

#[derive(Debug, Clone, Default)]
struct Node {
    children: HashMap<String, u32>,
    terminal: bool,
}

/// Prefix tree over canon token sequences.
#[derive(Debug, Clone)]
pub struct Gazetteer {
    nodes: Vec<Node>,
    entries: usize,
}

impl Gazetteer {
    /// Entries are tokenized and case-folded exactly like corpus text.
    pub fn from_entries<I, S>(entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut gazetteer = Self {
            nodes: vec![Node::default()],
            entries: 0,
        };
        for (idx, entry) in entries.into_iter().enumerate() {
            let tokens = tokenize_str(entry.as_ref());
            if tokens.is_empty() {
                return Err(Error::EmptyEntry(idx));
            }
            gazetteer.insert(tokens.iter().map(|t| t.canon.as_str()));
        }
        if gazetteer.entries == 0 {
            return Err(Error::EmptyGazetteer);
        }
        Ok(gazetteer)
    }

    fn insert<'a>(&mut self, tokens: impl Iterator<Item = &'a str>) {
        let mut node = 0usize;
        for tok in tokens {
            node = match self.nodes[node].children.get(tok) {
                Some(&next) => next as usize,
                None => {
                    let next = self.nodes.len();
                    self.nodes.push(Node::default());
                    self.nodes[node]
                        .children
                        .insert(tok.to_owned(), next as u32);
                    next
                }
            };
        }
        if !self.nodes[node].terminal {
            self.nodes[node].terminal = true;
            self.entries += 1;
        }
    }

    /// Number of distinct entries.
    pub fn len(&self) -> usize {
        self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries == 0
    }

    pub fn contains(&self, tokens: &[&str]) -> bool {
        let mut node = 0usize;
        for tok in tokens {
            match self.nodes[node].children.get(*tok) {
                Some(&next) => node = next as usize,
                None => return false,
            }
        }
        !tokens.is_empty() && self.nodes[node].terminal
    }

    /// Length of the longest entry that is a prefix of `tokens`.
    pub fn longest_match(&self, tokens: &[&str]) -> Option<usize> {
        let mut node = 0usize;
        let mut best = None;
        for (depth, tok) in tokens.iter().enumerate() {
            match self.nodes[node].children.get(*tok) {
                Some(&next) => node = next as usize,
                None => break,
            }
            if self.nodes[node].terminal {
                best = Some(depth + 1);
            }
        }
        best
    }
}

/// Newline-delimited entries; blank lines and lines starting with '#' are skipped.
pub fn read_gazetteer_file(path: impl AsRef<Path>) -> Result<Vec<String>> {
    let reader = BufReader::new(File::open(path)?);
    let mut entries = Vec::new();
    for line in reader.lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        entries.push(trimmed.to_owned());
    }
    Ok(entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn duplicates_counted_once() {
        let g = Gazetteer::from_entries(["New York", "new york", "york"]).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.contains(&["new", "york"]));
        assert!(!g.contains(&["new"]));
        assert!(!g.contains(&[]));
    }

    #[test]
    fn entries_use_corpus_tokenizer() {
        let g = Gazetteer::from_entries(["Winston-Salem"]).unwrap();
        assert!(g.contains(&["winston", "-", "salem"]));
    }

    #[test]
    fn longest_prefix() {
        let g = Gazetteer::from_entries(["a", "a b c"]).unwrap();
        assert_eq!(g.longest_match(&["a", "b", "x"]), Some(1));
        assert_eq!(g.longest_match(&["a", "b", "c", "d"]), Some(3));
        assert_eq!(g.longest_match(&["b"]), None);
    }

    #[test]
    fn bundled_samples_load() {
        let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/gazetteers");
        let sizes: Vec<usize> = ["cities.txt", "states.txt", "names.txt"]
            .iter()
            .map(|f| {
                Gazetteer::from_entries(read_gazetteer_file(dir.join(f)).unwrap())
                    .unwrap()
                    .len()
            })
            .collect();
        assert_eq!(sizes, [1000, 51, 500]);
    }
}
