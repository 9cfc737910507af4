use std::fs::File;
use std::io::BufReader;
use std::path::Path;

use regex::Regex;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

const DEFAULT_AGE: &str = include_str!("../../data/patterns/age.json");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumericRange {
    pub min: u64,
    pub max: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedPattern {
    pub name: String,
    pub regex: String,
}

/// Pattern recognizer configuration. Each regex must match the whole span,
/// where a span's text is its canon tokens joined by single spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PatternConfig {
    pub name: String,
    pub attribute: String,
    /// Longest span, in tokens, a pattern may cover.
    #[serde(default = "default_max_span")]
    pub max_span: usize,
    #[serde(default)]
    pub expected_recall: Option<f64>,
    /// Single digit-only tokens whose value falls in any range match.
    #[serde(default)]
    pub numeric_ranges: Vec<NumericRange>,
    #[serde(default)]
    pub patterns: Vec<NamedPattern>,
}

fn default_max_span() -> usize {
    1
}

impl PatternConfig {
    /// Bundled age recognizer: integers 18 to 65 plus spelled-out forms.
    pub fn default_age() -> Self {
        serde_json::from_str(DEFAULT_AGE).expect("bundled age config is valid")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Ok(serde_json::from_reader(BufReader::new(File::open(path)?))?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct PatternSet {
    max_span: usize,
    ranges: Vec<NumericRange>,
    regexes: Vec<Regex>,
}

impl PatternSet {
    pub fn compile(cfg: &PatternConfig) -> Result<Self> {
        if cfg.max_span == 0 {
            return Err(Error::Config("max_span must be at least 1".into()));
        }
        if cfg.numeric_ranges.is_empty() && cfg.patterns.is_empty() {
            return Err(Error::Config(format!(
                "pattern recognizer {:?} has no patterns",
                cfg.name
            )));
        }
        let regexes = cfg
            .patterns
            .iter()
            .map(|p| {
                Regex::new(&format!("^(?:{})$", p.regex)).map_err(|source| Error::Pattern {
                    name: p.name.clone(),
                    source,
                })
            })
            .collect::<Result<_>>()?;
        Ok(Self {
            max_span: cfg.max_span,
            ranges: cfg.numeric_ranges.clone(),
            regexes,
        })
    }

    pub fn matches(&self, span: &[&str]) -> bool {
        if span.is_empty() || span.len() > self.max_span {
            return false;
        }
        if let [single] = span {
            if self.in_range(single) {
                return true;
            }
        }
        let text = span.join(" ");
        self.regexes.iter().any(|re| re.is_match(&text))
    }

    fn in_range(&self, token: &str) -> bool {
        if token.is_empty() || !token.bytes().all(|b| b.is_ascii_digit()) {
            return false;
        }
        // Digit strings too long for u64 are outside every range.
        token
            .parse::<u64>()
            .is_ok_and(|n| self.ranges.iter().any(|r| (r.min..=r.max).contains(&n)))
    }

    pub fn longest_match(&self, tokens: &[&str]) -> Option<usize> {
        (1..=self.max_span.min(tokens.len()))
            .rev()
            .find(|&len| self.matches(&tokens[..len]))
    }
}
