use std::collections::HashSet;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{
    build_gazetteer_recognizer, build_pattern_recognizer, read_gazetteer_file, PatternConfig,
    Recognizer, RecognizerKind, RecognizerSpec,
};
use crate::{Error, Result};

/// One recognizer declaration; `source` is relative to the registry file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegistryEntry {
    pub name: String,
    pub attribute: String,
    pub kind: RecognizerKind,
    pub source: PathBuf,
    #[serde(default)]
    pub expected_recall: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct RegistryFile {
    pub recognizers: Vec<RegistryEntry>,
}

impl RegistryFile {
    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(path, text)?;
        Ok(())
    }
}

/// Builds every recognizer listed in a registry file.
pub fn load_registry(path: impl AsRef<Path>) -> Result<Vec<Recognizer>> {
    let path = path.as_ref();
    let file: RegistryFile = serde_json::from_reader(BufReader::new(File::open(path)?))?;
    let base = path.parent().unwrap_or_else(|| Path::new("."));
    let mut names = HashSet::new();
    let mut out = Vec::with_capacity(file.recognizers.len());
    for entry in file.recognizers {
        if !names.insert(entry.name.clone()) {
            return Err(Error::Config(format!(
                "duplicate recognizer name {:?}",
                entry.name
            )));
        }
        let source = base.join(&entry.source);
        let spec = RecognizerSpec {
            name: entry.name,
            attribute: entry.attribute,
            kind: entry.kind,
            source: Some(entry.source),
            expected_recall: entry.expected_recall,
        };
        let rec = match spec.kind {
            RecognizerKind::Gazetteer => {
                build_gazetteer_recognizer(spec, read_gazetteer_file(&source)?)?
            }
            RecognizerKind::Pattern => {
                build_pattern_recognizer(spec, &PatternConfig::load(&source)?)?
            }
        };
        out.push(rec);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(name: &str, kind: RecognizerKind, source: &str) -> RegistryEntry {
        RegistryEntry {
            name: name.into(),
            attribute: "x".into(),
            kind,
            source: source.into(),
            expected_recall: Some(0.9),
        }
    }

    #[test]
    fn loads_relative_sources() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(
            dir.path().join("g.txt"),
            "# comment\nomaha\n\nsalt lake city\n",
        )
        .unwrap();
        PatternConfig::default_age()
            .save(dir.path().join("age.json"))
            .unwrap();
        let reg = RegistryFile {
            recognizers: vec![
                entry("g", RecognizerKind::Gazetteer, "g.txt"),
                entry("p", RecognizerKind::Pattern, "age.json"),
            ],
        };
        let path = dir.path().join("reg.json");
        reg.save(&path).unwrap();
        let recs = load_registry(&path).unwrap();
        assert_eq!(recs.len(), 2);
        assert_eq!(recs[1].spec().expected_recall, Some(0.9));
    }

    #[test]
    fn duplicate_names_rejected() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("g.txt"), "omaha\n").unwrap();
        let reg = RegistryFile {
            recognizers: vec![
                entry("g", RecognizerKind::Gazetteer, "g.txt"),
                entry("g", RecognizerKind::Gazetteer, "g.txt"),
            ],
        };
        let path = dir.path().join("reg.json");
        reg.save(&path).unwrap();
        assert!(matches!(load_registry(&path), Err(Error::Config(_))));
    }
}
