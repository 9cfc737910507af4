use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{anova_f_scores, select_k_best, Forest, ForestConfig, LabeledDataset};
use crate::recognize::Label;
use crate::{Error, Result};

pub const MODEL_VERSION: u32 = 1;

/// Feature selection plus forest for one attribute.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedExtractor {
    pub version: u32,
    pub attribute: String,
    /// Context window used when featurizing candidates.
    pub before: usize,
    pub after: usize,
    /// Dimension of feature vectors before selection.
    pub dim: usize,
    /// Selected feature indices, strictly increasing.
    pub selected: Vec<usize>,
    pub forest: Forest,
}

impl TrainedExtractor {
    pub fn with_context(
        mut self,
        attribute: impl Into<String>,
        before: usize,
        after: usize,
    ) -> Self {
        self.attribute = attribute.into();
        self.before = before;
        self.after = after;
        self
    }

    /// True when every split in every tree tests a selected feature.
    pub fn uses_only_selected(&self) -> bool {
        self.forest
            .trees
            .iter()
            .flat_map(|t| t.split_features())
            .all(|f| self.selected.binary_search(&f).is_ok())
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut out = BufWriter::new(File::create(path)?);
        serde_json::to_writer(&mut out, self)?;
        out.write_all(b"\n")?;
        out.flush()?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let model: Self = serde_json::from_reader(BufReader::new(File::open(path)?))?;
        if model.version != MODEL_VERSION {
            return Err(Error::ModelVersion(model.version));
        }
        Ok(model)
    }
}

/// Selects the `k` best features by ANOVA F-score on `ds`, then fits a forest
/// on the projected vectors. `ds` should already be class-balanced.
pub fn train_classifier(
    ds: &LabeledDataset,
    cfg: &ForestConfig,
    k: usize,
) -> Result<TrainedExtractor> {
    if k == 0 {
        return Err(Error::Config("k must be at least 1".into()));
    }
    let scores = anova_f_scores(ds)?;
    let selected = select_k_best(&scores, k);
    let forest = Forest::fit(&ds.project(&selected), cfg, &selected)?;
    Ok(TrainedExtractor {
        version: MODEL_VERSION,
        attribute: String::new(),
        before: 2,
        after: 2,
        dim: ds.dim(),
        selected,
        forest,
    })
}

/// Classifies a pre-selection feature vector. The score is the mean leaf
/// positive fraction; a score of exactly 0.5 counts as correct.
pub fn predict(model: &TrainedExtractor, features: &[f64]) -> Result<(Label, f64)> {
    if features.len() != model.dim {
        return Err(Error::Dimension {
            expected: model.dim,
            actual: features.len(),
        });
    }
    let score = model.forest.score(features);
    let label = if score >= 0.5 {
        Label::Correct
    } else {
        Label::Incorrect
    };
    Ok((label, score))
}
