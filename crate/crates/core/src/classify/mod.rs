//! Contextual classification of candidate annotations.
//!
//! A candidate's feature vector is the l2-normalized sum of the
//! representation vectors of the tokens around it. Per attribute, features
//! are ranked by ANOVA F-score, the best `k` are kept and a random forest
//! learns to separate correct from incorrect candidates.

mod anova;
mod dataset;
mod forest;
mod model;

pub use anova::{anova_f_scores, select_k_best};
pub use dataset::{oversample_balance, LabeledDataset, Sample};
pub use forest::{gini_impurity, DecisionTree, Forest, ForestConfig, TreeNode};
pub use model::{predict, train_classifier, TrainedExtractor, MODEL_VERSION};

use crate::corpus::TokenSequence;
use crate::embedding::VectorStore;
use crate::recognize::CandidateAnnotation;
use crate::{Error, Result};

/// Default number of features kept after selection.
pub const DEFAULT_K: usize = 20;

/// Feature vector for the span `ann.i..=ann.j` of a compound-normalized
/// sequence: up to `before` tokens preceding the span and `after` tokens
/// following it, span tokens excluded. Units missing from the store count as
/// zero. The zero vector is returned unnormalized.
pub fn featurize_annotation(
    ann: &CandidateAnnotation,
    seq: &TokenSequence,
    store: &VectorStore,
    before: usize,
    after: usize,
) -> Result<Vec<f64>> {
    let len = seq.len();
    if !ann.is_valid_for(seq) {
        return Err(Error::Span {
            i: ann.i,
            j: ann.j,
            len,
        });
    }
    let (i, j) = (ann.i - 1, ann.j - 1);
    let left = i.saturating_sub(before)..i;
    let right = (j + 1)..(j + 1 + after).min(len);
    let mut sum = vec![0.0; store.dim()];
    for pos in left.chain(right) {
        if let Some(repr) = store.get(&seq.tokens[pos].canon) {
            for (s, v) in sum.iter_mut().zip(repr.values) {
                *s += v;
            }
        }
    }
    l2_normalize(&mut sum);
    Ok(sum)
}

pub(crate) fn l2_normalize(v: &mut [f64]) {
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        v.iter_mut().for_each(|x| *x /= norm);
    }
}
