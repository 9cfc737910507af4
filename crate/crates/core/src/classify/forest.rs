use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::LabeledDataset;
use crate::seed;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ForestConfig {
    pub n_trees: usize,
    /// Features drawn per node; `None` means floor(sqrt(feature count)).
    pub max_features: Option<usize>,
    pub max_depth: Option<usize>,
    pub min_samples_split: usize,
    /// Draw each tree's training set with replacement.
    pub bootstrap: bool,
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self {
            n_trees: 10,
            max_features: None,
            max_depth: None,
            min_samples_split: 2,
            bootstrap: true,
            seed: 0,
        }
    }
}

impl ForestConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_trees == 0 {
            return Err(Error::Config("a forest needs at least one tree".into()));
        }
        if self.max_features == Some(0) {
            return Err(Error::Config("max_features must be positive".into()));
        }
        Ok(())
    }

    fn features_per_split(&self, n_features: usize) -> usize {
        self.max_features
            .unwrap_or_else(|| (n_features as f64).sqrt().floor() as usize)
            .clamp(1, n_features.max(1))
    }
}

/// `1 - sum (n_c / N)^2`.
pub fn gini_impurity(counts: &[usize]) -> Result<f64> {
    let total: usize = counts.iter().sum();
    if total == 0 {
        return Err(Error::EmptyCounts);
    }
    Ok(gini(counts, total))
}

fn gini(counts: &[usize], total: usize) -> f64 {
    let n = total as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "node", rename_all = "lowercase")]
pub enum TreeNode {
    /// Samples with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
    Leaf {
        negatives: usize,
        positives: usize,
    },
}

/// Binary CART tree stored as a node arena; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionTree {
    pub nodes: Vec<TreeNode>,
}

impl DecisionTree {
    pub fn leaf(negatives: usize, positives: usize) -> Self {
        Self {
            nodes: vec![TreeNode::Leaf {
                negatives,
                positives,
            }],
        }
    }

    /// Fraction of positive training samples in the leaf `x` falls into.
    pub fn positive_fraction(&self, x: &[f64]) -> f64 {
        let mut node = 0;
        loop {
            match self.nodes[node] {
                TreeNode::Split {
                    feature,
                    threshold,
                    left,
                    right,
                } => {
                    node = if x[feature] <= threshold { left } else { right };
                }
                TreeNode::Leaf {
                    negatives,
                    positives,
                } => {
                    return positives as f64 / (negatives + positives) as f64;
                }
            }
        }
    }

    pub fn split_features(&self) -> impl Iterator<Item = usize> + '_ {
        self.nodes.iter().filter_map(|n| match n {
            TreeNode::Split { feature, .. } => Some(*feature),
            TreeNode::Leaf { .. } => None,
        })
    }

    fn remap_features(&mut self, columns: &[usize]) {
        for node in &mut self.nodes {
            if let TreeNode::Split { feature, .. } = node {
                *feature = columns[*feature];
            }
        }
    }

    /// Grows a tree on `rows` of `ds` (duplicates allowed).
    pub fn fit(
        ds: &LabeledDataset,
        rows: &[usize],
        cfg: &ForestConfig,
        rng: &mut ChaCha8Rng,
    ) -> Self {
        let mut builder = Builder {
            ds,
            cfg,
            per_split: cfg.features_per_split(ds.dim()),
            nodes: Vec::new(),
        };
        builder.grow(rows.to_vec(), rng);
        Self {
            nodes: builder.nodes,
        }
    }
}

struct Builder<'a> {
    ds: &'a LabeledDataset,
    cfg: &'a ForestConfig,
    per_split: usize,
    nodes: Vec<TreeNode>,
}

struct Split {
    feature: usize,
    threshold: f64,
    impurity: f64,
}

fn counts(ds: &LabeledDataset, rows: &[usize]) -> [usize; 2] {
    let mut c = [0usize; 2];
    for &r in rows {
        c[usize::from(ds.samples()[r].label)] += 1;
    }
    c
}

impl Builder<'_> {
    fn grow(&mut self, root_rows: Vec<usize>, rng: &mut ChaCha8Rng) {
        // (node index, rows, depth); nodes are reserved before being filled.
        self.nodes.push(TreeNode::Leaf {
            negatives: 0,
            positives: 0,
        });
        let mut stack = vec![(0usize, root_rows, 0usize)];
        while let Some((idx, rows, depth)) = stack.pop() {
            let [negatives, positives] = counts(self.ds, &rows);
            let stop = negatives == 0
                || positives == 0
                || rows.len() < self.cfg.min_samples_split
                || self.cfg.max_depth.is_some_and(|d| depth >= d);
            let split = if stop {
                None
            } else {
                self.best_split(&rows, rng)
            };
            match split {
                None => {
                    self.nodes[idx] = TreeNode::Leaf {
                        negatives,
                        positives,
                    }
                }
                Some(split) => {
                    let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&row| {
                        self.ds.samples()[row].features[split.feature] <= split.threshold
                    });
                    let left = self.nodes.len();
                    let right = left + 1;
                    self.nodes.push(TreeNode::Leaf {
                        negatives: 0,
                        positives: 0,
                    });
                    self.nodes.push(TreeNode::Leaf {
                        negatives: 0,
                        positives: 0,
                    });
                    self.nodes[idx] = TreeNode::Split {
                        feature: split.feature,
                        threshold: split.threshold,
                        left,
                        right,
                    };
                    stack.push((right, r, depth + 1));
                    stack.push((left, l, depth + 1));
                }
            }
        }
    }

    /// Inspects features in random order; stops once `per_split` features
    /// have been examined and at least one valid split exists.
    fn best_split(&self, rows: &[usize], rng: &mut ChaCha8Rng) -> Option<Split> {
        let mut features: Vec<usize> = (0..self.ds.dim()).collect();
        features.shuffle(rng);
        let mut best: Option<Split> = None;
        for (examined, &f) in features.iter().enumerate() {
            if examined >= self.per_split && best.is_some() {
                break;
            }
            if let Some(s) = self.best_threshold(rows, f) {
                if best.as_ref().is_none_or(|b| s.impurity < b.impurity) {
                    best = Some(s);
                }
            }
        }
        best
    }

    fn best_threshold(&self, rows: &[usize], feature: usize) -> Option<Split> {
        let samples = self.ds.samples();
        let mut values: Vec<(f64, bool)> = rows
            .iter()
            .map(|&r| (samples[r].features[feature], samples[r].label))
            .collect();
        values.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total = counts(self.ds, rows);
        let n = values.len();
        let mut left = [0usize; 2];
        let mut best: Option<Split> = None;
        for p in 0..n - 1 {
            left[usize::from(values[p].1)] += 1;
            let (lo, hi) = (values[p].0, values[p + 1].0);
            if lo == hi {
                continue;
            }
            let right = [total[0] - left[0], total[1] - left[1]];
            let nl = p + 1;
            let impurity =
                (nl as f64 * gini(&left, nl) + (n - nl) as f64 * gini(&right, n - nl)) / n as f64;
            if best.as_ref().is_none_or(|b| impurity < b.impurity) {
                let mid = lo + (hi - lo) / 2.0;
                // Adjacent floats can round the midpoint up to `hi`.
                let threshold = if mid < hi { mid } else { lo };
                best = Some(Split {
                    feature,
                    threshold,
                    impurity,
                });
            }
        }
        best
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Forest {
    pub trees: Vec<DecisionTree>,
}

impl Forest {
    /// Trains `cfg.n_trees` trees, each seeded independently from `cfg.seed`
    /// and its index. Split features refer to `columns[local index]`, so a
    /// forest fit on a projected dataset tests the original feature indices.
    pub fn fit(ds: &LabeledDataset, cfg: &ForestConfig, columns: &[usize]) -> Result<Self> {
        cfg.validate()?;
        ds.require_both_classes()?;
        let n = ds.len();
        let trees = (0..cfg.n_trees)
            .map(|t| {
                let mut rng = ChaCha8Rng::seed_from_u64(seed::derive(cfg.seed, t as u64));
                let rows: Vec<usize> = if cfg.bootstrap {
                    (0..n).map(|_| rng.gen_range(0..n)).collect()
                } else {
                    (0..n).collect()
                };
                let mut tree = DecisionTree::fit(ds, &rows, cfg, &mut rng);
                tree.remap_features(columns);
                tree
            })
            .collect();
        Ok(Self { trees })
    }

    pub fn from_trees(trees: Vec<DecisionTree>) -> Self {
        Self { trees }
    }

    /// Mean positive-leaf fraction over all trees.
    pub fn score(&self, x: &[f64]) -> f64 {
        self.trees
            .iter()
            .map(|t| t.positive_fraction(x))
            .sum::<f64>()
            / self.trees.len() as f64
    }
}
