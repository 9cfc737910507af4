//! Evaluation protocol: random train/test splits repeated over independent
//! trials, precision/recall/F1 against gold labels, corpus-drift and
//! feature-count sweeps, and a training-time benchmark.
//!
//! Trial `t` uses seed `base_seed + t` for its split, oversampling and
//! forest, so any single row can be reproduced on its own.

mod bench;
mod drift;
mod report;

use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classify::{
    oversample_balance, predict, train_classifier, ForestConfig, LabeledDataset, DEFAULT_K,
};
use crate::recognize::Label;
use crate::{Error, Result};

pub use bench::{linear_fit, runtime_benchmark, BenchPoint, BenchReport, LinearFit};
pub use drift::{drift_experiment, ExperimentConfig};
pub use report::{write_plot_data, write_trials_csv, PlotPoint, TRIAL_COLUMNS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrialConfig {
    pub train_fraction: f64,
    pub n_trials: usize,
    pub base_seed: u64,
    /// Features kept by k-best selection.
    pub k: usize,
}

impl Default for TrialConfig {
    fn default() -> Self {
        Self {
            train_fraction: 0.3,
            n_trials: 10,
            base_seed: 0,
            k: DEFAULT_K,
        }
    }
}

impl TrialConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.train_fraction > 0.0 && self.train_fraction < 1.0) {
            return Err(Error::Config(format!(
                "train fraction must lie in (0, 1), got {}",
                self.train_fraction
            )));
        }
        if self.n_trials == 0 {
            return Err(Error::Config("at least one trial is required".into()));
        }
        Ok(())
    }

    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.base_seed.wrapping_add(trial as u64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

/// Ratios with empty denominators are 0.
pub fn compute_prf(tp: usize, fp: usize, fn_: usize) -> Prf {
    let ratio = |num: usize, den: usize| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    let precision = ratio(tp, tp + fp);
    let recall = ratio(tp, tp + fn_);
    let f1 = if precision + recall > 0.0 {
        2.0 * precision * recall / (precision + recall)
    } else {
        0.0
    };
    Prf {
        precision,
        recall,
        f1,
        tp,
        fp,
        fn_,
    }
}

/// Seeded uniform split: `ceil(fraction * n)` sorted train indices and the
/// sorted remainder.
pub fn split_indices(n: usize, fraction: f64, seed: u64) -> Result<(Vec<usize>, Vec<usize>)> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::Config(format!(
            "train fraction must lie in (0, 1), got {fraction}"
        )));
    }
    if n == 0 {
        return Err(Error::Config("cannot split an empty dataset".into()));
    }
    // 0.3 * 10 is 3.0000000000000004 in binary floating point.
    let take = ((fraction * n as f64 - 1e-9).ceil() as usize).clamp(1, n);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut train = index::sample(&mut rng, n, take).into_vec();
    train.sort_unstable();
    let mut in_train = vec![false; n];
    train.iter().for_each(|&i| in_train[i] = true);
    let test = (0..n).filter(|&i| !in_train[i]).collect();
    Ok((train, test))
}

pub fn split_dataset(
    ds: &LabeledDataset,
    fraction: f64,
    seed: u64,
) -> Result<(LabeledDataset, LabeledDataset)> {
    let (train, test) = split_indices(ds.len(), fraction, seed)?;
    Ok((ds.subset(&train), ds.subset(&test)))
}

/// Identifies one experiment configuration in result tables.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ExperimentTag {
    pub experiment: String,
    pub corpus: String,
    pub attribute: String,
}

impl ExperimentTag {
    pub fn new(
        experiment: impl Into<String>,
        corpus: impl Into<String>,
        attribute: impl Into<String>,
    ) -> Self {
        Self {
            experiment: experiment.into(),
            corpus: corpus.into(),
            attribute: attribute.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub tag: ExperimentTag,
    pub k: usize,
    pub trial: usize,
    pub prf: Prf,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub tag: ExperimentTag,
    pub k: usize,
    pub rows: Vec<TrialRow>,
    /// Macro averages over trials.
    pub mean_precision: f64,
    pub mean_recall: f64,
    pub mean_f1: f64,
}

/// One trial: split, balance the training part, train, score the test part.
pub fn run_trial(
    ds: &LabeledDataset,
    cfg: &TrialConfig,
    forest: &ForestConfig,
    trial: usize,
) -> Result<Prf> {
    let seed = cfg.trial_seed(trial);
    let (train, test) = split_dataset(ds, cfg.train_fraction, seed)?;
    let balanced = oversample_balance(&train, seed)?;
    let model = train_classifier(&balanced, &ForestConfig { seed, ..*forest }, cfg.k)?;
    let (mut tp, mut fp, mut fn_) = (0, 0, 0);
    for sample in test.samples() {
        let (label, _) = predict(&model, &sample.features)?;
        match (label == Label::Correct, sample.label) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fn_ += 1,
            (false, false) => {}
        }
    }
    Ok(compute_prf(tp, fp, fn_))
}

pub fn run_trials(
    ds: &LabeledDataset,
    tag: &ExperimentTag,
    cfg: &TrialConfig,
    forest: &ForestConfig,
) -> Result<TrialSummary> {
    cfg.validate()?;
    let rows = (0..cfg.n_trials)
        .map(|t| {
            Ok(TrialRow {
                tag: tag.clone(),
                k: cfg.k,
                trial: t,
                prf: run_trial(ds, cfg, forest, t)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let n = rows.len() as f64;
    let mean = |f: fn(&Prf) -> f64| rows.iter().map(|r| f(&r.prf)).sum::<f64>() / n;
    Ok(TrialSummary {
        tag: tag.clone(),
        k: cfg.k,
        mean_precision: mean(|p| p.precision),
        mean_recall: mean(|p| p.recall),
        mean_f1: mean(|p| p.f1),
        rows,
    })
}

/// Runs the full trial protocol once per value of `k`.
pub fn k_sweep(
    ds: &LabeledDataset,
    tag: &ExperimentTag,
    ks: &[usize],
    cfg: &TrialConfig,
    forest: &ForestConfig,
) -> Result<Vec<TrialSummary>> {
    ks.iter()
        .map(|&k| run_trials(ds, tag, &TrialConfig { k, ..*cfg }, forest))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64) -> bool {
        (a - b).abs() < 1e-9
    }

    #[test]
    fn prf_hand_values() {
        let p = compute_prf(3, 1, 2);
        assert!(close(p.precision, 0.75) && close(p.recall, 0.6) && close(p.f1, 2.0 / 3.0));
        let z = compute_prf(0, 0, 0);
        assert_eq!((z.precision, z.recall, z.f1), (0.0, 0.0, 0.0));
        let one = compute_prf(5, 0, 0);
        assert_eq!((one.precision, one.recall, one.f1), (1.0, 1.0, 1.0));
    }

    #[test]
    fn split_sizes() {
        let (train, test) = split_indices(10, 0.3, 1).unwrap();
        assert_eq!((train.len(), test.len()), (3, 7));
        let (train, _) = split_indices(10, 0.7, 1).unwrap();
        assert_eq!(train.len(), 7);
        assert_eq!(
            split_indices(10, 0.3, 1).unwrap(),
            split_indices(10, 0.3, 1).unwrap()
        );
    }

    #[test]
    fn split_rejects_bad_input() {
        assert!(split_indices(10, 0.0, 1).is_err());
        assert!(split_indices(10, 1.0, 1).is_err());
        assert!(split_indices(0, 0.5, 1).is_err());
    }

    #[test]
    fn trial_config_validated() {
        assert!(TrialConfig {
            n_trials: 0,
            ..TrialConfig::default()
        }
        .validate()
        .is_err());
        assert!(TrialConfig {
            train_fraction: 1.2,
            ..TrialConfig::default()
        }
        .validate()
        .is_err());
    }

    proptest::proptest! {
        #[test]
        fn split_is_a_partition(n in 1usize..300, fraction in 0.01f64..0.99, seed: u64) {
            let (train, test) = split_indices(n, fraction, seed).unwrap();
            let mut all: Vec<usize> = train.iter().chain(&test).copied().collect();
            all.sort_unstable();
            proptest::prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            proptest::prop_assert_eq!(train.len(), ((fraction * n as f64 - 1e-9).ceil() as usize).clamp(1, n));
        }

        #[test]
        fn f1_is_harmonic_mean(tp in 0usize..50, fp in 0usize..50, fn_ in 0usize..50) {
            let p = compute_prf(tp, fp, fn_);
            let expected = if p.precision + p.recall > 0.0 {
                2.0 * p.precision * p.recall / (p.precision + p.recall)
            } else { 0.0 };
            proptest::prop_assert!((p.f1 - expected).abs() < 1e-12);
            proptest::prop_assert!((0.0..=1.0).contains(&p.f1));
        }
    }
}
