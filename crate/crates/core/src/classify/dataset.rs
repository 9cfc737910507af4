use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub features: Vec<f64>,
    /// `true` for a correct annotation.
    pub label: bool,
    /// Index of the candidate this sample was derived from, if any.
    pub origin: Option<usize>,
}

/// Feature vectors of equal dimension with binary labels.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    dim: usize,
    samples: Vec<Sample>,
}

impl LabeledDataset {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            samples: Vec::new(),
        }
    }

    pub fn from_samples(dim: usize, samples: Vec<Sample>) -> Result<Self> {
        let mut ds = Self::new(dim);
        for s in samples {
            ds.push_sample(s)?;
        }
        Ok(ds)
    }

    pub fn push(&mut self, features: Vec<f64>, label: bool, origin: Option<usize>) -> Result<()> {
        self.push_sample(Sample {
            features,
            label,
            origin,
        })
    }

    fn push_sample(&mut self, sample: Sample) -> Result<()> {
        if sample.features.len() != self.dim {
            return Err(Error::Dimension {
                expected: self.dim,
                actual: sample.features.len(),
            });
        }
        self.samples.push(sample);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn samples(&self) -> &[Sample] {
        &self.samples
    }

    pub fn positives(&self) -> usize {
        self.samples.iter().filter(|s| s.label).count()
    }

    pub fn negatives(&self) -> usize {
        self.len() - self.positives()
    }

    pub(crate) fn require_both_classes(&self) -> Result<()> {
        let (positives, negatives) = (self.positives(), self.negatives());
        if positives == 0 || negatives == 0 {
            return Err(Error::SingleClass {
                positives,
                negatives,
            });
        }
        Ok(())
    }

    /// Samples at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            dim: self.dim,
            samples: indices.iter().map(|&i| self.samples[i].clone()).collect(),
        }
    }

    /// Keeps only the feature columns in `columns`.
    pub fn project(&self, columns: &[usize]) -> Self {
        Self {
            dim: columns.len(),
            samples: self
                .samples
                .iter()
                .map(|s| Sample {
                    features: columns.iter().map(|&c| s.features[c]).collect(),
                    label: s.label,
                    origin: s.origin,
                })
                .collect(),
        }
    }

    /// Multiplies every feature by `factor`.
    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        for s in &mut out.samples {
            s.features.iter_mut().for_each(|x| *x *= factor);
        }
        out
    }
}

/// Appends minority-class samples drawn with replacement until both classes
/// have the same count. Every original sample is kept, in order.
pub fn oversample_balance(ds: &LabeledDataset, seed: u64) -> Result<LabeledDataset> {
    ds.require_both_classes()?;
    let (positives, negatives) = (ds.positives(), ds.negatives());
    let minority_label = positives < negatives;
    let deficit = positives.abs_diff(negatives);
    let minority: Vec<usize> = (0..ds.len())
        .filter(|&i| ds.samples[i].label == minority_label)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = ds.clone();
    for _ in 0..deficit {
        let pick = minority[rng.gen_range(0..minority.len())];
        out.samples.push(ds.samples[pick].clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ds(pos: usize, neg: usize) -> LabeledDataset {
        let mut d = LabeledDataset::new(1);
        for i in 0..pos {
            d.push(vec![i as f64], true, Some(i)).unwrap();
        }
        for i in 0..neg {
            d.push(vec![-(i as f64) - 1.0], false, Some(pos + i))
                .unwrap();
        }
        d
    }

    #[test]
    fn balances_minority() {
        let out = oversample_balance(&ds(2, 6), 1).unwrap();
        assert_eq!((out.positives(), out.negatives()), (6, 6));
        assert_eq!(&out.samples()[..8], ds(2, 6).samples());
    }

    #[test]
    fn balanced_unchanged() {
        let d = ds(3, 3);
        assert_eq!(oversample_balance(&d, 9).unwrap(), d);
    }

    #[test]
    fn single_positive_duplicated() {
        let out = oversample_balance(&ds(1, 100), 0).unwrap();
        assert_eq!(out.positives(), 100);
        assert!(out
            .samples()
            .iter()
            .filter(|s| s.label)
            .all(|s| s.features == [0.0]));
    }

    #[test]
    fn majority_positive_oversamples_negatives() {
        let out = oversample_balance(&ds(5, 2), 0).unwrap();
        assert_eq!((out.positives(), out.negatives()), (5, 5));
    }

    #[test]
    fn single_class_rejected() {
        assert!(matches!(
            oversample_balance(&ds(0, 4), 0),
            Err(Error::SingleClass { .. })
        ));
    }

    #[test]
    fn dimension_checked() {
        let mut d = LabeledDataset::new(2);
        assert!(matches!(
            d.push(vec![1.0], true, None),
            Err(Error::Dimension {
                expected: 2,
                actual: 1
            })
        ));
    }
}
