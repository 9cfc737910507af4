use super::LabeledDataset;
use crate::Result;

/// One-way ANOVA F-statistic of every feature against the binary label.
///
/// Zero within-class variance yields `+inf` when the class means differ and
/// 0 when they do not.
pub fn anova_f_scores(ds: &LabeledDataset) -> Result<Vec<f64>> {
    ds.require_both_classes()?;
    let n = ds.len() as f64;
    let groups = 2.0;
    let counts = [ds.negatives() as f64, ds.positives() as f64];
    let mut scores = Vec::with_capacity(ds.dim());
    for f in 0..ds.dim() {
        let mut sums = [0.0; 2];
        for s in ds.samples() {
            sums[usize::from(s.label)] += s.features[f];
        }
        let means = [sums[0] / counts[0], sums[1] / counts[1]];
        let grand = (sums[0] + sums[1]) / n;
        let between: f64 = (0..2).map(|g| counts[g] * (means[g] - grand).powi(2)).sum();
        let within: f64 = ds
            .samples()
            .iter()
            .map(|s| (s.features[f] - means[usize::from(s.label)]).powi(2))
            .sum();
        let msb = between / (groups - 1.0);
        let msw = if n > groups {
            within / (n - groups)
        } else {
            0.0
        };
        scores.push(if msw > 0.0 {
            msb / msw
        } else if msb > 0.0 {
            f64::INFINITY
        } else {
            0.0
        });
    }
    Ok(scores)
}

/// Indices of the `k` highest scores in ascending index order. Ties go to the
/// lower index.
pub fn select_k_best(scores: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    order.truncate(k);
    order.sort_unstable();
    order
}
