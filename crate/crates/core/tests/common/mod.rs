//! Brute-force reference implementations shared by the integration tests.
#![allow(dead_code)]

use std::collections::{BTreeMap, HashSet};

use riex::classify::LabeledDataset;
use riex::embedding::{context_vector, EmbeddingConfig};

/// Dense representation vectors by direct summation over every position.
pub fn embedding_oracle(
    docs: &[Vec<String>],
    cfg: &EmbeddingConfig,
) -> BTreeMap<String, (u64, Vec<f64>)> {
    let mut out: BTreeMap<String, (u64, Vec<f64>)> = BTreeMap::new();
    for doc in docs {
        for (p, unit) in doc.iter().enumerate() {
            let entry = out
                .entry(unit.clone())
                .or_insert_with(|| (0, vec![0.0; cfg.dim]));
            entry.0 += 1;
            for (q, other) in doc.iter().enumerate() {
                let inside = (q < p && p - q <= cfg.before) || (q > p && q - p <= cfg.after);
                if inside {
                    for (acc, c) in entry
                        .1
                        .iter_mut()
                        .zip(context_vector(other, cfg).to_dense())
                    {
                        *acc += c;
                    }
                }
            }
        }
    }
    out
}

/// Leftmost-longest non-overlapping matching by trying every span.
/// Returns 1-indexed inclusive spans.
pub fn leftmost_longest_oracle(
    tokens: &[String],
    entries: &HashSet<Vec<String>>,
) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let mut start = 0;
    while start < tokens.len() {
        let best = (start + 1..=tokens.len())
            .filter(|&end| entries.contains(&tokens[start..end].to_vec()))
            .max();
        match best {
            Some(end) => {
                out.push((start + 1, end));
                start = end;
            }
            None => start += 1,
        }
    }
    out
}

/// Textbook one-way ANOVA F over two groups, per feature.
pub fn anova_oracle(ds: &LabeledDataset) -> Vec<f64> {
    (0..ds.dim())
        .map(|f| {
            let groups: Vec<Vec<f64>> = [false, true]
                .iter()
                .map(|&label| {
                    ds.samples()
                        .iter()
                        .filter(|s| s.label == label)
                        .map(|s| s.features[f])
                        .collect()
                })
                .collect();
            let n: usize = groups.iter().map(Vec::len).sum();
            let all: Vec<f64> = groups.iter().flatten().copied().collect();
            let grand = all.iter().sum::<f64>() / n as f64;
            let mut ssb = 0.0;
            let mut ssw = 0.0;
            for g in &groups {
                let m = g.iter().sum::<f64>() / g.len() as f64;
                ssb += g.len() as f64 * (m - grand) * (m - grand);
                ssw += g.iter().map(|x| (x - m) * (x - m)).sum::<f64>();
            }
            let msb = ssb / 1.0;
            let msw = if n > 2 { ssw / (n - 2) as f64 } else { 0.0 };
            if msw > 0.0 {
                msb / msw
            } else if msb > 0.0 {
                f64::INFINITY
            } else {
                0.0
            }
        })
        .collect()
}

fn gini2(neg: usize, pos: usize) -> f64 {
    let n = (neg + pos) as f64;
    1.0 - (neg as f64 / n).powi(2) - (pos as f64 / n).powi(2)
}

/// Lowest weighted child impurity over every feature and every threshold
/// separating two consecutive distinct values; `None` if nothing splits.
pub fn best_split_impurity(ds: &LabeledDataset) -> Option<f64> {
    let mut best: Option<f64> = None;
    for f in 0..ds.dim() {
        let mut values: Vec<f64> = ds.samples().iter().map(|s| s.features[f]).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for w in values.windows(2) {
            let cut = w[0];
            let impurity = split_impurity(ds, f, cut);
            best = Some(best.map_or(impurity, |b: f64| b.min(impurity)));
        }
    }
    best
}

/// Weighted child impurity of splitting on `x[feature] <= cut`.
pub fn split_impurity(ds: &LabeledDataset, feature: usize, cut: f64) -> f64 {
    let (mut ln, mut lp, mut rn, mut rp) = (0, 0, 0, 0);
    for s in ds.samples() {
        match (s.features[feature] <= cut, s.label) {
            (true, false) => ln += 1,
            (true, true) => lp += 1,
            (false, false) => rn += 1,
            (false, true) => rp += 1,
        }
    }
    let n = ds.len() as f64;
    let side = |neg, pos| {
        if neg + pos == 0 {
            0.0
        } else {
            (neg + pos) as f64 / n * gini2(neg, pos)
        }
    };
    side(ln, lp) + side(rn, rp)
}

pub fn relative_close(a: f64, b: f64, tol: f64) -> bool {
    if a.is_infinite() || b.is_infinite() {
        return a == b;
    }
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
