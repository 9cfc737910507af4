use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::embedding::{EmbeddingConfig, VectorStore};
use crate::synth::token_stream;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BenchPoint {
    pub tokens: usize,
    pub seconds: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub points: Vec<BenchPoint>,
    /// Absent with fewer than two distinct sizes.
    pub fit: Option<LinearFit>,
}

/// Ordinary least squares of `y` on `x`.
pub fn linear_fit(points: &[(f64, f64)]) -> Option<LinearFit> {
    let n = points.len() as f64;
    if points.len() < 2 {
        return None;
    }
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return None;
    }
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - (intercept + slope * p.0)).powi(2))
        .sum();
    let ss_tot: f64 = points.iter().map(|p| (p.1 - my).powi(2)).sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Some(LinearFit {
        slope,
        intercept,
        r_squared,
    })
}

/// Wall-clock embedding training time per corpus size, best of `repeats`.
/// Corpora are uniform streams over a 10,000-word vocabulary in documents
/// of 200 tokens, generated before timing starts.
pub fn runtime_benchmark(
    sizes: &[usize],
    cfg: EmbeddingConfig,
    repeats: usize,
    seed: u64,
) -> Result<BenchReport> {
    cfg.validate()?;
    let mut points = Vec::with_capacity(sizes.len());
    for &size in sizes {
        let (vocab, docs) = token_stream(size, 10_000, 200, seed);
        let mut best = f64::INFINITY;
        for _ in 0..repeats.max(1) {
            let start = Instant::now();
            let mut store = VectorStore::new(cfg)?;
            let mut units: Vec<&str> = Vec::with_capacity(200);
            for doc in &docs {
                units.clear();
                units.extend(doc.iter().map(|&id| vocab[id as usize].as_str()));
                store.train_document(&units)?;
            }
            best = best.min(start.elapsed().as_secs_f64());
            std::hint::black_box(&store);
        }
        points.push(BenchPoint {
            tokens: size,
            seconds: best,
        });
    }
    let xy: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (p.tokens as f64, p.seconds))
        .collect();
    Ok(BenchReport {
        fit: linear_fit(&xy),
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_line() {
        let fit = linear_fit(&[(1.0, 3.0), (2.0, 5.0), (4.0, 9.0)]).unwrap();
        assert!((fit.slope - 2.0).abs() < 1e-12);
        assert!((fit.intercept - 1.0).abs() < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_fits() {
        assert!(linear_fit(&[(1.0, 2.0)]).is_none());
        assert!(linear_fit(&[(1.0, 2.0), (1.0, 3.0)]).is_none());
    }

    #[test]
    fn single_size_reports_time_only() {
        let report = runtime_benchmark(&[2_000], EmbeddingConfig::default(), 1, 0).unwrap();
        assert_eq!(report.points.len(), 1);
        assert!(report.points[0].seconds > 0.0);
        assert!(report.fit.is_none());
    }
}
