use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::corpus::TokenSequence;
use crate::seed::splitmix64;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EmbeddingConfig {
    /// Vector dimension.
    pub dim: usize,
    /// Fraction of dimensions set to +1 (and, separately, to -1).
    pub sparsity: f64,
    /// Window size before the focus position.
    pub before: usize,
    /// Window size after the focus position.
    pub after: usize,
    pub master_seed: u64,
}

impl Default for EmbeddingConfig {
    fn default() -> Self {
        Self {
            dim: 200,
            sparsity: 0.01,
            before: 2,
            after: 2,
            master_seed: 0,
        }
    }
}

impl EmbeddingConfig {
    /// Number of +1 entries (equal to the number of -1 entries).
    pub fn nonzeros_per_sign(&self) -> usize {
        // Guards against products like 0.29 * 100 = 28.999999999999996.
        (self.dim as f64 * self.sparsity + 1e-9).floor() as usize
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::Config("dimension must be positive".into()));
        }
        if !(0.0..=1.0).contains(&self.sparsity) {
            return Err(Error::Config(format!(
                "sparsity must lie in [0, 1], got {}",
                self.sparsity
            )));
        }
        let k = self.nonzeros_per_sign();
        if k == 0 {
            return Err(Error::Config(format!(
                "dim * sparsity must be at least 1 (dim {}, sparsity {})",
                self.dim, self.sparsity
            )));
        }
        if 2 * k > self.dim {
            return Err(Error::Config(format!(
                "2 * floor(dim * sparsity) = {} exceeds dim {}",
                2 * k,
                self.dim
            )));
        }
        u32::try_from(self.dim).map_err(|_| Error::Config("dimension too large".into()))?;
        Ok(())
    }
}

/// Sparse ternary vector: `plus` and `minus` hold sorted, disjoint indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ContextVector {
    pub dim: usize,
    pub plus: Vec<u32>,
    pub minus: Vec<u32>,
}

impl ContextVector {
    pub fn to_dense(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.add_to(&mut out);
        out
    }

    pub fn add_to(&self, target: &mut [f64]) {
        for &i in &self.plus {
            target[i as usize] += 1.0;
        }
        for &i in &self.minus {
            target[i as usize] -= 1.0;
        }
    }
}

// FNV-1a: stable across platforms and toolchains, unlike std's hashers.
fn fnv1a(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Deterministic context vector for `unit` under `cfg`'s seed, dimension and
/// sparsity. `cfg` is assumed valid.
pub fn context_vector(unit: &str, cfg: &EmbeddingConfig) -> ContextVector {
    let k = cfg.nonzeros_per_sign();
    let seed = splitmix64(fnv1a(unit.as_bytes()) ^ splitmix64(cfg.master_seed));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picked = index::sample(&mut rng, cfg.dim, 2 * k).into_vec();
    let mut plus: Vec<u32> = picked[..k].iter().map(|&i| i as u32).collect();
    let mut minus: Vec<u32> = picked[k..].iter().map(|&i| i as u32).collect();
    plus.sort_unstable();
    minus.sort_unstable();
    ContextVector {
        dim: cfg.dim,
        plus,
        minus,
    }
}

/// Units inside the window around 1-indexed `position`, excluding the
/// position itself. Repeated units are kept.
pub fn context_window<'a>(
    seq: &'a TokenSequence,
    position: usize,
    cfg: &EmbeddingConfig,
) -> Result<Vec<&'a str>> {
    let len = seq.len();
    if position == 0 || position > len {
        return Err(Error::Position { position, len });
    }
    let (lo, hi) = window_bounds(position - 1, len, cfg.before, cfg.after);
    Ok((lo..hi)
        .filter(|&p| p != position - 1)
        .map(|p| seq.tokens[p].canon.as_str())
        .collect())
}

/// Half-open 0-indexed range `[lo, hi)` covering the window around `idx`.
pub(crate) fn window_bounds(idx: usize, len: usize, before: usize, after: usize) -> (usize, usize) {
    (idx.saturating_sub(before), (idx + after + 1).min(len))
}
