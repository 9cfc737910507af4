use std::borrow::Borrow;
use std::collections::HashMap;

use super::context::{context_vector, window_bounds, ContextVector, EmbeddingConfig};
use crate::corpus::TokenSequence;
use crate::{Error, Result};

/// Learned vector of one unit together with how often it was seen.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RepresentationVector<'a> {
    pub values: &'a [f64],
    pub occurrences: u64,
}

/// Map from unit to representation vector.
///
/// Vectors live in one flat buffer indexed by interned unit id. Context
/// vectors are cached per id at runtime but never persisted.
#[derive(Debug, Clone)]
pub struct VectorStore {
    cfg: EmbeddingConfig,
    units: Vec<String>,
    index: HashMap<String, u32>,
    values: Vec<f64>,
    occurrences: Vec<u64>,
    contexts: Vec<ContextVector>,
    frozen: bool,
}

impl PartialEq for VectorStore {
    fn eq(&self, other: &Self) -> bool {
        self.cfg == other.cfg
            && self.frozen == other.frozen
            && self.units.len() == other.units.len()
            && self.units.iter().all(|u| {
                let a = self.get(u).unwrap();
                other.get(u).is_some_and(|b| {
                    a.occurrences == b.occurrences
                        && a.values
                            .iter()
                            .zip(b.values)
                            .all(|(x, y)| x.to_bits() == y.to_bits())
                })
            })
    }
}

impl VectorStore {
    pub fn new(cfg: EmbeddingConfig) -> Result<Self> {
        cfg.validate()?;
        Ok(Self {
            cfg,
            units: Vec::new(),
            index: HashMap::new(),
            values: Vec::new(),
            occurrences: Vec::new(),
            contexts: Vec::new(),
            frozen: false,
        })
    }

    pub fn config(&self) -> &EmbeddingConfig {
        &self.cfg
    }

    pub fn dim(&self) -> usize {
        self.cfg.dim
    }

    pub fn len(&self) -> usize {
        self.units.len()
    }

    pub fn is_empty(&self) -> bool {
        self.units.is_empty()
    }

    pub fn freeze(&mut self) {
        self.frozen = true;
    }

    pub fn is_frozen(&self) -> bool {
        self.frozen
    }

    /// Units in insertion order.
    pub fn units(&self) -> impl Iterator<Item = &str> {
        self.units.iter().map(String::as_str)
    }

    pub fn contains(&self, unit: &str) -> bool {
        self.index.contains_key(unit)
    }

    pub fn get(&self, unit: &str) -> Option<RepresentationVector<'_>> {
        self.index.get(unit).map(|&id| self.by_id(id as usize))
    }

    fn by_id(&self, id: usize) -> RepresentationVector<'_> {
        let d = self.cfg.dim;
        RepresentationVector {
            values: &self.values[id * d..(id + 1) * d],
            occurrences: self.occurrences[id],
        }
    }

    fn intern(&mut self, unit: &str) -> usize {
        if let Some(&id) = self.index.get(unit) {
            return id as usize;
        }
        let id = self.units.len();
        self.units.push(unit.to_owned());
        self.index.insert(unit.to_owned(), id as u32);
        self.values.resize(self.values.len() + self.cfg.dim, 0.0);
        self.occurrences.push(0);
        self.contexts.push(context_vector(unit, &self.cfg));
        id
    }

    /// Adds a unit with a precomputed vector, as when loading a persisted store.
    pub fn insert(&mut self, unit: &str, occurrences: u64, values: &[f64]) -> Result<()> {
        if self.frozen {
            return Err(Error::StoreFrozen);
        }
        if values.len() != self.cfg.dim {
            return Err(Error::Dimension {
                expected: self.cfg.dim,
                actual: values.len(),
            });
        }
        if self.index.contains_key(unit) {
            return Err(Error::StoreFormat(format!("duplicate unit {unit:?}")));
        }
        let id = self.intern(unit);
        let d = self.cfg.dim;
        self.values[id * d..(id + 1) * d].copy_from_slice(values);
        self.occurrences[id] = occurrences;
        Ok(())
    }

    /// Processes one document: every occurrence adds the context vectors of
    /// its window neighbours to its own representation. Windows stop at the
    /// document boundary.
    pub fn train_document<S: AsRef<str>>(&mut self, units: &[S]) -> Result<()> {
        if self.frozen {
            return Err(Error::StoreFrozen);
        }
        let ids: Vec<usize> = units.iter().map(|u| self.intern(u.as_ref())).collect();
        let d = self.cfg.dim;
        let (before, after) = (self.cfg.before, self.cfg.after);
        for (pos, &id) in ids.iter().enumerate() {
            let (lo, hi) = window_bounds(pos, ids.len(), before, after);
            let target = &mut self.values[id * d..(id + 1) * d];
            for (p, &neighbour) in ids.iter().enumerate().take(hi).skip(lo) {
                if p != pos {
                    self.contexts[neighbour].add_to(target);
                }
            }
            self.occurrences[id] += 1;
        }
        Ok(())
    }

    pub fn train_sequence(&mut self, seq: &TokenSequence) -> Result<()> {
        self.train_document(&seq.canons())
    }
}

/// Trains a fresh store over compound-normalized sequences.
pub fn train_embeddings<I>(docs: I, cfg: EmbeddingConfig) -> Result<VectorStore>
where
    I: IntoIterator,
    I::Item: Borrow<TokenSequence>,
{
    let mut store = VectorStore::new(cfg)?;
    for doc in docs {
        store.train_sequence(doc.borrow())?;
    }
    Ok(store)
}

fn dot(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(a, b)| a * b).sum()
}

/// Cosine of the angle between `x` and `y`; 0 if either is the zero vector.
pub fn cosine_similarity(x: &[f64], y: &[f64]) -> f64 {
    let nx = dot(x, x);
    let ny = dot(y, y);
    if nx == 0.0 || ny == 0.0 {
        return 0.0;
    }
    (dot(x, y) / (nx * ny).sqrt()).clamp(-1.0, 1.0)
}

/// The `k` units most similar to `unit`, by descending cosine similarity
/// with ties broken lexicographically.
pub fn nearest_neighbors(store: &VectorStore, unit: &str, k: usize) -> Result<Vec<(String, f64)>> {
    let query = store
        .get(unit)
        .ok_or_else(|| Error::UnknownUnit(unit.to_owned()))?
        .values;
    let mut scored: Vec<(&str, f64)> = store
        .units()
        .filter(|&other| other != unit)
        .map(|other| {
            (
                other,
                cosine_similarity(query, store.get(other).unwrap().values),
            )
        })
        .collect();
    scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    scored.truncate(k);
    Ok(scored.into_iter().map(|(u, s)| (u.to_owned(), s)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{tokenize, Document};

    fn seqs(raws: &[&str]) -> Vec<TokenSequence> {
        raws.iter()
            .enumerate()
            .map(|(i, r)| tokenize(&Document::text(i.to_string(), *r)))
            .collect()
    }

    fn narrow() -> EmbeddingConfig {
        EmbeddingConfig {
            before: 1,
            after: 1,
            ..EmbeddingConfig::default()
        }
    }

    fn scaled(cv: &ContextVector, by: f64) -> Vec<f64> {
        cv.to_dense().into_iter().map(|x| x * by).collect()
    }

    #[test]
    fn hand_executed_update() {
        let cfg = narrow();
        let store = train_embeddings(seqs(&["a b a"]), cfg).unwrap();
        assert_eq!(
            store.get("a").unwrap().values,
            scaled(&context_vector("b", &cfg), 2.0)
        );
        assert_eq!(
            store.get("b").unwrap().values,
            scaled(&context_vector("a", &cfg), 2.0)
        );
        assert_eq!(store.get("a").unwrap().occurrences, 2);
        assert_eq!(store.get("b").unwrap().occurrences, 1);
    }

    #[test]
    fn empty_corpus() {
        let store =
            train_embeddings(Vec::<TokenSequence>::new(), EmbeddingConfig::default()).unwrap();
        assert!(store.is_empty());
    }

    #[test]
    fn single_token_document_gets_zero_update() {
        let store = train_embeddings(seqs(&["alone"]), EmbeddingConfig::default()).unwrap();
        let r = store.get("alone").unwrap();
        assert_eq!(r.occurrences, 1);
        assert!(r.values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn windows_do_not_cross_documents() {
        let cfg = narrow();
        let store = train_embeddings(seqs(&["a", "b"]), cfg).unwrap();
        assert!(store.get("a").unwrap().values.iter().all(|&x| x == 0.0));
    }

    #[test]
    fn frozen_store_rejects_training() {
        let mut store = VectorStore::new(EmbeddingConfig::default()).unwrap();
        store.freeze();
        assert!(matches!(
            store.train_document(&["a", "b"]),
            Err(Error::StoreFrozen)
        ));
    }

    #[test]
    fn cosine_cases() {
        assert_eq!(cosine_similarity(&[1.0, 2.0], &[1.0, 2.0]), 1.0);
        assert_eq!(cosine_similarity(&[1.0, 0.0], &[0.0, 3.0]), 0.0);
        assert!(
            (cosine_similarity(&[1.0, 0.0], &[1.0, 1.0]) - std::f64::consts::FRAC_1_SQRT_2).abs()
                < 1e-9
        );
        assert_eq!(cosine_similarity(&[0.0, 0.0], &[1.0, 1.0]), 0.0);
    }

    #[test]
    fn neighbours_of_parallel_vectors() {
        let mut store = train_embeddings(seqs(&["a b a", "c b"]), narrow()).unwrap();
        store.freeze();
        let nn = nearest_neighbors(&store, "a", 1).unwrap();
        assert_eq!(nn, vec![("c".to_string(), 1.0)]);
        let all = nearest_neighbors(&store, "a", 10).unwrap();
        assert_eq!(all.len(), 2);
        assert!(matches!(
            nearest_neighbors(&store, "zzz", 1),
            Err(Error::UnknownUnit(_))
        ));
    }

    #[test]
    fn neighbour_ties_break_lexicographically() {
        let mut store = VectorStore::new(narrow()).unwrap();
        let v = vec![1.0; 200];
        for u in ["q", "d", "b", "c"] {
            store.insert(u, 1, &v).unwrap();
        }
        let nn = nearest_neighbors(&store, "q", 3).unwrap();
        let names: Vec<&str> = nn.iter().map(|(u, _)| u.as_str()).collect();
        assert_eq!(names, ["b", "c", "d"]);
    }
}
