//! Feature-agnostic information extraction for noisy, streaming web text.
//!
//! The pipeline has four stages:
//!
//! 1. [`corpus`] tokenizes raw documents, gathers document frequencies over an
//!    initial corpus and collapses rare or structural tokens into compound-unit
//!    symbols.
//! 2. [`embedding`] learns a dense representation vector per unit with random
//!    indexing, in a single additive pass that can keep consuming new documents.
//! 3. [`recognize`] proposes high-recall candidate annotations with trie-backed
//!    gazetteers and pattern recognizers.
//! 4. [`classify`] turns each candidate's surrounding context into a feature
//!    vector and prunes candidates with a random forest trained on a handful of
//!    labeled seeds.
//!
//! [`eval`] hosts the experiment harness and [`synth`] generates corpora with
//! planted ground truth.

pub mod classify;
pub mod corpus;
pub mod embedding;
mod error;
pub mod eval;
pub mod jsonl;
pub mod pipeline;
pub mod recognize;
mod seed;
pub mod synth;

pub use error::{Error, Result};
