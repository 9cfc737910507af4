//! Random-indexing word representations.
//!
//! Every unit owns a fixed sparse ternary *context vector* and a learned dense
//! *representation vector*. Each occurrence of a unit adds the unweighted sum
//! of its window neighbours' context vectors to its representation. Context
//! vectors are derived from a seeded hash of the unit string, so they are never
//! persisted and unseen units in a stream get theirs on first sight.

mod context;
mod io;
mod store;

pub use context::{context_vector, context_window, ContextVector, EmbeddingConfig};
pub use store::{
    cosine_similarity, nearest_neighbors, train_embeddings, RepresentationVector, VectorStore,
};
