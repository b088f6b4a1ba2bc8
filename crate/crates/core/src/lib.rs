//! Supervised keyword extraction over context-aware text graphs.
//!
//! A document is reduced to stemmed noun/adjective candidates, linked into a
//! weighted co-occurrence graph over consecutive sentence pairs, and each node
//! is described by six graph features (degree, eigenvector prestige, PageRank,
//! PositionRank, coreness, clustering coefficient). A Naive Bayes or logistic
//! regression model trained on gold keywords turns those features into keyword
//! probabilities; the top-ranked stems are offered as title words.

pub mod corpus;
pub mod error;
pub mod eval;
pub mod features;
pub mod graph;
pub mod io;
pub mod learn;
pub mod pipeline;
pub mod textproc;

pub use error::{Error, ErrorKind, Result};
