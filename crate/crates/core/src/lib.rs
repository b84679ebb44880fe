//! Hyperlink prediction on hypergraphs with local random walks.
//!
//! The pipeline: load a [`Hypergraph`], project it to the transition matrix
//! of the vertex → hyperedge → vertex walk, superpose `K` walk steps into
//! per-vertex distributions, and score candidate hyperedges by transition
//! mass (LRW) or by (generalized) Jensen-Shannon divergence between the
//! distributions of their vertices (LRW-JS, LRW-GJS). HCN, HKatz and HPRA
//! baselines and the full negative-sampling evaluation protocol live
//! alongside.

pub mod divergence;
pub mod error;
pub mod experiment;
pub mod hypergraph;
pub mod localwalk;
pub mod metrics;
pub mod projection;
pub mod scoring;
pub mod sparse;
pub mod synth;

pub use error::{Error, Result};
pub use hypergraph::{Hypergraph, LabelMode, LoadOptions, Stats, VertexId};
pub use localwalk::WalkDistribution;
pub use scoring::{Method, MethodSpec, ScoredEdge};
pub use sparse::SparseMatrix;
