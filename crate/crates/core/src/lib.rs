//! Similarity-matrix construction for normalized spectral clustering.
//!
//! The crate builds weighted similarity graphs from labeled point sets using
//! a catalog of 27 methods (combinations of a sparsity model, a similarity
//! function and a neighbor-count rule), runs them through a normalized
//! spectral clustering pipeline, and scores the results against target
//! labels with external indices (NMI, purity, Rand, clustering error).
//!
//! Pipeline outline:
//!
//! 1. [`dataset`] loads or generates labeled points.
//! 2. [`metric`] computes pairwise Euclidean distances and neighbor tables.
//! 3. [`graph`] sparsifies the complete distance graph (epsilon-neighbor,
//!    mutual or non-mutual kNN) and repairs connectivity.
//! 4. [`mst`] + [`scaling`] extract Gaussian scale parameters from the graph
//!    or its minimum spanning tree.
//! 5. [`similarity`] assembles the sparse similarity matrix W.
//! 6. [`spectral`] embeds the points via the top-k eigenvectors of the
//!    normalized Laplacian and discretizes the embedding into clusters.
//! 7. [`evaluation`] scores clusterings; [`harness`] runs method x dataset
//!    grids and emits report tables.

pub mod dataset;
pub mod evaluation;
pub mod graph;
pub mod harness;
pub mod metric;
pub mod mst;
pub mod scaling;
pub mod similarity;
pub mod spectral;

pub use dataset::Dataset;
pub use graph::{SparseGraph, SparsityModel};
pub use metric::DistanceModel;
pub use similarity::{MethodSpec, SimilarityMatrix};
pub use spectral::ClusteringResult;
