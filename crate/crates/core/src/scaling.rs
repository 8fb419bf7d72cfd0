//! Gaussian scale parameters: tree-based global scale t, per-node local
//! scales s_i with their mean s, and the two full-graph scale recipes.

use thiserror::Error;

use crate::graph::SparseGraph;
use crate::metric::{k_rules, DistanceModel};
use crate::mst::{prim, prim_dense, MstError};

#[derive(Debug, Error)]
pub enum ScalingError {
    #[error(transparent)]
    Mst(#[from] MstError),
    #[error("node {0} has no incident edges; local scale undefined")]
    IsolatedNode(usize),
}

/// Global scale t: the largest edge weight in the minimum spanning tree of
/// the sparse graph. Requires a connected graph (run aggregation first).
pub fn scale_t(delta: &SparseGraph) -> Result<f64, ScalingError> {
    Ok(prim(delta)?.max_edge)
}

/// Local scales s_i: the largest weight among edges incident to each node.
pub fn scale_s_local(delta: &SparseGraph) -> Result<Vec<f64>, ScalingError> {
    (0..delta.n())
        .map(|i| {
            delta
                .adj(i)
                .iter()
                .map(|&(_, w)| w)
                .fold(None, |acc: Option<f64>, w| Some(acc.map_or(w, |a| a.max(w))))
                .ok_or(ScalingError::IsolatedNode(i))
        })
        .collect()
}

/// Arithmetic mean of the local scales.
pub fn scale_s_mean(s_local: &[f64]) -> f64 {
    assert!(!s_local.is_empty());
    s_local.iter().sum::<f64>() / s_local.len() as f64
}

/// Full-graph global scale: the largest MST edge of the complete distance
/// graph, capped at the mean pairwise distance. The cap keeps one huge
/// inter-cluster gap from flattening the kernel everywhere else.
pub fn scale_full_f1(dm: &DistanceModel) -> f64 {
    prim_dense(dm).max_edge.min(dm.mean_distance())
}

/// Full-graph local scales: distance to the K_l-th nearest neighbor.
pub fn scale_full_local_f2(dm: &DistanceModel) -> Vec<f64> {
    let (k_log, _) = k_rules(dm.n());
    (0..dm.n())
        .map(|i| dm.kth_neighbor_distance(i, k_log).unwrap())
        .collect()
}
