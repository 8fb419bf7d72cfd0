//! Minimum spanning trees: Prim over adjacency lists for sparse graphs and
//! an O(n^2) variant for the complete distance graph.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::graph::SparseGraph;
use crate::metric::DistanceModel;

#[derive(Debug, Error)]
pub enum MstError {
    #[error("graph is disconnected: spanning tree covers {reached} of {n} nodes")]
    Disconnected { reached: usize, n: usize },
}

/// Rooted minimum spanning tree. Node 0 is the root; `parent[0]` is None and
/// `edge_weights[0]` is 0. For every other node i, `edge_weights[i]` is the
/// weight of the tree edge (i, parent[i]).
#[derive(Debug, Clone)]
pub struct SpanningTree {
    pub parent: Vec<Option<u32>>,
    pub edge_weights: Vec<f64>,
    pub max_edge: f64,
    pub total_weight: f64,
}

impl SpanningTree {
    pub fn n(&self) -> usize {
        self.parent.len()
    }

    /// Tree edges as (child, parent, weight), child ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.parent
            .iter()
            .enumerate()
            .filter_map(move |(i, p)| p.map(|p| (i as u32, p, self.edge_weights[i])))
    }
}

#[derive(PartialEq)]
struct HeapEntry {
    w: f64,
    node: u32,
    parent: u32,
}

impl Eq for HeapEntry {}

impl Ord for HeapEntry {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.w
            .total_cmp(&other.w)
            .then(self.node.cmp(&other.node))
            .then(self.parent.cmp(&other.parent))
    }
}

impl PartialOrd for HeapEntry {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Prim's algorithm from root 0 with a binary heap; lazy deletion, so each
/// edge is pushed at most twice. Ties are resolved by (weight, node, parent),
/// which fixes the tree when equal-weight choices exist.
pub fn prim(g: &SparseGraph) -> Result<SpanningTree, MstError> {
    let n = g.n();
    let mut parent = vec![None; n];
    let mut edge_weights = vec![0.0; n];
    let mut in_tree = vec![false; n];
    let mut heap = BinaryHeap::new();

    in_tree[0] = true;
    let mut reached = 1;
    for &(j, w) in g.adj(0) {
        heap.push(Reverse(HeapEntry { w, node: j, parent: 0 }));
    }

    while let Some(Reverse(HeapEntry { w, node, parent: p })) = heap.pop() {
        let u = node as usize;
        if in_tree[u] {
            continue;
        }
        in_tree[u] = true;
        reached += 1;
        parent[u] = Some(p);
        edge_weights[u] = w;
        for &(v, wv) in g.adj(u) {
            if !in_tree[v as usize] {
                heap.push(Reverse(HeapEntry { w: wv, node: v, parent: node }));
            }
        }
    }

    if reached < n {
        return Err(MstError::Disconnected { reached, n });
    }
    finish(parent, edge_weights)
}

/// Prim specialized to the complete distance graph: O(n^2) time, no heap.
/// Always succeeds since the complete graph is connected.
pub fn prim_dense(dm: &DistanceModel) -> SpanningTree {
    let n = dm.n();
    let mut parent = vec![None; n];
    let mut key = vec![f64::INFINITY; n];
    let mut best_parent = vec![0u32; n];
    let mut in_tree = vec![false; n];
    let mut edge_weights = vec![0.0; n];

    in_tree[0] = true;
    for j in 1..n {
        key[j] = dm.dist(0, j);
    }

    for _ in 1..n {
        let mut pick = usize::MAX;
        for j in 0..n {
            if !in_tree[j] && (pick == usize::MAX || key[j].total_cmp(&key[pick]).is_lt()) {
                pick = j;
            }
        }
        in_tree[pick] = true;
        parent[pick] = Some(best_parent[pick]);
        edge_weights[pick] = key[pick];
        for j in 0..n {
            if !in_tree[j] {
                let w = dm.dist(pick, j);
                if w < key[j] {
                    key[j] = w;
                    best_parent[j] = pick as u32;
                }
            }
        }
    }

    finish(parent, edge_weights).expect("complete graph is connected")
}

fn finish(
    parent: Vec<Option<u32>>,
    edge_weights: Vec<f64>,
) -> Result<SpanningTree, MstError> {
    let max_edge = edge_weights.iter().copied().fold(0.0, f64::max);
    let total_weight = edge_weights.iter().sum();
    Ok(SpanningTree {
        parent,
        edge_weights,
        max_edge,
        total_weight,
    })
}
