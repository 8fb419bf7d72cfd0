//! Sparse undirected graphs over the point set: epsilon-neighbor and kNN
//! builders, connectivity inspection, and the aggregation step that repairs
//! a disconnected graph with minimum-distance bridges.

use std::collections::VecDeque;
use std::fmt::Write as _;

use crate::metric::DistanceModel;

/// How the sparse graph is derived from the complete distance graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SparsityModel {
    /// Keep every pair at distance <= epsilon (epsilon from the K rule).
    Epsilon,
    /// Keep (i,j) when at least one endpoint ranks the other in its K nearest.
    KnnNonMutual,
    /// Keep (i,j) when both endpoints rank each other in their K nearest.
    KnnMutual,
    /// No sparsification: the complete graph.
    Full,
}

/// Undirected weighted graph in adjacency-list form. Lists are sorted by
/// neighbor index; every edge appears in both endpoint lists with the same
/// weight; no self-loops.
#[derive(Debug, Clone)]
pub struct SparseGraph {
    n: usize,
    adj: Vec<Vec<(u32, f64)>>,
    edge_count: usize,
}

impl SparseGraph {
    /// Builds from an edge list. Pairs are normalized to i < j and
    /// deduplicated (last weight wins; callers never pass conflicting
    /// duplicates). Self-loops are rejected by debug assertion.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (u32, u32, f64)>) -> Self {
        let mut canon: Vec<(u32, u32, f64)> = edges
            .into_iter()
            .map(|(a, b, w)| {
                debug_assert_ne!(a, b, "self-loop");
                if a < b { (a, b, w) } else { (b, a, w) }
            })
            .collect();
        canon.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        canon.dedup_by_key(|e| (e.0, e.1));

        let mut adj = vec![Vec::new(); n];
        for &(a, b, w) in &canon {
            adj[a as usize].push((b, w));
            adj[b as usize].push((a, w));
        }
        for list in &mut adj {
            list.sort_by_key(|&(j, _)| j);
        }
        SparseGraph {
            n,
            edge_count: canon.len(),
            adj,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn adj(&self, i: usize) -> &[(u32, f64)] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i].binary_search_by_key(&(j as u32), |&(v, _)| v).is_ok()
    }

    /// Each undirected edge once, as (i, j, w) with i < j, ascending.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, list)| {
            list.iter()
                .filter(move |&&(j, _)| (i as u32) < j)
                .map(move |&(j, w)| (i as u32, j, w))
        })
    }

    pub fn is_connected(&self) -> bool {
        connected_components(self).len() == 1
    }

    /// Debug dump: one `i j weight` line per edge, 1-based indices,
    /// sorted by (i, j).
    pub fn dump_edge_list(&self) -> String {
        let mut out = String::new();
        for (i, j, w) in self.edges() {
            writeln!(out, "{} {} {}", i + 1, j + 1, w).unwrap();
        }
        out
    }
}

/// Epsilon-neighbor graph. Epsilon is the mean over points of the distance
/// to the K-th nearest neighbor; edges are kept when delta <= epsilon.
/// Returns the graph together with the epsilon used.
pub fn build_epsilon(dm: &DistanceModel, k: usize) -> (SparseGraph, f64) {
    let n = dm.n();
    assert!(k >= 1 && k <= n - 1, "K={k} out of range 1..={}", n - 1);
    let eps: f64 = (0..n)
        .map(|i| dm.kth_neighbor_distance(i, k).unwrap())
        .sum::<f64>()
        / n as f64;
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let w = dm.dist(i, j);
            if w <= eps {
                edges.push((i as u32, j as u32, w));
            }
        }
    }
    (SparseGraph::from_edges(n, edges), eps)
}

/// kNN graph. A directed arc i -> j exists when j is among the first K
/// entries of i's neighbor table; undirected edges are the AND of the two
/// directions when `mutual`, the OR otherwise.
pub fn build_knn(dm: &DistanceModel, k: usize, mutual: bool) -> SparseGraph {
    let n = dm.n();
    assert!(k >= 1 && k <= n - 1, "K={k} out of range 1..={}", n - 1);
    let mut forward = vec![false; n * n];
    for i in 0..n {
        for &j in &dm.neighbors(i)[..k] {
            forward[i * n + j as usize] = true;
        }
    }
    let mut edges = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            let ij = forward[i * n + j];
            let ji = forward[j * n + i];
            let keep = if mutual { ij && ji } else { ij || ji };
            if keep {
                edges.push((i as u32, j as u32, dm.dist(i, j)));
            }
        }
    }
    SparseGraph::from_edges(n, edges)
}

/// Maximal connected components, each sorted ascending, ordered by their
/// smallest node.
pub fn connected_components(g: &SparseGraph) -> Vec<Vec<u32>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut comps = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        let mut comp = Vec::new();
        let mut queue = VecDeque::from([start as u32]);
        seen[start] = true;
        while let Some(u) = queue.pop_front() {
            comp.push(u);
            for &(v, _) in g.adj(u as usize) {
                if !seen[v as usize] {
                    seen[v as usize] = true;
                    queue.push_back(v);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let root = self.find(self.0[x]);
            self.0[x] = root;
        }
        self.0[x]
    }
    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.0[ra] = rb;
        true
    }
}

/// Connectivity repair: adds the minimum-total-weight set of inter-component
/// edges (an MST of the component-contracted complete distance graph) and
/// returns the repaired graph plus the added edges. A connected input is
/// returned unchanged with no additions.
pub fn aggregate_components(
    g: &SparseGraph,
    dm: &DistanceModel,
) -> (SparseGraph, Vec<(u32, u32, f64)>) {
    let comps = connected_components(g);
    let c = comps.len();
    if c <= 1 {
        return (g.clone(), Vec::new());
    }
    let n = g.n();
    let mut comp_of = vec![0usize; n];
    for (ci, comp) in comps.iter().enumerate() {
        for &u in comp {
            comp_of[u as usize] = ci;
        }
    }

    // Cheapest concrete edge between every component pair; ties broken by
    // (weight, i, j) so the repair is deterministic.
    let mut best: Vec<Option<(f64, u32, u32)>> = vec![None; c * c];
    for i in 0..n {
        for j in (i + 1)..n {
            let (ci, cj) = (comp_of[i], comp_of[j]);
            if ci == cj {
                continue;
            }
            let key = if ci < cj { ci * c + cj } else { cj * c + ci };
            let cand = (dm.dist(i, j), i as u32, j as u32);
            let better = match best[key] {
                None => true,
                Some(cur) => {
                    cand.0.total_cmp(&cur.0).then((cand.1, cand.2).cmp(&(cur.1, cur.2)))
                        == std::cmp::Ordering::Less
                }
            };
            if better {
                best[key] = Some(cand);
            }
        }
    }

    let mut candidates: Vec<(f64, u32, u32)> = best.into_iter().flatten().collect();
    candidates.sort_by(|a, b| a.0.total_cmp(&b.0).then((a.1, a.2).cmp(&(b.1, b.2))));

    let mut uf = UnionFind::new(c);
    let mut added = Vec::with_capacity(c - 1);
    for (w, i, j) in candidates {
        if uf.union(comp_of[i as usize], comp_of[j as usize]) {
            added.push((i, j, w));
        }
    }
    debug_assert_eq!(added.len(), c - 1);

    let all_edges: Vec<(u32, u32, f64)> = g.edges().chain(added.iter().copied()).collect();
    (SparseGraph::from_edges(n, all_edges), added)
}
