//! Pairwise Euclidean distances and per-point sorted neighbor tables.

use rayon::prelude::*;
use thiserror::Error;

use crate::dataset::Dataset;

#[derive(Debug, Error)]
pub enum MetricError {
    #[error("neighbor rank K={k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },
}

/// Full pairwise distance matrix plus, for every point, the indices of all
/// other points sorted by increasing distance (ties broken by ascending
/// index). This is the complete weighted graph the sparsifiers start from.
#[derive(Debug, Clone)]
pub struct DistanceModel {
    n: usize,
    /// Row-major symmetric n x n matrix with zero diagonal.
    dist: Vec<f64>,
    /// Row i: permutation of {0..n}\{i}, nondecreasing in dist(i, .).
    nn_table: Vec<Vec<u32>>,
}

impl DistanceModel {
    /// Computes exact Euclidean distances and the neighbor tables.
    /// Rows are filled in parallel; the result does not depend on the
    /// scheduling because rows are independent.
    pub fn build(d: &Dataset) -> Self {
        let n = d.n();
        let mut dist = vec![0.0f64; n * n];
        dist.par_chunks_mut(n).enumerate().for_each(|(i, row)| {
            let pi = d.point(i);
            for (j, slot) in row.iter_mut().enumerate() {
                if i == j {
                    continue;
                }
                let pj = d.point(j);
                let sq: f64 = pi.iter().zip(pj).map(|(a, b)| (a - b) * (a - b)).sum();
                *slot = sq.sqrt();
            }
        });

        let nn_table: Vec<Vec<u32>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let row = &dist[i * n..(i + 1) * n];
                let mut idx: Vec<u32> = (0..n as u32).filter(|&j| j as usize != i).collect();
                idx.sort_by(|&a, &b| {
                    row[a as usize]
                        .total_cmp(&row[b as usize])
                        .then(a.cmp(&b))
                });
                idx
            })
            .collect();

        DistanceModel { n, dist, nn_table }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.dist[i * self.n + j]
    }

    /// All other points sorted by increasing distance to `i`.
    pub fn neighbors(&self, i: usize) -> &[u32] {
        &self.nn_table[i]
    }

    /// Distance from point `i` to its K-th nearest neighbor (K is 1-based).
    pub fn kth_neighbor_distance(&self, i: usize, k: usize) -> Result<f64, MetricError> {
        if k < 1 || k > self.n - 1 {
            return Err(MetricError::KOutOfRange {
                k,
                max: self.n - 1,
            });
        }
        let j = self.nn_table[i][k - 1] as usize;
        Ok(self.dist(i, j))
    }

    /// Mean of all pairwise distances over i < j.
    pub fn mean_distance(&self) -> f64 {
        let n = self.n;
        let mut sum = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                sum += self.dist(i, j);
            }
        }
        sum / (n * (n - 1) / 2) as f64
    }
}

/// The two neighbor-count rules used by the sparse methods, clamped to n-1:
/// K_l = 1 + floor(log2 n) and K_s = 1 + floor(sqrt n).
pub fn k_rules(n: usize) -> (usize, usize) {
    assert!(n >= 2, "k_rules needs n >= 2");
    let k_log = 1 + n.ilog2() as usize;
    let k_sqrt = 1 + n.isqrt();
    (k_log.min(n - 1), k_sqrt.min(n - 1))
}
