//! Normalized spectral clustering: degree-normalized Laplacian, top-k
//! eigenbasis, hypersphere embedding, and discretization of the embedding
//! into a hard partition.

mod discretize;
mod eigen;

pub use discretize::{discretize, kmeans_embedding};
pub use eigen::{top_k_eigenvectors, top_k_eigenvectors_iterative, EigenPairs};

use thiserror::Error;

use crate::dataset::remap_labels;
use crate::similarity::SimilarityMatrix;

#[derive(Debug, Error)]
pub enum SpectralError {
    #[error("node {0} has zero degree: all its similarities fell below storage precision")]
    ZeroDegree(usize),
    #[error("embedding row {0} is zero; eigenbasis is degenerate")]
    ZeroRow(usize),
    #[error("eigensolver residual {residual:e} did not reach tolerance {tol:e}")]
    NonConvergence { tol: f64, residual: f64 },
}

/// The symmetric operator D^(-1/2) W D^(-1/2), stored sparsely. Its largest
/// eigenvalues carry the cluster structure of W.
#[derive(Debug, Clone)]
pub struct NormalizedLaplacian {
    n: usize,
    adj: Vec<Vec<(u32, f64)>>,
}

impl NormalizedLaplacian {
    pub fn from_similarity(w: &SimilarityMatrix) -> Result<Self, SpectralError> {
        let degrees = w.degrees();
        if let Some(i) = degrees.iter().position(|&d| d <= 0.0) {
            return Err(SpectralError::ZeroDegree(i));
        }
        let inv_sqrt: Vec<f64> = degrees.iter().map(|d| 1.0 / d.sqrt()).collect();
        let adj = (0..w.n())
            .map(|i| {
                w.row(i)
                    .iter()
                    .map(|&(j, v)| (j, v * inv_sqrt[i] * inv_sqrt[j as usize]))
                    .collect()
            })
            .collect();
        Ok(NormalizedLaplacian { n: w.n(), adj })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// out = L x. Serial on purpose: the accumulation order is part of the
    /// determinism contract.
    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        for (i, row) in self.adj.iter().enumerate() {
            out[i] = row.iter().map(|&(j, v)| v * x[j as usize]).sum();
        }
    }

    /// Row-major dense n x n copy, for small-n solvers and oracles.
    pub fn dense(&self) -> Vec<f64> {
        let n = self.n;
        let mut m = vec![0.0; n * n];
        for (i, row) in self.adj.iter().enumerate() {
            for &(j, v) in row {
                m[i * n + j as usize] = v;
            }
        }
        m
    }
}

/// Row-normalized eigenbasis: n points on the unit sphere in R^k.
#[derive(Debug, Clone)]
pub struct Embedding {
    n: usize,
    k: usize,
    y: Vec<f64>,
    eigenvalues: Vec<f64>,
}

impl Embedding {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.y[i * self.k..(i + 1) * self.k]
    }

    /// Eigenvalues of the k basis vectors, nonincreasing.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }
}

/// Scales every eigenvector row to unit Euclidean norm.
pub fn row_normalize(pairs: &EigenPairs) -> Result<Embedding, SpectralError> {
    let (n, k) = (pairs.n, pairs.k);
    let mut y = pairs.u.clone();
    for i in 0..n {
        let row = &mut y[i * k..(i + 1) * k];
        let norm_sq: f64 = row.iter().map(|v| v * v).sum();
        if norm_sq <= f64::MIN_POSITIVE {
            return Err(SpectralError::ZeroRow(i));
        }
        let norm = norm_sq.sqrt();
        for v in row {
            *v /= norm;
        }
    }
    Ok(Embedding {
        n,
        k,
        y,
        eigenvalues: pairs.eigenvalues.clone(),
    })
}

/// A hard partition. Labels run 1..=nc in first-appearance order; the run is
/// failed when fewer than the requested k clusters are nonempty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusteringResult {
    pub labels: Vec<usize>,
    pub nc: usize,
    pub failed: bool,
}

impl ClusteringResult {
    /// Canonicalizes arbitrary cluster ids against a requested cluster count.
    pub fn from_assignments(raw: &[usize], k: usize) -> Self {
        let (labels, nc) = remap_labels(raw);
        ClusteringResult {
            labels,
            nc,
            failed: nc < k,
        }
    }
}

/// Which discretization turns the embedding into a partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Discretization {
    /// Alternating rotation / assignment minimization.
    Rotation,
    /// Lloyd k-means with farthest-point seeding and restarts.
    KMeans,
}

#[derive(Debug, Clone, Copy)]
pub struct SpectralOptions {
    pub eig_tol: f64,
    pub discretization: Discretization,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        SpectralOptions {
            eig_tol: 1e-9,
            discretization: Discretization::Rotation,
        }
    }
}

/// Full pipeline: Laplacian, top-k eigenbasis, row normalization,
/// discretization. The partition indexes the original points directly.
pub fn spectral_cluster(
    w: &SimilarityMatrix,
    k: usize,
    seed: u64,
) -> Result<ClusteringResult, SpectralError> {
    spectral_cluster_with(w, k, seed, &SpectralOptions::default())
}

pub fn spectral_cluster_with(
    w: &SimilarityMatrix,
    k: usize,
    seed: u64,
    opts: &SpectralOptions,
) -> Result<ClusteringResult, SpectralError> {
    let l = NormalizedLaplacian::from_similarity(w)?;
    let pairs = top_k_eigenvectors(&l, k, opts.eig_tol)?;
    let emb = row_normalize(&pairs)?;
    Ok(match opts.discretization {
        Discretization::Rotation => discretize(&emb, k, seed),
        Discretization::KMeans => kmeans_embedding(&emb, k, seed),
    })
}
