//! Turning the spectral embedding into a hard partition: an alternating
//! rotation / assignment minimizer, plus a restarted k-means fallback.

use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::{ClusteringResult, Embedding};

const ROTATION_TOL: f64 = 1e-10;
const ROTATION_MAX_ITERS: usize = 100;

/// Finds the binary indicator matrix X and rotation R minimizing
/// ||X - Y R||_F. Assignment and rotation updates alternate; each rotation
/// update is the orthogonal-Procrustes optimum from the SVD of X'Y, and the
/// objective 2(n - tr(Omega)) never increases. Fully deterministic: the
/// initial rotation columns are embedding rows picked greedily for mutual
/// near-orthogonality, starting from the row farthest from the row mean, so
/// `_seed` is unused.
pub fn discretize(emb: &Embedding, k: usize, _seed: u64) -> ClusteringResult {
    assert_eq!(emb.k(), k, "embedding width must match requested clusters");
    let (labels, _) = rotation_minimize(emb, k);
    ClusteringResult::from_assignments(&labels, k)
}

/// Objective trace alongside the labels, for monotonicity checks.
pub(crate) fn rotation_minimize(emb: &Embedding, k: usize) -> (Vec<usize>, Vec<f64>) {
    let n = emb.n();
    let mut r = initial_rotation(emb, k);
    let mut labels = vec![0usize; n];
    let mut phis = Vec::new();
    let mut prev_phi = f64::INFINITY;

    for _ in 0..ROTATION_MAX_ITERS {
        // X = row-wise argmax of Y R (ties to the lowest column).
        for (i, lab) in labels.iter_mut().enumerate() {
            let yi = emb.row(i);
            let mut best = 0usize;
            let mut best_val = f64::NEG_INFINITY;
            for j in 0..k {
                let m: f64 = (0..k).map(|d| yi[d] * r[(d, j)]).sum();
                if m > best_val {
                    best_val = m;
                    best = j;
                }
            }
            *lab = best;
        }

        // A = X'Y; the optimal rotation for this X is V U' with A = U S V'.
        let mut a = DMatrix::<f64>::zeros(k, k);
        for (i, &lab) in labels.iter().enumerate() {
            let yi = emb.row(i);
            for d in 0..k {
                a[(lab, d)] += yi[d];
            }
        }
        let svd = a.svd(true, true);
        let trace: f64 = svd.singular_values.iter().sum();
        let phi = 2.0 * (n as f64 - trace);
        phis.push(phi);
        if prev_phi - phi < ROTATION_TOL {
            break;
        }
        prev_phi = phi;
        r = svd.v_t.unwrap().transpose() * svd.u.unwrap().transpose();
    }
    (labels, phis)
}

/// Initial rotation: columns are k embedding rows. The first is the row
/// farthest from the mean row; each next one minimizes accumulated absolute
/// alignment with previous picks. Ties go to the lowest index.
fn initial_rotation(emb: &Embedding, k: usize) -> DMatrix<f64> {
    let n = emb.n();
    let mut mean = vec![0.0; k];
    for i in 0..n {
        for (m, v) in mean.iter_mut().zip(emb.row(i)) {
            *m += v;
        }
    }
    for m in &mut mean {
        *m /= n as f64;
    }
    let mut first = 0usize;
    let mut best = f64::NEG_INFINITY;
    for i in 0..n {
        let d: f64 = emb
            .row(i)
            .iter()
            .zip(&mean)
            .map(|(a, b)| (a - b) * (a - b))
            .sum();
        if d > best {
            best = d;
            first = i;
        }
    }

    let mut r = DMatrix::zeros(k, k);
    for d in 0..k {
        r[(d, 0)] = emb.row(first)[d];
    }
    let mut c = vec![0.0; n];
    for t in 1..k {
        for (i, ci) in c.iter_mut().enumerate() {
            let dot: f64 = (0..k).map(|d| emb.row(i)[d] * r[(d, t - 1)]).sum();
            *ci += dot.abs();
        }
        let mut pick = 0usize;
        let mut low = f64::INFINITY;
        for (i, &ci) in c.iter().enumerate() {
            if ci < low {
                low = ci;
                pick = i;
            }
        }
        for d in 0..k {
            r[(d, t)] = emb.row(pick)[d];
        }
    }
    r
}

const KMEANS_RESTARTS: usize = 10;
const KMEANS_MAX_ITERS: usize = 300;
const KMEANS_TOL: f64 = 1e-9;

/// Lloyd k-means on the embedding rows with farthest-point seeding and a
/// fixed number of restarts; the best within-cluster sum of squares wins.
/// Deterministic given the seed.
pub fn kmeans_embedding(emb: &Embedding, k: usize, seed: u64) -> ClusteringResult {
    assert_eq!(emb.k(), k);
    let n = emb.n();
    let dim = emb.k();
    let mut best: Option<(f64, Vec<usize>)> = None;

    for restart in 0..KMEANS_RESTARTS {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed ^ (restart as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(restart as u64),
        );
        let mut centers = seed_centers(emb, k, &mut rng);
        let mut labels = vec![0usize; n];

        for _ in 0..KMEANS_MAX_ITERS {
            for (i, lab) in labels.iter_mut().enumerate() {
                *lab = nearest_center(emb.row(i), &centers);
            }
            // Re-seat empty clusters on the point farthest from its center.
            loop {
                let mut counts = vec![0usize; k];
                for &l in &labels {
                    counts[l] += 1;
                }
                let Some(empty) = counts.iter().position(|&c| c == 0) else {
                    break;
                };
                let mut far = None;
                let mut far_d = f64::NEG_INFINITY;
                for i in 0..n {
                    let d = dist_sq(emb.row(i), &centers[labels[i]]);
                    if d > far_d && counts[labels[i]] > 1 {
                        far_d = d;
                        far = Some(i);
                    }
                }
                // No donor cluster with two members: fewer points than
                // clusters, leave the emptiness to the failed flag.
                let Some(far) = far else { break };
                centers[empty] = emb.row(far).to_vec();
                labels[far] = empty;
            }

            let mut moved: f64 = 0.0;
            for c in 0..k {
                let members: Vec<usize> =
                    (0..n).filter(|&i| labels[i] == c).collect();
                let mut new_center = vec![0.0; dim];
                for &i in &members {
                    for (nc, v) in new_center.iter_mut().zip(emb.row(i)) {
                        *nc += v;
                    }
                }
                for v in &mut new_center {
                    *v /= members.len() as f64;
                }
                moved = moved.max(dist_sq(&new_center, &centers[c]).sqrt());
                centers[c] = new_center;
            }
            if moved < KMEANS_TOL {
                break;
            }
        }

        let sse: f64 = (0..n).map(|i| dist_sq(emb.row(i), &centers[labels[i]])).sum();
        if best.as_ref().map_or(true, |(b, _)| sse < *b) {
            best = Some((sse, labels));
        }
    }

    ClusteringResult::from_assignments(&best.unwrap().1, k)
}

fn seed_centers(emb: &Embedding, k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    let n = emb.n();
    let mut centers = vec![emb.row(rng.random_range(0..n)).to_vec()];
    while centers.len() < k {
        let mut pick = 0usize;
        let mut far = f64::NEG_INFINITY;
        for i in 0..n {
            let d = centers
                .iter()
                .map(|c| dist_sq(emb.row(i), c))
                .fold(f64::INFINITY, f64::min);
            if d > far {
                far = d;
                pick = i;
            }
        }
        centers.push(emb.row(pick).to_vec());
    }
    centers
}

fn nearest_center(point: &[f64], centers: &[Vec<f64>]) -> usize {
    let mut best = 0usize;
    let mut best_d = f64::INFINITY;
    for (c, center) in centers.iter().enumerate() {
        let d = dist_sq(point, center);
        if d < best_d {
            best_d = d;
            best = c;
        }
    }
    best
}

fn dist_sq(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}
