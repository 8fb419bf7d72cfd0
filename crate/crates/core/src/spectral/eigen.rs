//! Top-k symmetric eigensolvers behind one contract: a dense path for small
//! operators and a Lanczos path with full reorthogonalization and locking
//! for large ones. Locking matters because block-structured similarity
//! matrices carry the top eigenvalue with multiplicity equal to the number
//! of blocks, which a single Krylov run cannot resolve.

use nalgebra::DMatrix;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use super::{NormalizedLaplacian, SpectralError};

/// Orthonormal eigenvectors (row-major n x k) with their eigenvalues,
/// sorted nonincreasing.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub n: usize,
    pub k: usize,
    pub u: Vec<f64>,
    pub eigenvalues: Vec<f64>,
}

/// Above this size the dense solver's cubic cost dominates and the sparse
/// path takes over.
const DENSE_LIMIT: usize = 512;

/// Krylov subspace cap per eigenpair before a restart.
const MAX_SUBSPACE: usize = 160;
const MAX_RESTARTS: usize = 10;

pub fn top_k_eigenvectors(
    l: &NormalizedLaplacian,
    k: usize,
    tol: f64,
) -> Result<EigenPairs, SpectralError> {
    assert!(k >= 1 && k <= l.n(), "k={k} out of range 1..={}", l.n());
    let pairs = if l.n() <= DENSE_LIMIT {
        dense_top_k(l, k)
    } else {
        lanczos_top_k(l, k, tol)?
    };
    verify_residuals(l, &pairs, tol)?;
    Ok(pairs)
}

/// The Lanczos path regardless of size. Exists so the sparse solver can be
/// exercised and cross-checked on small operators.
#[doc(hidden)]
pub fn top_k_eigenvectors_iterative(
    l: &NormalizedLaplacian,
    k: usize,
    tol: f64,
) -> Result<EigenPairs, SpectralError> {
    assert!(k >= 1 && k <= l.n());
    let pairs = lanczos_top_k(l, k, tol)?;
    verify_residuals(l, &pairs, tol)?;
    Ok(pairs)
}

fn verify_residuals(
    l: &NormalizedLaplacian,
    pairs: &EigenPairs,
    tol: f64,
) -> Result<(), SpectralError> {
    let n = pairs.n;
    let mut x = vec![0.0; n];
    let mut lx = vec![0.0; n];
    for c in 0..pairs.k {
        for i in 0..n {
            x[i] = pairs.u[i * pairs.k + c];
        }
        l.matvec(&x, &mut lx);
        let lambda = pairs.eigenvalues[c];
        let residual: f64 = lx
            .iter()
            .zip(&x)
            .map(|(a, b)| (a - lambda * b) * (a - lambda * b))
            .sum::<f64>()
            .sqrt();
        if residual > tol {
            return Err(SpectralError::NonConvergence { tol, residual });
        }
    }
    Ok(())
}

fn dense_top_k(l: &NormalizedLaplacian, k: usize) -> EigenPairs {
    let n = l.n();
    let flat = l.dense();
    let m = DMatrix::from_fn(n, n, |i, j| flat[i * n + j]);
    let se = m.symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[b].total_cmp(&se.eigenvalues[a]).then(a.cmp(&b)));

    let mut u = vec![0.0; n * k];
    let mut eigenvalues = Vec::with_capacity(k);
    for (c, &idx) in order.iter().take(k).enumerate() {
        eigenvalues.push(se.eigenvalues[idx]);
        let col = se.eigenvectors.column(idx);
        for i in 0..n {
            u[i * k + c] = col[i];
        }
    }
    EigenPairs { n, k, u, eigenvalues }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(y: &mut [f64], alpha: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

fn norm(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Removes the components of `v` along each vector in `basis` (classical
/// Gram-Schmidt, applied twice by the callers for stability).
fn orthogonalize_against(v: &mut [f64], basis: &[Vec<f64>]) {
    for b in basis {
        let c = dot(v, b);
        axpy(v, -c, b);
    }
}

/// Largest eigenpair of the symmetric tridiagonal with diagonal `alpha` and
/// off-diagonal `beta` (beta.len() == alpha.len() - 1).
fn tridiagonal_top(alpha: &[f64], beta: &[f64]) -> (f64, Vec<f64>) {
    let m = alpha.len();
    let t = DMatrix::from_fn(m, m, |i, j| {
        if i == j {
            alpha[i]
        } else if i + 1 == j || j + 1 == i {
            beta[i.min(j)]
        } else {
            0.0
        }
    });
    let se = t.symmetric_eigen();
    let mut best = 0;
    for i in 1..m {
        if se.eigenvalues[i] > se.eigenvalues[best] {
            best = i;
        }
    }
    let s: Vec<f64> = se.eigenvectors.column(best).iter().copied().collect();
    (se.eigenvalues[best], s)
}

fn lanczos_top_k(
    l: &NormalizedLaplacian,
    k: usize,
    tol: f64,
) -> Result<EigenPairs, SpectralError> {
    let n = l.n();
    let mut locked: Vec<Vec<f64>> = Vec::with_capacity(k);
    let mut values = Vec::with_capacity(k);
    for idx in 0..k {
        let (lambda, v) = lanczos_one(l, &locked, tol, idx as u64)?;
        values.push(lambda);
        locked.push(v);
    }
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));

    let mut u = vec![0.0; n * k];
    let mut eigenvalues = Vec::with_capacity(k);
    for (c, &idx) in order.iter().enumerate() {
        eigenvalues.push(values[idx]);
        for i in 0..n {
            u[i * k + c] = locked[idx][i];
        }
    }
    Ok(EigenPairs { n, k, u, eigenvalues })
}

/// One deflated Lanczos run: the dominant eigenpair of L restricted to the
/// orthogonal complement of the locked vectors. The start vector is drawn
/// from a fixed-seed generator, so results do not depend on any caller seed.
fn lanczos_one(
    l: &NormalizedLaplacian,
    locked: &[Vec<f64>],
    tol: f64,
    idx: u64,
) -> Result<(f64, Vec<f64>), SpectralError> {
    let n = l.n();
    let free_dim = n - locked.len();
    let max_dim = free_dim.min(MAX_SUBSPACE);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2c_5eed ^ idx);
    let mut carry_over: Option<Vec<f64>> = None;
    let mut last_residual = f64::INFINITY;

    for _restart in 0..MAX_RESTARTS {
        let mut q0 = match carry_over.take() {
            Some(v) => v,
            None => (0..n).map(|_| rng.random::<f64>() - 0.5).collect(),
        };
        orthogonalize_against(&mut q0, locked);
        orthogonalize_against(&mut q0, locked);
        let nq = norm(&q0);
        if nq < 1e-12 {
            continue;
        }
        for v in &mut q0 {
            *v /= nq;
        }

        let mut basis = vec![q0];
        let mut alphas: Vec<f64> = Vec::new();
        let mut betas: Vec<f64> = Vec::new();
        let mut w = vec![0.0; n];

        for j in 0..max_dim {
            l.matvec(&basis[j], &mut w);
            let alpha = dot(&basis[j], &w);
            alphas.push(alpha);
            axpy(&mut w, -alpha, &basis[j]);
            if j > 0 {
                let bj = betas[j - 1];
                axpy(&mut w, -bj, &basis[j - 1]);
            }
            orthogonalize_against(&mut w, &basis);
            orthogonalize_against(&mut w, locked);
            orthogonalize_against(&mut w, &basis);
            orthogonalize_against(&mut w, locked);
            let beta = norm(&w);

            let (theta, s) = tridiagonal_top(&alphas, &betas);
            let residual = beta * s[s.len() - 1].abs();
            last_residual = residual;
            if residual <= tol || beta <= 1e-14 {
                let v = assemble(&basis, &s, locked);
                return Ok((theta, v));
            }
            betas.push(beta);
            basis.push(w.iter().map(|x| x / beta).collect());
        }

        // Subspace cap hit: restart from the current best Ritz vector.
        let (_, s) = tridiagonal_top(&alphas, &betas[..alphas.len() - 1]);
        carry_over = Some(assemble(&basis, &s, locked));
    }

    Err(SpectralError::NonConvergence {
        tol,
        residual: last_residual,
    })
}

/// Maps a tridiagonal eigenvector back to R^n, then cleans it against the
/// locked set and renormalizes.
fn assemble(basis: &[Vec<f64>], s: &[f64], locked: &[Vec<f64>]) -> Vec<f64> {
    let n = basis[0].len();
    let mut v = vec![0.0; n];
    for (coef, b) in s.iter().zip(basis) {
        axpy(&mut v, *coef, b);
    }
    orthogonalize_against(&mut v, locked);
    let nv = norm(&v);
    if nv > 0.0 {
        for x in &mut v {
            *x /= nv;
        }
    }
    v
}
