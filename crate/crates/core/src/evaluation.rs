//! External clustering indices: normalized mutual information, purity, Rand
//! index, and clustering error via optimal cluster matching.

use crate::dataset::remap_labels;

/// Cross-tabulation of two partitions over the same points. Rows index the
/// obtained clusters, columns the target clusters, both in first-appearance
/// order.
#[derive(Debug, Clone)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<usize>>,
    pub row_sums: Vec<usize>,
    pub col_sums: Vec<usize>,
    pub n: usize,
}

impl ContingencyTable {
    pub fn new(obtained: &[usize], target: &[usize]) -> Self {
        assert_eq!(obtained.len(), target.len(), "partition length mismatch");
        assert!(!obtained.is_empty(), "empty partitions");
        let (rows, nr) = remap_labels(obtained);
        let (cols, nk) = remap_labels(target);
        let mut counts = vec![vec![0usize; nk]; nr];
        for (&r, &c) in rows.iter().zip(&cols) {
            counts[r - 1][c - 1] += 1;
        }
        let row_sums: Vec<usize> = counts.iter().map(|r| r.iter().sum()).collect();
        let col_sums: Vec<usize> = (0..nk).map(|j| counts.iter().map(|r| r[j]).sum()).collect();
        ContingencyTable {
            counts,
            row_sums,
            col_sums,
            n: obtained.len(),
        }
    }
}

fn entropy(sums: &[usize], n: usize) -> f64 {
    let nf = n as f64;
    -sums
        .iter()
        .filter(|&&s| s > 0)
        .map(|&s| {
            let p = s as f64 / nf;
            p * p.ln()
        })
        .sum::<f64>()
}

/// Normalized mutual information with arithmetic-mean normalization and
/// natural logs (the base cancels). Partitions that agree up to relabeling
/// score exactly 1; this covers the degenerate single-cluster-on-both-sides
/// case, where the normalizer would otherwise vanish.
pub fn nmi(obtained: &[usize], target: &[usize]) -> f64 {
    let t = ContingencyTable::new(obtained, target);
    // A permutation table (square, one positive cell per row) means the
    // partitions coincide up to relabeling. There the mutual information
    // equals both entropies, so the index is exactly 1; returning it
    // directly keeps log round-off from blurring the extreme.
    if t.counts.len() == t.col_sums.len()
        && t.counts.iter().all(|row| row.iter().filter(|&&c| c > 0).count() == 1)
    {
        return 1.0;
    }
    let h_obt = entropy(&t.row_sums, t.n);
    let h_tar = entropy(&t.col_sums, t.n);
    debug_assert!(h_obt + h_tar > 0.0, "non-permutation table has positive entropy");
    let nf = t.n as f64;
    let mut mi = 0.0;
    for (i, row) in t.counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let nij = c as f64;
                mi += (nij / nf)
                    * ((nf * nij) / (t.row_sums[i] as f64 * t.col_sums[j] as f64)).ln();
            }
        }
    }
    mi / ((h_obt + h_tar) / 2.0)
}

/// Fraction of points in the majority target class of their obtained
/// cluster.
pub fn purity(obtained: &[usize], target: &[usize]) -> f64 {
    let t = ContingencyTable::new(obtained, target);
    let hits: usize = t
        .counts
        .iter()
        .map(|row| row.iter().copied().max().unwrap_or(0))
        .sum();
    hits as f64 / t.n as f64
}

/// Fraction of point pairs on which the two partitions agree (together in
/// both or apart in both).
pub fn rand_index(obtained: &[usize], target: &[usize]) -> f64 {
    let t = ContingencyTable::new(obtained, target);
    let pairs = |x: usize| (x * x.saturating_sub(1) / 2) as f64;
    let total = pairs(t.n);
    if total == 0.0 {
        return 1.0;
    }
    let same_both: f64 = t
        .counts
        .iter()
        .flat_map(|row| row.iter())
        .map(|&c| pairs(c))
        .sum();
    let same_obt: f64 = t.row_sums.iter().map(|&s| pairs(s)).sum();
    let same_tar: f64 = t.col_sums.iter().map(|&s| pairs(s)).sum();
    (total + 2.0 * same_both - same_obt - same_tar) / total
}

/// 1 minus the accuracy of the best one-to-one matching between obtained
/// and target clusters (optimal assignment over the contingency table).
pub fn clustering_error(obtained: &[usize], target: &[usize]) -> f64 {
    let t = ContingencyTable::new(obtained, target);
    let matched = max_assignment(&t.counts);
    1.0 - matched as f64 / t.n as f64
}

/// Maximum total count over one-to-one row/column assignments, by the
/// Hungarian method with potentials. The table is padded to square with
/// zeros, and maximization is turned into minimization against the largest
/// cell.
fn max_assignment(counts: &[Vec<usize>]) -> usize {
    let nr = counts.len();
    let nk = counts[0].len();
    let size = nr.max(nk);
    let top = counts
        .iter()
        .flat_map(|r| r.iter())
        .copied()
        .max()
        .unwrap_or(0) as i64;
    let cost =
        |i: usize, j: usize| -> i64 { top - if i < nr && j < nk { counts[i][j] as i64 } else { 0 } };

    // Potentials u, v; p[j] is the row matched to column j (1-based, 0 is
    // the virtual start column).
    let mut u = vec![0i64; size + 1];
    let mut v = vec![0i64; size + 1];
    let mut p = vec![0usize; size + 1];
    let mut way = vec![0usize; size + 1];
    for i in 1..=size {
        p[0] = i;
        let mut j0 = 0usize;
        let mut minv = vec![i64::MAX; size + 1];
        let mut used = vec![false; size + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0usize;
            for j in 1..=size {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=size {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }

    let mut total = 0usize;
    for j in 1..=size {
        let i = p[j];
        if i >= 1 && i <= nr && j <= nk {
            total += counts[i - 1][j - 1];
        }
    }
    total
}
