//! The method catalog and similarity-matrix assembly. A method is a sparsity
//! model (full graph, epsilon, non-mutual or mutual kNN), a similarity
//! function (unit weight, global Gaussian, local Gaussian, mean-local
//! Gaussian), and for the sparse families a neighbor-count rule.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;

use thiserror::Error;

use crate::graph::{aggregate_components, build_epsilon, build_knn, SparseGraph};
use crate::metric::{k_rules, DistanceModel};
use crate::scaling::{
    scale_full_f1, scale_full_local_f2, scale_s_local, scale_s_mean, scale_t, ScalingError,
};

/// Entries smaller than this are dropped at storage time, for every method.
/// Dropping makes nominally dense matrices genuinely sparse once the kernel
/// underflows the working precision.
pub const STORE_EPS: f64 = f64::EPSILON;

#[derive(Debug, Error)]
pub enum SimilarityError {
    #[error(transparent)]
    Scaling(#[from] ScalingError),
    #[error("invalid method spec: {0}")]
    InvalidSpec(String),
}

/// Sparsity family of a method.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    /// Full graph (no sparsification).
    F,
    /// Epsilon-neighbor graph.
    E,
    /// Non-mutual kNN graph.
    N,
    /// Mutual kNN graph.
    M,
}

impl Family {
    pub fn letter(self) -> char {
        match self {
            Family::F => 'F',
            Family::E => 'E',
            Family::N => 'N',
            Family::M => 'M',
        }
    }
}

/// Neighbor-count rule for the sparse families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum KRule {
    /// K = 1 + floor(log2 n), clamped to n-1.
    Log,
    /// K = 1 + floor(sqrt n), clamped to n-1.
    Sqrt,
}

impl KRule {
    pub fn k_for(self, n: usize) -> usize {
        let (k_log, k_sqrt) = k_rules(n);
        match self {
            KRule::Log => k_log,
            KRule::Sqrt => k_sqrt,
        }
    }

    pub fn suffix(self) -> &'static str {
        match self {
            KRule::Log => "Kl",
            KRule::Sqrt => "Ks",
        }
    }
}

/// One of the 27 catalog methods.
///
/// Variants for the sparse families: 1 unit weight, 2 global Gaussian with
/// sigma = t (max MST edge), 3 local Gaussian with sigma_i = max incident
/// edge, 4 global Gaussian with sigma = mean of the sigma_i. For the full
/// family: 1 global Gaussian with the capped-MST sigma, 2 local Gaussian
/// with K_l-th neighbor distances, 3 global Gaussian with their mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MethodSpec {
    family: Family,
    variant: u8,
    k_rule: Option<KRule>,
}

impl MethodSpec {
    pub fn new(family: Family, variant: u8, k_rule: Option<KRule>) -> Result<Self, SimilarityError> {
        let ok = match family {
            Family::F => (1..=3).contains(&variant) && k_rule.is_none(),
            _ => (1..=4).contains(&variant) && k_rule.is_some(),
        };
        if !ok {
            return Err(SimilarityError::InvalidSpec(format!(
                "family {} variant {} k_rule {:?}",
                family.letter(),
                variant,
                k_rule
            )));
        }
        Ok(MethodSpec {
            family,
            variant,
            k_rule,
        })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn variant(&self) -> u8 {
        self.variant
    }

    pub fn k_rule(&self) -> Option<KRule> {
        self.k_rule
    }

    /// Short label: "F2", "E1_Kl", "M4_Ks".
    pub fn label(&self) -> String {
        match self.k_rule {
            None => format!("{}{}", self.family.letter(), self.variant),
            Some(r) => format!("{}{}_{}", self.family.letter(), self.variant, r.suffix()),
        }
    }

    /// All 27 methods: the 3 full-graph ones, then for each K rule the
    /// epsilon, non-mutual and mutual families with variants 1 to 4.
    pub fn catalog() -> Vec<MethodSpec> {
        let mut out = Vec::with_capacity(27);
        for v in 1..=3 {
            out.push(MethodSpec::new(Family::F, v, None).unwrap());
        }
        for rule in [KRule::Log, KRule::Sqrt] {
            for family in [Family::E, Family::N, Family::M] {
                for v in 1..=4 {
                    out.push(MethodSpec::new(family, v, Some(rule)).unwrap());
                }
            }
        }
        out
    }
}

impl fmt::Display for MethodSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for MethodSpec {
    type Err = SimilarityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || SimilarityError::InvalidSpec(s.to_string());
        let mut chars = s.chars();
        let family = match chars.next().ok_or_else(bad)? {
            'F' => Family::F,
            'E' => Family::E,
            'N' => Family::N,
            'M' => Family::M,
            _ => return Err(bad()),
        };
        let variant = chars.next().and_then(|c| c.to_digit(10)).ok_or_else(bad)? as u8;
        let rest: String = chars.collect();
        let k_rule = match (family, rest.as_str()) {
            (Family::F, "") => None,
            (Family::F, _) => return Err(bad()),
            (_, "_Kl") => Some(KRule::Log),
            (_, "_Ks") => Some(KRule::Sqrt),
            _ => return Err(bad()),
        };
        MethodSpec::new(family, variant, k_rule)
    }
}

/// Symmetric nonnegative sparse matrix with zero diagonal, adjacency-list
/// form. `stored_nonzeros` counts stored entries, i.e. both (i,j) and (j,i).
#[derive(Debug, Clone)]
pub struct SimilarityMatrix {
    n: usize,
    adj: Vec<Vec<(u32, f64)>>,
    stored_nonzeros: usize,
}

impl SimilarityMatrix {
    /// Builds from undirected weighted pairs, dropping entries below
    /// `STORE_EPS`. Pairs must be distinct (i != j) and unique.
    pub fn from_entries(n: usize, entries: impl IntoIterator<Item = (u32, u32, f64)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        let mut stored = 0usize;
        for (i, j, w) in entries {
            debug_assert_ne!(i, j);
            debug_assert!(w >= 0.0 && w <= 1.0, "similarity {w} outside [0,1]");
            if w < STORE_EPS {
                continue;
            }
            adj[i as usize].push((j, w));
            adj[j as usize].push((i, w));
            stored += 2;
        }
        for list in &mut adj {
            list.sort_by_key(|&(j, _)| j);
            debug_assert!(
                list.windows(2).all(|p| p[0].0 != p[1].0),
                "duplicate pair in similarity entries"
            );
        }
        SimilarityMatrix {
            n,
            adj,
            stored_nonzeros: stored,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn stored_nonzeros(&self) -> usize {
        self.stored_nonzeros
    }

    pub fn row(&self, i: usize) -> &[(u32, f64)] {
        &self.adj[i]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.adj[i]
            .binary_search_by_key(&(j as u32), |&(v, _)| v)
            .map(|pos| self.adj[i][pos].1)
            .unwrap_or(0.0)
    }

    /// Row sums (the degrees used by Laplacian normalization).
    pub fn degrees(&self) -> Vec<f64> {
        self.adj
            .iter()
            .map(|row| row.iter().map(|&(_, w)| w).sum())
            .collect()
    }

    /// Each stored pair once, as (i, j, w) with i < j, ascending.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32, f64)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .filter(move |&&(j, _)| (i as u32) < j)
                .map(move |&(j, w)| (i as u32, j, w))
        })
    }

    /// Fraction of the n x n entries that are zero (not stored): the
    /// diagonal always counts, plus every dropped or absent pair.
    pub fn sparsity_level(&self) -> f64 {
        let n2 = (self.n * self.n) as f64;
        (n2 - self.stored_nonzeros as f64) / n2
    }

    /// Debug dump: `i j w` per stored upper-triangle entry, 1-based,
    /// sorted by (i, j).
    pub fn dump_coo(&self) -> String {
        let mut out = String::new();
        for (i, j, w) in self.entries() {
            writeln!(out, "{} {} {}", i + 1, j + 1, w).unwrap();
        }
        out
    }
}

/// Scale parameters a build actually used, for reporting.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SigmaReport {
    Unit,
    Global(f64),
    Local { min: f64, mean: f64, max: f64 },
}

impl SigmaReport {
    fn local(s: &[f64]) -> Self {
        let min = s.iter().copied().fold(f64::INFINITY, f64::min);
        let max = s.iter().copied().fold(0.0, f64::max);
        SigmaReport::Local {
            min,
            mean: scale_s_mean(s),
            max,
        }
    }
}

/// What a build did: the neighbor count and epsilon when applicable, the
/// scale parameters, and how many bridge edges aggregation added.
#[derive(Debug, Clone)]
pub struct BuildDiagnostics {
    pub k_used: Option<usize>,
    pub epsilon: Option<f64>,
    pub sigma: SigmaReport,
    pub aggregation_edges_added: usize,
}

fn gaussian(delta: f64, two_sigma_sq: f64) -> f64 {
    if delta == 0.0 {
        // Duplicate points: exact limit for every scale, including zero
        // local scales (which arise when a point has >= K exact copies).
        return 1.0;
    }
    (-delta * delta / two_sigma_sq).exp()
}

/// Builds the similarity matrix for one catalog method.
pub fn build_w(
    spec: &MethodSpec,
    dm: &DistanceModel,
) -> Result<(SimilarityMatrix, BuildDiagnostics), SimilarityError> {
    let n = dm.n();
    match spec.family() {
        Family::F => {
            let all_pairs = || {
                (0..n as u32).flat_map(move |i| ((i + 1)..n as u32).map(move |j| (i, j)))
            };
            let (entries, sigma): (Vec<(u32, u32, f64)>, SigmaReport) = match spec.variant() {
                1 => {
                    let sigma = scale_full_f1(dm);
                    let two_s2 = 2.0 * sigma * sigma;
                    let e = all_pairs()
                        .map(|(i, j)| (i, j, gaussian(dm.dist(i as usize, j as usize), two_s2)))
                        .collect();
                    (e, SigmaReport::Global(sigma))
                }
                2 => {
                    let s = scale_full_local_f2(dm);
                    let e = all_pairs()
                        .map(|(i, j)| {
                            let d = dm.dist(i as usize, j as usize);
                            (i, j, gaussian(d, 2.0 * s[i as usize] * s[j as usize]))
                        })
                        .collect();
                    (e, SigmaReport::local(&s))
                }
                3 => {
                    let sigma = scale_s_mean(&scale_full_local_f2(dm));
                    let two_s2 = 2.0 * sigma * sigma;
                    let e = all_pairs()
                        .map(|(i, j)| (i, j, gaussian(dm.dist(i as usize, j as usize), two_s2)))
                        .collect();
                    (e, SigmaReport::Global(sigma))
                }
                _ => unreachable!("validated at construction"),
            };
            Ok((
                SimilarityMatrix::from_entries(n, entries),
                BuildDiagnostics {
                    k_used: None,
                    epsilon: None,
                    sigma,
                    aggregation_edges_added: 0,
                },
            ))
        }
        family => {
            let rule = spec.k_rule().expect("sparse spec carries a K rule");
            let k = rule.k_for(n);
            let (delta, epsilon) = match family {
                Family::E => {
                    let (g, eps) = build_epsilon(dm, k);
                    (g, Some(eps))
                }
                Family::N => (build_knn(dm, k, false), None),
                Family::M => (build_knn(dm, k, true), None),
                Family::F => unreachable!(),
            };
            let (delta, added) = aggregate_components(&delta, dm);
            let (w, sigma) = weigh_sparse(&delta, spec.variant())?;
            Ok((
                w,
                BuildDiagnostics {
                    k_used: Some(k),
                    epsilon,
                    sigma,
                    aggregation_edges_added: added.len(),
                },
            ))
        }
    }
}

fn weigh_sparse(
    delta: &SparseGraph,
    variant: u8,
) -> Result<(SimilarityMatrix, SigmaReport), SimilarityError> {
    let n = delta.n();
    let (entries, sigma): (Vec<(u32, u32, f64)>, SigmaReport) = match variant {
        1 => (
            delta.edges().map(|(i, j, _)| (i, j, 1.0)).collect(),
            SigmaReport::Unit,
        ),
        2 => {
            let t = scale_t(delta)?;
            let two_s2 = 2.0 * t * t;
            (
                delta
                    .edges()
                    .map(|(i, j, d)| (i, j, gaussian(d, two_s2)))
                    .collect(),
                SigmaReport::Global(t),
            )
        }
        3 => {
            let s = scale_s_local(delta)?;
            (
                delta
                    .edges()
                    .map(|(i, j, d)| (i, j, gaussian(d, 2.0 * s[i as usize] * s[j as usize])))
                    .collect(),
                SigmaReport::local(&s),
            )
        }
        4 => {
            let s = scale_s_mean(&scale_s_local(delta)?);
            let two_s2 = 2.0 * s * s;
            (
                delta
                    .edges()
                    .map(|(i, j, d)| (i, j, gaussian(d, two_s2)))
                    .collect(),
                SigmaReport::Global(s),
            )
        }
        _ => unreachable!("validated at construction"),
    };
    Ok((SimilarityMatrix::from_entries(n, entries), sigma))
}
