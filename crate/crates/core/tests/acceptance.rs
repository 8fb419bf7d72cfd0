//! End-to-end acceptance suite. Each criterion prints one PASS or FAIL line
//! and the test panics at the end if any criterion failed, so the verdicts
//! survive into the captured output either way.
//!
//! Criteria 2, 8 and 9 need the full four-dataset UCI suite (iris, wine,
//! congressional votes, seeds). The repository ships iris and wine; when the
//! other two files are absent those criteria report FAIL with retrieval
//! instructions and the evidence gathered on the available subset.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use specsim::dataset::generate_rings;
use specsim::evaluation::{clustering_error, nmi, purity, rand_index};
use specsim::graph::{aggregate_components, build_epsilon, build_knn};
use specsim::harness::{run_experiment, ExperimentConfig};
use specsim::metric::k_rules;
use specsim::mst::prim;
use specsim::similarity::{build_w, STORE_EPS};
use specsim::spectral::{
    row_normalize, spectral_cluster, top_k_eigenvectors, top_k_eigenvectors_iterative,
    NormalizedLaplacian,
};
use specsim::{Dataset, DistanceModel, MethodSpec, SimilarityMatrix, SparseGraph};

/// Mean-NMI reference band centers for the four-dataset UCI suite,
/// one per method; the acceptance band is +/- 0.10 around each.
const REFERENCE_ALPHA: [(&str, f64); 27] = [
    ("F1", 0.52),
    ("F2", 0.58),
    ("F3", 0.58),
    ("E1_Kl", 0.56),
    ("E2_Kl", 0.56),
    ("E3_Kl", 0.56),
    ("E4_Kl", 0.56),
    ("N1_Kl", 0.57),
    ("N2_Kl", 0.57),
    ("N3_Kl", 0.57),
    ("N4_Kl", 0.58),
    ("M1_Kl", 0.55),
    ("M2_Kl", 0.56),
    ("M3_Kl", 0.56),
    ("M4_Kl", 0.56),
    ("E1_Ks", 0.54),
    ("E2_Ks", 0.55),
    ("E3_Ks", 0.55),
    ("E4_Ks", 0.55),
    ("N1_Ks", 0.58),
    ("N2_Ks", 0.58),
    ("N3_Ks", 0.58),
    ("N4_Ks", 0.57),
    ("M1_Ks", 0.56),
    ("M2_Ks", 0.56),
    ("M3_Ks", 0.56),
    ("M4_Ks", 0.55),
];

/// Mean-sparsity reference centers for the same suite; band is +/- 5
/// percentage points. Sparse-family centers are shared across variants
/// because the graph support, and hence theta, barely depends on weights.
const REFERENCE_THETA: [(&str, f64); 27] = [
    ("F1", 0.44),
    ("F2", 0.24),
    ("F3", 0.18),
    ("E1_Kl", 0.94),
    ("E2_Kl", 0.94),
    ("E3_Kl", 0.94),
    ("E4_Kl", 0.94),
    ("N1_Kl", 0.95),
    ("N2_Kl", 0.95),
    ("N3_Kl", 0.95),
    ("N4_Kl", 0.95),
    ("M1_Kl", 0.97),
    ("M2_Kl", 0.97),
    ("M3_Kl", 0.97),
    ("M4_Kl", 0.97),
    ("E1_Ks", 0.91),
    ("E2_Ks", 0.91),
    ("E3_Ks", 0.91),
    ("E4_Ks", 0.91),
    ("N1_Ks", 0.91),
    ("N2_Ks", 0.91),
    ("N3_Ks", 0.91),
    ("N4_Ks", 0.91),
    ("M1_Ks", 0.95),
    ("M2_Ks", 0.95),
    ("M3_Ks", 0.95),
    ("M4_Ks", 0.95),
];

fn uci_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/uci")
}

/// The four suite files in canonical order with their config kinds.
const UCI_FILES: [(&str, &str); 4] = [
    ("uci_iris", "iris.data"),
    ("uci_wine", "wine.data"),
    ("uci_vote", "house-votes-84.data"),
    ("uci_seeds", "seeds_dataset.txt"),
];

fn missing_uci_files() -> Vec<String> {
    UCI_FILES
        .iter()
        .filter(|(_, f)| !uci_dir().join(f).is_file())
        .map(|(_, f)| format!("data/uci/{f}"))
        .collect()
}

/// Config text over whichever suite files exist, all methods, seed 42.
fn uci_config_text() -> String {
    let dir = uci_dir();
    let mut text = String::from("seed = 42\nmethods = all\n");
    for (kind, file) in UCI_FILES {
        let path = dir.join(file);
        if path.is_file() {
            write!(text, "\n[dataset]\nkind = {kind}\npath = {}\nset = U\n", path.display())
                .unwrap();
        }
    }
    text
}

fn spec_by_label(label: &str) -> MethodSpec {
    MethodSpec::catalog()
        .into_iter()
        .find(|m| m.label() == label)
        .unwrap_or_else(|| panic!("no method labeled {label}"))
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        if self.0[x] != x {
            let r = self.find(self.0[x]);
            self.0[x] = r;
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

/// Random connected undirected graph: a spanning tree over a shuffled
/// vertex order plus extra edges, no duplicate pairs. Weights come from
/// the caller so integer and continuous regimes share the topology code.
fn random_connected_edges(
    rng: &mut ChaCha8Rng,
    n: usize,
    extra_prob: f64,
    mut weight: impl FnMut(&mut ChaCha8Rng) -> f64,
) -> Vec<(u32, u32, f64)> {
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.shuffle(rng);
    let mut present: HashSet<(u32, u32)> = HashSet::new();
    let mut edges = Vec::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        let (a, b) = (order[i].min(order[j]), order[i].max(order[j]));
        present.insert((a, b));
        let w = weight(rng);
        edges.push((a, b, w));
    }
    for a in 0..n as u32 {
        for b in (a + 1)..n as u32 {
            if !present.contains(&(a, b)) && rng.random_bool(extra_prob) {
                let w = weight(rng);
                edges.push((a, b, w));
            }
        }
    }
    edges
}

/// Exhaustive minimum spanning weight: tries every (n-1)-subset of edges
/// and keeps the best one that spans.
fn enumerated_min_spanning_weight(n: usize, edges: &[(u32, u32, f64)]) -> f64 {
    let need = n - 1;
    if need == 0 {
        return 0.0;
    }
    let m = edges.len();
    let mut best = f64::INFINITY;
    let mut idx: Vec<usize> = (0..need).collect();
    loop {
        let mut uf = UnionFind::new(n);
        let mut joins = 0usize;
        let mut total = 0.0;
        for &e in &idx {
            let (a, b, w) = edges[e];
            if uf.union(a as usize, b as usize) {
                joins += 1;
            }
            total += w;
        }
        if joins == need && total < best {
            best = total;
        }
        let mut i = need;
        while i > 0 && idx[i - 1] == m - need + i - 1 {
            i -= 1;
        }
        if i == 0 {
            return best;
        }
        idx[i - 1] += 1;
        for j in i..need {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Cyclic Jacobi eigenvalues of a symmetric matrix, sorted nonincreasing.
/// Deliberately independent of the solver under test.
fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..60 {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| a[p][q] * a[p][q])
            .sum();
        if off.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let (aip, aiq) = (a[i][p], a[i][q]);
                    a[i][p] = c * aip - s * aiq;
                    a[i][q] = s * aip + c * aiq;
                }
                for i in 0..n {
                    let (api, aqi) = (a[p][i], a[q][i]);
                    a[p][i] = c * api - s * aqi;
                    a[q][i] = s * api + c * aqi;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.partial_cmp(x).unwrap());
    ev
}

mod index_oracles {
    use std::collections::HashMap;

    pub fn nmi(a: &[usize], b: &[usize]) -> f64 {
        let n = a.len() as f64;
        let mut joint: HashMap<(usize, usize), f64> = HashMap::new();
        let mut pa: HashMap<usize, f64> = HashMap::new();
        let mut pb: HashMap<usize, f64> = HashMap::new();
        for (&x, &y) in a.iter().zip(b) {
            *joint.entry((x, y)).or_default() += 1.0 / n;
            *pa.entry(x).or_default() += 1.0 / n;
            *pb.entry(y).or_default() += 1.0 / n;
        }
        let mi: f64 = joint
            .iter()
            .map(|(&(x, y), &p)| p * (p / (pa[&x] * pb[&y])).ln())
            .sum();
        let ha: f64 = -pa.values().map(|&p| p * p.ln()).sum::<f64>();
        let hb: f64 = -pb.values().map(|&p| p * p.ln()).sum::<f64>();
        if ha + hb == 0.0 {
            return 1.0;
        }
        mi / ((ha + hb) / 2.0)
    }

    pub fn purity(a: &[usize], b: &[usize]) -> f64 {
        let mut per_cluster: HashMap<usize, HashMap<usize, usize>> = HashMap::new();
        for (&x, &y) in a.iter().zip(b) {
            *per_cluster.entry(x).or_default().entry(y).or_default() += 1;
        }
        let hits: usize = per_cluster
            .values()
            .map(|targets| targets.values().copied().max().unwrap_or(0))
            .sum();
        hits as f64 / a.len() as f64
    }

    pub fn rand(a: &[usize], b: &[usize]) -> f64 {
        let n = a.len();
        let mut agree = 0usize;
        let mut total = 0usize;
        for i in 0..n {
            for j in (i + 1)..n {
                total += 1;
                if (a[i] == a[j]) == (b[i] == b[j]) {
                    agree += 1;
                }
            }
        }
        if total == 0 {
            1.0
        } else {
            agree as f64 / total as f64
        }
    }

    /// Clustering error via explicit one-to-one matching enumeration over
    /// the smaller label side (at most 6! injections here).
    pub fn clustering_error(a: &[usize], b: &[usize]) -> f64 {
        let mut rows: Vec<usize> = a.to_vec();
        rows.sort_unstable();
        rows.dedup();
        let mut cols: Vec<usize> = b.to_vec();
        cols.sort_unstable();
        cols.dedup();
        let mut counts = vec![vec![0usize; cols.len()]; rows.len()];
        for (&x, &y) in a.iter().zip(b) {
            let i = rows.binary_search(&x).unwrap();
            let j = cols.binary_search(&y).unwrap();
            counts[i][j] += 1;
        }
        if rows.len() > cols.len() {
            let t: Vec<Vec<usize>> = (0..cols.len())
                .map(|j| (0..rows.len()).map(|i| counts[i][j]).collect())
                .collect();
            counts = t;
        }
        let width = counts[0].len();
        let mut used = vec![false; width];
        let matched = best_injection(&counts, 0, &mut used);
        1.0 - matched as f64 / a.len() as f64
    }

    fn best_injection(counts: &[Vec<usize>], row: usize, used: &mut [bool]) -> usize {
        if row == counts.len() {
            return 0;
        }
        let mut best = 0;
        for j in 0..used.len() {
            if !used[j] {
                used[j] = true;
                best = best.max(counts[row][j] + best_injection(counts, row + 1, used));
                used[j] = false;
            }
        }
        best
    }
}

fn criterion_1_method_catalog() -> Result<String, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_specsim"))
        .arg("list-methods")
        .output()
        .map_err(|e| format!("cannot launch the CLI: {e}"))?;
    if !out.status.success() {
        return Err(format!("list-methods exited with {}", out.status));
    }
    let stdout = String::from_utf8(out.stdout).map_err(|_| "non-UTF8 output".to_string())?;
    let listed: Vec<&str> = stdout.lines().collect();
    let expected: Vec<String> = MethodSpec::catalog().iter().map(|m| m.label()).collect();
    if listed.len() != 27 {
        return Err(format!("expected 27 methods, CLI listed {}", listed.len()));
    }
    if listed != expected.iter().map(String::as_str).collect::<Vec<_>>() {
        return Err(format!("catalog mismatch: CLI listed {listed:?}"));
    }
    Ok("CLI lists exactly the 27 catalog labels".into())
}

/// Shared by criteria 2 and 8: one full run over the available UCI files.
struct SuiteRun {
    missing: Vec<String>,
    report: specsim::harness::EvaluationReport,
    elapsed_s: f64,
}

fn run_uci_suite() -> Result<SuiteRun, String> {
    let cfg = ExperimentConfig::from_str_checked(&uci_config_text())
        .map_err(|e| format!("suite config rejected: {e}"))?;
    let start = Instant::now();
    let report = run_experiment(&cfg).map_err(|e| format!("suite run failed: {e}"))?;
    Ok(SuiteRun {
        missing: missing_uci_files(),
        report,
        elapsed_s: start.elapsed().as_secs_f64(),
    })
}

fn criterion_2_uci_bands(suite: &SuiteRun) -> Result<String, String> {
    let failed = suite.report.runs.iter().filter(|r| r.failed).count();
    let summary = &suite.report.sets[0];
    if !suite.missing.is_empty() {
        return Err(format!(
            "cannot check the reference bands: missing {} (retrieval instructions in \
             data/README.md); on the available subset ({}) all {} method x dataset runs \
             completed with {} failures in {:.1}s",
            suite.missing.join(", "),
            summary.datasets.join(", "),
            suite.report.runs.len(),
            failed,
            suite.elapsed_s,
        ));
    }
    if suite.elapsed_s >= 60.0 {
        return Err(format!("suite took {:.1}s, limit is 60s", suite.elapsed_s));
    }
    let mut worst_alpha = (0.0f64, String::new());
    let mut worst_theta = (0.0f64, String::new());
    for (mi, m) in suite.report.methods.iter().enumerate() {
        let label = m.label();
        let alpha = summary.alpha_mean[mi];
        let theta = summary.theta_mean[mi];
        let (_, a_ref) = REFERENCE_ALPHA.iter().find(|(l, _)| *l == label).unwrap();
        let (_, t_ref) = REFERENCE_THETA.iter().find(|(l, _)| *l == label).unwrap();
        let da = (alpha - a_ref).abs();
        let dt = (theta - t_ref).abs();
        if da > worst_alpha.0 {
            worst_alpha = (da, label.clone());
        }
        if dt > worst_theta.0 {
            worst_theta = (dt, label.clone());
        }
        if da > 0.10 {
            return Err(format!(
                "{label}: mean NMI {alpha:.4} is outside {a_ref} +/- 0.10"
            ));
        }
        if dt > 0.05 {
            return Err(format!(
                "{label}: mean sparsity {theta:.4} is outside {t_ref} +/- 0.05"
            ));
        }
    }
    Ok(format!(
        "all 27 methods within both bands in {:.1}s (worst NMI gap {:.3} at {}, worst \
         sparsity gap {:.3} at {})",
        suite.elapsed_s, worst_alpha.0, worst_alpha.1, worst_theta.0, worst_theta.1
    ))
}

fn criterion_3_rings_recovery() -> Result<String, String> {
    for dispersion in [0.0, 0.05] {
        let d = generate_rings(900, dispersion, 42).map_err(|e| e.to_string())?;
        let dm = DistanceModel::build(&d);
        for label in ["M4_Kl", "M4_Ks"] {
            let spec = spec_by_label(label);
            let (w, _) = build_w(&spec, &dm).map_err(|e| format!("{label}: {e}"))?;
            let res = spectral_cluster(&w, d.k(), 42)
                .map_err(|e| format!("{label} at dispersion {dispersion}: {e}"))?;
            if res.failed {
                return Err(format!(
                    "{label} at dispersion {dispersion}: produced {} clusters",
                    res.nc
                ));
            }
            let score = nmi(&res.labels, d.labels());
            if score != 1.0 {
                return Err(format!(
                    "{label} at dispersion {dispersion}: NMI {score} != 1.0"
                ));
            }
        }
    }
    Ok("M4 with both neighbor rules scores NMI exactly 1.0 at dispersions 0 and 0.05".into())
}

fn criterion_4_spanning_tree_oracle() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x4a57);
    for case in 0..200 {
        let n = rng.random_range(2..=7usize);
        let edges = random_connected_edges(&mut rng, n, 0.5, |r| {
            r.random_range(1..=64u32) as f64
        });
        let g = SparseGraph::from_edges(n, edges.iter().copied());
        let tree = prim(&g).map_err(|e| format!("case {case}: {e}"))?;
        let prim_weight: f64 = tree.edges().map(|(_, _, w)| w).sum();
        let best = enumerated_min_spanning_weight(n, &edges);
        // Integer weights make both sums exact, so equality is meaningful.
        if prim_weight != best {
            return Err(format!(
                "case {case} (n={n}, m={}): prim weight {prim_weight} != enumerated {best}",
                edges.len()
            ));
        }
    }
    Ok("200 random connected graphs, prim matches exhaustive enumeration exactly".into())
}

fn criterion_5_eigensolver_oracle() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xe16e);
    let mut worst = 0.0f64;
    for case in 0..100 {
        let n = rng.random_range(2..=8usize);
        let edges = random_connected_edges(&mut rng, n, 0.4, |r| r.random_range(0.05..1.0));
        let w = SimilarityMatrix::from_entries(n, edges);
        let l = NormalizedLaplacian::from_similarity(&w).map_err(|e| format!("case {case}: {e}"))?;
        let dense = l.dense();
        let a: Vec<Vec<f64>> = (0..n)
            .map(|i| dense[i * n..(i + 1) * n].to_vec())
            .collect();
        let oracle = jacobi_eigenvalues(a);
        let k = rng.random_range(1..=n);
        for (path, pairs) in [
            ("dense", top_k_eigenvectors(&l, k, 1e-10)),
            ("iterative", top_k_eigenvectors_iterative(&l, k, 1e-10)),
        ] {
            let pairs = pairs.map_err(|e| format!("case {case} ({path}): {e}"))?;
            for (c, &lambda) in pairs.eigenvalues.iter().enumerate() {
                let gap = (lambda - oracle[c]).abs();
                worst = worst.max(gap);
                if gap > 1e-8 {
                    return Err(format!(
                        "case {case} ({path}, n={n}, k={k}): eigenvalue {c} is {lambda}, \
                         oracle says {}, gap {gap:.2e}",
                        oracle[c]
                    ));
                }
            }
        }
    }
    Ok(format!(
        "100 random operators, both solver paths within 1e-8 of a Jacobi oracle \
         (worst gap {worst:.2e})"
    ))
}

fn criterion_6_index_oracles() -> Result<String, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1d1c);
    let mut worst = 0.0f64;
    for case in 0..500 {
        let n = rng.random_range(2..=10usize);
        let a: Vec<usize> = (0..n).map(|_| rng.random_range(1..=6)).collect();
        let b: Vec<usize> = (0..n).map(|_| rng.random_range(1..=6)).collect();
        let checks = [
            ("nmi", nmi(&a, &b), index_oracles::nmi(&a, &b)),
            ("purity", purity(&a, &b), index_oracles::purity(&a, &b)),
            ("rand", rand_index(&a, &b), index_oracles::rand(&a, &b)),
            (
                "ce",
                clustering_error(&a, &b),
                index_oracles::clustering_error(&a, &b),
            ),
        ];
        for (name, got, want) in checks {
            let gap = (got - want).abs();
            worst = worst.max(gap);
            if gap > 1e-12 {
                return Err(format!(
                    "case {case} ({name}, a={a:?}, b={b:?}): {got} vs oracle {want}"
                ));
            }
        }
        let exact = (nmi(&a, &a), purity(&a, &a), rand_index(&a, &a), clustering_error(&a, &a));
        if exact != (1.0, 1.0, 1.0, 0.0) {
            return Err(format!(
                "case {case}: identical partitions scored {exact:?}, expected (1, 1, 1, 0)"
            ));
        }
    }
    Ok(format!(
        "500 random pairs within 1e-12 of enumeration oracles (worst gap {worst:.2e}); \
         identical partitions score (1, 1, 1, 0) exactly"
    ))
}

/// Every dataset the sandbox can produce: the shipped UCI files plus both
/// rings-900 instances. Vote and seeds join automatically once present.
fn invariant_datasets() -> Result<Vec<Dataset>, String> {
    let mut out = Vec::new();
    let dir = uci_dir();
    type Loader = fn(&Path) -> Result<Dataset, specsim::dataset::DatasetError>;
    let loaders: [(&str, Loader); 4] = [
        ("iris.data", |p| specsim::dataset::load_uci_iris(p)),
        ("wine.data", |p| specsim::dataset::load_uci_wine(p)),
        ("house-votes-84.data", |p| specsim::dataset::load_uci_vote(p)),
        ("seeds_dataset.txt", |p| specsim::dataset::load_uci_seeds(p)),
    ];
    for (file, load) in loaders {
        let path = dir.join(file);
        if path.is_file() {
            out.push(load(&path).map_err(|e| format!("{file}: {e}"))?);
        }
    }
    for dispersion in [0.0, 0.05] {
        out.push(generate_rings(900, dispersion, 42).map_err(|e| e.to_string())?);
    }
    Ok(out)
}

fn criterion_7_structural_invariants() -> Result<String, String> {
    let datasets = invariant_datasets()?;
    let methods = MethodSpec::catalog();
    let mut cells = 0usize;
    for d in &datasets {
        let name = d.name();
        let dm = DistanceModel::build(d);
        let n = d.n();
        for spec in &methods {
            let label = spec.label();
            let at = |msg: String| format!("{label} on {name}: {msg}");
            let (w, _) = build_w(spec, &dm).map_err(|e| at(e.to_string()))?;
            for (i, j, wij) in w.entries() {
                if !(wij >= STORE_EPS && wij <= 1.0) {
                    return Err(at(format!("stored entry ({i},{j}) = {wij} outside (0,1]")));
                }
                if w.get(j as usize, i as usize) != wij {
                    return Err(at(format!("asymmetry at ({i},{j})")));
                }
            }
            for i in 0..n {
                if w.get(i, i) != 0.0 {
                    return Err(at(format!("nonzero diagonal at {i}")));
                }
            }
            let l = NormalizedLaplacian::from_similarity(&w).map_err(|e| at(e.to_string()))?;
            let pairs = top_k_eigenvectors(&l, d.k(), 1e-9).map_err(|e| at(e.to_string()))?;
            for &lambda in &pairs.eigenvalues {
                if !(-1.0 - 1e-10..=1.0 + 1e-10).contains(&lambda) {
                    return Err(at(format!("eigenvalue {lambda} outside [-1, 1]")));
                }
            }
            let emb = row_normalize(&pairs).map_err(|e| at(e.to_string()))?;
            for i in 0..n {
                let norm: f64 = emb.row(i).iter().map(|v| v * v).sum::<f64>().sqrt();
                if (norm - 1.0).abs() > 1e-10 {
                    return Err(at(format!("embedding row {i} has norm {norm}")));
                }
            }
            cells += 1;
        }

        // Graph-layer invariants are per (family, K), shared by variants.
        let (kl, ks) = k_rules(n);
        for k in [kl, ks] {
            let mutual = build_knn(&dm, k, true);
            let non_mutual = build_knn(&dm, k, false);
            for (i, j, _) in mutual.edges() {
                if !non_mutual.has_edge(i as usize, j as usize) {
                    return Err(format!(
                        "{name} at K={k}: mutual edge ({i},{j}) missing from non-mutual graph"
                    ));
                }
            }
            let (eps_graph, _) = build_epsilon(&dm, k);
            for g in [eps_graph, non_mutual, mutual] {
                let (agg, _) = aggregate_components(&g, &dm);
                if !agg.is_connected() {
                    return Err(format!("{name} at K={k}: aggregated graph is disconnected"));
                }
            }
        }
    }
    let names: Vec<&str> = datasets.iter().map(|d| d.name()).collect();
    Ok(format!(
        "zero violations over {cells} method x dataset cells ({})",
        names.join(", ")
    ))
}

fn criterion_8_sparsity_ordering(suite: &SuiteRun) -> Result<String, String> {
    if STORE_EPS != 2.0f64.powi(-52) {
        return Err(format!("storage threshold is {STORE_EPS:e}, not 2^-52"));
    }
    let theta_of = |dataset: &str, label: &str| -> f64 {
        suite
            .report
            .runs
            .iter()
            .find(|r| r.dataset == dataset && r.method.label() == label)
            .map(|r| r.theta)
            .unwrap()
    };
    let datasets: Vec<String> = suite.report.sets[0].datasets.clone();
    let mut comparisons = 0usize;
    let mut mn_violations: Vec<String> = Vec::new();
    let mut ne_violations: Vec<String> = Vec::new();
    for dataset in &datasets {
        for rule in ["Kl", "Ks"] {
            for v in 1..=4 {
                let te = theta_of(dataset, &format!("E{v}_{rule}"));
                let tn = theta_of(dataset, &format!("N{v}_{rule}"));
                let tm = theta_of(dataset, &format!("M{v}_{rule}"));
                comparisons += 2;
                if tm < tn {
                    mn_violations.push(format!(
                        "{dataset} {rule} variant {v}: M={tm:.4} < N={tn:.4}"
                    ));
                }
                if tn < te {
                    ne_violations.push(format!(
                        "{dataset} {rule} variant {v}: N={tn:.4} < E={te:.4}"
                    ));
                }
            }
        }
    }
    if !mn_violations.is_empty() || !ne_violations.is_empty() {
        // M >= N is structural (mutual arcs are a subset of non-mutual
        // ones); N >= E is not, because epsilon is the mean of K-th
        // neighbor distances, so a dataset can put more mass inside the
        // mean radius than its kNN arcs cover.
        let mut msg = format!(
            "{}/{} comparisons violated",
            mn_violations.len() + ne_violations.len(),
            comparisons
        );
        if mn_violations.is_empty() {
            msg.push_str("; M >= N held everywhere");
        } else {
            write!(msg, "; M >= N broke at {}", mn_violations.join("; ")).unwrap();
        }
        if !ne_violations.is_empty() {
            write!(
                msg,
                "; N >= E broke at {} (a property of the mean-based epsilon rule on this \
                 data, not of the seed)",
                ne_violations.join("; ")
            )
            .unwrap();
        }
        if !suite.missing.is_empty() {
            write!(msg, "; note {} are missing", suite.missing.join(", ")).unwrap();
        }
        return Err(msg);
    }
    if !suite.missing.is_empty() {
        return Err(format!(
            "ordering holds on {} ({} comparisons, zero violations) but the criterion \
             covers the full suite; missing {} (see data/README.md)",
            datasets.join(", "),
            comparisons,
            suite.missing.join(", "),
        ));
    }
    Ok(format!(
        "threshold is 2^-52 and M >= N >= E holds in all {comparisons} comparisons \
         across {} datasets",
        datasets.len()
    ))
}

fn criterion_9_determinism() -> Result<String, String> {
    let cfg = ExperimentConfig::from_str_checked(&uci_config_text())
        .map_err(|e| format!("suite config rejected: {e}"))?;
    let dirs = [
        tempfile::tempdir().map_err(|e| e.to_string())?,
        tempfile::tempdir().map_err(|e| e.to_string())?,
    ];
    let mut emitted: Vec<Vec<PathBuf>> = Vec::new();
    for dir in &dirs {
        let report = run_experiment(&cfg).map_err(|e| format!("suite run failed: {e}"))?;
        emitted.push(
            specsim::harness::emit_reports(&report, dir.path()).map_err(|e| e.to_string())?,
        );
    }
    let names = |paths: &[PathBuf]| -> Vec<String> {
        paths
            .iter()
            .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
            .collect()
    };
    let (first, second) = (names(&emitted[0]), names(&emitted[1]));
    if first != second {
        return Err(format!("runs emitted different files: {first:?} vs {second:?}"));
    }
    let mut compared = Vec::new();
    for name in &first {
        if name == "timings.csv" {
            // Wall-clock diagnostics are the one deliberately unstable output.
            continue;
        }
        let a = std::fs::read(dirs[0].path().join(name)).map_err(|e| e.to_string())?;
        let b = std::fs::read(dirs[1].path().join(name)).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("{name} differs between identical runs"));
        }
        compared.push(name.clone());
    }
    let missing = missing_uci_files();
    if !missing.is_empty() {
        return Err(format!(
            "repeated runs are byte-identical on the available subset ({}) but the \
             criterion covers the full suite; missing {} (see data/README.md)",
            compared.join(", "),
            missing.join(", "),
        ));
    }
    Ok(format!(
        "repeated suite runs produce byte-identical {}",
        compared.join(", ")
    ))
}

#[test]
fn acceptance_criteria() {
    let mut failures: Vec<usize> = Vec::new();
    let mut verdict = |num: usize, name: &str, res: Result<String, String>| match res {
        Ok(detail) => println!("criterion {num} ({name}): PASS - {detail}"),
        Err(msg) => {
            println!("criterion {num} ({name}): FAIL - {msg}");
            failures.push(num);
        }
    };

    verdict(1, "method catalog", criterion_1_method_catalog());

    let suite = run_uci_suite();
    match &suite {
        Ok(s) => {
            verdict(2, "UCI reference bands", criterion_2_uci_bands(s));
        }
        Err(e) => verdict(2, "UCI reference bands", Err(e.clone())),
    }

    verdict(3, "rings recovery", criterion_3_rings_recovery());
    verdict(4, "spanning tree oracle", criterion_4_spanning_tree_oracle());
    verdict(5, "eigensolver oracle", criterion_5_eigensolver_oracle());
    verdict(6, "index oracles", criterion_6_index_oracles());
    verdict(7, "structural invariants", criterion_7_structural_invariants());

    match &suite {
        Ok(s) => verdict(8, "sparsity ordering", criterion_8_sparsity_ordering(s)),
        Err(e) => verdict(8, "sparsity ordering", Err(e.clone())),
    }

    verdict(9, "determinism", criterion_9_determinism());

    assert!(
        failures.is_empty(),
        "acceptance criteria failed: {failures:?} (see the verdict lines above)"
    );
}
