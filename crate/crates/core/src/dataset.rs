//! Labeled point sets: CSV loaders, UCI adapters, the interlacing-rings
//! generator and diameter normalization.

use std::collections::HashMap;
use std::fs;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("cannot read {path}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("points {0} and {1} are identical; points must be pairwise distinct")]
    DuplicatePoints(usize, usize),
    #[error("dataset needs at least 2 points, got {0}")]
    TooFewPoints(usize),
    #[error("labels describe {0} cluster(s); at least 2 are required")]
    TooFewClusters(usize),
    #[error("unknown category token {0:?}")]
    UnknownCategory(String),
    #[error("ring generator needs an even point count >= 4, got {0}")]
    BadRingCount(usize),
    #[error("dispersion must be nonnegative, got {0}")]
    NegativeDispersion(f64),
    #[error("inconsistent row width at row {row}: expected {expected}, got {got}")]
    RaggedRow {
        row: usize,
        expected: usize,
        got: usize,
    },
}

/// A labeled point set: n points in R^m with target cluster ids in 1..=k.
#[derive(Debug, Clone)]
pub struct Dataset {
    name: String,
    /// Row-major n x m coordinate matrix.
    points: Vec<f64>,
    n: usize,
    m: usize,
    /// Target labels, remapped to 1..=k in order of first appearance.
    labels: Vec<usize>,
    k: usize,
}

impl Dataset {
    /// Builds a dataset from coordinate rows and already-remapped labels
    /// (values in 1..=k, every cluster nonempty). Enforces the invariants:
    /// n >= 2, at least 2 clusters, all points pairwise distinct.
    pub fn from_rows(
        name: impl Into<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
    ) -> Result<Self, DatasetError> {
        Self::build(name, rows, labels, false)
    }

    /// Like [`from_rows`](Self::from_rows) but admits bitwise-identical
    /// points. The canonical UCI sources need this: iris repeats one
    /// virginica row and the congressional voting records contain identical
    /// straight-ticket ballots. Zero pairwise distances are handled by the
    /// rest of the pipeline.
    pub fn from_rows_allowing_duplicates(
        name: impl Into<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
    ) -> Result<Self, DatasetError> {
        Self::build(name, rows, labels, true)
    }

    fn build(
        name: impl Into<String>,
        rows: Vec<Vec<f64>>,
        labels: Vec<usize>,
        allow_duplicates: bool,
    ) -> Result<Self, DatasetError> {
        let n = rows.len();
        if n < 2 {
            return Err(DatasetError::TooFewPoints(n));
        }
        assert_eq!(n, labels.len(), "one label per point");
        let m = rows[0].len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != m {
                return Err(DatasetError::RaggedRow {
                    row: i,
                    expected: m,
                    got: r.len(),
                });
            }
        }

        if !allow_duplicates {
            // Exact-duplicate detection via bitwise row keys.
            let mut seen: HashMap<Vec<u64>, usize> = HashMap::with_capacity(n);
            for (i, r) in rows.iter().enumerate() {
                let key: Vec<u64> = r.iter().map(|x| x.to_bits()).collect();
                if let Some(&j) = seen.get(&key) {
                    return Err(DatasetError::DuplicatePoints(j, i));
                }
                seen.insert(key, i);
            }
        }

        let k = *labels.iter().max().expect("nonempty");
        if k < 2 {
            return Err(DatasetError::TooFewClusters(k));
        }
        let mut counts = vec![0usize; k + 1];
        for &l in &labels {
            assert!(l >= 1 && l <= k, "label {l} out of range 1..={k}");
            counts[l] += 1;
        }
        debug_assert!(counts[1..].iter().all(|&c| c > 0));

        let mut points = Vec::with_capacity(n * m);
        for r in &rows {
            points.extend_from_slice(r);
        }
        Ok(Dataset {
            name: name.into(),
            points,
            n,
            m,
            labels,
            k,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Coordinate dimension.
    pub fn dim(&self) -> usize {
        self.m
    }

    /// Expected number of clusters.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.m..(i + 1) * self.m]
    }

    pub fn labels(&self) -> &[usize] {
        &self.labels
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
}

/// Remaps arbitrary label tokens to 1..=k in order of first appearance.
pub fn remap_labels<T: std::hash::Hash + Eq + Clone>(raw: &[T]) -> (Vec<usize>, usize) {
    let mut ids: HashMap<T, usize> = HashMap::new();
    let mut out = Vec::with_capacity(raw.len());
    for t in raw {
        let next = ids.len() + 1;
        let id = *ids.entry(t.clone()).or_insert(next);
        out.push(id);
    }
    (out, ids.len())
}

/// Which column of a delimited file carries the label.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LabelColumn {
    First,
    Last,
    Index(usize),
}

/// Column layout of a point-set CSV: coordinate columns plus one label column.
#[derive(Debug, Clone)]
pub struct CsvSchema {
    pub has_header: bool,
    pub label_column: LabelColumn,
    pub delimiter: char,
}

impl Default for CsvSchema {
    fn default() -> Self {
        CsvSchema {
            has_header: false,
            label_column: LabelColumn::Last,
            delimiter: ',',
        }
    }
}

fn read_lines(path: &Path) -> Result<Vec<(usize, String)>, DatasetError> {
    let text = fs::read_to_string(path).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Ok(text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim().to_string()))
        .filter(|(_, l)| !l.is_empty())
        .collect())
}

/// Loads a delimited text file of coordinate columns plus one label column.
/// Rows keep file order; labels are remapped to 1..=k by first appearance.
pub fn load_csv(path: impl AsRef<Path>, schema: &CsvSchema) -> Result<Dataset, DatasetError> {
    load_csv_impl(path.as_ref(), schema, false)
}

fn load_csv_impl(
    path: &Path,
    schema: &CsvSchema,
    allow_duplicates: bool,
) -> Result<Dataset, DatasetError> {
    let mut lines = read_lines(path)?;
    if schema.has_header && !lines.is_empty() {
        lines.remove(0);
    }

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut raw_labels: Vec<String> = Vec::new();
    let mut width: Option<usize> = None;
    for (lineno, line) in &lines {
        let fields: Vec<&str> = line.split(schema.delimiter).map(str::trim).collect();
        let w = *width.get_or_insert(fields.len());
        if fields.len() != w {
            return Err(DatasetError::RaggedRow {
                row: *lineno,
                expected: w,
                got: fields.len(),
            });
        }
        if w < 2 {
            return Err(DatasetError::Parse {
                line: *lineno,
                msg: "need at least one coordinate column and one label column".into(),
            });
        }
        let label_idx = match schema.label_column {
            LabelColumn::First => 0,
            LabelColumn::Last => w - 1,
            LabelColumn::Index(i) => i,
        };
        if label_idx >= w {
            return Err(DatasetError::Parse {
                line: *lineno,
                msg: format!("label column {label_idx} out of range for {w} columns"),
            });
        }
        let mut coords = Vec::with_capacity(w - 1);
        for (c, field) in fields.iter().enumerate() {
            if c == label_idx {
                raw_labels.push(field.to_string());
            } else {
                let v: f64 = field.parse().map_err(|_| DatasetError::Parse {
                    line: *lineno,
                    msg: format!("cannot parse {field:?} as a coordinate"),
                })?;
                coords.push(v);
            }
        }
        rows.push(coords);
    }

    let (labels, k) = remap_labels(&raw_labels);
    if k < 2 {
        return Err(DatasetError::TooFewClusters(k));
    }
    let name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    if allow_duplicates {
        Dataset::from_rows_allowing_duplicates(name, rows, labels)
    } else {
        Dataset::from_rows(name, rows, labels)
    }
}

/// One congressional voting record: a party label and 16 categorical votes.
#[derive(Debug, Clone)]
pub struct VoteRecord {
    pub party: String,
    pub votes: [Vote; 16],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Vote {
    Yes,
    No,
    Missing,
}

impl Vote {
    pub fn parse(tok: &str) -> Result<Self, DatasetError> {
        match tok.trim().to_ascii_lowercase().as_str() {
            "y" | "yes" => Ok(Vote::Yes),
            "n" | "no" => Ok(Vote::No),
            "?" | "missing" => Ok(Vote::Missing),
            other => Err(DatasetError::UnknownCategory(other.to_string())),
        }
    }

    /// yes -> 1.0, no -> 0.0, missing -> 0.5 (kept equidistant from both).
    pub fn encode(self) -> f64 {
        match self {
            Vote::Yes => 1.0,
            Vote::No => 0.0,
            Vote::Missing => 0.5,
        }
    }
}

/// Encodes categorical voting records as points in R^16 with party labels.
pub fn encode_vote(records: &[VoteRecord]) -> Result<Dataset, DatasetError> {
    let rows: Vec<Vec<f64>> = records
        .iter()
        .map(|r| r.votes.iter().map(|v| v.encode()).collect())
        .collect();
    let parties: Vec<&str> = records.iter().map(|r| r.party.as_str()).collect();
    let (labels, k) = remap_labels(&parties);
    if k < 2 {
        return Err(DatasetError::TooFewClusters(k));
    }
    // Straight-ticket ballots coincide, so duplicates are expected here.
    Dataset::from_rows_allowing_duplicates("vote", rows, labels)
}

/// Adapter for the UCI `house-votes-84.data` raw format:
/// `party,v1,...,v16` with votes in {y,n,?}.
pub fn load_uci_vote(path: impl AsRef<Path>) -> Result<Dataset, DatasetError> {
    let lines = read_lines(path.as_ref())?;
    let mut records = Vec::with_capacity(lines.len());
    for (lineno, line) in &lines {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 17 {
            return Err(DatasetError::RaggedRow {
                row: *lineno,
                expected: 17,
                got: fields.len(),
            });
        }
        let mut votes = [Vote::Missing; 16];
        for (i, tok) in fields[1..].iter().enumerate() {
            votes[i] = Vote::parse(tok)?;
        }
        records.push(VoteRecord {
            party: fields[0].to_string(),
            votes,
        });
    }
    encode_vote(&records)
}

/// Adapter for the UCI `iris.data` raw format: 4 coordinates, species last.
/// The canonical file repeats one virginica row, hence the duplicate
/// tolerance.
pub fn load_uci_iris(path: impl AsRef<Path>) -> Result<Dataset, DatasetError> {
    load_csv_impl(path.as_ref(), &CsvSchema::default(), true).map(|d| d.with_name("iris"))
}

/// Adapter for the UCI `wine.data` raw format: cultivar id first, then 13
/// chemical attributes.
pub fn load_uci_wine(path: impl AsRef<Path>) -> Result<Dataset, DatasetError> {
    let schema = CsvSchema {
        label_column: LabelColumn::First,
        ..CsvSchema::default()
    };
    load_csv_impl(path.as_ref(), &schema, true).map(|d| d.with_name("wine"))
}

/// Adapter for the UCI `seeds_dataset.txt` raw format: whitespace-delimited,
/// 7 geometric attributes plus a variety id (the file has irregular tabs).
pub fn load_uci_seeds(path: impl AsRef<Path>) -> Result<Dataset, DatasetError> {
    let lines = read_lines(path.as_ref())?;
    let mut rows = Vec::with_capacity(lines.len());
    let mut raw_labels = Vec::with_capacity(lines.len());
    for (lineno, line) in &lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 8 {
            return Err(DatasetError::RaggedRow {
                row: *lineno,
                expected: 8,
                got: fields.len(),
            });
        }
        let mut coords = Vec::with_capacity(7);
        for f in &fields[..7] {
            coords.push(f.parse::<f64>().map_err(|_| DatasetError::Parse {
                line: *lineno,
                msg: format!("cannot parse {f:?} as a coordinate"),
            })?);
        }
        rows.push(coords);
        raw_labels.push(fields[7].to_string());
    }
    let (labels, k) = remap_labels(&raw_labels);
    if k < 2 {
        return Err(DatasetError::TooFewClusters(k));
    }
    Dataset::from_rows_allowing_duplicates("seeds", rows, labels)
}

/// Generates two interlacing rings in R^3: ring A of radius 1 in the
/// xy-plane centered at the origin, ring B of radius 1 in the xz-plane
/// centered at (1,0,0), so each ring passes through the other's center.
/// Half the points go on each ring at uniform angles, perturbed by isotropic
/// Gaussian noise with standard deviation `dispersion`. Deterministic for a
/// fixed seed.
pub fn generate_rings(n_total: usize, dispersion: f64, seed: u64) -> Result<Dataset, DatasetError> {
    if n_total < 4 || n_total % 2 != 0 {
        return Err(DatasetError::BadRingCount(n_total));
    }
    if dispersion < 0.0 {
        return Err(DatasetError::NegativeDispersion(dispersion));
    }
    let per_ring = n_total / 2;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = |rng: &mut ChaCha8Rng| -> f64 {
        if dispersion == 0.0 {
            0.0
        } else {
            let z: f64 = StandardNormal.sample(rng);
            z * dispersion
        }
    };

    let mut rows = Vec::with_capacity(n_total);
    let mut labels = Vec::with_capacity(n_total);
    for i in 0..per_ring {
        let theta = 2.0 * std::f64::consts::PI * (i as f64) / (per_ring as f64);
        rows.push(vec![
            theta.cos() + noise(&mut rng),
            theta.sin() + noise(&mut rng),
            noise(&mut rng),
        ]);
        labels.push(1);
    }
    for i in 0..per_ring {
        let phi = 2.0 * std::f64::consts::PI * (i as f64) / (per_ring as f64);
        rows.push(vec![
            1.0 + phi.cos() + noise(&mut rng),
            noise(&mut rng),
            phi.sin() + noise(&mut rng),
        ]);
        labels.push(2);
    }
    let name = format!("rings_n{n_total}_d{dispersion}");
    Dataset::from_rows(name, rows, labels)
}

/// Rescales a dataset so the maximum pairwise distance equals 1, after
/// translating coordinates to the centroid. Labels are unchanged.
pub fn normalize_diameter(d: &Dataset) -> Dataset {
    let (n, m) = (d.n(), d.dim());
    let mut centroid = vec![0.0; m];
    for i in 0..n {
        for (c, x) in d.point(i).iter().enumerate() {
            centroid[c] += x;
        }
    }
    for c in centroid.iter_mut() {
        *c /= n as f64;
    }

    let mut max_sq = 0.0f64;
    for i in 0..n {
        let pi = d.point(i);
        for j in (i + 1)..n {
            let pj = d.point(j);
            let sq: f64 = pi
                .iter()
                .zip(pj)
                .map(|(a, b)| (a - b) * (a - b))
                .sum();
            if sq > max_sq {
                max_sq = sq;
            }
        }
    }
    let scale = 1.0 / max_sq.sqrt();

    let rows: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            d.point(i)
                .iter()
                .zip(&centroid)
                .map(|(x, c)| (x - c) * scale)
                .collect()
        })
        .collect();
    Dataset::from_rows(d.name().to_string(), rows, d.labels().to_vec())
        .expect("rescaling preserves dataset invariants")
}

/// Writes a dataset as comma-delimited coordinates with the label in the
/// last column, the layout [`load_csv`] reads back with the default schema.
pub fn write_csv(d: &Dataset, path: impl AsRef<Path>) -> Result<(), DatasetError> {
    use std::fmt::Write as _;
    let mut out = String::new();
    for i in 0..d.n() {
        for x in d.point(i) {
            write!(out, "{x},").unwrap();
        }
        writeln!(out, "{}", d.labels()[i]).unwrap();
    }
    let path = path.as_ref();
    fs::write(path, out).map_err(|source| DatasetError::Io {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn dist(a: &[f64], b: &[f64]) -> f64 {
        a.iter()
            .zip(b)
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    fn write_temp(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    #[test]
    fn csv_four_rows_two_clusters() {
        let f = write_temp("0.0,0.0,a\n1.0,0.0,a\n5.0,5.0,b\n6.0,5.0,b\n");
        let d = load_csv(f.path(), &CsvSchema::default()).unwrap();
        assert_eq!(d.n(), 4);
        assert_eq!(d.k(), 2);
        assert_eq!(d.labels(), &[1, 1, 2, 2]);
        assert_eq!(d.dim(), 2);
    }

    #[test]
    fn csv_duplicate_rows_rejected() {
        let f = write_temp("1.0,2.0,a\n1.0,2.0,b\n3.0,4.0,b\n");
        match load_csv(f.path(), &CsvSchema::default()) {
            Err(DatasetError::DuplicatePoints(0, 1)) => {}
            other => panic!("expected duplicate-point error, got {other:?}"),
        }
    }

    #[test]
    fn uci_adapters_accept_canonical_duplicates() {
        // iris repeats one virginica row; the adapter must load it anyway
        // while the general-purpose loader keeps rejecting duplicates.
        let f = write_temp(
            "5.8,2.7,5.1,1.9,Iris-virginica\n5.8,2.7,5.1,1.9,Iris-virginica\n5.1,3.5,1.4,0.2,Iris-setosa\n",
        );
        let d = load_uci_iris(f.path()).unwrap();
        assert_eq!(d.n(), 3);
        assert_eq!(d.name(), "iris");
        assert!(matches!(
            load_csv(f.path(), &CsvSchema::default()),
            Err(DatasetError::DuplicatePoints(0, 1))
        ));
    }

    #[test]
    fn csv_single_cluster_rejected() {
        let f = write_temp("1.0,a\n2.0,a\n");
        assert!(matches!(
            load_csv(f.path(), &CsvSchema::default()),
            Err(DatasetError::TooFewClusters(1))
        ));
    }

    #[test]
    fn csv_malformed_row_rejected() {
        let f = write_temp("1.0,2.0,a\nnot_a_number,2.0,b\n");
        assert!(matches!(
            load_csv(f.path(), &CsvSchema::default()),
            Err(DatasetError::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn vote_encoding_maps_categories() {
        let all_yes = VoteRecord {
            party: "r".into(),
            votes: [Vote::Yes; 16],
        };
        let all_missing = VoteRecord {
            party: "d".into(),
            votes: [Vote::Missing; 16],
        };
        let all_no = VoteRecord {
            party: "d".into(),
            votes: [Vote::No; 16],
        };
        let d = encode_vote(&[all_yes, all_missing, all_no]).unwrap();
        assert_eq!(d.point(0), &[1.0; 16]);
        assert_eq!(d.point(1), &[0.5; 16]);
        assert_eq!(d.point(2), &[0.0; 16]);
        assert_eq!(d.labels(), &[1, 2, 2]);
    }

    #[test]
    fn vote_unknown_token_rejected() {
        assert!(matches!(
            Vote::parse("abstain"),
            Err(DatasetError::UnknownCategory(_))
        ));
    }

    #[test]
    fn rings_noiseless_points_lie_on_circles() {
        let d = generate_rings(900, 0.0, 3).unwrap();
        assert_eq!(d.n(), 900);
        assert_eq!(d.k(), 2);
        for i in 0..d.n() {
            let p = d.point(i);
            let residual = if d.labels()[i] == 1 {
                // ring A: unit circle in the xy-plane at the origin
                let r = (p[0] * p[0] + p[1] * p[1]).sqrt();
                ((r - 1.0).powi(2) + p[2] * p[2]).sqrt()
            } else {
                // ring B: unit circle in the xz-plane at (1,0,0)
                let r = ((p[0] - 1.0) * (p[0] - 1.0) + p[2] * p[2]).sqrt();
                ((r - 1.0).powi(2) + p[1] * p[1]).sqrt()
            };
            assert!(residual < 1e-12, "point {i} off its ring by {residual}");
        }
        // The ideal rings come no closer than the ring radius.
        let mut min_inter = f64::INFINITY;
        for i in 0..d.n() {
            for j in 0..d.n() {
                if d.labels()[i] != d.labels()[j] {
                    min_inter = min_inter.min(dist(d.point(i), d.point(j)));
                }
            }
        }
        assert!(min_inter > 0.9, "inter-ring distance {min_inter}");
    }

    #[test]
    fn rings_four_points() {
        // sin(pi) evaluates to ~1.2e-16, so compare against the ideal
        // positions with a tolerance instead of bitwise.
        let d = generate_rings(4, 0.0, 11).unwrap();
        let ideal = [
            [1.0, 0.0, 0.0],
            [-1.0, 0.0, 0.0],
            [2.0, 0.0, 0.0],
            [0.0, 0.0, 0.0],
        ];
        for (i, want) in ideal.iter().enumerate() {
            for (a, b) in d.point(i).iter().zip(want) {
                assert!((a - b).abs() < 1e-15, "point {i}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn rings_deterministic_for_seed() {
        let a = generate_rings(900, 0.05, 7).unwrap();
        let b = generate_rings(900, 0.05, 7).unwrap();
        for i in 0..a.n() {
            assert_eq!(a.point(i), b.point(i));
        }
        assert_eq!(a.labels(), b.labels());
    }

    #[test]
    fn rings_odd_count_rejected() {
        assert!(matches!(
            generate_rings(901, 0.0, 0),
            Err(DatasetError::BadRingCount(901))
        ));
    }

    #[test]
    fn normalize_diameter_line() {
        let d = Dataset::from_rows(
            "line",
            vec![vec![0.0], vec![2.0]],
            vec![1, 2],
        )
        .unwrap();
        let nd = normalize_diameter(&d);
        assert!((dist(nd.point(0), nd.point(1)) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn normalize_diameter_unit_square() {
        let d = Dataset::from_rows(
            "square",
            vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![0.0, 1.0],
                vec![1.0, 1.0],
            ],
            vec![1, 1, 2, 2],
        )
        .unwrap();
        let nd = normalize_diameter(&d);
        let diag = dist(nd.point(0), nd.point(3));
        let side = dist(nd.point(0), nd.point(1));
        assert!((diag - 1.0).abs() < 1e-12);
        assert!((side - 1.0 / 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn normalize_diameter_idempotent() {
        let d = generate_rings(60, 0.02, 5).unwrap();
        let once = normalize_diameter(&d);
        let twice = normalize_diameter(&once);
        for i in 0..d.n() {
            for (a, b) in once.point(i).iter().zip(twice.point(i)) {
                assert!((a - b).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn seeds_format_irregular_tabs() {
        let f = write_temp("15.26\t14.84\t0.871\t5.763\t3.312\t2.221\t5.22\t1\n14.1\t14.2\t\t0.9\t5.5\t3.3\t2.2\t5.1\t2\n");
        let d = load_uci_seeds(f.path()).unwrap();
        assert_eq!(d.n(), 2);
        assert_eq!(d.dim(), 7);
        assert_eq!(d.labels(), &[1, 2]);
    }

    #[test]
    fn csv_round_trip_is_exact() {
        let d = generate_rings(20, 0.07, 13).unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("rings.csv");
        write_csv(&d, &path).unwrap();
        let back = load_csv(&path, &CsvSchema::default()).unwrap();
        assert_eq!(back.n(), d.n());
        assert_eq!(back.labels(), d.labels());
        for i in 0..d.n() {
            assert_eq!(back.point(i), d.point(i), "row {i} drifted");
        }
    }
}
