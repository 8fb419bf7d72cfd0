//! Python bindings for the specsim library.
//!
//! Exposes the dataset loaders, the 27-method similarity catalog, the
//! spectral clustering pipeline, the external evaluation indices, and the
//! config-driven benchmark harness as a `specsim_rs` extension module.

use pyo3::exceptions::{PyIOError, PyIndexError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyDict;

use specsim::dataset::{self, CsvSchema, Dataset, LabelColumn};
use specsim::evaluation;
use specsim::harness::{emit_reports, run_experiment, ExperimentConfig};
use specsim::metric::DistanceModel;
use specsim::similarity::{build_w, MethodSpec, SigmaReport, SimilarityMatrix};
use specsim::spectral::{spectral_cluster_with, Discretization, SpectralOptions};

fn chain_string(e: &dyn std::error::Error) -> String {
    let mut s = e.to_string();
    let mut cause = e.source();
    while let Some(c) = cause {
        s.push_str(": ");
        s.push_str(&c.to_string());
        cause = c.source();
    }
    s
}

fn val_err(e: impl std::error::Error) -> PyErr {
    PyValueError::new_err(chain_string(&e))
}

fn io_err(e: impl std::error::Error) -> PyErr {
    PyIOError::new_err(chain_string(&e))
}

fn parse_method(label: &str) -> PyResult<MethodSpec> {
    label.parse::<MethodSpec>().map_err(val_err)
}

fn parse_label_column(s: &str) -> PyResult<LabelColumn> {
    match s {
        "first" => Ok(LabelColumn::First),
        "last" => Ok(LabelColumn::Last),
        other => other
            .parse::<usize>()
            .map(LabelColumn::Index)
            .map_err(|_| PyValueError::new_err(format!("label_column must be 'first', 'last', or a column index, got '{other}'"))),
    }
}

fn parse_discretization(s: &str) -> PyResult<Discretization> {
    match s {
        "rotation" => Ok(Discretization::Rotation),
        "kmeans" => Ok(Discretization::KMeans),
        other => Err(PyValueError::new_err(format!(
            "discretization must be 'rotation' or 'kmeans', got '{other}'"
        ))),
    }
}

/// A labeled point set.
#[pyclass(name = "Dataset", module = "specsim_rs", frozen)]
struct PyDataset {
    inner: Dataset,
}

#[pymethods]
impl PyDataset {
    #[new]
    #[pyo3(signature = (points, labels, name = "dataset"))]
    fn new(points: Vec<Vec<f64>>, labels: Vec<usize>, name: &str) -> PyResult<Self> {
        Dataset::from_rows(name, points, labels)
            .map(|inner| PyDataset { inner })
            .map_err(val_err)
    }

    /// Two interlacing unit rings in R^3 with optional Gaussian jitter.
    #[staticmethod]
    #[pyo3(signature = (n, dispersion = 0.0, seed = 42))]
    fn rings(n: usize, dispersion: f64, seed: u64) -> PyResult<Self> {
        dataset::generate_rings(n, dispersion, seed)
            .map(|inner| PyDataset { inner })
            .map_err(val_err)
    }

    /// Numeric CSV with one label column.
    #[staticmethod]
    #[pyo3(signature = (path, has_header = false, label_column = "last", delimiter = ','))]
    fn load_csv(path: &str, has_header: bool, label_column: &str, delimiter: char) -> PyResult<Self> {
        let schema = CsvSchema {
            has_header,
            label_column: parse_label_column(label_column)?,
            delimiter,
        };
        dataset::load_csv(path, &schema)
            .map(|inner| PyDataset { inner })
            .map_err(io_err)
    }

    #[staticmethod]
    fn load_uci_iris(path: &str) -> PyResult<Self> {
        dataset::load_uci_iris(path)
            .map(|inner| PyDataset { inner })
            .map_err(io_err)
    }

    #[staticmethod]
    fn load_uci_wine(path: &str) -> PyResult<Self> {
        dataset::load_uci_wine(path)
            .map(|inner| PyDataset { inner })
            .map_err(io_err)
    }

    #[staticmethod]
    fn load_uci_vote(path: &str) -> PyResult<Self> {
        dataset::load_uci_vote(path)
            .map(|inner| PyDataset { inner })
            .map_err(io_err)
    }

    #[staticmethod]
    fn load_uci_seeds(path: &str) -> PyResult<Self> {
        dataset::load_uci_seeds(path)
            .map(|inner| PyDataset { inner })
            .map_err(io_err)
    }

    #[getter]
    fn name(&self) -> &str {
        self.inner.name()
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn k(&self) -> usize {
        self.inner.k()
    }

    #[getter]
    fn labels(&self) -> Vec<usize> {
        self.inner.labels().to_vec()
    }

    fn point(&self, i: usize) -> PyResult<Vec<f64>> {
        if i >= self.inner.n() {
            return Err(PyIndexError::new_err(format!(
                "point index {i} out of range for n={}",
                self.inner.n()
            )));
        }
        Ok(self.inner.point(i).to_vec())
    }

    fn points(&self) -> Vec<Vec<f64>> {
        (0..self.inner.n()).map(|i| self.inner.point(i).to_vec()).collect()
    }

    /// Copy rescaled so the largest pairwise distance is 1.
    fn normalize_diameter(&self) -> Self {
        PyDataset {
            inner: dataset::normalize_diameter(&self.inner),
        }
    }

    fn write_csv(&self, path: &str) -> PyResult<()> {
        dataset::write_csv(&self.inner, path).map_err(io_err)
    }

    fn __len__(&self) -> usize {
        self.inner.n()
    }

    fn __repr__(&self) -> String {
        format!(
            "Dataset(name='{}', n={}, dim={}, k={})",
            self.inner.name(),
            self.inner.n(),
            self.inner.dim(),
            self.inner.k()
        )
    }
}

/// A symmetric sparse similarity matrix with unit diagonal implied absent.
#[pyclass(name = "SimilarityMatrix", module = "specsim_rs", frozen)]
struct PySimilarityMatrix {
    inner: SimilarityMatrix,
}

#[pymethods]
impl PySimilarityMatrix {
    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn stored_nonzeros(&self) -> usize {
        self.inner.stored_nonzeros()
    }

    #[getter]
    fn sparsity_level(&self) -> f64 {
        self.inner.sparsity_level()
    }

    fn get(&self, i: usize, j: usize) -> PyResult<f64> {
        let n = self.inner.n();
        if i >= n || j >= n {
            return Err(PyIndexError::new_err(format!(
                "entry ({i}, {j}) out of range for n={n}"
            )));
        }
        Ok(self.inner.get(i, j))
    }

    fn row(&self, i: usize) -> PyResult<Vec<(usize, f64)>> {
        if i >= self.inner.n() {
            return Err(PyIndexError::new_err(format!(
                "row {i} out of range for n={}",
                self.inner.n()
            )));
        }
        Ok(self.inner.row(i).iter().map(|&(j, w)| (j as usize, w)).collect())
    }

    /// Upper-triangle entries as (i, j, w) with i < j.
    fn entries(&self) -> Vec<(usize, usize, f64)> {
        self.inner
            .entries()
            .map(|(i, j, w)| (i as usize, j as usize, w))
            .collect()
    }

    fn degrees(&self) -> Vec<f64> {
        self.inner.degrees()
    }

    fn __repr__(&self) -> String {
        format!(
            "SimilarityMatrix(n={}, stored_nonzeros={}, sparsity_level={:.4})",
            self.inner.n(),
            self.inner.stored_nonzeros(),
            self.inner.sparsity_level()
        )
    }
}

/// A hard partition with labels 1..=nc.
#[pyclass(name = "ClusteringResult", module = "specsim_rs", frozen)]
struct PyClusteringResult {
    labels: Vec<usize>,
    nc: usize,
    failed: bool,
}

#[pymethods]
impl PyClusteringResult {
    #[getter]
    fn labels(&self) -> Vec<usize> {
        self.labels.clone()
    }

    #[getter]
    fn nc(&self) -> usize {
        self.nc
    }

    #[getter]
    fn failed(&self) -> bool {
        self.failed
    }

    fn __repr__(&self) -> String {
        format!(
            "ClusteringResult(nc={}, failed={}, n={})",
            self.nc,
            self.failed,
            self.labels.len()
        )
    }
}

fn sigma_dict<'py>(py: Python<'py>, sigma: &SigmaReport) -> PyResult<Bound<'py, PyDict>> {
    let d = PyDict::new(py);
    match sigma {
        SigmaReport::Unit => d.set_item("kind", "unit")?,
        SigmaReport::Global(s) => {
            d.set_item("kind", "global")?;
            d.set_item("sigma", s)?;
        }
        SigmaReport::Local { min, mean, max } => {
            d.set_item("kind", "local")?;
            d.set_item("min", min)?;
            d.set_item("mean", mean)?;
            d.set_item("max", max)?;
        }
    }
    Ok(d)
}

/// The 27 catalog method labels in canonical order.
#[pyfunction]
fn list_methods() -> Vec<String> {
    MethodSpec::catalog().iter().map(|m| m.label()).collect()
}

/// Builds the similarity matrix for one catalog method; the companion dict
/// reports k_used, epsilon, sigma, and aggregation_edges_added.
#[pyfunction]
fn build_similarity<'py>(
    py: Python<'py>,
    dataset: &PyDataset,
    method: &str,
) -> PyResult<(PySimilarityMatrix, Bound<'py, PyDict>)> {
    let spec = parse_method(method)?;
    let dm = DistanceModel::build(&dataset.inner);
    let (w, diag) = build_w(&spec, &dm).map_err(val_err)?;
    let info = PyDict::new(py);
    info.set_item("k_used", diag.k_used)?;
    info.set_item("epsilon", diag.epsilon)?;
    info.set_item("sigma", sigma_dict(py, &diag.sigma)?)?;
    info.set_item("aggregation_edges_added", diag.aggregation_edges_added)?;
    Ok((PySimilarityMatrix { inner: w }, info))
}

/// Normalized spectral clustering of a similarity matrix into k groups.
#[pyfunction]
#[pyo3(signature = (w, k, seed = 42, eig_tol = 1e-9, discretization = "rotation"))]
fn spectral_cluster(
    w: &PySimilarityMatrix,
    k: usize,
    seed: u64,
    eig_tol: f64,
    discretization: &str,
) -> PyResult<PyClusteringResult> {
    if k == 0 || k > w.inner.n() {
        return Err(PyValueError::new_err(format!("k={k} out of range for n={}", w.inner.n())));
    }
    let opts = SpectralOptions {
        eig_tol,
        discretization: parse_discretization(discretization)?,
    };
    let res = spectral_cluster_with(&w.inner, k, seed, &opts).map_err(val_err)?;
    Ok(PyClusteringResult {
        labels: res.labels,
        nc: res.nc,
        failed: res.failed,
    })
}

/// External indices comparing an obtained partition with a reference one.
#[pyfunction]
fn evaluate<'py>(py: Python<'py>, obtained: Vec<usize>, target: Vec<usize>) -> PyResult<Bound<'py, PyDict>> {
    if obtained.is_empty() || obtained.len() != target.len() {
        return Err(PyValueError::new_err(format!(
            "label vectors must be nonempty and equal length, got {} and {}",
            obtained.len(),
            target.len()
        )));
    }
    let d = PyDict::new(py);
    d.set_item("nmi", evaluation::nmi(&obtained, &target))?;
    d.set_item("purity", evaluation::purity(&obtained, &target))?;
    d.set_item("rand", evaluation::rand_index(&obtained, &target))?;
    d.set_item("ce", evaluation::clustering_error(&obtained, &target))?;
    Ok(d)
}

/// Full pipeline for one dataset and method: similarity, spectral clustering,
/// evaluation against the dataset labels. Pipeline failures are reported in
/// the dict rather than raised, matching the benchmark harness.
#[pyfunction]
#[pyo3(signature = (dataset, method, seed = 42))]
fn run_method<'py>(
    py: Python<'py>,
    dataset: &PyDataset,
    method: &str,
    seed: u64,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = parse_method(method)?;
    let dm = DistanceModel::build(&dataset.inner);
    let out = PyDict::new(py);
    out.set_item("method", spec.label())?;
    out.set_item("dataset", dataset.inner.name())?;

    let (w, diag) = build_w(&spec, &dm).map_err(val_err)?;
    out.set_item("theta", w.sparsity_level())?;
    out.set_item("k_used", diag.k_used)?;
    out.set_item("aggregation_edges_added", diag.aggregation_edges_added)?;

    let k = dataset.inner.k();
    match spectral_cluster_with(&w, k, seed, &SpectralOptions::default()) {
        Err(e) => {
            out.set_item("failed", true)?;
            out.set_item("failure_reason", e.to_string())?;
        }
        Ok(res) => {
            out.set_item("failed", res.failed)?;
            out.set_item("nc", res.nc)?;
            if res.failed {
                out.set_item("failure_reason", format!("found {} of {} clusters", res.nc, k))?;
            } else {
                out.set_item("labels", res.labels.clone())?;
                out.set_item("nmi", evaluation::nmi(&res.labels, dataset.inner.labels()))?;
                out.set_item("purity", evaluation::purity(&res.labels, dataset.inner.labels()))?;
                out.set_item("rand", evaluation::rand_index(&res.labels, dataset.inner.labels()))?;
                out.set_item("ce", evaluation::clustering_error(&res.labels, dataset.inner.labels()))?;
            }
        }
    }
    Ok(out)
}

/// Runs a config file through the benchmark harness and writes the report
/// artifacts; returns the written paths.
#[pyfunction]
fn run_config(path: &str) -> PyResult<Vec<String>> {
    let cfg = ExperimentConfig::from_file(std::path::Path::new(path)).map_err(val_err)?;
    let report = run_experiment(&cfg).map_err(val_err)?;
    let written = emit_reports(&report, &cfg.out_dir).map_err(io_err)?;
    Ok(written.iter().map(|p| p.display().to_string()).collect())
}

#[pymodule]
fn specsim_rs(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyDataset>()?;
    m.add_class::<PySimilarityMatrix>()?;
    m.add_class::<PyClusteringResult>()?;
    m.add_function(wrap_pyfunction!(list_methods, m)?)?;
    m.add_function(wrap_pyfunction!(build_similarity, m)?)?;
    m.add_function(wrap_pyfunction!(spectral_cluster, m)?)?;
    m.add_function(wrap_pyfunction!(evaluate, m)?)?;
    m.add_function(wrap_pyfunction!(run_method, m)?)?;
    m.add_function(wrap_pyfunction!(run_config, m)?)?;
    Ok(())
}
