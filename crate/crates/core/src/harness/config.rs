//! Experiment configuration: a flat key-value text format with one
//! `[dataset]` block per data source.
//!
//! ```text
//! # global keys come first
//! seed = 42
//! out_dir = results
//! methods = all            # or a comma list of labels: F1,E2_Kl,M4_Ks
//! workers = 0              # 0 = one per core
//! eig_tol = 1e-9
//! discretization = rotation   # or kmeans
//! normalize_diameter = false
//!
//! [dataset]
//! kind = uci_iris          # csv | uci_iris | uci_wine | uci_vote | uci_seeds | rings
//! path = data/uci/iris.data
//! set = U                  # grouping key for aggregate tables
//!
//! [dataset]
//! kind = rings
//! n = 900
//! dispersion = 0.05
//! set = R
//! ```

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::dataset::{CsvSchema, LabelColumn};
use crate::similarity::MethodSpec;
use crate::spectral::Discretization;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("no [dataset] blocks defined")]
    NoDatasets,
    #[error("methods list is empty")]
    NoMethods,
}

/// One data source to run every method against.
#[derive(Debug, Clone)]
pub struct DatasetSource {
    pub kind: SourceKind,
    /// Aggregation group; per-set tables average over sources sharing it.
    pub set: String,
    /// Overrides the cluster count implied by the labels.
    pub k_override: Option<usize>,
    /// Overrides the global diameter-normalization switch.
    pub normalize_diameter: Option<bool>,
}

#[derive(Debug, Clone)]
pub enum SourceKind {
    Csv {
        path: PathBuf,
        name: Option<String>,
        schema: CsvSchema,
    },
    UciIris { path: PathBuf },
    UciWine { path: PathBuf },
    UciVote { path: PathBuf },
    UciSeeds { path: PathBuf },
    Rings {
        n: usize,
        dispersion: f64,
        seed: Option<u64>,
    },
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub datasets: Vec<DatasetSource>,
    pub methods: Vec<MethodSpec>,
    pub seed: u64,
    pub out_dir: PathBuf,
    /// 0 means one worker per core.
    pub workers: usize,
    pub eig_tol: f64,
    pub discretization: Discretization,
    pub normalize_diameter: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            datasets: Vec::new(),
            methods: MethodSpec::catalog(),
            seed: 42,
            out_dir: PathBuf::from("results"),
            workers: 0,
            eig_tol: 1e-9,
            discretization: Discretization::Rotation,
            normalize_diameter: false,
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self, ConfigError> {
        let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_str_checked(&text)
    }

    pub fn from_str_checked(text: &str) -> Result<Self, ConfigError> {
        let mut cfg = ExperimentConfig::default();
        let mut blocks: Vec<(usize, HashMap<String, (usize, String)>)> = Vec::new();
        let mut in_block = false;

        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if line == "[dataset]" {
                blocks.push((line_no, HashMap::new()));
                in_block = true;
                continue;
            }
            if line.starts_with('[') {
                return Err(ConfigError::Parse {
                    line: line_no,
                    msg: format!("unknown section {line}"),
                });
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(ConfigError::Parse {
                    line: line_no,
                    msg: format!("expected key = value, got {line:?}"),
                });
            };
            let key = key.trim().to_string();
            let value = value.trim().to_string();
            if in_block {
                blocks
                    .last_mut()
                    .unwrap()
                    .1
                    .insert(key, (line_no, value));
            } else {
                apply_global(&mut cfg, &key, &value, line_no)?;
            }
        }

        for (block_line, mut kv) in blocks {
            cfg.datasets.push(parse_dataset_block(block_line, &mut kv)?);
            if let Some((line, key)) = kv.iter().map(|(k, &(l, _))| (l, k.clone())).next() {
                return Err(ConfigError::Parse {
                    line,
                    msg: format!("unknown dataset key {key:?}"),
                });
            }
        }

        if cfg.datasets.is_empty() {
            return Err(ConfigError::NoDatasets);
        }
        if cfg.methods.is_empty() {
            return Err(ConfigError::NoMethods);
        }
        Ok(cfg)
    }
}

fn parse_as<T: std::str::FromStr>(value: &str, line: usize, what: &str) -> Result<T, ConfigError> {
    value.parse().map_err(|_| ConfigError::Parse {
        line,
        msg: format!("invalid {what}: {value:?}"),
    })
}

fn parse_bool(value: &str, line: usize) -> Result<bool, ConfigError> {
    match value {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(ConfigError::Parse {
            line,
            msg: format!("invalid boolean: {value:?}"),
        }),
    }
}

fn apply_global(
    cfg: &mut ExperimentConfig,
    key: &str,
    value: &str,
    line: usize,
) -> Result<(), ConfigError> {
    match key {
        "seed" => cfg.seed = parse_as(value, line, "seed")?,
        "out_dir" => cfg.out_dir = PathBuf::from(value),
        "workers" => cfg.workers = parse_as(value, line, "worker count")?,
        "eig_tol" => cfg.eig_tol = parse_as(value, line, "tolerance")?,
        "normalize_diameter" => cfg.normalize_diameter = parse_bool(value, line)?,
        "discretization" => {
            cfg.discretization = match value {
                "rotation" => Discretization::Rotation,
                "kmeans" => Discretization::KMeans,
                _ => {
                    return Err(ConfigError::Parse {
                        line,
                        msg: format!("discretization must be rotation or kmeans, got {value:?}"),
                    })
                }
            }
        }
        "methods" => {
            cfg.methods = if value == "all" {
                MethodSpec::catalog()
            } else {
                value
                    .split(',')
                    .map(|tok| {
                        tok.trim().parse::<MethodSpec>().map_err(|_| {
                            ConfigError::Parse {
                                line,
                                msg: format!("unknown method label {:?}", tok.trim()),
                            }
                        })
                    })
                    .collect::<Result<Vec<_>, _>>()?
            };
        }
        _ => {
            return Err(ConfigError::Parse {
                line,
                msg: format!("unknown global key {key:?}"),
            })
        }
    }
    Ok(())
}

fn parse_dataset_block(
    block_line: usize,
    kv: &mut HashMap<String, (usize, String)>,
) -> Result<DatasetSource, ConfigError> {
    let (kind_line, kind) = kv.remove("kind").ok_or(ConfigError::Parse {
        line: block_line,
        msg: "dataset block missing kind".into(),
    })?;

    let need_path = |kv: &mut HashMap<String, (usize, String)>| -> Result<PathBuf, ConfigError> {
        kv.remove("path")
            .map(|(_, v)| PathBuf::from(v))
            .ok_or(ConfigError::Parse {
                line: block_line,
                msg: format!("dataset kind {kind} requires path"),
            })
    };

    let source = match kind.as_str() {
        "csv" => {
            let path = need_path(kv)?;
            let name = kv.remove("name").map(|(_, v)| v);
            let mut schema = CsvSchema::default();
            if let Some((line, v)) = kv.remove("has_header") {
                schema.has_header = parse_bool(&v, line)?;
            }
            if let Some((_, v)) = kv.remove("delimiter") {
                schema.delimiter = v.chars().next().unwrap_or(',');
            }
            if let Some((line, v)) = kv.remove("label_column") {
                schema.label_column = match v.as_str() {
                    "first" => LabelColumn::First,
                    "last" => LabelColumn::Last,
                    other => match other.strip_prefix("index:") {
                        Some(i) => LabelColumn::Index(parse_as(i, line, "label column index")?),
                        None => {
                            return Err(ConfigError::Parse {
                                line,
                                msg: format!("label_column must be first, last or index:N, got {v:?}"),
                            })
                        }
                    },
                };
            }
            SourceKind::Csv { path, name, schema }
        }
        "uci_iris" => SourceKind::UciIris { path: need_path(kv)? },
        "uci_wine" => SourceKind::UciWine { path: need_path(kv)? },
        "uci_vote" => SourceKind::UciVote { path: need_path(kv)? },
        "uci_seeds" => SourceKind::UciSeeds { path: need_path(kv)? },
        "rings" => {
            let (line_n, n) = kv.remove("n").ok_or(ConfigError::Parse {
                line: block_line,
                msg: "rings requires n".into(),
            })?;
            let (line_d, d) = kv.remove("dispersion").ok_or(ConfigError::Parse {
                line: block_line,
                msg: "rings requires dispersion".into(),
            })?;
            let seed = match kv.remove("seed") {
                Some((line, v)) => Some(parse_as(&v, line, "seed")?),
                None => None,
            };
            SourceKind::Rings {
                n: parse_as(&n, line_n, "point count")?,
                dispersion: parse_as(&d, line_d, "dispersion")?,
                seed,
            }
        }
        _ => {
            return Err(ConfigError::Parse {
                line: kind_line,
                msg: format!("unknown dataset kind {kind:?}"),
            })
        }
    };

    let set = kv.remove("set").map(|(_, v)| v).unwrap_or_else(|| "default".into());
    let k_override = match kv.remove("k") {
        Some((line, v)) => Some(parse_as(&v, line, "cluster count")?),
        None => None,
    };
    let normalize_diameter = match kv.remove("normalize_diameter") {
        Some((line, v)) => Some(parse_bool(&v, line)?),
        None => None,
    };

    Ok(DatasetSource {
        kind: source,
        set,
        k_override,
        normalize_diameter,
    })
}
