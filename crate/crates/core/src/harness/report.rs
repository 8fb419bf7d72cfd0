//! Report emission: a per-run CSV, per-set Markdown tables for sparsity and
//! accuracy, plot-ready grouped accuracy data, and a separate timings file.
//!
//! Everything except timings.csv is byte-identical across repeated runs of
//! the same configuration; wall-clock numbers are quarantined in their own
//! file for exactly that reason.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use super::{EvaluationReport, HarnessError};
use crate::similarity::SigmaReport;

/// RFC-4180-style quoting: fields with commas, quotes or newlines are
/// wrapped and inner quotes doubled.
fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn opt_str<T: std::fmt::Display>(v: &Option<T>) -> String {
    v.as_ref().map(|x| x.to_string()).unwrap_or_default()
}

fn sigma_columns(sigma: &SigmaReport) -> (String, String, String, String, String) {
    match sigma {
        SigmaReport::Unit => ("unit".into(), String::new(), String::new(), String::new(), String::new()),
        SigmaReport::Global(s) => (
            "global".into(),
            s.to_string(),
            String::new(),
            String::new(),
            String::new(),
        ),
        SigmaReport::Local { min, mean, max } => (
            "local".into(),
            String::new(),
            min.to_string(),
            mean.to_string(),
            max.to_string(),
        ),
    }
}

fn runs_csv(report: &EvaluationReport) -> String {
    let mut out = String::from(
        "method,dataset,set,n,k,k_used,epsilon,sigma_kind,sigma_global,sigma_min,sigma_mean,sigma_max,aggregation_edges,theta,nc,nmi,purity,rand,ce,failed,failure_reason\n",
    );
    for r in &report.runs {
        let (kind, glob, smin, smean, smax) = sigma_columns(&r.sigma);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{},{}",
            csv_field(&r.method.label()),
            csv_field(&r.dataset),
            csv_field(&r.set),
            r.n,
            r.k,
            opt_str(&r.k_used),
            opt_str(&r.epsilon),
            kind,
            glob,
            smin,
            smean,
            smax,
            r.aggregation_edges,
            r.theta,
            r.nc,
            r.nmi,
            r.purity,
            r.rand,
            r.ce,
            r.failed,
            csv_field(r.failure_reason.as_deref().unwrap_or("")),
        )
        .unwrap();
    }
    out
}

fn timings_csv(report: &EvaluationReport) -> String {
    let mut out = String::from("method,dataset,wall_ms\n");
    for r in &report.runs {
        writeln!(
            out,
            "{},{},{:.3}",
            csv_field(&r.method.label()),
            csv_field(&r.dataset),
            r.wall_ms
        )
        .unwrap();
    }
    out
}

/// Looks up the run record for (dataset name, method index).
fn find_run<'a>(
    report: &'a EvaluationReport,
    dataset: &str,
    mi: usize,
) -> &'a super::RunRecord {
    report
        .runs
        .iter()
        .filter(|r| r.dataset == dataset)
        .nth(mi)
        .expect("every (dataset, method) pair has a record")
}

fn sparsity_md(report: &EvaluationReport, si: usize) -> String {
    let set = &report.sets[si];
    let mut out = format!("# Sparsity levels, set {}\n\n", set.set);
    out.push_str("Percentage of similarity-matrix entries at zero (higher = sparser).\n\n");
    out.push_str("| method |");
    for d in &set.datasets {
        write!(out, " {d} |").unwrap();
    }
    out.push_str(" mean |\n|---|");
    out.push_str(&"---|".repeat(set.datasets.len() + 1));
    out.push('\n');
    for (mi, m) in report.methods.iter().enumerate() {
        write!(out, "| {} |", m.label()).unwrap();
        for d in &set.datasets {
            let r = find_run(report, d, mi);
            write!(out, " {:.1}% |", r.theta * 100.0).unwrap();
        }
        writeln!(out, " {:.1}% |", set.theta_mean[mi] * 100.0).unwrap();
    }
    out
}

fn accuracy_md(report: &EvaluationReport, si: usize) -> String {
    let set = &report.sets[si];
    let mut out = format!("# Accuracy (NMI), set {}\n\n", set.set);
    out.push_str("Failed runs (fewer clusters found than requested) score 0.\n\n");
    out.push_str("| method |");
    for d in &set.datasets {
        write!(out, " {d} |").unwrap();
    }
    out.push_str(" mean NMI | rank |\n|---|");
    out.push_str(&"---|".repeat(set.datasets.len() + 2));
    out.push('\n');
    for (mi, m) in report.methods.iter().enumerate() {
        write!(out, "| {} |", m.label()).unwrap();
        for d in &set.datasets {
            let r = find_run(report, d, mi);
            if r.failed {
                write!(out, " failed(nc={}) |", r.nc).unwrap();
            } else {
                write!(out, " {:.4} |", r.nmi).unwrap();
            }
        }
        writeln!(out, " {:.4} | {} |", set.alpha_mean[mi], set.ranks[mi]).unwrap();
    }
    out
}

fn groups_dat(report: &EvaluationReport, si: usize) -> String {
    let set = &report.sets[si];
    let mut out = format!("# grouped mean accuracies, set {}\n", set.set);
    out.push_str("# method family variant k_rule alpha rank\n");
    for (mi, m) in report.methods.iter().enumerate() {
        writeln!(
            out,
            "{} {} {} {} {} {}",
            m.label(),
            m.family().letter(),
            m.variant(),
            m.k_rule().map(|r| r.suffix()).unwrap_or("-"),
            set.alpha_mean[mi],
            set.ranks[mi]
        )
        .unwrap();
    }
    out
}

/// Writes all report artifacts into `dir` and returns the created paths.
pub fn emit_reports(report: &EvaluationReport, dir: &Path) -> Result<Vec<PathBuf>, HarnessError> {
    let io_err = |path: &Path, source: std::io::Error| HarnessError::Io {
        path: path.to_path_buf(),
        source,
    };
    std::fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;

    let mut written = Vec::new();
    let mut write = |name: String, content: String| -> Result<(), HarnessError> {
        let path = dir.join(name);
        std::fs::write(&path, content).map_err(|e| io_err(&path, e))?;
        written.push(path);
        Ok(())
    };

    write("runs.csv".into(), runs_csv(report))?;
    write("timings.csv".into(), timings_csv(report))?;
    for si in 0..report.sets.len() {
        let set = report.sets[si].set.clone();
        write(format!("sparsity_{set}.md"), sparsity_md(report, si))?;
        write(format!("accuracy_{set}.md"), accuracy_md(report, si))?;
        write(format!("accuracy_groups_{set}.dat"), groups_dat(report, si))?;
    }
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::{run_experiment, ExperimentConfig};
    use std::io::Write as _;

    fn toy_config(dir: &Path) -> ExperimentConfig {
        let csv = dir.join("blobs.csv");
        let mut f = std::fs::File::create(&csv).unwrap();
        for i in 0..5 {
            writeln!(f, "{},0.0,a", i as f64 * 0.2).unwrap();
        }
        for i in 0..5 {
            writeln!(f, "{},0.5,b", 20.0 + i as f64 * 0.2).unwrap();
        }
        let text = format!(
            "methods = M1_Kl,E3_Ks,F1,N4_Kl\nseed = 3\n[dataset]\nkind = csv\npath = {}\nset = U\n[dataset]\nkind = rings\nn = 40\ndispersion = 0.03\nset = U\n",
            csv.display()
        );
        ExperimentConfig::from_str_checked(&text).unwrap()
    }

    #[test]
    fn artifacts_written_and_stable() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = toy_config(dir.path());
        let report = run_experiment(&cfg).unwrap();

        let out1 = dir.path().join("r1");
        let out2 = dir.path().join("r2");
        emit_reports(&report, &out1).unwrap();
        let report2 = run_experiment(&cfg).unwrap();
        emit_reports(&report2, &out2).unwrap();

        let a = std::fs::read(out1.join("runs.csv")).unwrap();
        let b = std::fs::read(out2.join("runs.csv")).unwrap();
        assert_eq!(a, b, "runs.csv must be byte-identical across repeats");

        for name in [
            "runs.csv",
            "timings.csv",
            "sparsity_U.md",
            "accuracy_U.md",
            "accuracy_groups_U.dat",
        ] {
            assert!(out1.join(name).exists(), "{name} missing");
        }
        let md = std::fs::read_to_string(out1.join("accuracy_U.md")).unwrap();
        // Header + separator + one row per method.
        let rows = md.lines().filter(|l| l.starts_with('|')).count();
        assert_eq!(rows, 2 + cfg.methods.len());
    }

    #[test]
    fn aggregates_recomputable_from_csv() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = toy_config(dir.path());
        let report = run_experiment(&cfg).unwrap();
        let out = dir.path().join("out");
        emit_reports(&report, &out).unwrap();

        let csv = std::fs::read_to_string(out.join("runs.csv")).unwrap();
        let mut theta_sum = vec![0.0f64; cfg.methods.len()];
        let mut alpha_sum = vec![0.0f64; cfg.methods.len()];
        let mut count = vec![0usize; cfg.methods.len()];
        for line in csv.lines().skip(1) {
            let cols: Vec<&str> = line.split(',').collect();
            let mi = cfg
                .methods
                .iter()
                .position(|m| m.label() == cols[0])
                .unwrap();
            let theta: f64 = cols[13].parse().unwrap();
            let nmi: f64 = cols[15].parse().unwrap();
            let failed: bool = cols[19].parse().unwrap();
            theta_sum[mi] += theta;
            alpha_sum[mi] += if failed { 0.0 } else { nmi };
            count[mi] += 1;
        }
        let set = &report.sets[0];
        for mi in 0..cfg.methods.len() {
            assert_eq!(count[mi], 2);
            assert_eq!(set.theta_mean[mi], theta_sum[mi] / 2.0);
            assert_eq!(set.alpha_mean[mi], alpha_sum[mi] / 2.0);
        }
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("plain"), "plain");
        assert_eq!(csv_field("a,b"), "\"a,b\"");
        assert_eq!(csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }
}
