//! Result files: `results.json`, `results.csv`, `sweep.csv`, `cv.csv`.
//!
//! Everything written here is a function of the configuration (minus
//! `out` and `threads`) and the dataset bytes, so repeated runs produce
//! identical files. Timings only go to standard error.

use std::fs;
use std::path::{Path, PathBuf};

use hyperwalk::experiment::{ExperimentResult, Param};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::error::{CliError, Result};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct DatasetInfo {
    pub name: String,
    pub path: String,
    pub sha256: String,
    /// Size after preprocessing (largest connected component).
    pub vertices: usize,
    pub hyperedges: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_sha256: String,
    pub seed: u64,
    pub datasets: Vec<DatasetInfo>,
}

impl Provenance {
    pub fn new(cfg: &RunConfig, datasets: Vec<DatasetInfo>) -> Self {
        Self {
            tool: "hyperwalk",
            version: env!("CARGO_PKG_VERSION"),
            config_sha256: sha256_hex(cfg.render_for_hash().as_bytes()),
            seed: cfg.seed,
            datasets,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RunEntry {
    pub dataset: String,
    pub alpha: f64,
    pub rho: f64,
    pub lambda: usize,
    pub result: ExperimentResult,
}

#[derive(Debug, Serialize)]
pub struct ResultsFile<'a> {
    pub provenance: &'a Provenance,
    pub config: String,
    pub runs: &'a [RunEntry],
}

pub fn param_label(p: Option<Param>) -> String {
    match p {
        Some(Param::K(k)) => format!("K={k}"),
        Some(Param::Beta(b)) => format!("beta={b}"),
        None => String::new(),
    }
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<()> {
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

fn csv_error(path: &Path, e: csv::Error) -> CliError {
    let kind = std::io::Error::other(e.to_string());
    CliError::io(path, kind)
}

/// Writes CSV rows (header first) to `path`.
pub fn write_csv(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).map_err(|e| csv_error(path, e))?;
    for r in rows {
        w.write_record(r).map_err(|e| csv_error(path, e))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::io(path, std::io::Error::other(e.to_string())))?;
    write_bytes(path, &bytes)
}

pub const RESULTS_CSV_HEADER: [&str; 8] = [
    "dataset",
    "alpha",
    "lambda",
    "rho",
    "method",
    "auroc_mean",
    "f1_mean",
    "chosen_param_mode",
];

pub fn results_rows(entries: &[RunEntry]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for e in entries {
        for s in &e.result.summary {
            rows.push(vec![
                e.dataset.clone(),
                e.alpha.to_string(),
                e.lambda.to_string(),
                e.rho.to_string(),
                s.method.to_string(),
                s.auroc_mean.to_string(),
                s.f1_mean.to_string(),
                param_label(s.param_mode),
            ]);
        }
    }
    rows
}

/// Writes `results.json` and `results.csv` into `dir`; returns both paths.
pub fn write_results(dir: &Path, cfg: &RunConfig, provenance: &Provenance, entries: &[RunEntry]) -> Result<(PathBuf, PathBuf)> {
    ensure_dir(dir)?;
    let json_path = dir.join("results.json");
    let file = ResultsFile {
        provenance,
        config: cfg.render_for_hash(),
        runs: entries,
    };
    let mut json = serde_json::to_vec_pretty(&file)?;
    json.push(b'\n');
    write_bytes(&json_path, &json)?;
    let csv_path = dir.join("results.csv");
    write_csv(&csv_path, &RESULTS_CSV_HEADER, &results_rows(entries))?;
    Ok((json_path, csv_path))
}

pub const SWEEP_CSV_HEADER: [&str; 6] = ["dataset", "alpha", "rho", "method", "metric", "mean"];

pub fn sweep_rows(entries: &[RunEntry]) -> Vec<Vec<String>> {
    let mut rows = Vec::new();
    for e in entries {
        for s in &e.result.summary {
            for (metric, value) in [("auroc", s.auroc_mean), ("f1", s.f1_mean)] {
                rows.push(vec![
                    e.dataset.clone(),
                    e.alpha.to_string(),
                    e.rho.to_string(),
                    s.method.to_string(),
                    metric.to_string(),
                    value.to_string(),
                ]);
            }
        }
    }
    rows
}

/// Fixed-width aggregate table for standard output.
pub fn summary_table(entries: &[RunEntry]) -> String {
    let mut out = format!(
        "{:<24} {:>6} {:>6} {:<8} {:>8} {:>8}  {}\n",
        "dataset", "alpha", "rho", "method", "AUROC", "F1", "param"
    );
    for e in entries {
        for s in &e.result.summary {
            out.push_str(&format!(
                "{:<24} {:>6} {:>6} {:<8} {:>8.4} {:>8.4}  {}\n",
                e.dataset,
                e.alpha,
                e.rho,
                s.method.name(),
                s.auroc_mean,
                s.f1_mean,
                param_label(s.param_mode)
            ));
        }
    }
    out
}
