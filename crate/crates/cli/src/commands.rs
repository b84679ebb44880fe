use std::fs;
use std::path::Path;
use std::time::Instant;

use hyperwalk::experiment::{run_experiment, trial_cv};
use hyperwalk::Hypergraph;

use crate::config::RunConfig;
use crate::error::{CliError, Result};
use crate::output::{
    self, ensure_dir, param_label, sha256_hex, summary_table, write_csv, DatasetInfo, Provenance, RunEntry,
};

/// A preprocessed dataset: canonical hyperedges, largest component only.
pub struct Dataset {
    pub info: DatasetInfo,
    pub graph: Hypergraph,
}

pub fn dataset_name(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn load_dataset(path: &Path, cfg: &RunConfig) -> Result<Dataset> {
    let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
    let text = String::from_utf8_lossy(&bytes);
    let full = Hypergraph::parse(&text, cfg.load_options()).map_err(|e| match e {
        hyperwalk::Error::Parse { line, message } => CliError::Syntax {
            path: path.display().to_string(),
            line,
            message,
        },
        other => CliError::Core(other),
    })?;
    let graph = full.largest_component();
    if graph.num_vertices() < full.num_vertices() {
        log::info!(
            "{}: kept largest component with {} of {} vertices",
            path.display(),
            graph.num_vertices(),
            full.num_vertices()
        );
    }
    Ok(Dataset {
        info: DatasetInfo {
            name: dataset_name(path),
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
            vertices: graph.num_vertices(),
            hyperedges: graph.num_edges(),
        },
        graph,
    })
}

fn load_all(cfg: &RunConfig) -> Result<Vec<Dataset>> {
    cfg.datasets.iter().map(|p| load_dataset(p, cfg)).collect()
}

/// Statistics table after preprocessing.
pub fn stats(cfg: &RunConfig) -> Result<String> {
    let mut out = format!(
        "{:<24} {:>8} {:>8} {:>12} {:>16}\n",
        "dataset", "n", "m", "mean_degree", "mean_cardinality"
    );
    for ds in load_all(cfg)? {
        let s = ds.graph.stats();
        out.push_str(&format!(
            "{:<24} {:>8} {:>8} {:>12.2} {:>16.2}\n",
            ds.info.name, s.vertices, s.hyperedges, s.mean_degree, s.mean_cardinality
        ));
    }
    Ok(out)
}

/// Runs the protocol at every dataset × α × ρ point.
pub fn experiments(cfg: &RunConfig) -> Result<(Provenance, Vec<RunEntry>)> {
    let datasets = load_all(cfg)?;
    let mut entries = Vec::new();
    for ds in &datasets {
        for &rho in &cfg.rhos {
            for &alpha in &cfg.alphas {
                let started = Instant::now();
                let result = run_experiment(&ds.graph, &cfg.experiment(alpha, rho))?;
                for t in &result.trials {
                    if t.observed_components > 1 {
                        log::warn!(
                            "{} rho={rho} trial {}: observed hypergraph has {} components",
                            ds.info.name,
                            t.trial,
                            t.observed_components
                        );
                    }
                }
                let timing: Vec<String> = result
                    .elapsed_by_method()
                    .iter()
                    .map(|(m, d)| format!("{m} {:.2}s", d.as_secs_f64()))
                    .collect();
                eprintln!(
                    "{} alpha={alpha} rho={rho}: {:.2}s ({})",
                    ds.info.name,
                    started.elapsed().as_secs_f64(),
                    timing.join(", ")
                );
                entries.push(RunEntry {
                    dataset: ds.info.name.clone(),
                    alpha,
                    rho,
                    lambda: cfg.lambda,
                    result,
                });
            }
        }
    }
    let provenance = Provenance::new(cfg, datasets.into_iter().map(|d| d.info).collect());
    Ok((provenance, entries))
}

pub fn run(cfg: &RunConfig) -> Result<String> {
    if cfg.rhos.len() != 1 {
        return Err(CliError::invalid("rho", "run takes a single value; use `sweep` for a range"));
    }
    let (provenance, entries) = experiments(cfg)?;
    let (json, csv) = output::write_results(&cfg.out, cfg, &provenance, &entries)?;
    log::info!("wrote {} and {}", json.display(), csv.display());
    Ok(summary_table(&entries))
}

pub fn sweep(cfg: &RunConfig) -> Result<String> {
    let (provenance, entries) = experiments(cfg)?;
    output::write_results(&cfg.out, cfg, &provenance, &entries)?;
    let path = cfg.out.join("sweep.csv");
    write_csv(&path, &output::SWEEP_CSV_HEADER, &output::sweep_rows(&entries))?;
    log::info!("wrote {}", path.display());
    Ok(summary_table(&entries))
}

pub const CV_CSV_HEADER: [&str; 8] = ["dataset", "alpha", "rho", "trial", "method", "param", "mean_auroc", "chosen"];

/// Cross-validation curves: mean validation AUROC for every grid value.
pub fn cv(cfg: &RunConfig) -> Result<String> {
    let datasets = load_all(cfg)?;
    let mut rows = Vec::new();
    for ds in &datasets {
        for &rho in &cfg.rhos {
            for &alpha in &cfg.alphas {
                let exp = cfg.experiment(alpha, rho);
                for trial in 0..cfg.trials {
                    for (method, outcome) in trial_cv(&ds.graph, &exp, trial)? {
                        for (p, mean) in outcome.grid.iter().zip(&outcome.mean_auroc) {
                            rows.push(vec![
                                ds.info.name.clone(),
                                alpha.to_string(),
                                rho.to_string(),
                                trial.to_string(),
                                method.to_string(),
                                param_label(Some(*p)),
                                mean.map_or_else(String::new, |m| m.to_string()),
                                (*p == outcome.chosen).to_string(),
                            ]);
                        }
                    }
                }
            }
        }
    }
    ensure_dir(&cfg.out)?;
    let path = cfg.out.join("cv.csv");
    write_csv(&path, &CV_CSV_HEADER, &rows)?;
    let mut out = String::new();
    for r in rows.iter().filter(|r| r[7] == "true") {
        out.push_str(&format!("{} alpha={} trial={} {}: {}\n", r[0], r[1], r[3], r[4], r[5]));
    }
    Ok(out)
}
