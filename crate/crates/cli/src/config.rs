//! Run configuration and its flat `key = value` file form.
//!
//! ```text
//! # comment
//! dataset = data/contact-high-school.txt
//! methods = [LRW, LRW-JS, LRW-GJS]
//! alpha = [0.2, 0.5, 0.8]
//! seed = 7
//! ```
//!
//! Lists are comma-separated and may be wrapped in brackets. Keys are the
//! long command-line flag names with `-` or `_` accepted interchangeably.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use hyperwalk::experiment::{CvSpec, ExperimentConfig, SamplingSpec, SplitSpec};
use hyperwalk::scoring::{KatzEval, Method};
use hyperwalk::{LabelMode, LoadOptions};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub datasets: Vec<PathBuf>,
    pub methods: Vec<Method>,
    pub alphas: Vec<f64>,
    pub lambda: usize,
    pub rhos: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub k_grid: Vec<usize>,
    pub beta_grid: Vec<f64>,
    pub folds: usize,
    /// Walk-row entries below this are dropped.
    pub drop_tolerance: f64,
    pub out: PathBuf,
    /// Worker threads; `None` uses every available core.
    pub threads: Option<usize>,
    pub min_cardinality: usize,
    pub label_mode: LabelMode,
}

impl Default for RunConfig {
    fn default() -> Self {
        let cv = CvSpec::default();
        Self {
            datasets: Vec::new(),
            methods: Method::ALL.to_vec(),
            alphas: vec![0.2, 0.5, 0.8],
            lambda: 3,
            rhos: vec![0.8],
            trials: 10,
            seed: 0,
            k_grid: cv.k_grid,
            beta_grid: cv.beta_grid,
            folds: cv.folds,
            drop_tolerance: cv.drop_tolerance,
            out: PathBuf::from("results"),
            threads: None,
            min_cardinality: 2,
            label_mode: LabelMode::Integer,
        }
    }
}

const KEYS: [&str; 15] = [
    "dataset",
    "methods",
    "alpha",
    "lambda",
    "rho",
    "trials",
    "seed",
    "k-grid",
    "beta-grid",
    "folds",
    "drop-tolerance",
    "out",
    "threads",
    "min-cardinality",
    "label-mode",
];

fn list_items(value: &str) -> Vec<&str> {
    let v = value.trim();
    let v = v.strip_prefix('[').and_then(|s| s.strip_suffix(']')).unwrap_or(v);
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn parse_list<T: FromStr>(key: &'static str, value: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    list_items(value)
        .into_iter()
        .map(|item| item.parse::<T>().map_err(|e| CliError::invalid(key, format!("{item:?}: {e}"))))
        .collect()
}

fn parse_one<T: FromStr>(key: &'static str, value: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    let value = value.trim();
    value.parse::<T>().map_err(|e| CliError::invalid(key, format!("{value:?}: {e}")))
}

pub fn parse_label_mode(value: &str) -> Result<LabelMode> {
    match value.trim().to_ascii_lowercase().as_str() {
        "integer" | "int" => Ok(LabelMode::Integer),
        "label" | "string" => Ok(LabelMode::Label),
        other => Err(CliError::invalid("label-mode", format!("expected integer or label, got {other:?}"))),
    }
}

fn label_mode_name(mode: LabelMode) -> &'static str {
    match mode {
        LabelMode::Integer => "integer",
        LabelMode::Label => "label",
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    format!("[{}]", items.iter().map(T::to_string).collect::<Vec<_>>().join(", "))
}

impl RunConfig {
    /// Sets one field from its textual form.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key.trim().replace('_', "-").as_str() {
            "dataset" | "datasets" => self.datasets = list_items(value).into_iter().map(PathBuf::from).collect(),
            "methods" | "method" => self.methods = parse_list("methods", value)?,
            "alpha" | "alphas" => self.alphas = parse_list("alpha", value)?,
            "lambda" => self.lambda = parse_one("lambda", value)?,
            "rho" | "rhos" => self.rhos = parse_list("rho", value)?,
            "trials" => self.trials = parse_one("trials", value)?,
            "seed" => self.seed = parse_one("seed", value)?,
            "k-grid" => self.k_grid = parse_list("k-grid", value)?,
            "beta-grid" => self.beta_grid = parse_list("beta-grid", value)?,
            "folds" => self.folds = parse_one("folds", value)?,
            "drop-tolerance" => self.drop_tolerance = parse_one("drop-tolerance", value)?,
            "out" => self.out = PathBuf::from(value.trim()),
            "threads" => {
                self.threads = match value.trim() {
                    "" | "auto" | "0" => None,
                    v => Some(parse_one("threads", v)?),
                }
            }
            "min-cardinality" => self.min_cardinality = parse_one("min-cardinality", value)?,
            "label-mode" => self.label_mode = parse_label_mode(value)?,
            other => {
                return Err(CliError::Invalid {
                    key: "config",
                    message: format!("unknown key {other:?}; known keys: {}", KEYS.join(", ")),
                })
            }
        }
        Ok(())
    }

    /// Parses the file form, starting from defaults. `origin` names the
    /// source in error messages.
    pub fn parse(text: &str, origin: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| CliError::Syntax {
                path: origin.to_string(),
                line: i + 1,
                message: "expected `key = value`".into(),
            })?;
            cfg.set(key, value).map_err(|e| CliError::Syntax {
                path: origin.to_string(),
                line: i + 1,
                message: e.to_string(),
            })?;
        }
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::parse(&text, &path.display().to_string())
    }

    /// File form. Parsing it yields an equal configuration.
    pub fn render(&self) -> String {
        self.render_fields(true)
    }

    /// File form without `out` and `threads`, which do not affect results.
    pub fn render_for_hash(&self) -> String {
        self.render_fields(false)
    }

    fn render_fields(&self, with_local: bool) -> String {
        let mut s = String::new();
        let datasets: Vec<String> = self.datasets.iter().map(|p| p.display().to_string()).collect();
        let _ = writeln!(s, "dataset = {}", join(&datasets));
        let _ = writeln!(s, "methods = {}", join(&self.methods));
        let _ = writeln!(s, "alpha = {}", join(&self.alphas));
        let _ = writeln!(s, "lambda = {}", self.lambda);
        let _ = writeln!(s, "rho = {}", join(&self.rhos));
        let _ = writeln!(s, "trials = {}", self.trials);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "k-grid = {}", join(&self.k_grid));
        let _ = writeln!(s, "beta-grid = {}", join(&self.beta_grid));
        let _ = writeln!(s, "folds = {}", self.folds);
        let _ = writeln!(s, "drop-tolerance = {:e}", self.drop_tolerance);
        if with_local {
            let _ = writeln!(s, "out = {}", self.out.display());
            let threads = self.threads.map_or_else(|| "auto".to_string(), |t| t.to_string());
            let _ = writeln!(s, "threads = {threads}");
        }
        let _ = writeln!(s, "min-cardinality = {}", self.min_cardinality);
        let _ = writeln!(s, "label-mode = {}", label_mode_name(self.label_mode));
        s
    }

    /// Checks every field. Called before any data is read.
    pub fn validate(&self) -> Result<()> {
        let unit = |key: &'static str, xs: &[f64]| -> Result<()> {
            if xs.is_empty() {
                return Err(CliError::invalid(key, "empty list"));
            }
            match xs.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
                Some(x) => Err(CliError::invalid(key, format!("{x} is outside (0, 1)"))),
                None => Ok(()),
            }
        };
        if self.datasets.is_empty() {
            return Err(CliError::invalid("dataset", "no dataset given"));
        }
        if self.methods.is_empty() {
            return Err(CliError::invalid("methods", "no method selected"));
        }
        unit("alpha", &self.alphas)?;
        unit("rho", &self.rhos)?;
        if self.lambda == 0 {
            return Err(CliError::invalid("lambda", "must be at least 1"));
        }
        if self.trials == 0 {
            return Err(CliError::invalid("trials", "must be at least 1"));
        }
        if self.k_grid.is_empty() || self.k_grid.contains(&0) {
            return Err(CliError::invalid("k-grid", "needs at least one K >= 1"));
        }
        if self.beta_grid.is_empty() || self.beta_grid.iter().any(|&b| !b.is_finite() || b <= 0.0) {
            return Err(CliError::invalid("beta-grid", "needs at least one positive finite beta"));
        }
        if self.folds < 2 {
            return Err(CliError::invalid("folds", "must be at least 2"));
        }
        if !(0.0..1e-6).contains(&self.drop_tolerance) {
            return Err(CliError::invalid("drop-tolerance", "must lie in [0, 1e-6)"));
        }
        if self.threads == Some(0) {
            return Err(CliError::invalid("threads", "must be at least 1"));
        }
        if self.min_cardinality < 2 {
            return Err(CliError::invalid("min-cardinality", "must be at least 2"));
        }
        Ok(())
    }

    pub fn load_options(&self) -> LoadOptions {
        LoadOptions {
            mode: self.label_mode,
            min_cardinality: self.min_cardinality,
        }
    }

    /// Experiment settings for one `(α, ρ)` point.
    pub fn experiment(&self, alpha: f64, rho: f64) -> ExperimentConfig {
        ExperimentConfig {
            split: SplitSpec {
                observed_fraction: rho,
                trials: self.trials,
                seed: self.seed,
            },
            sampling: SamplingSpec {
                alpha,
                lambda: self.lambda,
            },
            cv: CvSpec {
                folds: self.folds,
                k_grid: self.k_grid.clone(),
                beta_grid: self.beta_grid.clone(),
                katz: KatzEval::Auto,
                drop_tolerance: self.drop_tolerance,
            },
            methods: self.methods.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let mut cfg = RunConfig {
            datasets: vec!["a.txt".into(), "b c.txt".into()],
            methods: vec![Method::LrwGjs, Method::HKatz],
            alphas: vec![0.1, 1.0 / 3.0],
            threads: Some(3),
            seed: u64::MAX,
            drop_tolerance: 2.5e-13,
            ..RunConfig::default()
        };
        assert_eq!(RunConfig::parse(&cfg.render(), "t").unwrap(), cfg);
        cfg.threads = None;
        cfg.label_mode = LabelMode::Label;
        assert_eq!(RunConfig::parse(&cfg.render(), "t").unwrap(), cfg);
    }

    #[test]
    fn accepts_bare_lists_and_comments() {
        let cfg = RunConfig::parse("# x\ndataset = d.txt\nalpha = 0.2, 0.8\nk_grid = [2]\n\nmethods = lrw-js\n", "t").unwrap();
        assert_eq!(cfg.alphas, vec![0.2, 0.8]);
        assert_eq!(cfg.k_grid, vec![2]);
        assert_eq!(cfg.methods, vec![Method::LrwJs]);
        cfg.validate().unwrap();
    }

    #[test]
    fn errors_name_the_line() {
        let err = RunConfig::parse("dataset = d\nalpha = [0.2, x]\n", "cfg").unwrap_err();
        assert!(err.to_string().starts_with("cfg: line 2:"), "{err}");
        assert!(RunConfig::parse("nonsense\n", "cfg").is_err());
        assert!(RunConfig::parse("colour = red\n", "cfg").is_err());
    }

    #[test]
    fn validation_rejects_bad_values() {
        let base = RunConfig {
            datasets: vec!["d".into()],
            ..RunConfig::default()
        };
        base.validate().unwrap();
        for (key, value) in [
            ("alpha", "1.0"),
            ("rho", "0"),
            ("lambda", "0"),
            ("trials", "0"),
            ("k-grid", "[0, 2]"),
            ("beta-grid", "[-0.1]"),
            ("folds", "1"),
            ("drop-tolerance", "-1e-15"),
            ("drop-tolerance", "0.5"),
            ("min-cardinality", "1"),
            ("methods", "[]"),
        ] {
            let mut c = base.clone();
            c.set(key, value).unwrap();
            assert!(c.validate().is_err(), "{key} = {value}");
        }
        assert!(RunConfig::default().validate().is_err());
    }

    #[test]
    fn hash_form_ignores_local_settings() {
        let a = RunConfig::default();
        let b = RunConfig {
            threads: Some(1),
            out: "elsewhere".into(),
            ..a.clone()
        };
        assert_eq!(a.render_for_hash(), b.render_for_hash());
        assert_ne!(a.render(), b.render());
    }
}
