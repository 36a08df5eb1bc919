//! Reproducible experiments writing a manifest, a CSV table and a JSON
//! summary with pass/fail checks.

mod fit;
mod random;
mod runs;

pub use fit::{fit_linear, fit_slope, Fit};
pub use random::{random_tree, random_weights};
pub use runs::{
    gen_tree_file, CriticalLogParams, CriticalPowerParams, GenTreeSpec, HardyParams, KuhnParams,
    PartitionParams, SchuettParams, GrowthParams,
};

use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};
use thiserror::Error;

/// Wall-clock limit per experiment.
pub const TIME_LIMIT: Duration = Duration::from_secs(600);
/// Memory limit for the large allocations of an experiment.
pub const MEMORY_LIMIT: u64 = 8 << 30;

/// Errors raised while running an experiment.
#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("resource cap exceeded: {0}")]
    Resource(String),
    #[error("fit needs at least 3 points, got {0}")]
    TooFewPoints(usize),
    #[error("fit needs positive values, got {0}")]
    NonPositive(f64),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Tree(#[from] crate::tree::TreeError),
    #[error(transparent)]
    Partition(#[from] crate::partition::PartitionError),
    #[error(transparent)]
    Summation(#[from] crate::summation::SummationError),
    #[error(transparent)]
    Hset(#[from] crate::hset::HsetError),
    #[error(transparent)]
    Entropy(#[from] crate::entropy::EntropyError),
}

/// Available experiments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    SchuettRegimes,
    PartitionStress,
    HardyConsistency,
    CriticalScalingPower,
    CriticalScalingLog,
    CertificateGrowth,
    KuhnConsistency,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 7] = [
        ExperimentKind::SchuettRegimes,
        ExperimentKind::PartitionStress,
        ExperimentKind::HardyConsistency,
        ExperimentKind::CriticalScalingPower,
        ExperimentKind::CriticalScalingLog,
        ExperimentKind::CertificateGrowth,
        ExperimentKind::KuhnConsistency,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::SchuettRegimes => "schuett_regimes",
            ExperimentKind::PartitionStress => "partition_stress",
            ExperimentKind::HardyConsistency => "hardy_consistency",
            ExperimentKind::CriticalScalingPower => "critical_scaling_power",
            ExperimentKind::CriticalScalingLog => "critical_scaling_log",
            ExperimentKind::CertificateGrowth => "certificate_growth",
            ExperimentKind::KuhnConsistency => "kuhn_consistency",
        }
    }

    pub fn parse(name: &str) -> Result<Self, ExperimentError> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == name)
            .ok_or_else(|| ExperimentError::Config(format!("unknown experiment `{name}`")))
    }
}

/// Full description of one run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    /// Experiment-specific parameters; missing keys take their defaults.
    #[serde(default)]
    pub params: serde_json::Map<String, serde_json::Value>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, seed: u64) -> Self {
        Self {
            experiment,
            params: Default::default(),
            seed,
            output_dir: None,
        }
    }
}

/// One CSV row. Empty cells are `None`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Row {
    pub n_or_k: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub heuristic: Option<f64>,
    pub reference: Option<f64>,
    pub ratio: Option<f64>,
}

impl Row {
    pub fn at(n_or_k: f64) -> Self {
        Self {
            n_or_k,
            lower: None,
            upper: None,
            heuristic: None,
            reference: None,
            ratio: None,
        }
    }
}

/// One pass/fail check against a threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: String,
    pub pass: bool,
}

impl Check {
    pub fn new(name: &str, value: f64, threshold: impl Into<String>, pass: bool) -> Self {
        Self {
            name: name.into(),
            value,
            threshold: threshold.into(),
            pass,
        }
    }

    /// `|value - target| ≤ tol`.
    pub fn within(name: &str, value: f64, target: f64, tol: f64) -> Self {
        Self::new(
            name,
            value,
            format!("{target} ± {tol}"),
            (value - target).abs() <= tol,
        )
    }

    /// `value ≤ bound`.
    pub fn at_most(name: &str, value: f64, bound: f64) -> Self {
        Self::new(name, value, format!("<= {bound}"), value <= bound)
    }
}

/// Results of a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub experiment: ExperimentKind,
    pub seed: u64,
    /// Resolved parameters, defaults included.
    pub params: serde_json::Value,
    pub rows: Vec<Row>,
    /// Fitted slopes and other summary numbers.
    pub summary: serde_json::Map<String, serde_json::Value>,
    pub checks: Vec<Check>,
    pub elapsed_secs: f64,
}

impl Report {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    /// CSV body with header `n_or_k,lower,upper,heuristic,reference,ratio`.
    pub fn csv(&self) -> String {
        let mut s = String::from("n_or_k,lower,upper,heuristic,reference,ratio\n");
        let cell = |v: Option<f64>| v.map(|x| format!("{x:e}")).unwrap_or_default();
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{},{},{},{},{},{}",
                r.n_or_k,
                cell(r.lower),
                cell(r.upper),
                cell(r.heuristic),
                cell(r.reference),
                cell(r.ratio)
            );
        }
        s
    }

    /// JSON summary: fits, margins and checks.
    pub fn summary_json(&self) -> serde_json::Value {
        serde_json::json!({
            "experiment": self.experiment,
            "seed": self.seed,
            "pass": self.pass(),
            "summary": self.summary,
            "checks": self.checks,
        })
    }

    /// Writes `manifest.json`, `results.csv` and `summary.json` into `dir`.
    pub fn write(&self, dir: &Path, config: &ExperimentConfig) -> Result<(), ExperimentError> {
        std::fs::create_dir_all(dir)?;
        let stamp = std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        let manifest = serde_json::json!({
            "config": config,
            "resolved_params": self.params,
            "crate_version": env!("CARGO_PKG_VERSION"),
            "unix_time": stamp,
            "elapsed_secs": self.elapsed_secs,
        });
        std::fs::write(dir.join("manifest.json"), serde_json::to_string_pretty(&manifest)?)?;
        std::fs::write(dir.join("results.csv"), self.csv())?;
        std::fs::write(
            dir.join("summary.json"),
            serde_json::to_string_pretty(&self.summary_json())?,
        )?;
        Ok(())
    }
}

/// Time and memory guard shared by the runners.
#[derive(Debug, Clone)]
pub struct Budget {
    start: Instant,
    limit: Duration,
    memory: u64,
}

impl Budget {
    pub fn new(limit: Duration, memory: u64) -> Self {
        Self {
            start: Instant::now(),
            limit,
            memory,
        }
    }

    pub fn check_time(&self) -> Result<(), ExperimentError> {
        let e = self.start.elapsed();
        if e > self.limit {
            Err(ExperimentError::Resource(format!(
                "time limit {:?} exceeded after {:?}",
                self.limit, e
            )))
        } else {
            Ok(())
        }
    }

    /// Refuses an allocation of `elements` values of type `f64`.
    pub fn check_alloc(&self, elements: u64) -> Result<(), ExperimentError> {
        let bytes = elements.saturating_mul(8);
        if bytes > self.memory {
            Err(ExperimentError::Resource(format!(
                "{bytes} bytes requested, limit {}",
                self.memory
            )))
        } else {
            Ok(())
        }
    }

    pub fn elapsed(&self) -> f64 {
        self.start.elapsed().as_secs_f64()
    }
}

/// Runs an experiment and, if `config.output_dir` is set, writes its files.
///
/// On a resource error the rows produced so far are still written before
/// the error is returned.
pub fn run(config: &ExperimentConfig) -> Result<Report, ExperimentError> {
    run_with_budget(config, Budget::new(TIME_LIMIT, MEMORY_LIMIT))
}

/// [`run`] with explicit limits.
pub fn run_with_budget(config: &ExperimentConfig, budget: Budget) -> Result<Report, ExperimentError> {
    let params = serde_json::Value::Object(config.params.clone());
    let mut rows = Vec::new();
    let mut report = Report {
        experiment: config.experiment,
        seed: config.seed,
        params: serde_json::Value::Null,
        rows: Vec::new(),
        summary: Default::default(),
        checks: Vec::new(),
        elapsed_secs: 0.0,
    };
    let result = runs::dispatch(config.experiment, params, config.seed, &budget, &mut rows);
    report.rows = rows;
    report.elapsed_secs = budget.elapsed();
    match result {
        Ok(out) => {
            report.params = out.params;
            report.summary = out.summary;
            report.checks = out.checks;
            if let Some(dir) = &config.output_dir {
                report.write(dir, config)?;
            }
            Ok(report)
        }
        Err(e) => {
            if let (ExperimentError::Resource(msg), Some(dir)) = (&e, &config.output_dir) {
                report
                    .summary
                    .insert("error".into(), serde_json::Value::String(msg.clone()));
                report.write(dir, config)?;
            }
            Err(e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = r#"{"experiment": "kuhn_consistency", "sed": 3}"#;
        assert!(serde_json::from_str::<ExperimentConfig>(bad).is_err());
        let mut c = ExperimentConfig::new(ExperimentKind::KuhnConsistency, 0);
        c.params.insert("bogus".into(), 1.into());
        assert!(matches!(run(&c), Err(ExperimentError::Config(_))));
    }

    #[test]
    fn names_round_trip() {
        for k in ExperimentKind::ALL {
            assert_eq!(ExperimentKind::parse(k.name()).unwrap(), k);
            let j = serde_json::to_value(k).unwrap();
            assert_eq!(j, serde_json::Value::String(k.name().into()));
        }
    }

    #[test]
    fn writes_three_files() {
        let dir = tempfile::tempdir().unwrap();
        let mut c = ExperimentConfig::new(ExperimentKind::KuhnConsistency, 0);
        c.output_dir = Some(dir.path().to_path_buf());
        let r = run(&c).unwrap();
        assert!(r.pass());
        for f in ["manifest.json", "results.csv", "summary.json"] {
            assert!(dir.path().join(f).exists());
        }
        let csv = std::fs::read_to_string(dir.path().join("results.csv")).unwrap();
        assert_eq!(csv, r.csv());
    }

    #[test]
    fn time_cap_is_enforced() {
        let b = Budget::new(Duration::ZERO, MEMORY_LIMIT);
        std::thread::sleep(Duration::from_millis(2));
        assert!(matches!(b.check_time(), Err(ExperimentError::Resource(_))));
        assert!(Budget::new(TIME_LIMIT, 16).check_alloc(3).is_err());
    }
}
