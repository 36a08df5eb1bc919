//! Command-line driver: run experiments, generate trees, estimate norms.
//!
//! Exit codes: 0 when every check passes, 2 on a failed check, 1 on usage,
//! input or resource errors.

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use entropy_lab::experiments::{self, ExperimentConfig, ExperimentError, ExperimentKind, GenTreeSpec};
use entropy_lab::summation::{norm_oracle, NormConfig};
use entropy_lab::tree::TreeFile;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "entropy-lab", version, about = "Entropy numbers of summation operators on trees")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write manifest.json, results.csv and summary.json.
    Run {
        #[arg(long)]
        experiment: Option<String>,
        /// JSON config; its `experiment` field is overridden by `--experiment`.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Generate a tree from an h-profile file.
    GenTree {
        #[arg(long)]
        profile: PathBuf,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate the l_p -> l_q norm of the summation operator of a tree file.
    Norm {
        #[arg(long)]
        tree: PathBuf,
        #[arg(long)]
        p: f64,
        #[arg(long)]
        q: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

fn resolve_config(
    experiment: Option<String>,
    config: Option<PathBuf>,
    seed: Option<u64>,
    out: Option<PathBuf>,
) -> Result<ExperimentConfig> {
    let mut cfg = match (&config, &experiment) {
        (Some(path), _) => read_json::<ExperimentConfig>(path)?,
        (None, Some(name)) => ExperimentConfig::new(ExperimentKind::parse(name)?, 0),
        (None, None) => anyhow::bail!("either --experiment or --config is required"),
    };
    if let Some(name) = experiment {
        cfg.experiment = ExperimentKind::parse(&name)?;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if out.is_some() {
        cfg.output_dir = out;
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Run {
            experiment,
            config,
            seed,
            out,
        } => {
            let cfg = resolve_config(experiment, config, seed, out)?;
            let report = experiments::run(&cfg)?;
            for c in &report.checks {
                println!(
                    "{} {}: {} (threshold {})",
                    if c.pass { "PASS" } else { "FAIL" },
                    c.name,
                    c.value,
                    c.threshold
                );
            }
            Ok(report.pass())
        }
        Command::GenTree { profile, depth, out } => {
            let spec: GenTreeSpec = read_json(&profile)?;
            let file = experiments::gen_tree_file(&spec, depth)?;
            std::fs::write(&out, serde_json::to_string_pretty(&file)?)
                .with_context(|| format!("writing {}", out.display()))?;
            Ok(true)
        }
        Command::Norm { tree, p, q, seed } => {
            let file: TreeFile = read_json(&tree)?;
            let t = file.tree()?;
            let n = t.vertex_count();
            let u = file.u.clone().unwrap_or_else(|| vec![1.0; n]);
            let w = file.w.clone().unwrap_or_else(|| vec![1.0; n]);
            let cfg = NormConfig {
                seed,
                ..Default::default()
            };
            let est = norm_oracle(&t, &u, &w, p, q, &cfg)?;
            println!(
                "{}",
                serde_json::json!({"lower": est.lower, "upper": est.upper, "iterations": est.iterations})
            );
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            if let Some(ExperimentError::Resource(_)) = e.downcast_ref::<ExperimentError>() {
                eprintln!("partial results were flushed to the output directory");
            }
            ExitCode::from(1)
        }
    }
}
