//! Acceptance gate: one PASS/FAIL line per criterion.
//!
//! Criteria listed in `KNOWN_FAILING` are reported but do not fail the run.

use entropy_lab::entropy::{net_upper, packing_lower, SampleConfig};
use entropy_lab::experiments::{random_tree, random_weights, run, ExperimentConfig, ExperimentKind, Report};
use entropy_lab::linalg::Matrix;
use entropy_lab::summation::{norm_oracle, summation_matrix, NormConfig};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

const SEED: u64 = 1;
const KNOWN_FAILING: &[u32] = &[1];

struct Outcome {
    id: u32,
    pass: bool,
    detail: String,
}

fn experiment(kind: ExperimentKind) -> Report {
    run(&ExperimentConfig::new(kind, SEED)).expect("experiment runs")
}

fn from_report(id: u32, reports: &[&Report], names: &[&str], limit_secs: f64) -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    let mut secs = 0.0;
    for r in reports {
        secs += r.elapsed_secs;
        for c in r.checks.iter().filter(|c| names.contains(&c.name.as_str())) {
            pass &= c.pass;
            parts.push(format!("{}.{}={:.4} ({})", r.experiment.name(), c.name, c.value, c.threshold));
        }
    }
    if limit_secs.is_finite() {
        pass &= secs < limit_secs;
        parts.push(format!("{secs:.1}s < {limit_secs}s"));
    }
    Outcome {
        id,
        pass,
        detail: parts.join(", "),
    }
}

fn random_operator(rng: &mut ChaCha8Rng) -> (Matrix<f64>, f64, f64, u32) {
    let rows = rng.random_range(1..=4);
    let cols = rng.random_range(1..=4);
    let data = (0..rows * cols).map(|_| rng.random_range(-1.0..1.0)).collect();
    let exps = [1.0, 2.0, 4.0, f64::INFINITY];
    let i = rng.random_range(0..exps.len());
    let j = rng.random_range(i..exps.len());
    let k = rng.random_range(1..=4);
    (Matrix::from_row_major(rows, cols, data).unwrap(), exps[i], exps[j], k)
}

/// Returns the outcome and a transcript of every bracket for the
/// determinism check.
fn bracketing() -> (Outcome, String) {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let cfg = SampleConfig {
        seed: SEED,
        ..Default::default()
    };
    let mut transcript = String::new();
    let mut ordered = 0;
    let mut worst = 0.0f64;
    for _ in 0..50 {
        let (a, p, q, k) = random_operator(&mut rng);
        let lo = packing_lower(&a, p, q, k, &cfg).unwrap().value;
        let hi = net_upper(&a, p, q, k, 0.1).unwrap().value;
        if lo <= hi {
            ordered += 1;
        }
        worst = worst.max(hi / lo);
        transcript.push_str(&format!("{p},{q},{k},{lo:e},{hi:e}\n"));
    }
    let secs = start.elapsed().as_secs_f64();
    let pass = ordered == 50 && worst <= 6.0 && secs < 120.0;
    let detail = format!("ordered {ordered}/50, worst ratio {worst:.3} (<= 6), {secs:.1}s < 120s");
    (Outcome { id: 2, pass, detail }, transcript)
}

fn oracle_vs_svd() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let cfg = NormConfig {
        seed: SEED,
        ..Default::default()
    };
    let mut worst_rel = 0.0f64;
    let mut upper_ok = true;
    for _ in 0..100 {
        let n = rng.random_range(1..=50);
        let b = rng.random_range(1..=4);
        let tree = random_tree(&mut rng, n, b);
        let u = random_weights(&mut rng, n, 1.0);
        let w = random_weights(&mut rng, n, 1.0);
        let est = norm_oracle(&tree, &u, &w, 2.0, 2.0, &cfg).unwrap();
        let m = summation_matrix(&tree, &u, &w).unwrap();
        let dense = DMatrix::from_row_slice(m.rows(), m.cols(), m.as_slice());
        let sigma = dense.singular_values().max();
        worst_rel = worst_rel.max((est.lower - sigma).abs() / sigma);
        upper_ok &= est.upper >= sigma * (1.0 - 1e-12);
    }
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        id: 8,
        pass: worst_rel <= 1e-6 && upper_ok && secs < 60.0,
        detail: format!("worst relative gap {worst_rel:.2e} (<= 1e-6), upper >= svd: {upper_ok}, {secs:.1}s < 60s"),
    }
}

fn main() {
    let schuett = experiment(ExperimentKind::SchuettRegimes);
    let partition = experiment(ExperimentKind::PartitionStress);
    let hardy = experiment(ExperimentKind::HardyConsistency);
    let power = experiment(ExperimentKind::CriticalScalingPower);
    let log = experiment(ExperimentKind::CriticalScalingLog);
    let kuhn = experiment(ExperimentKind::KuhnConsistency);
    let (c2, transcript) = bracketing();

    let mut outcomes = vec![
        from_report(1, &[&schuett], &["middle_slope", "decay_per_nu"], 120.0),
        c2,
        from_report(3, &[&partition], &["violations", "reported_c_k"], 60.0),
        from_report(4, &[&hardy], &["constant_c", "hardy_slope"], 180.0),
        from_report(5, &[&power, &log], &["pack_label", "lower_slope", "certificate_band"], 600.0),
        from_report(6, &[&power, &log], &["budget_identity"], f64::INFINITY),
        from_report(7, &[&kuhn], &["relative_error"], f64::INFINITY),
        oracle_vs_svd(),
    ];

    let first = [&schuett, &partition, &hardy, &power, &log];
    let again = [
        ExperimentKind::SchuettRegimes,
        ExperimentKind::PartitionStress,
        ExperimentKind::HardyConsistency,
        ExperimentKind::CriticalScalingPower,
        ExperimentKind::CriticalScalingLog,
    ]
    .map(experiment);
    let mut same = first.iter().zip(&again).filter(|(a, b)| a.csv() == b.csv()).count();
    let (_, transcript2) = bracketing();
    if transcript == transcript2 {
        same += 1;
    }
    outcomes.push(Outcome {
        id: 9,
        pass: same == 6,
        detail: format!("{same}/6 CSV bodies byte-identical on rerun"),
    });

    let mut unexpected = Vec::new();
    for o in &outcomes {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!("criterion {}: {tag} {}", o.id, o.detail);
        if !o.pass && !KNOWN_FAILING.contains(&o.id) {
            unexpected.push(o.id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria failed: {unexpected:?}");
        std::process::exit(1);
    }
}
