//! The individual experiments.

use super::{fit_linear, fit_slope, random_tree, random_weights, Budget, Check, ExperimentError, ExperimentKind, Row};
use crate::entropy::{
    budget_constant, entropy_certificate, kuhn_value, lattice_cover_estimate, packing_profile, schuett,
    volumetric_lower, CertificateConfig, Phi, SampleConfig,
};
use crate::hset::{
    generate_hset_tree, validate_critical, CriticalParams, HProfile, PackKind, PackWeights, Tau,
};
use crate::linalg::Matrix;
use crate::partition::{balanced_partition, dyadic_family, VertexWeight};
use crate::summation::{
    hardy_bound, norm_oracle, row_holder_bound, summation_matrix, vertex_weights, DepthShift, NormConfig,
    WeightScheme,
};
use crate::tree::{Tree, TreeFile};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

pub(super) struct Outcome {
    pub params: Value,
    pub summary: Map<String, Value>,
    pub checks: Vec<Check>,
}

fn parse<P: DeserializeOwned + Serialize>(v: Value) -> Result<(P, Value), ExperimentError> {
    let p: P = serde_json::from_value(v).map_err(|e| ExperimentError::Config(e.to_string()))?;
    let resolved = serde_json::to_value(&p)?;
    Ok((p, resolved))
}

pub(super) fn dispatch(
    kind: ExperimentKind,
    params: Value,
    seed: u64,
    budget: &Budget,
    rows: &mut Vec<Row>,
) -> Result<Outcome, ExperimentError> {
    match kind {
        ExperimentKind::SchuettRegimes => schuett_regimes(params, seed, budget, rows),
        ExperimentKind::PartitionStress => partition_stress(params, seed, budget, rows),
        ExperimentKind::HardyConsistency => hardy_consistency(params, seed, budget, rows),
        ExperimentKind::CriticalScalingPower => {
            let (p, resolved) = parse::<CriticalPowerParams>(params)?;
            critical_scaling(p.setup()?, resolved, seed, budget, rows)
        }
        ExperimentKind::CriticalScalingLog => {
            let (p, resolved) = parse::<CriticalLogParams>(params)?;
            critical_scaling(p.setup()?, resolved, seed, budget, rows)
        }
        ExperimentKind::CertificateGrowth => certificate_growth(params, budget, rows),
        ExperimentKind::KuhnConsistency => kuhn_consistency(params, rows),
    }
}

/// Parameters of `schuett_regimes`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SchuettParams {
    pub nu: usize,
    pub p: f64,
    pub q: f64,
    pub k_max: u32,
    pub samples: usize,
}

impl Default for SchuettParams {
    fn default() -> Self {
        Self {
            nu: 32,
            p: 1.0,
            q: 2.0,
            k_max: 320,
            samples: 1 << 14,
        }
    }
}

/// Lattice-cover estimates for the identity against the reference curve,
/// with a slope fit on `⌈log₂ ν⌉ ≤ k ≤ ν` and a decay fit on `2ν ≤ k ≤ 10ν`.
fn schuett_regimes(params: Value, seed: u64, budget: &Budget, rows: &mut Vec<Row>) -> Result<Outcome, ExperimentError> {
    let (prm, resolved) = parse::<SchuettParams>(params)?;
    if prm.nu < 2 {
        return Err(ExperimentError::Config("nu must be at least 2".into()));
    }
    budget.check_alloc((prm.samples * prm.nu) as u64)?;
    let ones = vec![1.0f64; prm.nu];
    let cfg = SampleConfig {
        samples: prm.samples,
        seed,
        ..Default::default()
    };
    for k in 1..=prm.k_max {
        budget.check_time()?;
        let h = lattice_cover_estimate(&ones, prm.p, prm.q, k, &cfg)?.value;
        let r = schuett(prm.nu as u64, k as u64, prm.p, prm.q)?;
        let lo = volumetric_lower(prm.nu, prm.p, prm.q, k, &ones)?.value;
        rows.push(Row {
            lower: Some(lo),
            heuristic: Some(h),
            reference: Some(r),
            ratio: Some(h / r),
            ..Row::at(k as f64)
        });
    }
    let nu = prm.nu as f64;
    let b = (prm.nu - 1).ilog2() as f64 + 1.0;
    let target = -(1.0 / prm.p - 1.0 / prm.q);
    let middle: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n_or_k >= b && r.n_or_k <= nu)
        .map(|r| (r.n_or_k, r.heuristic.unwrap_or(0.0)))
        .collect();
    let decay: Vec<(f64, f64)> = rows
        .iter()
        .filter(|r| r.n_or_k >= 2.0 * nu && r.n_or_k <= 10.0 * nu)
        .map(|r| (r.n_or_k / nu, r.heuristic.unwrap_or(0.0).log2()))
        .collect();
    let mut summary = Map::new();
    let mut checks = Vec::new();
    let mid = fit_slope(&middle)?;
    summary.insert("middle_fit".into(), serde_json::to_value(mid)?);
    checks.push(Check::within("middle_slope", mid.slope, target, 0.20));
    let ref_mid: Vec<(f64, f64)> = middle
        .iter()
        .map(|&(k, _)| (k, schuett(prm.nu as u64, k as u64, prm.p, prm.q).unwrap_or(0.0)))
        .collect();
    summary.insert("middle_fit_reference".into(), serde_json::to_value(fit_slope(&ref_mid)?)?);
    match fit_linear(&decay) {
        Ok(f) => {
            summary.insert("decay_fit".into(), serde_json::to_value(f)?);
            checks.push(Check::within("decay_per_nu", f.slope, -1.0, 0.15));
        }
        Err(_) => checks.push(Check::new("decay_per_nu", f64::NAN, "k_max >= 10 nu", false)),
    }
    let bracket = rows
        .iter()
        .filter(|r| r.lower.unwrap_or(0.0) > r.heuristic.unwrap_or(0.0) * (1.0 + 1e-12))
        .count();
    summary.insert("volumetric_above_heuristic".into(), json!(bracket));
    Ok(Outcome {
        params: resolved,
        summary,
        checks,
    })
}

/// Parameters of `partition_stress`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PartitionParams {
    pub trees: usize,
    pub max_vertices: usize,
    pub max_branching: usize,
    pub max_n: usize,
    /// Weights are `exp(U)` with `U` uniform on `[-spread, spread]`.
    pub spread: f64,
}

impl Default for PartitionParams {
    fn default() -> Self {
        Self {
            trees: 200,
            max_vertices: 10_000,
            max_branching: 3,
            max_n: 256,
            spread: 4.0,
        }
    }
}

struct PartitionTrial {
    n: usize,
    parts: usize,
    c_k: usize,
    worst_weight: f64,
    cross: usize,
    violations: usize,
    laminar: bool,
}

fn partition_trial(prm: &PartitionParams, seed: u64, i: usize) -> Result<PartitionTrial, ExperimentError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(i as u64);
    let nv = rng.random_range(1..=prm.max_vertices.max(1));
    let k = rng.random_range(1..=prm.max_branching.max(1));
    let tree = random_tree(&mut rng, nv, k);
    let n = rng.random_range(1..=prm.max_n.max(1));
    let weights = VertexWeight::new(random_weights(&mut rng, nv, prm.spread))?;
    let total = weights.total();
    let bp = balanced_partition(&tree, &weights, n, k)?;
    let c_k = bp.c_k;
    let mut violations = 0usize;
    if bp.partition.validate(&tree, true).is_err() {
        violations += 1;
    }
    let parts = bp.partition.len();
    if parts > c_k * n {
        violations += 1;
    }
    let mut worst_weight = 0f64;
    for part in &bp.partition.parts {
        if part.vertices.len() > 1 {
            let r = weights.of(&part.vertices) * n as f64 / total;
            worst_weight = worst_weight.max(r);
            if r > c_k as f64 {
                violations += 1;
            }
        }
    }
    let fam = dyadic_family(&tree, &weights, n, k)?;
    for level in &fam.levels {
        if level.validate(&tree, true).is_err() {
            violations += 1;
        }
    }
    let cross = fam.max_cross_intersections(nv);
    if cross > fam.c_k {
        violations += 1;
    }
    Ok(PartitionTrial {
        n,
        parts,
        c_k,
        worst_weight,
        cross,
        violations,
        laminar: fam.is_laminar(nv),
    })
}

/// Balanced partitions and dyadic families of random trees with post-checks.
///
/// Row `i`: `lower` is the largest `n Φ(part)/Φ(V)` over multi-vertex parts,
/// `upper` is `C(k)`, `heuristic` is `parts / n`, `reference` is the largest
/// cross-level intersection count and `ratio` is `lower / upper`.
fn partition_stress(params: Value, seed: u64, budget: &Budget, rows: &mut Vec<Row>) -> Result<Outcome, ExperimentError> {
    let (prm, resolved) = parse::<PartitionParams>(params)?;
    let trials: Vec<Result<PartitionTrial, ExperimentError>> = (0..prm.trees)
        .into_par_iter()
        .map(|i| partition_trial(&prm, seed, i))
        .collect();
    budget.check_time()?;
    let mut violations = 0usize;
    let mut non_laminar = 0usize;
    let mut worst_c = 0usize;
    let mut worst_margin = f64::INFINITY;
    for (i, t) in trials.into_iter().enumerate() {
        let t = t?;
        violations += t.violations;
        non_laminar += usize::from(!t.laminar);
        worst_c = worst_c.max(t.c_k);
        worst_margin = worst_margin.min(t.c_k as f64 - t.worst_weight);
        rows.push(Row {
            lower: Some(t.worst_weight),
            upper: Some(t.c_k as f64),
            heuristic: Some(t.parts as f64 / t.n as f64),
            reference: Some(t.cross as f64),
            ratio: Some(t.worst_weight / t.c_k as f64),
            ..Row::at(i as f64)
        });
    }
    let mut summary = Map::new();
    summary.insert("violations".into(), json!(violations));
    summary.insert("non_laminar_families".into(), json!(non_laminar));
    summary.insert("largest_c_k".into(), json!(worst_c));
    summary.insert("weight_margin".into(), json!(worst_margin));
    let checks = vec![
        Check::at_most("violations", violations as f64, 0.0),
        Check::at_most("reported_c_k", worst_c as f64, (prm.max_branching + 2) as f64),
    ];
    Ok(Outcome {
        params: resolved,
        summary,
        checks,
    })
}

/// Parameters of `hardy_consistency`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HardyParams {
    pub p: f64,
    pub q: f64,
    /// Window depths `j = 2^e`.
    pub log2_depths: Vec<u32>,
    /// Levels below the window root.
    pub window: usize,
    pub kappa: f64,
    pub alpha_u: f64,
    pub alpha_w: f64,
    /// Largest accepted ratio `oracle lower / hardy bound`.
    pub c_max: f64,
}

impl Default for HardyParams {
    fn default() -> Self {
        Self {
            p: 2.0,
            q: 4.0,
            log2_depths: (4..=9).collect(),
            window: 8,
            kappa: 1.5,
            alpha_u: 0.0,
            alpha_w: 0.25,
            c_max: 10.0,
        }
    }
}

/// Norm oracle on binary windows rooted at depth `j` against the Hardy
/// bound at `j`.
fn hardy_consistency(params: Value, seed: u64, budget: &Budget, rows: &mut Vec<Row>) -> Result<Outcome, ExperimentError> {
    let (prm, resolved) = parse::<HardyParams>(params)?;
    let h = HProfile::new(1.0, 0.0, Tau::Const, 1.0)?;
    let scheme = WeightScheme::Power {
        kappa: prm.kappa,
        m_star: 1,
        alpha_u: prm.alpha_u,
        alpha_w: prm.alpha_w,
        offset: DepthShift::Unshifted,
    };
    let ncfg = NormConfig {
        seed,
        ..Default::default()
    };
    for &e in &prm.log2_depths {
        budget.check_time()?;
        let j = 1u64 << e;
        let g = generate_hset_tree(&h, 1, prm.window, j, seed)?;
        let (u, w) = vertex_weights(&g.tree, &scheme, j)?;
        let est = norm_oracle(&g.tree, &u, &w, prm.p, prm.q, &ncfg)?;
        let hb = hardy_bound(&g.layer_sizes, &scheme, &h, prm.p, prm.q, j)?;
        rows.push(Row {
            lower: Some(est.lower),
            upper: Some(est.upper),
            reference: Some(hb),
            ratio: Some(est.lower / hb),
            ..Row::at(j as f64)
        });
    }
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let c = ratios.iter().cloned().fold(0.0, f64::max);
    let c_min = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let fit = fit_slope(&rows.iter().map(|r| (r.n_or_k, r.reference.unwrap_or(0.0))).collect::<Vec<_>>())?;
    let oracle_fit = fit_slope(&rows.iter().map(|r| (r.n_or_k, r.lower.unwrap_or(0.0))).collect::<Vec<_>>())?;
    let mut summary = Map::new();
    summary.insert("constant_c".into(), json!(c));
    summary.insert("ratio_min".into(), json!(c_min));
    summary.insert("hardy_fit".into(), serde_json::to_value(fit)?);
    summary.insert("oracle_fit".into(), serde_json::to_value(oracle_fit)?);
    let target = 1.0 / prm.q - 1.0 / prm.p;
    let checks = vec![
        Check::at_most("constant_c", c, prm.c_max),
        Check::within("hardy_slope", fit.slope, target, 0.1),
    ];
    Ok(Outcome {
        params: resolved,
        summary,
        checks,
    })
}

/// Parameters of `critical_scaling_power`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriticalPowerParams {
    pub p: f64,
    pub q: f64,
    /// Depth of the full binary tree.
    pub depth: usize,
    pub kappa: f64,
    pub alpha_u: f64,
    pub alpha_w: f64,
    pub samples: usize,
    pub n_min: u32,
    pub n_max: u32,
    pub eps: f64,
}

impl Default for CriticalPowerParams {
    fn default() -> Self {
        Self {
            p: 2.0,
            q: 4.0,
            depth: 9,
            kappa: 1.5,
            alpha_u: 0.0,
            alpha_w: 0.25,
            samples: 4096,
            n_min: 3,
            n_max: 10,
            eps: 0.1,
        }
    }
}

/// Parameters of `critical_scaling_log`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CriticalLogParams {
    pub p: f64,
    pub q: f64,
    /// Length of the path.
    pub depth: usize,
    pub m_star: u32,
    pub kappa: f64,
    pub alpha: f64,
    pub lambda_u: f64,
    pub lambda_w: f64,
    pub samples: usize,
    pub n_min: u32,
    pub n_max: u32,
    pub eps: f64,
}

impl Default for CriticalLogParams {
    fn default() -> Self {
        Self {
            p: 2.0,
            q: 4.0,
            depth: 512,
            m_star: 4,
            kappa: 0.25,
            alpha: 0.0,
            lambda_u: 0.0,
            lambda_w: 0.25,
            samples: 4096,
            n_min: 3,
            n_max: 10,
            eps: 0.1,
        }
    }
}

struct ScalingSetup {
    tree: Tree,
    scheme: WeightScheme,
    h: HProfile,
    pack: CriticalParams,
    expected: PackKind,
    samples: usize,
    n_min: u32,
    n_max: u32,
    eps: f64,
}

impl CriticalPowerParams {
    fn setup(&self) -> Result<ScalingSetup, ExperimentError> {
        let h = HProfile::new(1.0, 0.0, Tau::Const, 1.0)?;
        let tree = generate_hset_tree(&h, 1, self.depth, 0, 0)?.tree;
        Ok(ScalingSetup {
            tree,
            scheme: WeightScheme::power(self.kappa, 1, self.alpha_u, self.alpha_w),
            pack: CriticalParams {
                p: self.p,
                q: self.q,
                theta: h.theta,
                gamma: h.gamma,
                kappa: self.kappa,
                m_star: 1,
                nu: 0.0,
                weights: PackWeights::Power {
                    alpha_u: self.alpha_u,
                    alpha_w: self.alpha_w,
                },
            },
            h,
            expected: PackKind::CriticalPower,
            samples: self.samples,
            n_min: self.n_min,
            n_max: self.n_max,
            eps: self.eps,
        })
    }
}

impl CriticalLogParams {
    fn setup(&self) -> Result<ScalingSetup, ExperimentError> {
        let h = HProfile::new(0.0, 0.0, Tau::Const, 1.0)?;
        let tree = generate_hset_tree(&h, self.m_star, self.depth, 0, 0)?.tree;
        Ok(ScalingSetup {
            tree,
            scheme: WeightScheme::Log {
                kappa: self.kappa,
                m_star: self.m_star,
                alpha: self.alpha,
                lambda_u: self.lambda_u,
                lambda_w: self.lambda_w,
            },
            pack: CriticalParams {
                p: self.p,
                q: self.q,
                theta: h.theta,
                gamma: h.gamma,
                kappa: self.kappa,
                m_star: self.m_star,
                nu: 0.0,
                weights: PackWeights::Log {
                    alpha: self.alpha,
                    lambda_u: self.lambda_u,
                    lambda_w: self.lambda_w,
                },
            },
            h,
            expected: PackKind::CriticalLog,
            samples: self.samples,
            n_min: self.n_min,
            n_max: self.n_max,
            eps: self.eps,
        })
    }
}

/// Packing lower bounds and certificates for `n = n_min..=n_max`.
///
/// Row `n`: `lower` and `heuristic` are the packing bound and the sampled
/// covering radius for `e_n`; `upper` is the certified norm bound
/// `e_n ≤ e_1 ≤ ‖S‖`; `reference` is `n^{1/q-1/p}`; `ratio` is
/// `B(n) n^{1/p-1/q}` for the certificate `e_{K(n)} ≤ B(n)`.
fn critical_scaling(
    s: ScalingSetup,
    resolved: Value,
    seed: u64,
    budget: &Budget,
    rows: &mut Vec<Row>,
) -> Result<Outcome, ExperimentError> {
    let (p, q) = (s.pack.p, s.pack.q);
    if s.n_min < 2 || s.n_max < s.n_min || s.n_max > crate::entropy::MAX_SAMPLED_K {
        return Err(ExperimentError::Config("need 2 <= n_min <= n_max <= 24".into()));
    }
    let report = validate_critical(&s.pack);
    let nv = s.tree.vertex_count() as u64;
    budget.check_alloc(nv * nv + s.samples as u64 * nv)?;
    let (u, w) = vertex_weights(&s.tree, &s.scheme, 0)?;
    let m: Matrix<f64> = summation_matrix(&s.tree, &u, &w)?;
    let norm_up = row_holder_bound(&s.tree, &u, &w, p, q).min(m.riesz_thorin_bound(p));
    let cfg = SampleConfig {
        samples: s.samples,
        seed,
        ..Default::default()
    };
    let prof = packing_profile(&m, p, q, s.n_max, &cfg)?;
    budget.check_time()?;
    let ccfg = CertificateConfig {
        p,
        q,
        eps: s.eps,
        ..Default::default()
    };
    let a = 1.0 / p - 1.0 / q;
    let mut ks = Vec::new();
    let mut bs = Vec::new();
    let mut budget_ok = true;
    let mut budget_worst = 0f64;
    for n in s.n_min..=s.n_max {
        budget.check_time()?;
        let cert = entropy_certificate(&s.tree, &s.scheme, &s.h, n as u64, &ccfg)?;
        budget_ok &= cert.budget_holds();
        budget_worst = budget_worst.max(cert.budget_sum as f64 / n as f64);
        ks.push(cert.estimate.k);
        bs.push(cert.estimate.value);
        let nf = n as f64;
        rows.push(Row {
            lower: Some(prof.lower(n)),
            upper: Some(norm_up),
            heuristic: Some(prof.cover(n)),
            reference: Some(nf.powf(-a)),
            ratio: Some(cert.estimate.value * nf.powf(a)),
            ..Row::at(nf)
        });
    }
    let lower_fit = fit_slope(&rows.iter().map(|r| (r.n_or_k, r.lower.unwrap_or(0.0))).collect::<Vec<_>>())?;
    let ratios: Vec<f64> = rows.iter().filter_map(|r| r.ratio).collect();
    let band = ratios.iter().cloned().fold(0.0, f64::max) / ratios.iter().cloned().fold(f64::INFINITY, f64::min);
    let constant = budget_constant(s.eps);
    let mut summary = Map::new();
    summary.insert("pack".into(), serde_json::to_value(&report)?);
    summary.insert("vertices".into(), json!(nv));
    summary.insert("lower_fit".into(), serde_json::to_value(lower_fit)?);
    summary.insert("certificate_index".into(), json!(ks));
    summary.insert("certificate_bound".into(), json!(bs));
    summary.insert("certificate_band".into(), json!(band));
    summary.insert("budget_constant".into(), json!(constant));
    summary.insert("budget_per_n_max".into(), json!(budget_worst));
    let checks = vec![
        Check::new("pack_label", 0.0, format!("{:?}", s.expected), report.kind == s.expected),
        Check::within("lower_slope", lower_fit.slope, -a, 0.20),
        Check::at_most("certificate_band", band, 10.0),
        Check::new("budget_identity", budget_worst, format!("<= {constant}"), budget_ok),
    ];
    Ok(Outcome {
        params: resolved,
        summary,
        checks,
    })
}

/// Parameters of `certificate_growth`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GrowthParams {
    pub depth: usize,
    pub n_max: u64,
    pub eps: f64,
}

impl Default for GrowthParams {
    fn default() -> Self {
        Self {
            depth: 9,
            n_max: 64,
            eps: 0.1,
        }
    }
}

/// Certificate index and bound for `n = 2..=n_max` on the power pack.
///
/// Row `n`: `upper` is `B(n)`, `heuristic` is `K(n)`, `reference` is `C n`
/// and `ratio` is `Σ(k - 1) / (C n)`.
fn certificate_growth(params: Value, budget: &Budget, rows: &mut Vec<Row>) -> Result<Outcome, ExperimentError> {
    let (prm, resolved) = parse::<GrowthParams>(params)?;
    let setup = CriticalPowerParams {
        depth: prm.depth,
        ..Default::default()
    }
    .setup()?;
    let ccfg = CertificateConfig {
        eps: prm.eps,
        ..Default::default()
    };
    let c = budget_constant(prm.eps);
    let mut ok = true;
    let mut worst = 0f64;
    for n in 2..=prm.n_max {
        budget.check_time()?;
        let cert = entropy_certificate(&setup.tree, &setup.scheme, &setup.h, n, &ccfg)?;
        ok &= cert.budget_holds();
        let r = cert.budget_sum as f64 / (c * n as f64);
        worst = worst.max(r);
        rows.push(Row {
            upper: Some(cert.estimate.value),
            heuristic: Some(cert.estimate.k as f64),
            reference: Some(c * n as f64),
            ratio: Some(r),
            ..Row::at(n as f64)
        });
    }
    let mut summary = Map::new();
    summary.insert("budget_constant".into(), json!(c));
    summary.insert("worst_ratio".into(), json!(worst));
    Ok(Outcome {
        params: resolved,
        summary,
        checks: vec![Check::new("budget_identity", worst, "<= 1", ok)],
    })
}

/// Parameters of `kuhn_consistency`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KuhnParams {
    pub p: f64,
    pub q: f64,
    pub points: u64,
}

impl Default for KuhnParams {
    fn default() -> Self {
        Self {
            p: 2.0,
            q: 4.0,
            points: 20,
        }
    }
}

/// `kuhn_value` with `φ(t) = (ln(2 + t))^{1/p-1/q}` against direct
/// evaluation of `1/φ(2^n)`.
fn kuhn_consistency(params: Value, rows: &mut Vec<Row>) -> Result<Outcome, ExperimentError> {
    let (prm, resolved) = parse::<KuhnParams>(params)?;
    let a = 1.0 / prm.p - 1.0 / prm.q;
    let phi = Phi::LogShift { shift: 2.0, power: a };
    let mut worst = 0f64;
    for n in 0..prm.points {
        let v = kuhn_value(n, prm.p, prm.q, &phi)?;
        let direct = 1.0 / (2.0 + (n as f64).exp2()).ln().powf(a);
        let rel = (v - direct).abs() / direct;
        worst = worst.max(rel);
        rows.push(Row {
            heuristic: Some(v),
            reference: Some(direct),
            ratio: Some(v / direct),
            ..Row::at(n as f64)
        });
    }
    let mut summary = Map::new();
    summary.insert("max_relative_error".into(), json!(worst));
    Ok(Outcome {
        params: resolved,
        summary,
        checks: vec![Check::at_most("relative_error", worst, 1e-12)],
    })
}

/// Input of `gen-tree`: the profile and where the root sits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenTreeSpec {
    pub h: HProfile,
    #[serde(default = "one")]
    pub m_star: u32,
    #[serde(default)]
    pub j_min: u64,
    #[serde(default)]
    pub seed: u64,
}

fn one() -> u32 {
    1
}

/// Generates a tree and wraps it with its profile metadata.
pub fn gen_tree_file(spec: &GenTreeSpec, depth: usize) -> Result<TreeFile, ExperimentError> {
    let g = generate_hset_tree(&spec.h, spec.m_star, depth, spec.j_min, spec.seed)?;
    let mut f = TreeFile::from_tree(&g.tree);
    f.profile = Some(serde_json::to_value(&g.meta)?);
    Ok(f)
}
