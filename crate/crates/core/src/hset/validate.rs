//! Classification of parameter packs into the critical regimes.

use serde::{Deserialize, Serialize};

const EQ_TOL: f64 = 1e-12;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQ_TOL * (1.0 + a.abs().max(b.abs()))
}

/// Weight exponents of a pack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PackWeights {
    /// Power family exponents `α_u`, `α_w`.
    Power { alpha_u: f64, alpha_w: f64 },
    /// Logarithmic family exponents `α`, `λ_u`, `λ_w`.
    Log { alpha: f64, lambda_u: f64, lambda_w: f64 },
}

/// Full parameter pack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CriticalParams {
    pub p: f64,
    pub q: f64,
    pub theta: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub m_star: u32,
    /// Exponent of the logarithmic factor in the layer-size bound.
    #[serde(default)]
    pub nu: f64,
    pub weights: PackWeights,
}

/// Regime label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PackKind {
    /// Power weights with `α̃ = 1/p - 1/q`.
    CriticalPower,
    /// Logarithmic weights with `λ_u + λ_w = 1/p - 1/q`.
    CriticalLog,
    /// Admissible but off the critical line.
    NonCritical,
    /// A structural condition fails.
    Invalid,
}

/// One checked condition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// Per-condition report with the resulting label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalReport {
    pub kind: PackKind,
    pub conditions: Vec<ConditionCheck>,
    /// `α̃` for power packs, `λ_u + λ_w` for logarithmic packs.
    pub effective_exponent: f64,
    /// `1/p - 1/q`.
    pub target: f64,
}

impl CriticalReport {
    pub fn is_critical(&self) -> bool {
        matches!(self.kind, PackKind::CriticalPower | PackKind::CriticalLog)
    }

    /// Names of the failing conditions.
    pub fn failures(&self) -> Vec<&str> {
        self.conditions
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name.as_str())
            .collect()
    }
}

fn check(out: &mut Vec<ConditionCheck>, name: &str, passed: bool, detail: String) -> bool {
    out.push(ConditionCheck {
        name: name.to_string(),
        passed,
        detail,
    });
    passed
}

/// Checks every condition of the pack and labels it.
///
/// Power packs need `θ > 0` and either `κ > θ/q`, or `κ = θ/q` with
/// `α_w > (1 - γ)/q`; they are critical when `α̃ = 1/p - 1/q`, where
/// `α̃ = α_u + α_w` for `κ > θ/q` and `α_u + α_w - 1/q` for `κ = θ/q`.
/// Logarithmic packs need `θ = 0`, `γ ≤ 0`, `κ > 0`, and are critical when
/// `λ_u + λ_w = 1/p - 1/q`. Both need `1 < p < q < ∞` and `m_* ≥ 1`.
/// Equalities are tested with relative tolerance `1e-12`.
pub fn validate_critical(params: &CriticalParams) -> CriticalReport {
    let CriticalParams {
        p,
        q,
        theta,
        gamma,
        kappa,
        m_star,
        weights,
        ..
    } = *params;
    let target = 1.0 / p - 1.0 / q;
    let mut c = Vec::new();
    let mut ok = check(
        &mut c,
        "exponents",
        p > 1.0 && p < q && q.is_finite(),
        format!("1 < p < q < inf with p = {p}, q = {q}"),
    );
    ok &= check(&mut c, "m_star", m_star >= 1, format!("m_* = {m_star}"));
    let (kind, eff) = match weights {
        PackWeights::Power { alpha_u, alpha_w } => {
            ok &= check(&mut c, "theta_positive", theta > 0.0, format!("theta = {theta}"));
            let crit = theta / q;
            let equal = close(kappa, crit);
            let muck = if equal {
                let bound = (1.0 - gamma) / q;
                check(
                    &mut c,
                    "alpha_w_strict",
                    alpha_w > bound && !close(alpha_w, bound),
                    format!("kappa = theta/q needs alpha_w = {alpha_w} > (1 - gamma)/q = {bound}"),
                )
            } else {
                check(
                    &mut c,
                    "kappa_vs_theta",
                    kappa > crit,
                    format!("kappa = {kappa} vs theta/q = {crit}"),
                )
            };
            ok &= muck;
            let eff = if equal {
                alpha_u + alpha_w - 1.0 / q
            } else {
                alpha_u + alpha_w
            };
            let critical = check(
                &mut c,
                "critical_sum",
                close(eff, target),
                format!("alpha_tilde = {eff} vs 1/p - 1/q = {target}"),
            );
            let kind = if !ok {
                PackKind::Invalid
            } else if critical {
                PackKind::CriticalPower
            } else {
                PackKind::NonCritical
            };
            (kind, eff)
        }
        PackWeights::Log {
            lambda_u, lambda_w, ..
        } => {
            ok &= check(&mut c, "theta_zero", theta == 0.0, format!("theta = {theta}"));
            ok &= check(&mut c, "gamma_nonpositive", gamma <= 0.0, format!("gamma = {gamma}"));
            ok &= check(&mut c, "kappa_positive", kappa > 0.0, format!("kappa = {kappa}"));
            let eff = lambda_u + lambda_w;
            let critical = check(
                &mut c,
                "critical_sum",
                close(eff, target),
                format!("lambda_u + lambda_w = {eff} vs 1/p - 1/q = {target}"),
            );
            let kind = if !ok {
                PackKind::Invalid
            } else if critical {
                PackKind::CriticalLog
            } else {
                PackKind::NonCritical
            };
            (kind, eff)
        }
    };
    CriticalReport {
        kind,
        conditions: c,
        effective_exponent: eff,
        target,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pack(theta: f64, gamma: f64, kappa: f64, weights: PackWeights) -> CriticalParams {
        CriticalParams {
            p: 2.0,
            q: 4.0,
            theta,
            gamma,
            kappa,
            m_star: 1,
            nu: 0.0,
            weights,
        }
    }

    #[test]
    fn labels_match_examples() {
        let r = validate_critical(&pack(
            1.0,
            0.0,
            1.0,
            PackWeights::Power { alpha_u: 0.1, alpha_w: 0.15 },
        ));
        assert_eq!(r.kind, PackKind::CriticalPower);
        let r = validate_critical(&pack(
            0.0,
            -1.0,
            1.0,
            PackWeights::Log { alpha: 0.0, lambda_u: 0.1, lambda_w: 0.15 },
        ));
        assert_eq!(r.kind, PackKind::CriticalLog);
        let r = validate_critical(&pack(
            1.0,
            0.0,
            0.25,
            PackWeights::Power { alpha_u: 0.25, alpha_w: 0.25 },
        ));
        assert_eq!(r.kind, PackKind::Invalid);
        assert_eq!(r.failures(), vec!["alpha_w_strict"]);
    }

    #[test]
    fn non_critical_and_invalid() {
        let r = validate_critical(&pack(
            1.0,
            0.0,
            1.0,
            PackWeights::Power { alpha_u: 0.3, alpha_w: 0.3 },
        ));
        assert_eq!(r.kind, PackKind::NonCritical);
        let r = validate_critical(&pack(
            1.0,
            0.0,
            0.1,
            PackWeights::Power { alpha_u: 0.1, alpha_w: 0.15 },
        ));
        assert_eq!(r.kind, PackKind::Invalid);
        let r = validate_critical(&pack(
            0.0,
            0.5,
            1.0,
            PackWeights::Log { alpha: 0.0, lambda_u: 0.1, lambda_w: 0.15 },
        ));
        assert_eq!(r.failures(), vec!["gamma_nonpositive"]);
    }
}
