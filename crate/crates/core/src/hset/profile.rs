//! h-functions `h(t) = t^θ |log t|^γ τ(|log t|)` and their slowly varying
//! factors.

use super::HsetError;
use serde::{Deserialize, Serialize};
use std::f64::consts::E;

/// Closed catalog of factors `τ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Tau {
    /// `τ ≡ 1`.
    Const,
    /// `τ(t) = (ln(e + t))^ν`.
    LogPower { nu: f64 },
    /// `τ(t) = (ln(e + ln(e + t)))^ν`.
    IteratedLog { nu: f64 },
    /// `τ(t) = t^a`; not slowly varying unless `a = 0`, kept so that the
    /// check has a failing member. Rejected by [`HProfile::new`].
    Power { a: f64 },
}

impl Tau {
    /// `τ(t)` for `t > 0`.
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Tau::Const => 1.0,
            Tau::LogPower { nu } => (E + t).ln().powf(nu),
            Tau::IteratedLog { nu } => (E + (E + t).ln()).ln().powf(nu),
            Tau::Power { a } => t.powf(a),
        }
    }

    /// `log₂ τ(2^x)`, accurate for arguments too large to represent.
    pub fn log2_at_exp2(&self, x: f64) -> f64 {
        let ln_e_plus = |lx: f64| {
            // ln(e + 2^lx)
            if lx > 60.0 {
                lx * std::f64::consts::LN_2
            } else {
                (E + lx.exp2()).ln()
            }
        };
        match *self {
            Tau::Const => 0.0,
            Tau::LogPower { nu } => nu * ln_e_plus(x).log2(),
            Tau::IteratedLog { nu } => nu * (E + ln_e_plus(x)).ln().log2(),
            Tau::Power { a } => a * x,
        }
    }
}

/// Result of [`slowly_varying_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SlowVariation {
    pub pass: bool,
    /// Smallest `C` with `C^{-1} t^{-ε} ≤ τ(ty)/τ(y) ≤ C t^ε` on the grid.
    pub constant: f64,
    /// Grid point `(y, t)` attaining the constant.
    pub worst: (f64, f64),
}

/// Log-spaced evaluation grid for [`slowly_varying_check`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VariationGrid {
    pub y_range: (f64, f64),
    pub t_range: (f64, f64),
    pub points: usize,
    /// Largest constant accepted as a pass.
    pub max_constant: f64,
}

impl Default for VariationGrid {
    fn default() -> Self {
        Self {
            y_range: (1.0, 1e6),
            t_range: (1.0, 1e6),
            points: 61,
            max_constant: 16.0,
        }
    }
}

fn log_grid(range: (f64, f64), n: usize) -> Vec<f64> {
    let (a, b) = (range.0.ln(), range.1.ln());
    let n = n.max(2);
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Checks `t^{-ε} ≲ τ(ty)/τ(y) ≲ t^ε` for `t ≥ 1` on a log grid and reports
/// the implied constant.
pub fn slowly_varying_check(tau: &Tau, eps: f64, grid: &VariationGrid) -> SlowVariation {
    let ys = log_grid(grid.y_range, grid.points);
    let ts = log_grid(grid.t_range, grid.points);
    let mut constant = 1.0f64;
    let mut worst = (ys[0], ts[0]);
    for &y in &ys {
        let ty0 = tau.eval(y);
        for &t in &ts {
            let r = tau.eval(t * y) / ty0;
            let te = t.powf(eps);
            let c = (r / te).max(1.0 / (r * te));
            if c > constant {
                constant = c;
                worst = (y, t);
            }
        }
    }
    SlowVariation {
        pass: constant.is_finite() && constant <= grid.max_constant,
        constant,
        worst,
    }
}

/// Branching profile `h(t) = t^θ |log t|^γ τ(|log t|)` with its two-sided
/// constant `c_3`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HProfile {
    pub theta: f64,
    pub gamma: f64,
    pub tau: Tau,
    pub c3: f64,
}

impl HProfile {
    /// Validates `θ ≥ 0`, `c_3 ≥ 1` and that `τ` is slowly varying.
    pub fn new(theta: f64, gamma: f64, tau: Tau, c3: f64) -> Result<Self, HsetError> {
        let h = Self { theta, gamma, tau, c3 };
        h.validate()?;
        Ok(h)
    }

    pub fn validate(&self) -> Result<(), HsetError> {
        if !(self.theta >= 0.0 && self.theta.is_finite() && self.gamma.is_finite()) {
            return Err(HsetError::Profile(format!(
                "theta = {}, gamma = {} out of range",
                self.theta, self.gamma
            )));
        }
        if !(self.c3 >= 1.0) {
            return Err(HsetError::Profile(format!("c3 = {} < 1", self.c3)));
        }
        if let Tau::Power { a } = self.tau {
            if a != 0.0 {
                return Err(HsetError::Profile("tau = t^a is not slowly varying".into()));
            }
        }
        let sv = slowly_varying_check(&self.tau, 0.1, &VariationGrid::default());
        if !sv.pass {
            return Err(HsetError::Profile(format!(
                "tau fails the slow-variation check (constant {:.3})",
                sv.constant
            )));
        }
        Ok(())
    }

    /// `h(t)` on `(0, 1]` with `|log t|` read as `ln(e + 1/t)`.
    pub fn eval(&self, t: f64) -> Result<f64, HsetError> {
        if !(t > 0.0 && t <= 1.0) {
            return Err(HsetError::OutOfDomain(t));
        }
        let l = (E + 1.0 / t).ln();
        Ok(t.powf(self.theta) * l.powf(self.gamma) * self.tau.eval(l))
    }

    /// `log₂ h(2^{-x})` for `x ≥ 0`, stable for large `x`.
    pub fn log2_at(&self, x: f64) -> f64 {
        let l = if x > 60.0 {
            x * std::f64::consts::LN_2
        } else {
            (E + x.exp2()).ln()
        };
        -self.theta * x + self.gamma * l.log2() + self.tau.eval(l).log2()
    }

    /// Ratio `h(2^{-m_* j}) / h(2^{-m_* j'})` that an ideal tree realises as
    /// the number of descendants `j' - j` levels below a depth-`j` vertex.
    pub fn branching_ratio(&self, m_star: u32, j: u64, j2: u64) -> f64 {
        let m = m_star as f64;
        (self.log2_at(m * j as f64) - self.log2_at(m * j2 as f64)).exp2()
    }

    /// Upper bound shape `2^{θ m_*(j'-j)} j^γ τ(m_* j) / (j'^γ τ(m_* j'))`
    /// used by the Hardy-type bounds (`j ≥ 1`).
    pub fn card_ratio(&self, m_star: u32, j: u64, j2: u64) -> f64 {
        self.log2_card_ratio(m_star, j, j2).exp2()
    }

    pub fn log2_card_ratio(&self, m_star: u32, j: u64, j2: u64) -> f64 {
        let m = m_star as f64;
        let (a, b) = (j.max(1) as f64, j2.max(1) as f64);
        self.theta * m * (b - a) + self.gamma * (a.log2() - b.log2())
            + self.tau.eval(m * a).log2()
            - self.tau.eval(m * b).log2()
    }
}

/// `h(t)` for `t ∈ (0, 1]`.
pub fn h_eval(h: &HProfile, t: f64) -> Result<f64, HsetError> {
    h.eval(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_profiles() {
        let flat = HProfile::new(0.0, 0.0, Tau::Const, 1.0).unwrap();
        assert_eq!(h_eval(&flat, 0.3).unwrap(), 1.0);
        let manifold = HProfile::new(2.0, 0.0, Tau::Const, 1.0).unwrap();
        assert!((h_eval(&manifold, 0.5).unwrap() - 0.25).abs() < 1e-15);
        let koch = HProfile::new(4f64.ln() / 3f64.ln(), 0.0, Tau::Const, 1.0).unwrap();
        assert!((h_eval(&koch, 1.0 / 3.0).unwrap() - 0.25).abs() < 1e-14);
        assert!(h_eval(&flat, 0.0).is_err());
        assert!(h_eval(&flat, 1.5).is_err());
    }

    #[test]
    fn slow_variation() {
        let g = VariationGrid::default();
        let c = slowly_varying_check(&Tau::Const, 0.01, &g);
        assert!(c.pass && c.constant == 1.0);
        let l = slowly_varying_check(&Tau::LogPower { nu: 1.0 }, 0.1, &g);
        assert!(l.pass, "{l:?}");
        let p = slowly_varying_check(&Tau::Power { a: 1.0 }, 0.1, &g);
        assert!(!p.pass);
        assert!(HProfile::new(0.0, 0.0, Tau::Power { a: 1.0 }, 1.0).is_err());
    }

    #[test]
    fn log2_forms_agree() {
        let h = HProfile::new(0.7, -1.0, Tau::LogPower { nu: 0.5 }, 2.0).unwrap();
        for x in [0.0f64, 1.0, 5.0, 20.0] {
            let direct = h.eval((-x).exp2()).unwrap().log2();
            assert!((direct - h.log2_at(x)).abs() < 1e-10);
        }
        let t = Tau::IteratedLog { nu: 2.0 };
        assert!((t.log2_at_exp2(10.0) - t.eval(1024.0).log2()).abs() < 1e-12);
    }
}
