//! Entropy numbers of diagonal operators with slowly decaying diagonals.

use super::EntropyError;
use crate::scalar::recip;
use serde::{Deserialize, Serialize};

/// Nondecreasing function `φ` defining the diagonal `σ_i = 1/φ(i)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Phi {
    /// `(ln(shift + t))^power`.
    LogShift { shift: f64, power: f64 },
    /// `(1 + log₂ t)^power`.
    OnePlusLog { power: f64 },
}

impl Phi {
    /// `ln φ(2^n)`, stable for large `n`.
    pub fn ln_at_exp2(&self, n: f64) -> f64 {
        match *self {
            Phi::LogShift { shift, power } => {
                let inner = if n > 60.0 {
                    n * std::f64::consts::LN_2 + (shift * (-n).exp2()).ln_1p()
                } else {
                    (shift + n.exp2()).ln()
                };
                power * inner.ln()
            }
            Phi::OnePlusLog { power } => power * (1.0 + n).ln(),
        }
    }

    /// `φ(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Phi::LogShift { shift, power } => (shift + t).ln().powf(power),
            Phi::OnePlusLog { power } => (1.0 + t.log2()).powf(power),
        }
    }
}

/// Outcome of [`validate_phi`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiCheck {
    pub monotone: bool,
    /// Smallest `c` with `φ(t)/φ(s) ≤ c ((1 + log₂ t)/(1 + log₂ s))^a`
    /// for `s ≤ t` on the grid.
    pub constant: f64,
    /// Same constant restricted to the lower half of the grid.
    pub constant_half: f64,
}

/// Grid check of the growth condition for `φ` with exponent `a`.
///
/// The grid is `t = 2^x`, `x ∈ [0, 256]`. The condition passes when `φ` is
/// positive and nondecreasing on the grid and the constant over the full
/// grid does not exceed the one over the lower half by more than 1%.
pub fn validate_phi(phi: &Phi, a: f64) -> Result<PhiCheck, EntropyError> {
    const N: usize = 257;
    let xs: Vec<f64> = (0..N).map(|i| i as f64).collect();
    let lv: Vec<f64> = xs.iter().map(|&x| phi.ln_at_exp2(x)).collect();
    if lv.iter().any(|v| !v.is_finite()) || phi.eval(1.0) <= 0.0 {
        return Err(EntropyError::Phi("phi must be positive on [1, inf)".into()));
    }
    let monotone = lv.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    let mut c_half = 0f64;
    let mut c_full = 0f64;
    for j in 0..N {
        for i in 0..=j {
            let r = lv[j] - lv[i] - a * ((1.0 + xs[j]) / (1.0 + xs[i])).ln();
            c_full = c_full.max(r);
            if j < N / 2 {
                c_half = c_half.max(r);
            }
        }
    }
    let check = PhiCheck {
        monotone,
        constant: c_full.exp(),
        constant_half: c_half.exp(),
    };
    if !monotone {
        return Err(EntropyError::Phi("phi is not nondecreasing".into()));
    }
    if check.constant > check.constant_half * 1.01 {
        return Err(EntropyError::Phi(format!(
            "growth constant increases from {} to {}",
            check.constant_half, check.constant
        )));
    }
    Ok(check)
}

/// Asymptotic value `1/φ(2^n)` of `e_n(D_σ : l_p → l_q)` for
/// `σ_i = 1/φ(i)` and `p < q`, after validating `φ` with `a = 1/p - 1/q`.
pub fn kuhn_value(n: u64, p: f64, q: f64, phi: &Phi) -> Result<f64, EntropyError> {
    if !(p >= 1.0 && q >= 1.0) {
        return Err(EntropyError::BadExponent(format!("p = {p}, q = {q}")));
    }
    if p > q {
        return Err(EntropyError::PGreaterThanQ { p, q });
    }
    let a = recip(p) - recip(q);
    if a == 0.0 {
        return Err(EntropyError::DegenerateExponent);
    }
    validate_phi(phi, a)?;
    Ok((-phi.ln_at_exp2(n as f64)).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn log_shift_value() {
        let phi = Phi::LogShift { shift: 2.0, power: 0.5 };
        for n in [0u64, 1, 5, 30, 200] {
            let v = kuhn_value(n, 1.0, 2.0, &phi).unwrap();
            let oracle = 1.0 / (2.0 + 2f64.powi(n as i32)).ln().powf(0.5);
            assert!((v - oracle).abs() <= 1e-12 * oracle, "n = {n}");
        }
    }

    #[test]
    fn one_plus_log_at_zero() {
        let phi = Phi::OnePlusLog { power: 0.25 };
        assert_eq!(kuhn_value(0, 2.0, 4.0, &phi).unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let phi = Phi::OnePlusLog { power: 0.25 };
        assert_eq!(kuhn_value(3, 2.0, 2.0, &phi), Err(EntropyError::DegenerateExponent));
        let fast = Phi::OnePlusLog { power: 2.0 };
        assert!(matches!(kuhn_value(3, 2.0, 4.0, &fast), Err(EntropyError::Phi(_))));
    }
}
