//! Multiscale bookkeeping: `ν̄_t`, `t_*(n)`, `t_**(n)` and `m_t`.

use super::{HsetError, Tau};
use serde::{Deserialize, Serialize};

/// Largest scale index scanned by [`schedule`].
pub const T_SCAN_MAX: u32 = 64;

/// Slowly varying factor `ψ_*(y) = (log₂ y)^{e} / τ(log₂ y)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PsiStar {
    pub log_exponent: f64,
    pub tau_divisor: Tau,
}

impl PsiStar {
    /// `ψ_* ≡ 1`.
    pub const ONE: PsiStar = PsiStar {
        log_exponent: 0.0,
        tau_divisor: Tau::Const,
    };

    /// `log₂ ψ_*(2^x)`.
    pub fn log2_at_exp2(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        self.log_exponent * x.log2() - self.tau_divisor.eval(x).log2()
    }
}

/// Scale schedule for a given `n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Schedule {
    pub n: u64,
    pub gamma_star: f64,
    pub psi_star: PsiStar,
    pub c3: f64,
    /// `min{t ≥ 0 : ν̄_t ≥ n}`.
    pub t_star: u32,
    /// `min{t ≥ 0 : ν̄_t ≥ 2^n}`.
    pub t_star_star: u32,
}

impl Schedule {
    /// `log₂ ν̄_t = γ_* 2^t + log₂ ψ_*(2^{2^t})`.
    pub fn log2_nu_bar(&self, t: u32) -> f64 {
        log2_nu_bar(self.gamma_star, &self.psi_star, t)
    }

    /// `ν̄_t` (may be infinite for large `t`).
    pub fn nu_bar(&self, t: u32) -> f64 {
        self.log2_nu_bar(t).exp2()
    }

    /// `m_t = ⌈log₂ ν_t⌉` for a layer with `nu_t` vertices.
    pub fn m_t(nu_t: usize) -> u32 {
        if nu_t <= 1 {
            0
        } else {
            (nu_t - 1).ilog2() + 1
        }
    }

    /// Budget `k_{t,l} = ⌈n 2^{-ε(t - t_*(n) + l)}⌉`, with negative offsets
    /// allowed for `t < t_*(n)`.
    pub fn k_tl(&self, t: u32, l: u32, eps: f64) -> u64 {
        let e = t as f64 - self.t_star as f64 + l as f64;
        (self.n as f64 * (-eps * e).exp2()).ceil() as u64
    }
}

fn log2_nu_bar(gamma_star: f64, psi: &PsiStar, t: u32) -> f64 {
    let x = (t as f64).exp2();
    gamma_star * x + psi.log2_at_exp2(x)
}

/// Computes `t_*(n)` and `t_**(n)` by direct scan over `t = 0..=64` in the
/// `log₂` domain.
pub fn schedule(gamma_star: f64, psi_star: PsiStar, c3: f64, n: u64) -> Result<Schedule, HsetError> {
    if n < 2 {
        return Err(HsetError::Schedule(format!("n = {n} must be at least 2")));
    }
    if !(gamma_star > 0.0) {
        return Err(HsetError::Schedule(format!("gamma_* = {gamma_star} must be positive")));
    }
    if !(c3 >= 1.0) {
        return Err(HsetError::Schedule(format!("c3 = {c3} must be at least 1")));
    }
    let first = |thr: f64| {
        (0..=T_SCAN_MAX).find(|&t| log2_nu_bar(gamma_star, &psi_star, t) >= thr)
    };
    let t_star = first((n as f64).log2())
        .ok_or_else(|| HsetError::Schedule("t_*(n) beyond scan range".into()))?;
    let t_star_star = first(n as f64)
        .ok_or_else(|| HsetError::Schedule("t_**(n) beyond scan range".into()))?;
    Ok(Schedule {
        n,
        gamma_star,
        psi_star,
        c3,
        t_star,
        t_star_star,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn direct_solve_examples() {
        let s = schedule(1.0, PsiStar::ONE, 1.0, 16).unwrap();
        assert_eq!((s.t_star, s.t_star_star), (2, 4));
        let s = schedule(1.0, PsiStar::ONE, 1.0, 2).unwrap();
        assert_eq!((s.t_star, s.t_star_star), (0, 1));
        assert!(schedule(1.0, PsiStar::ONE, 1.0, 1).is_err());
    }

    #[test]
    fn minimality() {
        for n in [2u64, 3, 5, 17, 1000, 123_456] {
            let s = schedule(0.7, PsiStar::ONE, 1.0, n).unwrap();
            assert!(s.nu_bar(s.t_star) >= n as f64);
            if s.t_star > 0 {
                assert!(s.nu_bar(s.t_star - 1) < n as f64);
            }
            assert!(s.log2_nu_bar(s.t_star_star) >= n as f64);
            if s.t_star_star > 0 {
                assert!(s.log2_nu_bar(s.t_star_star - 1) < n as f64);
            }
        }
    }

    #[test]
    fn m_t_is_ceil_log2() {
        assert_eq!(Schedule::m_t(1), 0);
        assert_eq!(Schedule::m_t(2), 1);
        assert_eq!(Schedule::m_t(3), 2);
        assert_eq!(Schedule::m_t(4), 2);
        assert_eq!(Schedule::m_t(5), 3);
    }
}
