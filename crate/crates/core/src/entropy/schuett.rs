//! Reference curve for `e_k(I : l_p^ν → l_q^ν)`.

use super::EntropyError;
use crate::scalar::recip;

/// Middle-regime shape `(ln(1 + ν/k) / k)^{1/p - 1/q}`.
pub fn schuett_raw(nu: u64, k: f64, p: f64, q: f64) -> f64 {
    let a = recip(p) - recip(q);
    ((1.0 + nu as f64 / k).ln() / k).powf(a)
}

/// Continuous three-regime curve for `e_k(I : l_p^ν → l_q^ν)`.
///
/// With `b = ⌈log₂ ν⌉`, the value is the middle-regime shape
/// `(ln(1 + ν/k)/k)^{1/p-1/q}` on `b ≤ k ≤ ν`, is held constant at its
/// `k = b` value for `k ≤ b`, and decays as `2^{-(k-ν)/ν}` from its `k = ν`
/// value for `k ≥ ν`. The outer regimes are thus the orders `1` and
/// `2^{-k/ν} ν^{1/q-1/p}` scaled to meet the middle one at the seams.
pub fn schuett(nu: u64, k: u64, p: f64, q: f64) -> Result<f64, EntropyError> {
    if !(p >= 1.0 && q >= 1.0) {
        return Err(EntropyError::BadExponent(format!("p = {p}, q = {q}")));
    }
    if p > q {
        return Err(EntropyError::PGreaterThanQ { p, q });
    }
    if nu == 0 {
        return Err(EntropyError::BadExponent("nu must be positive".into()));
    }
    if k == 0 {
        return Err(EntropyError::ZeroIndex);
    }
    let b = if nu <= 1 { 0 } else { (nu - 1).ilog2() as u64 + 1 };
    let b = b.max(1).min(nu);
    Ok(if k <= b {
        schuett_raw(nu, b as f64, p, q)
    } else if k <= nu {
        schuett_raw(nu, k as f64, p, q)
    } else {
        schuett_raw(nu, nu as f64, p, q) * (-((k - nu) as f64) / nu as f64).exp2()
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seam_value_at_k_equals_nu() {
        let v = schuett(16, 16, 1.0, 2.0).unwrap();
        assert!((v - (2f64.ln() / 16.0).sqrt()).abs() < 1e-15);
        assert!((v - 0.208).abs() < 5e-4);
        let raw3 = 0.5 * 16f64.powf(-0.5);
        let stitch = v / raw3;
        let next = schuett(16, 32, 1.0, 2.0).unwrap();
        assert!((next - 0.25 * 16f64.powf(-0.5) * stitch).abs() < 1e-15);
    }

    #[test]
    fn equal_exponents_are_flat_up_to_nu() {
        for k in 1..=16 {
            assert_eq!(schuett(16, k, 2.0, 2.0).unwrap(), 1.0);
        }
        assert!(schuett(16, 17, 2.0, 2.0).unwrap() < 1.0);
    }

    #[test]
    fn continuous_at_both_seams() {
        for nu in [4u64, 16, 32, 100] {
            let b = (nu - 1).ilog2() as u64 + 1;
            let left = schuett(nu, b, 1.0, 2.0).unwrap();
            assert_eq!(left, schuett_raw(nu, b as f64, 1.0, 2.0));
            assert_eq!(schuett(nu, 1, 1.0, 2.0).unwrap(), left);
            let at = schuett(nu, nu, 1.0, 2.0).unwrap();
            assert_eq!(at, schuett_raw(nu, nu as f64, 1.0, 2.0));
        }
    }

    #[test]
    fn errors() {
        assert!(schuett(16, 4, 2.0, 1.0).is_err());
        assert!(schuett(16, 0, 1.0, 2.0).is_err());
    }
}
