//! Explicit Hardy-type bounds on the norm of a summation operator restricted
//! to the subtree below a depth-`j` vertex.

use super::{check_exponents, SummationError, WeightScheme};
use crate::hset::HProfile;
use crate::scalar::conjugate;

const EQ_TOL: f64 = 1e-12;
const TAIL_REL: f64 = 1e-12;
const TAIL_CAP: u64 = 1_000_000;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= EQ_TOL * (1.0 + a.abs().max(b.abs()))
}

/// `log₂(2^a + 2^b)`.
fn log2_add(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp2().ln_1p() / std::f64::consts::LN_2
}

/// Hardy-type bound for the operator on a subtree rooted at absolute depth
/// `j ≥ 1` whose depths span `depth_profile.len()` levels.
///
/// For `κ > θ/q` the value is `sup_s u_s w_s`. For `κ = θ/q` it is
/// `sup_s (Σ_{i=j}^{s} u_i^{p'})^{1/p'} (Σ_{i≥s} w_i^q N(s, i))^{1/q}` with
/// `N(s, i) = 2^{θ m_*(i-s)} s^γ τ(m_* s) / (i^γ τ(m_* i))`, the tail summed
/// until increments drop below `1e-12` of the running value (at most `10^6`
/// terms). The supremum runs over the depths of the profile.
///
/// The parameter checks reject `κ < θ/q`, `κ = θ/q` with
/// `α_w ≤ (1 - γ)/q`, and exponent sums other than `1/p - 1/q` (for
/// `κ > θ/q`) or `1/p` (for `κ = θ/q`).
pub fn hardy_bound(
    depth_profile: &[usize],
    scheme: &WeightScheme,
    h: &HProfile,
    p: f64,
    q: f64,
    j: u64,
) -> Result<f64, SummationError> {
    check_exponents(p, q)?;
    if depth_profile.is_empty() {
        return Err(SummationError::Assumption("empty depth profile".into()));
    }
    if j == 0 {
        return Err(SummationError::Assumption("start depth j must be at least 1".into()));
    }
    let (kappa, m_star, alpha_sum, alpha_w) = match *scheme {
        WeightScheme::Power {
            kappa,
            m_star,
            alpha_u,
            alpha_w,
            ..
        } => (kappa, m_star, Some(alpha_u + alpha_w), Some(alpha_w)),
        WeightScheme::Log {
            kappa, m_star, ..
        } => {
            if h.theta != 0.0 {
                return Err(SummationError::Assumption(
                    "logarithmic weights require theta = 0".into(),
                ));
            }
            (kappa, m_star, None, None)
        }
        WeightScheme::Explicit { .. } => {
            return Err(SummationError::Assumption(
                "Hardy bound needs a parametric weight scheme".into(),
            ))
        }
    };
    let crit = h.theta / q;
    let equal = close(kappa, crit);
    if kappa < crit && !equal {
        return Err(SummationError::Assumption(format!(
            "condition kappa >= theta/q fails: kappa = {kappa}, theta/q = {crit}"
        )));
    }
    let target = if equal { 1.0 / p } else { 1.0 / p - 1.0 / q };
    if let Some(s) = alpha_sum {
        if !close(s, target) {
            return Err(SummationError::Assumption(format!(
                "exponent rule fails: alpha_u + alpha_w = {s}, expected {target}"
            )));
        }
    }
    if equal {
        let aw = alpha_w.unwrap_or(f64::NAN);
        if !(aw > (1.0 - h.gamma) / q) || close(aw, (1.0 - h.gamma) / q) {
            return Err(SummationError::Assumption(format!(
                "kappa = theta/q requires alpha_w > (1 - gamma)/q, got {aw}"
            )));
        }
    }

    let last = j + depth_profile.len() as u64 - 1;
    if !equal {
        let mut best = f64::NEG_INFINITY;
        for s in j..=last {
            let (lu, lw) = scheme.log2_uw(s)?;
            best = best.max(lu + lw);
        }
        return Ok(best.exp2());
    }

    let pc = conjugate(p);
    let m = m_star as f64;
    // b_i = w_i^q 2^{θ m_* i} i^{-γ} / τ(m_* i), kept in log₂ form.
    let log2_b = |i: u64| -> Result<f64, SummationError> {
        let (_, lw) = scheme.log2_uw(i)?;
        let fi = i as f64;
        Ok(q * lw + h.theta * m * fi - h.gamma * fi.log2() - h.tau.eval(m * fi).log2())
    };
    let mut tail = f64::NEG_INFINITY;
    let mut i = last;
    while i < last + TAIL_CAP {
        let b = log2_b(i)?;
        let before = tail;
        tail = log2_add(tail, b);
        if i > last && b < before + TAIL_REL.log2() {
            break;
        }
        i += 1;
    }
    let mut tails = vec![0.0; (last - j + 1) as usize];
    tails[(last - j) as usize] = tail;
    for s in (j..last).rev() {
        let k = (s - j) as usize;
        tails[k] = log2_add(tails[k + 1], log2_b(s)?);
    }
    let mut head = f64::NEG_INFINITY;
    let mut best = f64::NEG_INFINITY;
    for s in j..=last {
        let (lu, _) = scheme.log2_uw(s)?;
        head = log2_add(head, pc * lu);
        let fs = s as f64;
        let second = -h.theta * m * fs + h.gamma * fs.log2() + h.tau.eval(m * fs).log2()
            + tails[(s - j) as usize];
        best = best.max(head / pc + second / q);
    }
    Ok(best.exp2())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hset::Tau;
    use crate::summation::DepthShift;

    fn unshifted(kappa: f64, alpha_u: f64, alpha_w: f64) -> WeightScheme {
        WeightScheme::Power {
            kappa,
            m_star: 1,
            alpha_u,
            alpha_w,
            offset: DepthShift::Unshifted,
        }
    }

    #[test]
    fn supercritical_branch_equals_one_at_j_one() {
        let h = HProfile::new(1.0, 0.0, Tau::Const, 1.0).unwrap();
        let s = unshifted(1.0, 0.1, 0.15);
        let v = hardy_bound(&[1; 64], &s, &h, 2.0, 4.0, 1).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let v2 = hardy_bound(&[1; 64], &s, &h, 2.0, 4.0, 16).unwrap();
        assert!((v2 - 16f64.powf(-0.25)).abs() < 1e-12);
    }

    #[test]
    fn critical_branch_scales_like_power() {
        let h = HProfile::new(1.0, 0.0, Tau::Const, 1.0).unwrap();
        let s = unshifted(0.25, 0.0, 0.5);
        let mut ratios = Vec::new();
        for k in 0..=8 {
            let j = 1u64 << k;
            let v = hardy_bound(&[1; 32], &s, &h, 2.0, 4.0, j).unwrap();
            ratios.push(v / (j as f64).powf(-0.25));
        }
        let (lo, hi) = ratios
            .iter()
            .fold((f64::MAX, 0.0f64), |(a, b), r| (a.min(*r), b.max(*r)));
        assert!(hi / lo < 2.0, "{ratios:?}");
    }

    #[test]
    fn validation_failures() {
        let h = HProfile::new(1.0, 0.0, Tau::Const, 1.0).unwrap();
        assert!(hardy_bound(&[1], &unshifted(0.1, 0.0, 0.25), &h, 2.0, 4.0, 1).is_err());
        assert!(hardy_bound(&[1], &unshifted(1.0, 0.0, 0.3), &h, 2.0, 4.0, 1).is_err());
        assert!(hardy_bound(&[1], &unshifted(0.25, 0.25, 0.25), &h, 2.0, 4.0, 1).is_err());
        assert!(hardy_bound(&[1], &unshifted(0.25, 0.0, 0.5), &h, 2.0, 4.0, 0).is_err());
    }
}
