//! Parametric per-depth weight families `(u_j, w_j)`.

use super::SummationError;
use crate::tree::Tree;
use serde::{Deserialize, Serialize};

/// Base used in the polynomial factor of the power family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DepthShift {
    /// `(m_* j + 1)`.
    #[default]
    Shifted,
    /// `(m_* j)`, clamped to at least 1 at `j = 0`.
    Unshifted,
}

/// Weight family assigning `(u_j, w_j)` to every vertex at depth `j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightScheme {
    /// `u_j = 2^{κ m_* j} b_j^{-α_u}`, `w_j = 2^{-κ m_* j} b_j^{-α_w}` with
    /// `b_j` given by [`DepthShift`].
    Power {
        kappa: f64,
        m_star: u32,
        alpha_u: f64,
        alpha_w: f64,
        #[serde(default)]
        offset: DepthShift,
    },
    /// `u_j = 2^{κ m_* j} (m_* j + 1)^{α} L_j^{-λ_u}`,
    /// `w_j = 2^{-κ m_* j} (m_* j + 1)^{-α} L_j^{-λ_w}` with
    /// `L_j = max(log₂(m_* j + 1), 1)`.
    Log {
        kappa: f64,
        m_star: u32,
        alpha: f64,
        lambda_u: f64,
        lambda_w: f64,
    },
    /// Per-depth arrays.
    Explicit { u: Vec<f64>, w: Vec<f64> },
}

/// Per-depth weights for depths `j_min..j_min + len`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DepthWeights {
    pub j_min: u64,
    pub u: Vec<f64>,
    pub w: Vec<f64>,
}

impl WeightScheme {
    /// Power family with the shifted base `m_* j + 1`.
    pub fn power(kappa: f64, m_star: u32, alpha_u: f64, alpha_w: f64) -> Self {
        WeightScheme::Power {
            kappa,
            m_star,
            alpha_u,
            alpha_w,
            offset: DepthShift::Shifted,
        }
    }

    pub fn m_star(&self) -> Option<u32> {
        match *self {
            WeightScheme::Power { m_star, .. } | WeightScheme::Log { m_star, .. } => Some(m_star),
            WeightScheme::Explicit { .. } => None,
        }
    }

    pub fn kappa(&self) -> Option<f64> {
        match *self {
            WeightScheme::Power { kappa, .. } | WeightScheme::Log { kappa, .. } => Some(kappa),
            WeightScheme::Explicit { .. } => None,
        }
    }

    /// `(log₂ u_j, log₂ w_j)` at absolute depth `j`.
    pub fn log2_uw(&self, j: u64) -> Result<(f64, f64), SummationError> {
        let (lu, lw) = match self {
            WeightScheme::Power {
                kappa,
                m_star,
                alpha_u,
                alpha_w,
                offset,
            } => {
                let x = *m_star as f64 * j as f64;
                let base = match offset {
                    DepthShift::Shifted => x + 1.0,
                    DepthShift::Unshifted => x.max(1.0),
                };
                let e = kappa * x;
                let lb = base.log2();
                (e - alpha_u * lb, -e - alpha_w * lb)
            }
            WeightScheme::Log {
                kappa,
                m_star,
                alpha,
                lambda_u,
                lambda_w,
            } => {
                let x = *m_star as f64 * j as f64;
                let e = kappa * x;
                let lb = (x + 1.0).log2();
                let ll = lb.max(1.0).log2();
                (e + alpha * lb - lambda_u * ll, -e - alpha * lb - lambda_w * ll)
            }
            WeightScheme::Explicit { u, w } => {
                let i = j as usize;
                match (u.get(i), w.get(i)) {
                    (Some(a), Some(b)) if *a > 0.0 && *b > 0.0 => (a.log2(), b.log2()),
                    (Some(_), Some(_)) => return Err(SummationError::NonPositiveWeight(i)),
                    _ => {
                        return Err(SummationError::DepthOutOfRange {
                            depth: j,
                            len: u.len().min(w.len()),
                        })
                    }
                }
            }
        };
        if !(lu.is_finite() && lw.is_finite()) {
            return Err(SummationError::NonFiniteWeight(j));
        }
        Ok((lu, lw))
    }

    /// `(u_j, w_j)` at absolute depth `j`.
    pub fn weights_at(&self, j: u64) -> Result<(f64, f64), SummationError> {
        let (lu, lw) = self.log2_uw(j)?;
        let (u, w) = (lu.exp2(), lw.exp2());
        if u > 0.0 && w > 0.0 && u.is_finite() && w.is_finite() {
            Ok((u, w))
        } else {
            Err(SummationError::NonFiniteWeight(j))
        }
    }
}

/// Per-depth weights `(u_j, w_j)` for `j = 0..=depth`.
pub fn make_weights(scheme: &WeightScheme, depth: usize) -> Result<DepthWeights, SummationError> {
    make_weights_from(scheme, 0, depth + 1)
}

/// Per-depth weights for `j = j_min..j_min + len`.
pub fn make_weights_from(
    scheme: &WeightScheme,
    j_min: u64,
    len: usize,
) -> Result<DepthWeights, SummationError> {
    let mut u = Vec::with_capacity(len);
    let mut w = Vec::with_capacity(len);
    for j in j_min..j_min + len as u64 {
        let (a, b) = scheme.weights_at(j)?;
        u.push(a);
        w.push(b);
    }
    Ok(DepthWeights { j_min, u, w })
}

/// Vertex weights for a tree whose root sits at absolute depth `j_min`.
///
/// Both arrays are multiplied by reciprocal powers of two so that `u` is
/// close to 1 at the root. The operator `S_{u,w}` only depends on the
/// products `w(ξ) u(ξ')`, which this rescaling leaves bit-for-bit unchanged.
pub fn vertex_weights(
    tree: &Tree,
    scheme: &WeightScheme,
    j_min: u64,
) -> Result<(Vec<f64>, Vec<f64>), SummationError> {
    let depth = tree.max_depth();
    let mut lu = Vec::with_capacity(depth + 1);
    let mut lw = Vec::with_capacity(depth + 1);
    for j in j_min..=j_min + depth as u64 {
        let (a, b) = scheme.log2_uw(j)?;
        lu.push(a);
        lw.push(b);
    }
    let shift = lu[0].round();
    let mut du = Vec::with_capacity(lu.len());
    let mut dw = Vec::with_capacity(lu.len());
    for (j, (a, b)) in lu.iter().zip(&lw).enumerate() {
        let (x, y) = ((a - shift).exp2(), (b + shift).exp2());
        if !(x > 0.0 && y > 0.0 && x.is_finite() && y.is_finite()) {
            return Err(SummationError::NonFiniteWeight(j_min + j as u64));
        }
        du.push(x);
        dw.push(y);
    }
    Ok(tree
        .depths()
        .iter()
        .map(|&d| (du[d], dw[d]))
        .unzip())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn power_plug_in() {
        let s = WeightScheme::power(1.0, 1, 0.0, 0.0);
        let d = make_weights(&s, 3).unwrap();
        assert_eq!(d.u[3], 8.0);
        assert_eq!(d.w[3], 0.125);
    }

    #[test]
    fn product_is_independent_of_kappa() {
        for kappa in [0.0, 0.5, 2.0] {
            let s = WeightScheme::power(kappa, 2, 0.3, 0.45);
            let (u, w) = s.weights_at(5).unwrap();
            assert!((u * w - 11f64.powf(-0.75)).abs() < 1e-12);
        }
    }

    #[test]
    fn log_family_critical_product() {
        let lam = 0.5 - 0.25;
        let s = WeightScheme::Log {
            kappa: 1.0,
            m_star: 1,
            alpha: 0.7,
            lambda_u: 0.1,
            lambda_w: lam - 0.1,
        };
        for j in 1..50u64 {
            let (u, w) = s.weights_at(j).unwrap();
            let l = ((j + 1) as f64).log2();
            assert!((u * w * l.powf(lam) - 1.0).abs() < 1e-12);
        }
        assert!(s.weights_at(0).is_ok());
    }

    #[test]
    fn explicit_bounds() {
        let s = WeightScheme::Explicit {
            u: vec![1.0, 2.0],
            w: vec![1.0, 0.0],
        };
        assert!(s.weights_at(0).is_ok());
        assert_eq!(s.weights_at(1), Err(SummationError::NonPositiveWeight(1)));
        assert!(matches!(
            s.weights_at(2),
            Err(SummationError::DepthOutOfRange { .. })
        ));
    }

    #[test]
    fn vertex_weights_preserve_products() {
        let t = Tree::complete(2, 3).unwrap();
        let s = WeightScheme::power(1.5, 1, 0.0, 0.25);
        let (u, w) = vertex_weights(&t, &s, 40).unwrap();
        let (u0, w0) = s.weights_at(40).unwrap();
        let (u3, w3) = s.weights_at(43).unwrap();
        assert!((w[14] * u[0] / (w3 * u0) - 1.0).abs() < 1e-14);
        assert!((w[0] * u[0] / (w0 * u0) - 1.0).abs() < 1e-14);
        assert!((w[14] * u[14] / (w3 * u3) - 1.0).abs() < 1e-14);
    }
}
