//! Explicit upper bounds for `e_K(S_{u,w})` assembled layer by layer.

use super::combine::{Bound, BoundExpr};
use super::{BoundKind, EntropyError, EntropyEstimate};
use crate::hset::{schedule, HProfile, PsiStar, Schedule, Tau};
use crate::scalar::{conjugate, is_sup, recip};
use crate::summation::{adjoint, apply, check_exponents, vertex_weights, WeightScheme};
use crate::tree::{LayerRule, Layering, Tree};
use serde::{Deserialize, Serialize};

/// Parameters of [`entropy_certificate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CertificateConfig {
    pub p: f64,
    pub q: f64,
    /// Budget decay `ε > 0`.
    pub eps: f64,
    /// Absolute depth of the root.
    pub j_min: u64,
    /// Exponent of the logarithmic correction in the layer-size bound of
    /// logarithmic packs.
    pub nu: f64,
}

impl Default for CertificateConfig {
    fn default() -> Self {
        Self {
            p: 2.0,
            q: 4.0,
            eps: 0.1,
            j_min: 0,
            nu: 0.0,
        }
    }
}

/// Budget and bound of one scale layer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerBudget {
    pub t: u32,
    pub vertices: usize,
    /// `coarse` (`t < t_*`), `middle` (`t_* ≤ t < t_**`) or `tail`.
    pub role: String,
    /// Budgets `k_{t,l}` summed into this layer.
    pub ks: Vec<u64>,
    /// Entropy index spent on the layer block.
    pub k: u64,
    /// Upper bound of the block norm used for the leaf.
    pub norm: f64,
    /// Bound on the block's entropy number at index `k`.
    pub value: f64,
}

/// Output of [`entropy_certificate`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub n: u64,
    /// `e_K ≤ B` with `K = estimate.k` and `B = estimate.value`.
    pub estimate: EntropyEstimate<f64>,
    /// `Σ (k - 1)` over all emitted budgets.
    pub budget_sum: u64,
    /// Constant `C` with `budget_sum ≤ C n`.
    pub constant: f64,
    pub layers: Vec<LayerBudget>,
    pub schedule: Schedule,
    pub expr: BoundExpr<f64>,
}

impl Certificate {
    /// `Σ (k - 1) ≤ C n`.
    pub fn budget_holds(&self) -> bool {
        self.budget_sum as f64 <= self.constant * self.n as f64
    }
}

/// `S_ε² + S_ε` with `S_ε = 1/(1 - 2^{-ε})`.
pub fn budget_constant(eps: f64) -> f64 {
    let s = 1.0 / (1.0 - (-eps).exp2());
    s * s + s
}

struct BlockNorms {
    /// Riesz–Thorin bound of `l_p → l_p`; also bounds `l_p → l_q` for `p ≤ q`.
    pp: f64,
    /// Row-wise Hölder bound of `l_p → l_q`.
    pq: f64,
}

/// Norm bounds of the rows of `S_{u,w}` selected by `mask`.
fn block_norms(tree: &Tree, u: &[f64], w: &[f64], mask: &[bool], p: f64, q: f64) -> Result<BlockNorms, EntropyError> {
    let n = tree.vertex_count();
    let ones = vec![1.0; n];
    let rows = apply(tree, u, w, &ones)?;
    let g: Vec<f64> = mask.iter().map(|&m| if m { 1.0 } else { 0.0 }).collect();
    let cols = adjoint(tree, u, w, &g)?;
    let row_max = rows
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .fold(0.0f64, |a, (&r, _)| a.max(r));
    let col_max = cols.iter().fold(0.0f64, |a, &c| a.max(c));
    let inv = recip(p);
    let pp = col_max.powf(inv) * row_max.powf(1.0 - inv);
    let pc = conjugate(p);
    let path: Vec<f64> = if is_sup(pc) {
        let mut best = vec![0.0f64; n];
        for &v in tree.bfs_order() {
            let up = if v == tree.root() { 0.0 } else { best[tree.parent(v)] };
            best[v] = up.max(u[v]);
        }
        best
    } else {
        let up: Vec<f64> = u.iter().map(|x| x.powf(pc)).collect();
        apply(tree, &up, &ones, &ones)?
            .into_iter()
            .map(|s| s.powf(1.0 / pc))
            .collect()
    };
    let terms = (0..n).filter(|&v| mask[v]).map(|v| w[v] * path[v]);
    let pq = if is_sup(q) {
        terms.fold(0.0, f64::max)
    } else {
        terms.map(|x| x.powf(q)).sum::<f64>().powf(1.0 / q)
    };
    Ok(BlockNorms { pp, pq })
}

/// Certified upper bound for `e_K(S_{u,w} : l_p(T) → l_q(T))` with
/// `K ≤ 1 + C n`.
///
/// The rows of `S_{u,w}` are split by scale layer: linear layers for power
/// schemes (with `γ_* = θ`) and doubly exponential layers for logarithmic
/// ones (with `γ_* = 1 - γ`). Layers below `t_*(n)` receive
/// `k_t = ⌈n 2^{-ε(t_* - t)}⌉`; layers in `[t_*(n), t_**(n))` receive
/// `1 + Σ_l (k_{t,l} - 1)` for `l = 0..=⌊log₂ k_{t,0}⌋`; the layers from
/// `t_**(n)` on form one tail block with index 1. A layer block `B` is bounded
/// by `‖B‖_{p→p} e_k(I : l_p^ν → l_q^ν)` using the stitched reference curve,
/// the tail by its `l_p → l_q` norm, and all terms are folded with
/// [`super::combine_sum`].
pub fn entropy_certificate(
    tree: &Tree,
    scheme: &WeightScheme,
    h: &HProfile,
    n: u64,
    cfg: &CertificateConfig,
) -> Result<Certificate, EntropyError> {
    let (p, q, eps) = (cfg.p, cfg.q, cfg.eps);
    check_exponents(p, q)?;
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(EntropyError::Certificate(format!("eps = {eps} must be positive")));
    }
    h.validate()?;
    let (rule, gamma_star, psi) = match *scheme {
        WeightScheme::Power { m_star, .. } => (
            LayerRule::Linear { m_star },
            h.theta,
            PsiStar {
                log_exponent: -h.gamma,
                tau_divisor: h.tau,
            },
        ),
        WeightScheme::Log { m_star, .. } => (
            LayerRule::DoublyExponential { m_star },
            1.0 - h.gamma,
            PsiStar {
                log_exponent: -cfg.nu,
                tau_divisor: Tau::Const,
            },
        ),
        WeightScheme::Explicit { .. } => {
            return Err(EntropyError::Certificate("explicit weights have no layer rule".into()))
        }
    };
    let sched = schedule(gamma_star, psi, h.c3, n)?;
    let layering = Layering::new(tree, rule, cfg.j_min)?;
    let (u, w) = vertex_weights(tree, scheme, cfg.j_min)?;
    let (t0, t_max) = (layering.t0(), layering.t_max());
    let sizes = layering.layer_sizes();
    let mut layers = Vec::new();
    let mut terms = Vec::new();
    let mut budget_sum = 0u64;
    if t0 == t_max {
        let mask = vec![true; tree.vertex_count()];
        let norm = block_norms(tree, &u, &w, &mask, p, q)?.pp;
        let nu = tree.vertex_count() as u64;
        let value = norm * super::schuett(nu, n, p, q)?;
        budget_sum = n - 1;
        layers.push(LayerBudget {
            t: t0,
            vertices: tree.vertex_count(),
            role: "single".into(),
            ks: vec![n],
            k: n,
            norm,
            value,
        });
        terms.push(BoundExpr::Scale {
            norm,
            inner: Box::new(BoundExpr::Schuett { nu, k: n, p, q }),
        });
    } else {
        let tail_from = sched.t_star_star.max(t0);
        for t in t0..tail_from.min(t_max + 1) {
            let nu = sizes[(t - t0) as usize];
            if nu == 0 {
                continue;
            }
            let (role, ks) = if t < sched.t_star {
                let k = (n as f64 * (-eps * (sched.t_star - t) as f64).exp2()).ceil() as u64;
                ("coarse", vec![k.max(1)])
            } else {
                let k0 = sched.k_tl(t, 0, eps).max(1);
                let ks: Vec<u64> = (0..=k0.ilog2()).map(|l| sched.k_tl(t, l, eps).max(1)).collect();
                ("middle", ks)
            };
            let k = 1 + ks.iter().map(|k| k - 1).sum::<u64>();
            budget_sum += k - 1;
            let mask: Vec<bool> = layering.layers().iter().map(|&l| l == t).collect();
            let norm = block_norms(tree, &u, &w, &mask, p, q)?.pp;
            let value = norm * super::schuett(nu as u64, k, p, q)?;
            terms.push(BoundExpr::Scale {
                norm,
                inner: Box::new(BoundExpr::Schuett { nu: nu as u64, k, p, q }),
            });
            layers.push(LayerBudget {
                t,
                vertices: nu,
                role: role.into(),
                ks,
                k,
                norm,
                value,
            });
        }
        if tail_from <= t_max {
            let mask: Vec<bool> = layering.layers().iter().map(|&l| l >= tail_from).collect();
            let nb = block_norms(tree, &u, &w, &mask, p, q)?;
            let norm = nb.pp.min(nb.pq);
            terms.push(BoundExpr::Leaf {
                bound: Bound::certified(1, norm),
                label: format!("tail t >= {tail_from}"),
            });
            layers.push(LayerBudget {
                t: tail_from,
                vertices: mask.iter().filter(|&&m| m).count(),
                role: "tail".into(),
                ks: vec![1],
                k: 1,
                norm,
                value: norm,
            });
        }
    }
    let expr = BoundExpr::Sum { terms };
    let b = expr.eval()?;
    debug_assert_eq!(b.index, 1 + budget_sum);
    Ok(Certificate {
        n,
        estimate: EntropyEstimate {
            k: u32::try_from(b.index).map_err(|_| EntropyError::Certificate("index overflow".into()))?,
            value: b.value,
            kind: BoundKind::CertifiedUpper,
            method: "certificate".into(),
            seed: None,
        },
        budget_sum,
        constant: budget_constant(eps),
        layers,
        schedule: sched,
        expr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summation::{norm_oracle, summation_matrix, NormConfig};

    fn binary_setup() -> (Tree, WeightScheme, HProfile) {
        let tree = Tree::complete(2, 6).unwrap();
        let scheme = WeightScheme::Power {
            kappa: 1.5,
            m_star: 1,
            alpha_u: 0.0,
            alpha_w: 0.25,
            offset: Default::default(),
        };
        let h = HProfile::new(1.0, 0.0, Tau::Const, 1.0).unwrap();
        (tree, scheme, h)
    }

    #[test]
    fn budgets_respect_constant() {
        let (tree, scheme, h) = binary_setup();
        for n in 2..=12 {
            let c = entropy_certificate(&tree, &scheme, &h, n, &CertificateConfig::default()).unwrap();
            assert!(c.budget_holds(), "n = {n}");
            assert_eq!(c.estimate.k as u64, 1 + c.budget_sum);
            assert!(c.estimate.value.is_finite() && c.estimate.value > 0.0);
        }
    }

    #[test]
    fn tail_norm_dominates_true_norm_of_whole_operator() {
        let (tree, scheme, h) = binary_setup();
        let c = entropy_certificate(&tree, &scheme, &h, 2, &CertificateConfig::default()).unwrap();
        let (u, w) = vertex_weights(&tree, &scheme, 0).unwrap();
        let est = norm_oracle(&tree, &u, &w, 2.0, 4.0, &NormConfig::default()).unwrap();
        assert!(c.estimate.value >= est.lower * (1.0 - 1e-9));
        let m = summation_matrix(&tree, &u, &w).unwrap();
        assert!(m.riesz_thorin_bound(2.0) >= est.lower * (1.0 - 1e-9));
    }

    #[test]
    fn single_layer_is_one_leaf() {
        let tree = Tree::path(1).unwrap();
        let (_, scheme, h) = binary_setup();
        let c = entropy_certificate(&tree, &scheme, &h, 5, &CertificateConfig::default()).unwrap();
        assert_eq!(c.layers.len(), 1);
        assert_eq!(c.estimate.k, 5);
        assert_eq!(c.expr.size(), 3);
    }

    #[test]
    fn constant_formula() {
        let s = 1.0 / (1.0 - 0.5);
        assert_eq!(budget_constant(1.0), s * s + s);
    }
}
