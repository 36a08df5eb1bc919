//! Two-sided bounds on the `l_p → l_q` norm of a summation operator.

use super::{adjoint_into, apply_into, check_exponents, check_weights, SummationError};
use crate::scalar::{conjugate, lp_norm, Scalar};
use crate::tree::Tree;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Settings for [`norm_oracle`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NormConfig {
    pub restarts: usize,
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    /// Vertex count up to which the simplex-grid upper bound is attempted.
    pub grid_max_vertices: usize,
    /// Number of grid points evaluated by the simplex-grid upper bound.
    pub grid_budget: usize,
}

impl Default for NormConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            tol: 1e-10,
            max_iter: 10_000,
            seed: 0,
            grid_max_vertices: 12,
            grid_budget: 2_000_000,
        }
    }
}

/// Certified bracket `lower ≤ ‖S‖_{p→q} ≤ upper`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormEstimate<T> {
    pub lower: T,
    pub upper: T,
    /// Unit `l_p` vector with `‖S witness‖_q = lower`.
    pub witness: Vec<T>,
    /// Iterations used by the restart that produced the witness.
    pub iterations: usize,
}

/// Row-wise Hölder bound `(Σ_ξ (w(ξ) ‖u|_{[root, ξ]}‖_{p'})^q)^{1/q}`.
pub fn row_holder_bound<T: Scalar>(tree: &Tree, u: &[T], w: &[T], p: f64, q: f64) -> T {
    let pc = conjugate(p);
    let umax = u.iter().fold(T::zero(), |m, v| m.max(*v));
    if umax == T::zero() {
        return T::zero();
    }
    let pct = T::of(pc);
    let n = tree.vertex_count();
    let mut acc = vec![T::zero(); n];
    let root = tree.root();
    for &v in tree.bfs_order() {
        let prev = if v == root { T::zero() } else { acc[tree.parent(v)] };
        acc[v] = prev + (u[v] / umax).powf(pct);
    }
    let rows: Vec<T> = (0..n)
        .map(|v| w[v] * umax * acc[v].powf(T::one() / pct))
        .collect();
    lp_norm(&rows, q)
}

fn power_iteration<T: Scalar>(
    tree: &Tree,
    u: &[T],
    w: &[T],
    p: f64,
    q: f64,
    mut x: Vec<T>,
    cfg: &NormConfig,
) -> (T, Vec<T>, usize) {
    let n = x.len();
    let qm1 = T::of(q - 1.0);
    let inv = T::one() / T::of(p - 1.0);
    let mut y = vec![T::zero(); n];
    let mut z = vec![T::zero(); n];
    let normalize = |x: &mut Vec<T>| {
        let s = lp_norm(x, p);
        if s > T::zero() {
            x.iter_mut().for_each(|v| *v = *v / s);
        }
    };
    normalize(&mut x);
    apply_into(tree, u, w, &x, &mut y);
    let mut best = lp_norm(&y, q);
    let mut best_x = x.clone();
    let mut last = best;
    let mut iters = 0;
    for it in 1..=cfg.max_iter {
        iters = it;
        for v in y.iter_mut() {
            *v = v.max(T::zero()).powf(qm1);
        }
        adjoint_into(tree, u, w, &y, &mut z);
        for (xi, zi) in x.iter_mut().zip(&z) {
            *xi = if p == 2.0 { *zi } else { zi.max(T::zero()).powf(inv) };
        }
        if x.iter().all(|v| *v == T::zero()) {
            break;
        }
        normalize(&mut x);
        apply_into(tree, u, w, &x, &mut y);
        let r = lp_norm(&y, q);
        if r > best {
            best = r;
            best_x.clone_from(&x);
        }
        if (r - last).abs() <= T::of(cfg.tol) * r {
            break;
        }
        last = r;
    }
    (best, best_x, iters)
}

fn binom(n: usize, k: usize) -> f64 {
    let k = k.min(n - k.min(n));
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Upper bound from a simplex grid: every `x ≥ 0` with `‖x‖_p = 1` is
/// dominated by some `(c / G)^{1/p}` with `c` an integer composition of
/// `G + d - 1`, and `S` is monotone on nonnegative inputs.
fn grid_upper<T: Scalar>(tree: &Tree, u: &[T], w: &[T], p: f64, q: f64, budget: usize) -> Option<T> {
    let d = tree.vertex_count();
    let mut g = 1usize;
    while binom(g + 1 + 2 * d - 2, d - 1) <= budget as f64 {
        g += 1;
        if g > 1 << 20 {
            break;
        }
    }
    if binom(g + 2 * d - 2, d - 1) > budget as f64 {
        return None;
    }
    let total = g + d - 1;
    let gt = T::of(g as f64);
    let inv_p = T::one() / T::of(p);
    let table: Vec<T> = (0..=total).map(|c| (T::of(c as f64) / gt).powf(inv_p)).collect();
    let mut c = vec![0usize; d];
    c[d - 1] = total;
    let mut x = vec![T::zero(); d];
    let mut y = vec![T::zero(); d];
    let mut best = T::zero();
    loop {
        for (xi, ci) in x.iter_mut().zip(&c) {
            *xi = table[*ci];
        }
        apply_into(tree, u, w, &x, &mut y);
        best = best.max(lp_norm(&y, q));
        if !next_composition(&mut c) {
            break;
        }
    }
    Some(best)
}

/// Advances `c` to the next composition with the same sum; `false` after
/// the last one.
fn next_composition(c: &mut [usize]) -> bool {
    let d = c.len();
    if d < 2 {
        return false;
    }
    // Find the rightmost nonzero entry beyond position 0.
    let Some(j) = (1..d).rev().find(|&j| c[j] > 0) else {
        return false;
    };
    let v = c[j];
    c[j] = 0;
    c[j - 1] += 1;
    c[d - 1] = v - 1;
    true
}

/// Two-sided bound on `‖S_{u,w}‖_{l_p → l_q}` for `1 < p ≤ q < ∞`.
///
/// The lower bound is the best ratio reached by a nonlinear power iteration
/// over `cfg.restarts` starts (the first uniform, the rest drawn from
/// independent seeded streams); it is certified because every iterate is a
/// feasible point. The upper bound is the row-wise Hölder bound, tightened
/// by a simplex-grid search on small trees.
pub fn norm_oracle<T: Scalar>(
    tree: &Tree,
    u: &[T],
    w: &[T],
    p: f64,
    q: f64,
    cfg: &NormConfig,
) -> Result<NormEstimate<T>, SummationError> {
    check_exponents(p, q)?;
    check_weights(tree, u, w)?;
    let n = tree.vertex_count();
    let runs: Vec<(T, Vec<T>, usize)> = (0..cfg.restarts.max(1))
        .into_par_iter()
        .map(|r| {
            let x0 = if r == 0 {
                vec![T::one(); n]
            } else {
                let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
                rng.set_stream(r as u64);
                (0..n).map(|_| T::of(rng.random_range(0.05..1.0))).collect()
            };
            power_iteration(tree, u, w, p, q, x0, cfg)
        })
        .collect();
    let mut best = 0;
    for (i, run) in runs.iter().enumerate() {
        if run.0 > runs[best].0 {
            best = i;
        }
    }
    let (_, witness, iterations) = runs.into_iter().nth(best).expect("at least one restart");
    let mut y = vec![T::zero(); n];
    apply_into(tree, u, w, &witness, &mut y);
    let lower = lp_norm(&y, q) / lp_norm(&witness, p);

    let mut upper = row_holder_bound(tree, u, w, p, q);
    if n <= cfg.grid_max_vertices {
        if let Some(g) = grid_upper(tree, u, w, p, q, cfg.grid_budget) {
            upper = upper.min(g);
        }
    }
    // Both bounds are exact up to rounding; absorb a last-ulp crossing.
    if upper < lower && upper >= lower * T::of(1.0 - 1e-12) {
        upper = lower;
    }
    Ok(NormEstimate {
        lower,
        upper,
        witness,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compositions_enumerate_all() {
        let mut c = vec![0, 0, 3];
        let mut count = 1;
        while next_composition(&mut c) {
            assert_eq!(c.iter().sum::<usize>(), 3);
            count += 1;
        }
        assert_eq!(count, 10);
        assert_eq!(binom(5, 2), 10.0);
    }

    #[test]
    fn single_vertex_is_exact() {
        let t = Tree::build(vec![0]).unwrap();
        let e = norm_oracle(&t, &[3.0_f64], &[0.5], 2.0, 4.0, &NormConfig::default()).unwrap();
        assert!((e.lower - 1.5).abs() < 1e-15);
        assert!((e.upper - 1.5).abs() < 1e-15);
    }

    #[test]
    fn cumulative_sum_singular_values() {
        let cfg = NormConfig::default();
        let t2 = Tree::path(2).unwrap();
        let e = norm_oracle(&t2, &[1.0f64; 2], &[1.0; 2], 2.0, 2.0, &cfg).unwrap();
        assert!((e.lower - 1.618_034).abs() < 1e-6);
        assert!(e.upper >= 1.618_033_988);
        let t3 = Tree::path(3).unwrap();
        let e = norm_oracle(&t3, &[1.0f64; 3], &[1.0; 3], 2.0, 2.0, &cfg).unwrap();
        assert!((e.lower - 2.24698).abs() < 1e-5);
        assert!(e.upper >= e.lower);
    }

    #[test]
    fn rejects_bad_inputs() {
        let t = Tree::path(2).unwrap();
        let cfg = NormConfig::default();
        assert!(norm_oracle(&t, &[1.0f64; 2], &[1.0; 2], 4.0, 2.0, &cfg).is_err());
        assert!(norm_oracle(&t, &[1.0, 0.0], &[1.0; 2], 2.0, 2.0, &cfg).is_err());
    }
}
