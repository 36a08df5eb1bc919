//! Two-weighted summation operators on trees.
//!
//! `S f(ξ) = w(ξ) Σ_{ξ' ≤ ξ} u(ξ') f(ξ')`, where `ξ' ≤ ξ` means `ξ'` lies on
//! the path from the root to `ξ`.

mod hardy;
mod norm;
mod weights;

pub use hardy::hardy_bound;
pub use norm::{norm_oracle, row_holder_bound, NormConfig, NormEstimate};
pub use weights::{
    make_weights, make_weights_from, vertex_weights, DepthShift, DepthWeights, WeightScheme,
};

use crate::linalg::Matrix;
use crate::scalar::Scalar;
use crate::tree::Tree;
use thiserror::Error;

/// Errors raised by the summation-operator routines.
#[derive(Debug, Error, PartialEq)]
pub enum SummationError {
    #[error("{what} has length {got}, tree has {expected} vertices")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("weight at vertex or depth {0} is not positive")]
    NonPositiveWeight(usize),
    #[error("weight at depth {0} is not finite")]
    NonFiniteWeight(u64),
    #[error("depth {depth} outside explicit weight arrays of length {len}")]
    DepthOutOfRange { depth: u64, len: usize },
    #[error("exponents must satisfy 1 < p <= q < inf, got p = {p}, q = {q}")]
    BadExponents { p: f64, q: f64 },
    #[error("parameter check failed: {0}")]
    Assumption(String),
}

fn check_len(what: &'static str, expected: usize, got: usize) -> Result<(), SummationError> {
    if expected == got {
        Ok(())
    } else {
        Err(SummationError::DimensionMismatch { what, expected, got })
    }
}

/// Checks `1 < p ≤ q < ∞`.
pub fn check_exponents(p: f64, q: f64) -> Result<(), SummationError> {
    if p > 1.0 && p <= q && q.is_finite() {
        Ok(())
    } else {
        Err(SummationError::BadExponents { p, q })
    }
}

/// Checks that `u` and `w` are positive, finite and sized to the tree.
pub fn check_weights<T: Scalar>(tree: &Tree, u: &[T], w: &[T]) -> Result<(), SummationError> {
    check_len("u", tree.vertex_count(), u.len())?;
    check_len("w", tree.vertex_count(), w.len())?;
    for (v, (a, b)) in u.iter().zip(w).enumerate() {
        if !(*a > T::zero() && *b > T::zero() && a.is_finite() && b.is_finite()) {
            return Err(SummationError::NonPositiveWeight(v));
        }
    }
    Ok(())
}

/// Applies `S_{u,w}` to `f` with one root-to-leaf pass.
pub fn apply<T: Scalar>(tree: &Tree, u: &[T], w: &[T], f: &[T]) -> Result<Vec<T>, SummationError> {
    let n = tree.vertex_count();
    check_len("u", n, u.len())?;
    check_len("w", n, w.len())?;
    check_len("f", n, f.len())?;
    let mut out = vec![T::zero(); n];
    apply_into(tree, u, w, f, &mut out);
    Ok(out)
}

/// Unchecked [`apply`] writing into `out`.
pub(crate) fn apply_into<T: Scalar>(tree: &Tree, u: &[T], w: &[T], f: &[T], out: &mut [T]) {
    let root = tree.root();
    for &v in tree.bfs_order() {
        let prev = if v == root { T::zero() } else { out[tree.parent(v)] };
        out[v] = prev + u[v] * f[v];
    }
    for (o, wv) in out.iter_mut().zip(w) {
        *o = *o * *wv;
    }
}

/// Applies the adjoint `S* g(ξ') = u(ξ') Σ_{ξ ≥ ξ'} w(ξ) g(ξ)`.
pub fn adjoint<T: Scalar>(tree: &Tree, u: &[T], w: &[T], g: &[T]) -> Result<Vec<T>, SummationError> {
    let n = tree.vertex_count();
    check_len("u", n, u.len())?;
    check_len("w", n, w.len())?;
    check_len("g", n, g.len())?;
    let mut out = vec![T::zero(); n];
    adjoint_into(tree, u, w, g, &mut out);
    Ok(out)
}

pub(crate) fn adjoint_into<T: Scalar>(tree: &Tree, u: &[T], w: &[T], g: &[T], out: &mut [T]) {
    for (o, (wv, gv)) in out.iter_mut().zip(w.iter().zip(g)) {
        *o = *wv * *gv;
    }
    let root = tree.root();
    for &v in tree.bfs_order().iter().rev() {
        if v != root {
            let p = tree.parent(v);
            out[p] = out[p] + out[v];
        }
    }
    for (o, uv) in out.iter_mut().zip(u) {
        *o = *o * *uv;
    }
}

/// Dense matrix of `S_{u,w}`: entry `(ξ, ξ')` is `w(ξ) u(ξ')` for `ξ' ≤ ξ`.
pub fn summation_matrix<T: Scalar>(tree: &Tree, u: &[T], w: &[T]) -> Result<Matrix<T>, SummationError> {
    let n = tree.vertex_count();
    check_len("u", n, u.len())?;
    check_len("w", n, w.len())?;
    let mut m = Matrix::zeros(n, n);
    for (xi, &wx) in w.iter().enumerate() {
        let mut a = xi;
        loop {
            m.set(xi, a, wx * u[a]);
            if a == tree.root() {
                break;
            }
            a = tree.parent(a);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn apply_examples() {
        let t = Tree::path(3).unwrap();
        let one = vec![1.0_f64; 3];
        assert_eq!(apply(&t, &one, &one, &one).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(apply(&t, &one, &one, &[1.0, 0.0, 0.0]).unwrap(), vec![1.0; 3]);
        let star = Tree::build(vec![0, 0, 0]).unwrap();
        let u = [1.0, 2.0, 3.0];
        let w = [4.0, 5.0, 6.0];
        assert_eq!(apply(&star, &u, &w, &[0.0, 0.0, 1.0]).unwrap(), vec![0.0, 0.0, 18.0]);
        assert!(apply(&t, &one, &one, &[1.0]).is_err());
    }

    #[test]
    fn adjoint_matches_dense_transpose() {
        let t = Tree::build(vec![0, 0, 1, 1, 2]).unwrap();
        let u = [1.0, 0.5, 2.0, 1.5, 0.25];
        let w = [0.3, 1.0, 0.7, 2.0, 1.1];
        let g = [1.0, -2.0, 0.5, 3.0, -1.0];
        let m = summation_matrix(&t, &u, &w).unwrap();
        let dense: Vec<f64> = (0..5)
            .map(|c| (0..5).map(|r| m.get(r, c) * g[r]).sum())
            .collect();
        let fast = adjoint(&t, &u, &w, &g).unwrap();
        for (a, b) in dense.iter().zip(&fast) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn generic_over_f32() {
        let t = Tree::path(3).unwrap();
        let one = vec![1.0_f32; 3];
        assert_eq!(apply(&t, &one, &one, &one).unwrap(), vec![1.0, 2.0, 3.0]);
    }

    #[test]
    fn exponent_checks() {
        assert!(check_exponents(2.0, 4.0).is_ok());
        assert!(check_exponents(2.0, 2.0).is_ok());
        assert!(check_exponents(4.0, 2.0).is_err());
        assert!(check_exponents(1.0, 2.0).is_err());
        assert!(check_exponents(2.0, f64::INFINITY).is_err());
    }
}
