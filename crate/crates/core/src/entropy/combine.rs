//! Rules for combining entropy bounds, and expression trees built from them.

use super::kuhn::{kuhn_value, Phi};
use super::schuett::schuett;
use super::{BoundKind, EntropyError};
use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// Upper bound `e_index(A) ≤ value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bound<T> {
    pub index: u64,
    pub value: T,
    pub kind: BoundKind,
}

impl<T: Scalar> Bound<T> {
    pub fn certified(index: u64, value: T) -> Self {
        Self {
            index,
            value,
            kind: BoundKind::CertifiedUpper,
        }
    }

    pub fn heuristic(index: u64, value: T) -> Self {
        Self {
            index,
            value,
            kind: BoundKind::Heuristic,
        }
    }
}

fn upper_kind(a: BoundKind, b: BoundKind) -> Result<BoundKind, EntropyError> {
    match (a, b) {
        (BoundKind::CertifiedLower, _) | (_, BoundKind::CertifiedLower) => Err(EntropyError::LowerInUpperRule),
        (BoundKind::CertifiedUpper, BoundKind::CertifiedUpper) => Ok(BoundKind::CertifiedUpper),
        _ => Ok(BoundKind::Heuristic),
    }
}

/// `e_{k+l-1}(A + B) ≤ e_k(A) + e_l(B)`.
pub fn combine_sum<T: Scalar>(a: Bound<T>, b: Bound<T>) -> Result<Bound<T>, EntropyError> {
    if a.index == 0 || b.index == 0 {
        return Err(EntropyError::ZeroIndex);
    }
    Ok(Bound {
        index: a.index + b.index - 1,
        value: a.value + b.value,
        kind: upper_kind(a.kind, b.kind)?,
    })
}

/// `e_k(S T) ≤ ‖S‖ e_k(T)`.
pub fn combine_scale<T: Scalar>(norm: T, e: Bound<T>) -> Result<Bound<T>, EntropyError> {
    upper_kind(e.kind, e.kind)?;
    Ok(Bound {
        index: e.index,
        value: norm * e.value,
        kind: e.kind,
    })
}

/// Index and value for a finite family: if every member `T ∈ N` satisfies
/// `e_n(T) ≤ per_member` and the family approximates an operator set up to
/// `approx_error`, then `e_{n + ⌊log₂|N|⌋ + 1} ≤ per_member + approx_error`.
pub fn lifshits_combine<T: Scalar>(
    n: u64,
    family_size: u64,
    per_member: T,
    approx_error: T,
) -> Result<(u64, T), EntropyError> {
    if family_size == 0 {
        return Err(EntropyError::EmptyFamily);
    }
    if n == 0 {
        return Err(EntropyError::ZeroIndex);
    }
    Ok((n + family_size.ilog2() as u64 + 1, per_member + approx_error))
}

/// Expression tree of entropy bounds, evaluated bottom-up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "snake_case")]
pub enum BoundExpr<T> {
    /// A known bound.
    Leaf { bound: Bound<T>, label: String },
    /// The reference curve for `I : l_p^ν → l_q^ν`.
    Schuett { nu: u64, k: u64, p: f64, q: f64 },
    /// The diagonal value `1/φ(2^n)`, always heuristic.
    Kuhn { n: u64, p: f64, q: f64, phi: Phi },
    /// Fold of [`combine_sum`] over the terms.
    Sum { terms: Vec<BoundExpr<T>> },
    /// [`combine_scale`] by an operator-norm bound.
    Scale { norm: T, inner: Box<BoundExpr<T>> },
    /// [`lifshits_combine`] over a family of the given size.
    Family {
        family_size: u64,
        approx_error: T,
        inner: Box<BoundExpr<T>>,
    },
}

impl<T: Scalar> BoundExpr<T> {
    pub fn eval(&self) -> Result<Bound<T>, EntropyError> {
        match self {
            BoundExpr::Leaf { bound, .. } => Ok(*bound),
            BoundExpr::Schuett { nu, k, p, q } => Ok(Bound::certified(*k, T::of(schuett(*nu, *k, *p, *q)?))),
            BoundExpr::Kuhn { n, p, q, phi } => Ok(Bound::heuristic(*n, T::of(kuhn_value(*n, *p, *q, phi)?))),
            BoundExpr::Sum { terms } => {
                let mut it = terms.iter();
                let first = it
                    .next()
                    .ok_or_else(|| EntropyError::Certificate("empty sum".into()))?
                    .eval()?;
                it.try_fold(first, |acc, t| combine_sum(acc, t.eval()?))
            }
            BoundExpr::Scale { norm, inner } => combine_scale(*norm, inner.eval()?),
            BoundExpr::Family {
                family_size,
                approx_error,
                inner,
            } => {
                let b = inner.eval()?;
                let kind = upper_kind(b.kind, b.kind)?;
                let (index, value) = lifshits_combine(b.index, *family_size, b.value, *approx_error)?;
                Ok(Bound { index, value, kind })
            }
        }
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            BoundExpr::Leaf { .. } | BoundExpr::Schuett { .. } | BoundExpr::Kuhn { .. } => 1,
            BoundExpr::Sum { terms } => 1 + terms.iter().map(|t| t.size()).sum::<usize>(),
            BoundExpr::Scale { inner, .. } | BoundExpr::Family { inner, .. } => 1 + inner.size(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sum_example() {
        let r = combine_sum(Bound::certified(3, 0.5), Bound::certified(4, 0.25)).unwrap();
        assert_eq!((r.index, r.value, r.kind), (6, 0.75, BoundKind::CertifiedUpper));
    }

    #[test]
    fn lifshits_example() {
        assert_eq!(lifshits_combine(5, 8, 0.5, 0.25).unwrap(), (9, 0.75));
        assert_eq!(lifshits_combine(5, 1, 0.5, 0.0).unwrap(), (6, 0.5));
        assert!(lifshits_combine(5, 0, 0.5, 0.0).is_err());
    }

    #[test]
    fn kinds_propagate() {
        let h = combine_sum(Bound::certified(1, 1.0), Bound::heuristic(1, 1.0)).unwrap();
        assert_eq!(h.kind, BoundKind::Heuristic);
        let lower = Bound {
            index: 1,
            value: 1.0,
            kind: BoundKind::CertifiedLower,
        };
        assert_eq!(combine_sum(lower, Bound::certified(1, 1.0)), Err(EntropyError::LowerInUpperRule));
        assert_eq!(combine_scale(2.0, lower), Err(EntropyError::LowerInUpperRule));
    }

    #[test]
    fn expression_eval() {
        let e = BoundExpr::Sum {
            terms: vec![
                BoundExpr::Scale {
                    norm: 2.0,
                    inner: Box::new(BoundExpr::Schuett { nu: 16, k: 16, p: 1.0, q: 2.0 }),
                },
                BoundExpr::Leaf {
                    bound: Bound::certified(1, 0.5),
                    label: "tail".into(),
                },
            ],
        };
        let b = e.eval().unwrap();
        assert_eq!(b.index, 16);
        assert!((b.value - (2.0 * (2f64.ln() / 16.0).sqrt() + 0.5)).abs() < 1e-15);
        assert_eq!(e.size(), 4);
    }
}
