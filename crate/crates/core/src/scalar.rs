//! Scalar abstraction shared by the numerical kernels.

use core::fmt::{Debug, Display};
use core::iter::Sum;
use num_traits::{Float, FromPrimitive, NumCast};

/// Floating-point type accepted by the generic kernels (`f32` or `f64`).
pub trait Scalar:
    Float + FromPrimitive + NumCast + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant into `Self`, rounding if necessary.
    #[inline]
    fn of(x: f64) -> Self {
        <Self as NumCast>::from(x).unwrap_or_else(Self::nan)
    }

    /// Widens `self` to `f64`.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Exponent `p` of an `l_p` norm; `f64::INFINITY` selects the sup norm.
#[inline]
pub fn is_sup(p: f64) -> bool {
    p.is_infinite()
}

/// `l_p` norm of `x` (sup norm when `p` is infinite).
pub fn lp_norm<T: Scalar>(x: &[T], p: f64) -> T {
    if is_sup(p) {
        return x.iter().fold(T::zero(), |m, v| m.max(v.abs()));
    }
    if p == 1.0 {
        return x.iter().map(|v| v.abs()).sum();
    }
    if p == 2.0 {
        return x.iter().map(|v| *v * *v).sum::<T>().sqrt();
    }
    let pt = T::of(p);
    x.iter().map(|v| v.abs().powf(pt)).sum::<T>().powf(T::one() / pt)
}

/// `l_q` distance between two equally long vectors.
pub fn lp_dist<T: Scalar>(a: &[T], b: &[T], q: f64) -> T {
    debug_assert_eq!(a.len(), b.len());
    if is_sup(q) {
        return a
            .iter()
            .zip(b)
            .fold(T::zero(), |m, (x, y)| m.max((*x - *y).abs()));
    }
    if q == 2.0 {
        return a
            .iter()
            .zip(b)
            .map(|(x, y)| (*x - *y) * (*x - *y))
            .sum::<T>()
            .sqrt();
    }
    if q == 1.0 {
        return a.iter().zip(b).map(|(x, y)| (*x - *y).abs()).sum();
    }
    let qt = T::of(q);
    a.iter()
        .zip(b)
        .map(|(x, y)| (*x - *y).abs().powf(qt))
        .sum::<T>()
        .powf(T::one() / qt)
}

/// Hölder conjugate `p' = p / (p - 1)`; `1' = ∞` and `∞' = 1`.
pub fn conjugate(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

/// `1/p`, with `1/∞ = 0`.
#[inline]
pub fn recip(p: f64) -> f64 {
    if p.is_infinite() {
        0.0
    } else {
        1.0 / p
    }
}
