//! Dense row-major matrices used as operator snapshots by the estimators.

use crate::scalar::Scalar;
use serde::{Deserialize, Serialize};

/// Dense row-major matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    /// All-zero `rows × cols` matrix.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    /// Square identity.
    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![T::one(); n])
    }

    /// Square diagonal matrix.
    pub fn diagonal(d: &[T]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, v) in d.iter().enumerate() {
            m.data[i * n + i] = *v;
        }
        m
    }

    /// Builds from row-major data; `None` if the length does not match.
    pub fn from_row_major(rows: usize, cols: usize, data: Vec<T>) -> Option<Self> {
        (data.len() == rows * cols).then_some(Self { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    /// `y = A x`.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        debug_assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(x)
                    .fold(T::zero(), |acc, (a, b)| acc + *a * *b)
            })
            .collect()
    }

    /// `A x` written into `out`, skipping allocation.
    pub fn mul_vec_into(&self, x: &[T], out: &mut [T]) {
        for (r, o) in out.iter_mut().enumerate() {
            *o = self
                .row(r)
                .iter()
                .zip(x)
                .fold(T::zero(), |acc, (a, b)| acc + *a * *b);
        }
    }

    /// Every entry multiplied by `s`.
    pub fn scaled(&self, s: T) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|v| *v * s).collect(),
        }
    }

    /// Diagonal entries when the matrix is square and diagonal.
    pub fn as_diagonal(&self) -> Option<Vec<T>> {
        if self.rows != self.cols {
            return None;
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                if r != c && self.get(r, c) != T::zero() {
                    return None;
                }
            }
        }
        Some((0..self.rows).map(|i| self.get(i, i)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| *v == T::zero())
    }

    /// Riesz–Thorin bound on the `l_p → l_p` norm:
    /// `(max column sum)^{1/p} · (max row sum)^{1 - 1/p}` of `|A|`.
    pub fn riesz_thorin_bound(&self, p: f64) -> T {
        let mut col = vec![T::zero(); self.cols];
        let mut row_max = T::zero();
        for r in 0..self.rows {
            let mut s = T::zero();
            for (c, v) in self.row(r).iter().enumerate() {
                s = s + v.abs();
                col[c] = col[c] + v.abs();
            }
            row_max = row_max.max(s);
        }
        let col_max = col.into_iter().fold(T::zero(), T::max);
        let inv = crate::scalar::recip(p);
        col_max.powf(T::of(inv)) * row_max.powf(T::of(1.0 - inv))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mul_and_diagonal() {
        let m = Matrix::from_row_major(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m.mul_vec(&[1.0, 1.0]), vec![3.0, 7.0]);
        assert!(m.as_diagonal().is_none());
        let d = Matrix::diagonal(&[1.0, 0.5]);
        assert_eq!(d.as_diagonal(), Some(vec![1.0, 0.5]));
        assert!(Matrix::<f64>::zeros(2, 3).is_zero());
    }

    #[test]
    fn riesz_thorin_on_identity_is_one() {
        let i = Matrix::<f64>::identity(5);
        for p in [1.0, 2.0, 3.5, f64::INFINITY] {
            assert!((i.riesz_thorin_bound(p) - 1.0).abs() < 1e-15);
        }
    }
}
