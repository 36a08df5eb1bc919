//! Sampled, net-based and volumetric estimators of `e_k`.

use super::sampling::{sample_images, sample_sphere, SampleConfig};
use super::{check_k, check_pq, BoundKind, EntropyError, EntropyEstimate};
use crate::linalg::Matrix;
use crate::scalar::{conjugate, is_sup, lp_norm, Scalar};
use rayon::prelude::*;
use statrs::function::gamma::ln_gamma;

/// Largest domain dimension accepted by [`net_upper`].
pub const NET_DIM_GATE: usize = 6;
/// Largest net accepted by [`net_upper`].
pub const NET_MAX_POINTS: usize = 1 << 23;

/// `Σ |a_i - b_i|^q`, or the max for `q = ∞`.
fn dist_pow<T: Scalar>(a: &[T], b: &[T], q: f64) -> T {
    if is_sup(q) {
        return a
            .iter()
            .zip(b)
            .fold(T::zero(), |m, (&x, &y)| m.max((x - y).abs()));
    }
    if q == 2.0 {
        return a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum();
    }
    if q == 4.0 {
        return a
            .iter()
            .zip(b)
            .map(|(&x, &y)| {
                let d = (x - y) * (x - y);
                d * d
            })
            .sum();
    }
    if q == 1.0 {
        return a.iter().zip(b).map(|(&x, &y)| (x - y).abs()).sum();
    }
    let qt = T::of(q);
    a.iter().zip(b).map(|(&x, &y)| (x - y).abs().powf(qt)).sum()
}

fn root<T: Scalar>(v: T, q: f64) -> T {
    if is_sup(q) || q == 1.0 {
        v
    } else if q == 2.0 {
        v.sqrt()
    } else {
        v.powf(T::of(1.0 / q))
    }
}

/// Farthest-point traversal in `l_q`.
///
/// Starts from `start` (an index into `points`) or, when `None`, from an
/// external center at the origin. Returns the distances `d_1 ≥ d_2 ≥ …` of
/// successive selections to the set selected so far, at most `count` of
/// them. Ties go to the lowest index.
fn traverse<T: Scalar>(points: &[Vec<T>], q: f64, start: Option<usize>, count: usize) -> Vec<T> {
    let n = points.len();
    if n == 0 || count == 0 {
        return Vec::new();
    }
    let dim = points[0].len();
    let origin = vec![T::zero(); dim];
    let first: &[T] = match start {
        Some(i) => &points[i],
        None => &origin,
    };
    let mut dist: Vec<T> = points.par_iter().map(|y| dist_pow(y, first, q)).collect();
    let mut out = Vec::with_capacity(count.min(n));
    while out.len() < count {
        let (mut best, mut bi) = (T::zero(), usize::MAX);
        for (i, &d) in dist.iter().enumerate() {
            if bi == usize::MAX || d > best {
                best = d;
                bi = i;
            }
        }
        if best <= T::zero() {
            out.push(T::zero());
            break;
        }
        out.push(root(best, q));
        let c = points[bi].clone();
        dist.par_iter_mut().zip(points.par_iter()).for_each(|(d, y)| {
            let e = dist_pow(y, &c, q);
            if e < *d {
                *d = e;
            }
        });
    }
    out
}

/// Distances `d_2 ≥ d_3 ≥ …` of a farthest-point traversal.
///
/// `d_M` is the distance of the `M`-th selected point to the first `M - 1`.
/// The first point is the one of largest `l_q` norm (lowest index on ties).
#[derive(Debug, Clone, PartialEq)]
pub struct PackingProfile<T> {
    pub distances: Vec<T>,
    pub points: usize,
}

impl<T: Scalar> PackingProfile<T> {
    /// `d_M / 2` with `M = 2^{k-1} + 1`, or zero when fewer points exist.
    pub fn lower(&self, k: u32) -> T {
        let m = (1usize << (k - 1)) + 1;
        self.distances
            .get(m - 2)
            .map_or(T::zero(), |&d| d / T::of(2.0))
    }

    /// Covering radius of the sample by its first `2^{k-1}` selections.
    pub fn cover(&self, k: u32) -> T {
        let c = 1usize << (k - 1);
        if c >= self.points {
            return T::zero();
        }
        self.distances.get(c - 1).copied().unwrap_or(T::zero())
    }
}

/// Farthest-point profile of arbitrary points, up to `max_centers` centers.
pub fn farthest_point_profile<T: Scalar>(points: &[Vec<T>], q: f64, max_centers: usize) -> PackingProfile<T> {
    if points.is_empty() {
        return PackingProfile {
            distances: Vec::new(),
            points: 0,
        };
    }
    let mut start = 0usize;
    let mut best = T::neg_infinity();
    for (i, y) in points.iter().enumerate() {
        let v = lp_norm(y, q);
        if v > best {
            best = v;
            start = i;
        }
    }
    PackingProfile {
        distances: traverse(points, q, Some(start), max_centers.min(points.len() - 1)),
        points: points.len(),
    }
}

/// One farthest-point profile of `A` applied to sampled unit vectors and the
/// origin, sufficient for every `k ≤ k_max`. When they at most double the
/// sample, the scaled basis vectors `±(j / 2^{k_max-1}) e_i` are added too.
pub fn packing_profile<T: Scalar>(
    a: &Matrix<T>,
    p: f64,
    q: f64,
    k_max: u32,
    cfg: &SampleConfig,
) -> Result<PackingProfile<T>, EntropyError> {
    check_pq(p, q)?;
    check_k(k_max)?;
    let mut images = sample_images(a, p, cfg);
    let c = 1usize << (k_max - 1);
    images.push(vec![T::zero(); a.rows()]);
    let interior = if 2 * c * a.cols() <= cfg.samples { a.cols() } else { 0 };
    for col in 0..interior {
        let y: Vec<T> = (0..a.rows()).map(|r| a.get(r, col)).collect();
        for j in 1..c {
            let t = T::of(j as f64 / c as f64);
            images.push(y.iter().map(|&v| v * t).collect());
            images.push(y.iter().map(|&v| -v * t).collect());
        }
    }
    Ok(farthest_point_profile(&images, q, c))
}

/// Certified lower bound `e_k ≥ d_M / 2` from `M = 2^{k-1} + 1` sampled image
/// points that are pairwise at least `d_M` apart.
pub fn packing_lower<T: Scalar>(
    a: &Matrix<T>,
    p: f64,
    q: f64,
    k: u32,
    cfg: &SampleConfig,
) -> Result<EntropyEstimate<T>, EntropyError> {
    let prof = packing_profile(a, p, q, k, cfg)?;
    Ok(EntropyEstimate {
        k,
        value: prof.lower(k),
        kind: BoundKind::CertifiedLower,
        method: "packing".into(),
        seed: Some(cfg.seed),
    })
}

/// Radius needed to cover the sampled image by `2^{k-1}` greedily chosen
/// sample points. A heuristic for `e_k`, never below the matching
/// [`packing_lower`].
pub fn greedy_cover_estimate<T: Scalar>(
    a: &Matrix<T>,
    p: f64,
    q: f64,
    k: u32,
    cfg: &SampleConfig,
) -> Result<EntropyEstimate<T>, EntropyError> {
    let prof = packing_profile(a, p, q, k, cfg)?;
    Ok(EntropyEstimate {
        k,
        value: prof.cover(k),
        kind: BoundKind::Heuristic,
        method: "greedy_cover".into(),
        seed: Some(cfg.seed),
    })
}

fn row_norm_bound<T: Scalar>(a: &Matrix<T>, p: f64, q: f64) -> T {
    let pc = conjugate(p);
    let norms: Vec<T> = (0..a.rows()).map(|i| lp_norm(a.row(i), pc)).collect();
    lp_norm(&norms, q)
}

/// Certified upper bound for `e_k` from an explicit `η`-net of `B_p^m`.
///
/// The net is the grid `h Z^m` with `h = 2η / m^{1/p}` restricted to
/// `(1 + η) B_p`; every point of `B_p` is within `η` of it. The net images
/// are covered greedily by `2^{k-1}` centers starting from the origin, and
/// the result is that radius plus `η` times an upper bound of `‖A‖_{p→q}`.
pub fn net_upper<T: Scalar>(a: &Matrix<T>, p: f64, q: f64, k: u32, eta: f64) -> Result<EntropyEstimate<T>, EntropyError> {
    check_pq(p, q)?;
    check_k(k)?;
    let m = a.cols();
    if m > NET_DIM_GATE {
        return Err(EntropyError::DimensionGate {
            dim: m,
            gate: NET_DIM_GATE,
        });
    }
    if !(eta > 0.0 && eta < 1.0) {
        return Err(EntropyError::BadEta(eta));
    }
    let est = |value: T| EntropyEstimate {
        k,
        value,
        kind: BoundKind::CertifiedUpper,
        method: "net".into(),
        seed: None,
    };
    if m == 0 {
        return Ok(est(T::zero()));
    }
    let mroot = if is_sup(p) { 1.0 } else { (m as f64).powf(1.0 / p) };
    let h = 2.0 * eta / mroot;
    let steps = ((1.0 + eta) / h).floor() as i64;
    let side = (2 * steps + 1) as usize;
    if (side as f64).powi(m as i32) > NET_MAX_POINTS as f64 {
        return Err(EntropyError::NetTooLarge(NET_MAX_POINTS));
    }
    let total = side.pow(m as u32);
    let images: Vec<Vec<T>> = (0..total)
        .into_par_iter()
        .filter_map(|mut idx| {
            let mut g = vec![T::zero(); m];
            for gi in g.iter_mut() {
                let s = (idx % side) as i64 - steps;
                idx /= side;
                *gi = T::of(s as f64 * h);
            }
            (lp_norm(&g, p).as_f64() <= 1.0 + eta).then(|| a.mul_vec(&g))
        })
        .collect();
    let sup = images
        .iter()
        .map(|y| lp_norm(y, q))
        .fold(T::zero(), |m, v| m.max(v));
    let norm = row_norm_bound(a, p, q).min(sup / T::of(1.0 - eta));
    let c = 1usize << (k - 1);
    let radius = traverse(&images, q, None, c).get(c - 1).copied().unwrap_or(T::zero());
    Ok(est(radius + T::of(eta) * norm))
}

fn ln_ball_volume(nu: usize, p: f64) -> f64 {
    if is_sup(p) {
        nu as f64 * 2f64.ln()
    } else {
        nu as f64 * (2.0 * ln_gamma(1.0 + 1.0 / p).exp()).ln() - ln_gamma(1.0 + nu as f64 / p)
    }
}

/// Certified lower bound for a diagonal operator on `l_p^ν → l_q^ν` from
/// volume comparison:
/// `e_k ≥ (∏|d_i|)^{1/ν} (vol B_p^ν / vol B_q^ν)^{1/ν} 2^{-(k-1)/ν}`.
pub fn volumetric_lower<T: Scalar>(nu: usize, p: f64, q: f64, k: u32, diag: &[T]) -> Result<EntropyEstimate<T>, EntropyError> {
    check_pq(p, q)?;
    if k == 0 {
        return Err(EntropyError::ZeroIndex);
    }
    if diag.len() != nu {
        return Err(EntropyError::NotSquare {
            rows: nu,
            cols: diag.len(),
        });
    }
    let value = if nu == 0 || diag.iter().any(|d| d.is_zero()) {
        0.0
    } else {
        let n = nu as f64;
        let ln_det: f64 = diag.iter().map(|d| d.as_f64().abs().ln()).sum();
        ((ln_det + ln_ball_volume(nu, p) - ln_ball_volume(nu, q)) / n - (k - 1) as f64 * 2f64.ln() / n).exp()
    };
    Ok(EntropyEstimate {
        k,
        value: T::of(value),
        kind: BoundKind::CertifiedLower,
        method: "volumetric".into(),
        seed: None,
    })
}

fn ln_choose(n: f64, k: f64) -> f64 {
    ln_gamma(n + 1.0) - ln_gamma(k + 1.0) - ln_gamma(n - k + 1.0)
}

/// `log₂ #{z ∈ Z^ν : ‖z‖_1 ≤ m}`.
fn log2_l1_lattice_count(nu: usize, m: u64) -> f64 {
    let terms: Vec<f64> = (0..=(nu as u64).min(m))
        .map(|i| {
            let i = i as f64;
            i * 2f64.ln() + ln_choose(nu as f64, i) + ln_choose(m as f64, i)
        })
        .collect();
    let top = terms.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    (top + terms.iter().map(|t| (t - top).exp()).sum::<f64>().ln()) / 2f64.ln()
}

/// Largest `m` with `#{z : ‖z‖_1 ≤ m} ≤ 2^{budget}`.
fn l1_level(nu: usize, budget: f64) -> u64 {
    let fits = |m: u64| log2_l1_lattice_count(nu, m) <= budget + 1e-9;
    if !fits(1) {
        return 0;
    }
    let mut hi = 2u64;
    while fits(hi) {
        hi *= 2;
        if hi > 1 << 50 {
            return hi;
        }
    }
    let mut lo = hi / 2;
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// `l_q` error of the best point of `(1/m) Z^ν ∩ B_1` for `x`, weighted by `d`.
///
/// Starts from `trunc(m x)` and spends the remaining `l_1` budget on the
/// coordinates with the largest error reduction. The objective is separable
/// and convex with unit step costs, so the greedy choice is optimal.
fn l1_lattice_error<T: Scalar>(x: &[T], d: &[T], m: u64, q: f64) -> T {
    if m == 0 {
        let y: Vec<T> = x.iter().zip(d).map(|(&a, &b)| a * b).collect();
        return lp_norm(&y, q);
    }
    let mf = T::of(m as f64);
    let mut used = 0u64;
    let mut resid: Vec<T> = Vec::with_capacity(x.len());
    let mut gains: Vec<(T, usize)> = Vec::new();
    for (i, (&xi, &di)) in x.iter().zip(d).enumerate() {
        let s = xi.abs() * mf;
        let t = s.floor();
        used += t.as_f64() as u64;
        let f = s - t;
        resid.push(f);
        let w = di.abs();
        let gain = if is_sup(q) {
            f - (T::one() - f)
        } else {
            let qt = T::of(q);
            (w * f).powf(qt) - (w * (T::one() - f)).powf(qt)
        };
        if gain > T::zero() {
            gains.push((gain, i));
        }
    }
    let mut budget = m.saturating_sub(used);
    gains.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap().then(a.1.cmp(&b.1)));
    for &(_, i) in &gains {
        if budget == 0 {
            break;
        }
        resid[i] = T::one() - resid[i];
        budget -= 1;
    }
    let y: Vec<T> = resid.iter().zip(d).map(|(&r, &w)| r * w.abs() / mf).collect();
    lp_norm(&y, q)
}

/// Heuristic `e_k` for a diagonal operator `D : l_p^ν → l_q^ν`.
///
/// Centers are a lattice of at most `2^{k-1}` points: `(1/m) Z^ν ∩ B_1` with
/// the largest admissible `m` when `p = 1`, and the cubic grid
/// `(1/L) Z^ν ∩ [-1, 1]^ν` otherwise. The estimate is the largest weighted
/// rounding error over sampled unit vectors.
pub fn lattice_cover_estimate<T: Scalar>(
    diag: &[T],
    p: f64,
    q: f64,
    k: u32,
    cfg: &SampleConfig,
) -> Result<EntropyEstimate<T>, EntropyError> {
    check_pq(p, q)?;
    if k == 0 {
        return Err(EntropyError::ZeroIndex);
    }
    let nu = diag.len();
    let budget = (k - 1) as f64;
    let points = sample_sphere::<T>(nu, p, cfg);
    let value = if p == 1.0 {
        let m = l1_level(nu, budget);
        points
            .par_iter()
            .map(|x| l1_lattice_error(x, diag, m, q))
            .reduce(T::zero, |a, b| a.max(b))
    } else {
        let l = (((budget / nu.max(1) as f64).exp2() - 1.0) / 2.0).floor().max(0.0);
        points
            .par_iter()
            .map(|x| {
                let y: Vec<T> = x
                    .iter()
                    .zip(diag)
                    .map(|(&xi, &di)| {
                        let z = if l == 0.0 {
                            T::zero()
                        } else {
                            (xi * T::of(l)).round() / T::of(l)
                        };
                        (xi - z) * di
                    })
                    .collect();
                lp_norm(&y, q)
            })
            .reduce(T::zero, |a, b| a.max(b))
    };
    Ok(EntropyEstimate {
        k,
        value,
        kind: BoundKind::Heuristic,
        method: "lattice_cover".into(),
        seed: Some(cfg.seed),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(samples: usize) -> SampleConfig {
        SampleConfig {
            samples,
            seed: 1,
            chunk: 128,
        }
    }

    #[test]
    fn zero_operator_gives_zero() {
        let a = Matrix::<f64>::zeros(3, 3);
        assert_eq!(packing_lower(&a, 1.0, 2.0, 2, &cfg(64)).unwrap().value, 0.0);
        assert_eq!(greedy_cover_estimate(&a, 1.0, 2.0, 2, &cfg(64)).unwrap().value, 0.0);
    }

    #[test]
    fn single_sample_and_origin() {
        let a = Matrix::<f64>::identity(3);
        let one = greedy_cover_estimate(&a, 2.0, 2.0, 1, &cfg(1)).unwrap().value;
        assert!((one - 1.0).abs() < 1e-12);
        assert_eq!(greedy_cover_estimate(&a, 2.0, 2.0, 2, &cfg(1)).unwrap().value, 0.0);
    }

    #[test]
    fn identity_first_number_is_half_diameter() {
        let a = Matrix::<f64>::identity(4);
        let lo = packing_lower(&a, 2.0, 2.0, 1, &cfg(256)).unwrap().value;
        assert!(lo > 0.95 && lo <= 1.0 + 1e-12, "{lo}");
        let up = net_upper(&a, 2.0, 2.0, 1, 0.1).unwrap().value;
        assert!((1.0..1.3).contains(&up));
    }

    #[test]
    fn packing_never_exceeds_cover() {
        let a = Matrix::from_row_major(2, 3, vec![1.0, 0.5, -0.2, 0.1, 2.0, 0.3]).unwrap();
        let prof = packing_profile(&a, 1.5, 3.0, 6, &cfg(2000)).unwrap();
        for k in 1..=6 {
            assert!(prof.lower(k) <= prof.cover(k));
            if k > 1 {
                assert!(prof.lower(k) <= prof.lower(k - 1));
            }
        }
    }

    #[test]
    fn net_gate_and_eta() {
        let a = Matrix::<f64>::identity(7);
        assert!(matches!(
            net_upper(&a, 1.0, 2.0, 1, 0.1),
            Err(EntropyError::DimensionGate { .. })
        ));
        let a = Matrix::<f64>::identity(2);
        assert!(matches!(net_upper(&a, 1.0, 2.0, 1, 1.5), Err(EntropyError::BadEta(_))));
    }

    #[test]
    fn volumetric_example() {
        let v = volumetric_lower(2, 1.0, f64::INFINITY, 1, &[1.0, 1.0]).unwrap();
        assert!((v.value - 0.5f64.sqrt()).abs() < 1e-12);
        assert!(volumetric_lower(2, 1.0, 2.0, 1, &[1.0]).is_err());
    }

    #[test]
    fn l1_count_small_cases() {
        // |{z in Z^2 : |z|_1 <= 1}| = 5, <= 2: 13
        assert!((log2_l1_lattice_count(2, 1) - 5f64.log2()).abs() < 1e-12);
        assert!((log2_l1_lattice_count(2, 2) - 13f64.log2()).abs() < 1e-12);
        assert_eq!(l1_level(2, 13f64.log2()), 2);
        assert_eq!(l1_level(2, 4.0), 2);
        assert_eq!(l1_level(2, 2.0), 0);
    }

    #[test]
    fn lattice_rounding_is_optimal_on_small_grid() {
        let x = [0.3f64, -0.45, 0.25];
        let d = [1.0, 1.0, 1.0];
        let m = 3u64;
        let got = l1_lattice_error(&x, &d, m, 2.0);
        let mut best = f64::INFINITY;
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for c in -3i64..=3 {
                    if a.abs() + b.abs() + c.abs() <= 3 {
                        let z = [a as f64 / 3.0, b as f64 / 3.0, c as f64 / 3.0];
                        let e: f64 = x.iter().zip(z).map(|(u, v)| (u - v).powi(2)).sum();
                        best = best.min(e.sqrt());
                    }
                }
            }
        }
        assert!((got - best).abs() < 1e-12);
    }
}
