//! Seeded sampling of `l_p` unit spheres and their images.
//!
//! Every chunk of samples draws from its own ChaCha stream, so the output is
//! identical for any number of worker threads.

use crate::linalg::Matrix;
use crate::scalar::{lp_norm, Scalar};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Sample budget and seed for the randomized estimators.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleConfig {
    pub samples: usize,
    pub seed: u64,
    /// Samples per RNG stream.
    pub chunk: usize,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            samples: 1 << 14,
            seed: 0,
            chunk: 256,
        }
    }
}

fn draw<T: Scalar>(rng: &mut ChaCha8Rng, gamma: Option<&Gamma<f64>>, m: usize, p: f64) -> Vec<T> {
    let mut x = vec![T::zero(); m];
    let support = if rng.random_bool(0.5) { m } else { rng.random_range(1..=m) };
    let mut idx: Vec<usize> = (0..m).collect();
    for i in 0..support {
        let j = rng.random_range(i..m);
        idx.swap(i, j);
        let mag = match gamma {
            Some(g) => g.sample(rng).powf(1.0 / p),
            None => rng.random_range(0.0..1.0),
        };
        let s = if rng.random_bool(0.5) { 1.0 } else { -1.0 };
        x[idx[i]] = T::of(s * mag);
    }
    let nrm = lp_norm(&x, p);
    if nrm > T::zero() {
        for v in x.iter_mut() {
            *v = *v / nrm;
        }
    } else {
        x[idx[0]] = T::one();
    }
    x
}

/// `samples` points on the unit sphere of `l_p^m`.
///
/// The first `min(2m, samples / 2)` points are the signed basis vectors
/// `±e_i`. The rest are normalized vectors with generalized-Gaussian
/// coordinates (density `∝ exp(-|x|^p)`) on a random support whose size is
/// `m` with probability 1/2 and uniform on `1..=m` otherwise.
pub fn sample_sphere<T: Scalar>(m: usize, p: f64, cfg: &SampleConfig) -> Vec<Vec<T>> {
    if m == 0 || cfg.samples == 0 {
        return Vec::new();
    }
    let basis = (2 * m).min(cfg.samples / 2);
    let mut out: Vec<Vec<T>> = (0..basis)
        .map(|i| {
            let mut x = vec![T::zero(); m];
            x[i / 2] = if i % 2 == 0 { T::one() } else { -T::one() };
            x
        })
        .collect();
    let rest = cfg.samples - basis;
    let chunk = cfg.chunk.max(1);
    let nchunks = rest.div_ceil(chunk);
    let gamma = (!p.is_infinite()).then(|| Gamma::new(1.0 / p, 1.0).expect("valid shape"));
    let drawn: Vec<Vec<Vec<T>>> = (0..nchunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c as u64);
            let len = chunk.min(rest - c * chunk);
            (0..len).map(|_| draw(&mut rng, gamma.as_ref(), m, p)).collect()
        })
        .collect();
    out.extend(drawn.into_iter().flatten());
    out
}

/// Images `A x` of [`sample_sphere`] points.
pub fn sample_images<T: Scalar>(a: &Matrix<T>, p: f64, cfg: &SampleConfig) -> Vec<Vec<T>> {
    sample_sphere::<T>(a.cols(), p, cfg)
        .into_par_iter()
        .map(|x| a.mul_vec(&x))
        .collect()
}
