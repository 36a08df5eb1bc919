//! Least-squares fits for scaling experiments.

use super::ExperimentError;
use serde::{Deserialize, Serialize};

/// Result of a straight-line fit `y ≈ slope x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Fit {
    pub slope: f64,
    pub intercept: f64,
    /// Coefficient of determination; 1 when `y` is constant.
    pub r2: f64,
}

/// Ordinary least squares on raw `(x, y)` pairs.
pub fn fit_linear(pairs: &[(f64, f64)]) -> Result<Fit, ExperimentError> {
    if pairs.len() < 3 {
        return Err(ExperimentError::TooFewPoints(pairs.len()));
    }
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pairs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pairs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let syy: f64 = pairs.iter().map(|p| (p.1 - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(ExperimentError::Config("all x values coincide".into()));
    }
    let slope = sxy / sxx;
    let r2 = if syy == 0.0 { 1.0 } else { sxy * sxy / (sxx * syy) };
    Ok(Fit {
        slope,
        intercept: my - slope * mx,
        r2,
    })
}

/// Least squares on `(ln n, ln value)`.
pub fn fit_slope(pairs: &[(f64, f64)]) -> Result<Fit, ExperimentError> {
    if pairs.len() < 3 {
        return Err(ExperimentError::TooFewPoints(pairs.len()));
    }
    let mut logs = Vec::with_capacity(pairs.len());
    for &(n, v) in pairs {
        if !(n > 0.0) {
            return Err(ExperimentError::NonPositive(n));
        }
        if !(v > 0.0) {
            return Err(ExperimentError::NonPositive(v));
        }
        logs.push((n.ln(), v.ln()));
    }
    fit_linear(&logs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = (1..=8).map(|n| (n as f64, (n as f64).powf(-0.25))).collect();
        let f = fit_slope(&pts).unwrap();
        assert!((f.slope + 0.25).abs() < 1e-12);
        assert!((f.r2 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_data() {
        let pts: Vec<(f64, f64)> = (1..=5).map(|n| (n as f64, 3.0)).collect();
        let f = fit_slope(&pts).unwrap();
        assert_eq!(f.slope, 0.0);
    }

    #[test]
    fn noisy_power_law() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let pts: Vec<(f64, f64)> = (3..=10)
            .map(|n| {
                let noise = 1.0 + rng.random_range(-0.05..0.05);
                (n as f64, (n as f64).powf(-0.25) * noise)
            })
            .collect();
        let f = fit_slope(&pts).unwrap();
        assert!((f.slope + 0.25).abs() <= 0.05);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(fit_slope(&[(1.0, 1.0), (2.0, 1.0)]), Err(ExperimentError::TooFewPoints(2))));
        assert!(matches!(
            fit_slope(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]),
            Err(ExperimentError::NonPositive(_))
        ));
    }
}
