//! Entropy numbers `e_k(A)`: the smallest `ε` such that `A(B_p)` is covered
//! by `2^{k-1}` balls of radius `ε` in `l_q`.
//!
//! Estimators return an [`EntropyEstimate`] tagged with how far it can be
//! trusted: certified lower bounds (packings, volume comparison), certified
//! upper bounds (explicit nets) and heuristics (coverings restricted to a
//! sample).

mod certificate;
mod combine;
mod estimators;
mod kuhn;
mod sampling;
mod schuett;

pub use certificate::{
    budget_constant, entropy_certificate, Certificate, CertificateConfig, LayerBudget,
};
pub use combine::{combine_scale, combine_sum, lifshits_combine, Bound, BoundExpr};
pub use estimators::{
    farthest_point_profile, greedy_cover_estimate, lattice_cover_estimate, net_upper,
    packing_lower, packing_profile, volumetric_lower, PackingProfile,
};
pub use kuhn::{kuhn_value, validate_phi, Phi, PhiCheck};
pub use sampling::{sample_images, sample_sphere, SampleConfig};
pub use schuett::{schuett, schuett_raw};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest `k` accepted by the sampled estimators.
pub const MAX_SAMPLED_K: u32 = 24;

/// Errors raised by the entropy routines.
#[derive(Debug, Error, PartialEq)]
pub enum EntropyError {
    #[error("index k must be at least 1")]
    ZeroIndex,
    #[error("k = {0} exceeds the sampled-estimator cap {MAX_SAMPLED_K}")]
    IndexTooLarge(u32),
    #[error("p = {p} > q = {q}")]
    PGreaterThanQ { p: f64, q: f64 },
    #[error("invalid exponent: {0}")]
    BadExponent(String),
    #[error("domain dimension {dim} exceeds the net gate {gate}")]
    DimensionGate { dim: usize, gate: usize },
    #[error("net resolution eta = {0} must lie in (0, 1)")]
    BadEta(f64),
    #[error("net would need more than {0} points")]
    NetTooLarge(usize),
    #[error("square operator required: {rows} x {cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("cannot combine a certified lower bound as an upper bound")]
    LowerInUpperRule,
    #[error("family size must be at least 1")]
    EmptyFamily,
    #[error("phi check failed: {0}")]
    Phi(String),
    #[error("p = q makes the exponent 1/p - 1/q vanish")]
    DegenerateExponent,
    #[error("certificate: {0}")]
    Certificate(String),
    #[error(transparent)]
    Summation(#[from] crate::summation::SummationError),
    #[error(transparent)]
    Hset(#[from] crate::hset::HsetError),
    #[error(transparent)]
    Tree(#[from] crate::tree::TreeError),
}

/// Trust level of an estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundKind {
    CertifiedLower,
    CertifiedUpper,
    Heuristic,
}

impl BoundKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            BoundKind::CertifiedLower => "certified_lower",
            BoundKind::CertifiedUpper => "certified_upper",
            BoundKind::Heuristic => "heuristic",
        }
    }
}

/// Value for `e_k` with its trust level and method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyEstimate<T> {
    pub k: u32,
    pub value: T,
    pub kind: BoundKind,
    pub method: String,
    pub seed: Option<u64>,
}

pub(crate) fn check_pq(p: f64, q: f64) -> Result<(), EntropyError> {
    if !(p >= 1.0) || p.is_nan() {
        return Err(EntropyError::BadExponent(format!("p = {p}")));
    }
    if !(q >= 1.0) || q.is_nan() {
        return Err(EntropyError::BadExponent(format!("q = {q}")));
    }
    Ok(())
}

pub(crate) fn check_k(k: u32) -> Result<(), EntropyError> {
    if k == 0 {
        Err(EntropyError::ZeroIndex)
    } else if k > MAX_SAMPLED_K {
        Err(EntropyError::IndexTooLarge(k))
    } else {
        Ok(())
    }
}
