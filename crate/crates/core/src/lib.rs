//! Entropy numbers of weighted summation operators on trees.
//!
//! The operator `S_{u,w} f(ξ) = w(ξ) Σ_{ξ' ≤ ξ} u(ξ') f(ξ')` sums a function
//! along the root path of every vertex. This crate provides:
//!
//! * rooted trees, scale layerings and balanced subtree partitions
//!   ([`tree`], [`partition`]);
//! * the operator, its adjoint, norm estimates and Hardy-type bounds
//!   ([`summation`]);
//! * h-set profiles, profile-driven tree generation, the scale schedule and
//!   critical-pack validation ([`hset`]);
//! * entropy-number estimators, closed-form reference values, combination
//!   rules and layer-by-layer upper-bound certificates ([`entropy`]);
//! * reproducible numerical experiments ([`experiments`]).
//!
//! Numerical code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! below fix the scalar to `f64` or `f32`.

#![forbid(unsafe_code)]
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod entropy;
pub mod experiments;
pub mod hset;
pub mod linalg;
pub mod partition;
pub mod scalar;
pub mod summation;
pub mod tree;

pub use scalar::Scalar;

use thiserror::Error;

/// Any error raised by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Tree(#[from] tree::TreeError),
    #[error(transparent)]
    Partition(#[from] partition::PartitionError),
    #[error(transparent)]
    Summation(#[from] summation::SummationError),
    #[error(transparent)]
    Hset(#[from] hset::HsetError),
    #[error(transparent)]
    Entropy(#[from] entropy::EntropyError),
    #[error(transparent)]
    Experiment(#[from] experiments::ExperimentError),
}

pub type Result<T> = std::result::Result<T, Error>;

pub type Matrix64 = linalg::Matrix<f64>;
pub type Matrix32 = linalg::Matrix<f32>;
pub type NormEstimate64 = summation::NormEstimate<f64>;
pub type NormEstimate32 = summation::NormEstimate<f32>;
pub type EntropyEstimate64 = entropy::EntropyEstimate<f64>;
pub type EntropyEstimate32 = entropy::EntropyEstimate<f32>;
pub type Bound64 = entropy::Bound<f64>;
pub type BoundExpr64 = entropy::BoundExpr<f64>;
pub type PackingProfile64 = entropy::PackingProfile<f64>;
