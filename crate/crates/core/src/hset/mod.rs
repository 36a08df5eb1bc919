//! h-set branching profiles, profile-driven tree generation, the multiscale
//! schedule and parameter validation for the critical regimes.

mod generator;
mod profile;
mod schedule;
mod validate;

pub use generator::{census_constant, generate_hset_tree, GeneratedTree, ProfileMeta};
pub use profile::{h_eval, slowly_varying_check, HProfile, SlowVariation, Tau, VariationGrid};
pub use schedule::{schedule, PsiStar, Schedule};
pub use validate::{
    validate_critical, ConditionCheck, CriticalParams, CriticalReport, PackKind, PackWeights,
};

use thiserror::Error;

/// Errors raised by the h-set routines.
#[derive(Debug, Error, PartialEq)]
pub enum HsetError {
    #[error("invalid profile: {0}")]
    Profile(String),
    #[error("h is defined on (0, 1], got t = {0}")]
    OutOfDomain(f64),
    #[error("profile shrinks between depths {depth} and {next}: {from} -> {to} vertices")]
    Infeasible {
        depth: usize,
        next: usize,
        from: usize,
        to: usize,
    },
    #[error("census constant {found:.4} exceeds c3 = {c3}")]
    Census { found: f64, c3: f64 },
    #[error("invalid schedule input: {0}")]
    Schedule(String),
    #[error(transparent)]
    Tree(#[from] crate::tree::TreeError),
}
