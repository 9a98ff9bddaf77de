//! The induced dynamics on nonempty closed sets: the full powerset system of
//! a finite system, and cylinder-level Vietoris verification for shifts.

pub mod powerset;
pub mod vietoris;

use thiserror::Error;

use crate::metric::MetricError;
use crate::systems::SystemError;

pub use powerset::{induced_image, powerset_hyperspace, HyperSystem, DEFAULT_CAP};
pub use vietoris::{
    cylinder_reach, vietoris_periodic_dense_bounded, vietoris_totally_transitive_bounded, vietoris_transitive_bounded,
    vietoris_weakly_mixing_bounded, BlockGraph, CylinderProfile, Relations,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HyperError {
    #[error("{points} points exceed the powerset cap of {cap}; use bounded shift-level verification instead")]
    CapExceeded { points: usize, cap: usize },
    #[error("{words} cylinders at level {level} exceed the supported maximum of {max}")]
    TooManyCylinders { level: usize, words: usize, max: usize },
    #[error("level and horizon must be positive")]
    ZeroBudget,
    #[error("witness construction failed: {0}")]
    Witness(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    System(#[from] SystemError),
}
