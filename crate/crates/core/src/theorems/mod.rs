//! Witness constructions behind the hyperspace equivalences, and the harness
//! that evaluates each side of an equivalence on a concrete system.

pub mod harness;
pub mod pipeline;
pub mod witness;

use thiserror::Error;

use crate::hyperspace::HyperError;
use crate::metric::MetricError;
use crate::systems::SystemError;

pub use harness::{
    check_corollary, check_lemma_exact, check_lemma_wm, check_theorem_main, validate_evaluation, validate_report,
    Agreement, Condition, EquivalenceReport, Evaluation, Hypothesis, Target,
};
pub use pipeline::{combine_witnesses, find_periodic_point_in_cylinder, periodic_kernel, union_closure, CombineMode};
pub use witness::{FamilyWitness, PeriodicSetWitness, PlPoints, SetDynamics};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error("precondition violated: {0}")]
    Invalid(String),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    System(#[from] SystemError),
    #[error(transparent)]
    Hyper(#[from] HyperError),
}
