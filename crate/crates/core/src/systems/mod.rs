//! The concrete system families every checker runs on.

pub mod finite;
pub mod graph;
pub mod pl;
pub mod shift;

use thiserror::Error;

use crate::metric::MetricError;

pub use finite::{FiniteDynamics, FiniteSystem};
pub use pl::{Interval, IntervalUnion, PlSystem};
pub use shift::{PeriodicPoint, ShiftSystem, Word};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SystemError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("map table has no entry for point {point}")]
    MissingEntry { point: usize },
    #[error("map table has {found} entries for {expected} points")]
    TableTooLong { expected: usize, found: usize },
    #[error("point {point} maps to {target}, outside a space of {size} points")]
    OutOfRange { point: usize, target: usize, size: usize },
    #[error("transition matrix must be square over the alphabet ({0})")]
    NotSquare(String),
    #[error("transition entries must be 0 or 1, found {0:?}")]
    NotBoolean(String),
    #[error("shift space is empty after trimming")]
    EmptyShift,
    #[error("word length must be positive")]
    ZeroLength,
    #[error("words must have equal length ({0} vs {1})")]
    UnequalLengths(usize, usize),
    #[error("word {0} is not allowed")]
    DisallowedWord(String),
    #[error("unknown symbol {0:?}")]
    UnknownSymbol(String),
    #[error("no cycle passes through word {0}")]
    NoReturnPath(String),
    #[error("piecewise-linear map: {0}")]
    Pl(String),
    #[error("interval [{0}, {1}] is not inside [0, 1]")]
    OutsideDomain(String, String),
}
