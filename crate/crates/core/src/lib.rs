//! Exact checkers for chaos properties of dynamical systems and of their
//! hyperspaces of nonempty closed sets.
//!
//! Three decidable families are supported: finite systems (fully
//! enumerable), one-sided vertex shifts of finite type, and rational
//! piecewise-linear interval maps. Every verdict is three-valued and carries
//! a certificate that can be re-checked by direct evaluation.

pub mod metric;
pub mod scalar;
pub mod systems;
pub mod hyperspace;
pub mod properties;
pub mod theorems;
pub mod cli;

pub use scalar::Scalar;

/// Exact rational scalar used by the CLI and every verdict-relevant path.
pub type Rational = num_rational::BigRational;

pub type ExactSpace = metric::FinitePointSpace<Rational>;
pub type ExactFiniteSystem = systems::FiniteSystem<Rational>;
pub type ExactPlSystem = systems::PlSystem<Rational>;

pub type F64Space = metric::FinitePointSpace<f64>;
pub type F64FiniteSystem = systems::FiniteSystem<f64>;
pub type F64PlSystem = systems::PlSystem<f64>;
