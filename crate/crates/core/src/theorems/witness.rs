//! Proof objects shared by the checkers and the equivalence harness, and the
//! per-family set arithmetic needed to re-check them.

use std::fmt::Debug;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::TheoremError;
use crate::metric::ClosedSet;
use crate::scalar::{as_string_vec, big_as_string, Scalar};
use crate::systems::finite::{power_table_big, FiniteDynamics};
use crate::systems::{PeriodicPoint, PlSystem, ShiftSystem};

/// A closed set `Z` with `(T_K)^k Z = Z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicSetWitness<S> {
    pub z: S,
    #[serde(with = "big_as_string")]
    pub k: BigUint,
}

/// A finite family of hyperspace states mapped into itself by `(T_K)^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FamilyWitness {
    pub family: Vec<ClosedSet>,
    pub k: u64,
}

/// Finite sets of exact periodic points of an interval map, sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar", transparent)]
pub struct PlPoints<T>(#[serde(with = "as_string_vec")] pub Vec<T>);

impl<T: Scalar> PlPoints<T> {
    pub fn new(mut points: Vec<T>) -> Self {
        points.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
        points.dedup();
        PlPoints(points)
    }
}

/// Closed-set arithmetic for one system family: what `combine_witnesses`
/// and the validators need to evaluate `(T_K)^k Z` directly.
pub trait SetDynamics {
    type Set: Clone + PartialEq + Debug;

    fn union(&self, a: &Self::Set, b: &Self::Set) -> Result<Self::Set, TheoremError>;
    fn image_power(&self, set: &Self::Set, k: &BigUint) -> Result<Self::Set, TheoremError>;
    fn is_valid_set(&self, set: &Self::Set) -> Result<(), TheoremError>;
}

pub struct FiniteSets<'a>(pub &'a dyn FiniteDynamics);

impl SetDynamics for FiniteSets<'_> {
    type Set = ClosedSet;

    fn union(&self, a: &ClosedSet, b: &ClosedSet) -> Result<ClosedSet, TheoremError> {
        Ok(a.union(b)?)
    }

    fn image_power(&self, set: &ClosedSet, k: &BigUint) -> Result<ClosedSet, TheoremError> {
        let table = power_table_big(self.0, k);
        Ok(ClosedSet::new(set.universe(), set.iter().map(|x| table[x]))?)
    }

    fn is_valid_set(&self, set: &ClosedSet) -> Result<(), TheoremError> {
        if set.universe() != self.0.size() {
            return Err(TheoremError::Invalid(format!(
                "set over {} points in a system of {}",
                set.universe(),
                self.0.size()
            )));
        }
        Ok(())
    }
}

pub struct ShiftSets<'a>(pub &'a ShiftSystem);

fn canonical_points(mut points: Vec<PeriodicPoint>) -> Vec<PeriodicPoint> {
    points.sort();
    points.dedup();
    points
}

impl SetDynamics for ShiftSets<'_> {
    type Set = Vec<PeriodicPoint>;

    fn union(&self, a: &Self::Set, b: &Self::Set) -> Result<Self::Set, TheoremError> {
        Ok(canonical_points(a.iter().chain(b).cloned().collect()))
    }

    fn image_power(&self, set: &Self::Set, k: &BigUint) -> Result<Self::Set, TheoremError> {
        Ok(canonical_points(set.iter().map(|p| p.shifted(k)).collect()))
    }

    fn is_valid_set(&self, set: &Self::Set) -> Result<(), TheoremError> {
        if set.is_empty() {
            return Err(TheoremError::Invalid("empty point set".into()));
        }
        for p in set {
            p.validate(self.0)?;
        }
        if canonical_points(set.clone()) != *set {
            return Err(TheoremError::Invalid("point set not sorted and distinct".into()));
        }
        Ok(())
    }
}

/// Interval-map sets; `return_cap` bounds the search for each point's return time.
pub struct PlSets<'a, T> {
    pub map: &'a PlSystem<T>,
    pub return_cap: usize,
}

impl<T: Scalar> PlSets<'_, T> {
    fn return_time(&self, x: &T) -> Result<usize, TheoremError> {
        let mut y = x.clone();
        for r in 1..=self.return_cap {
            y = self.map.eval(&y);
            if y == *x {
                return Ok(r);
            }
        }
        Err(TheoremError::Invalid(format!("{x} does not return within {} steps", self.return_cap)))
    }
}

impl<T: Scalar> SetDynamics for PlSets<'_, T> {
    type Set = PlPoints<T>;

    fn union(&self, a: &Self::Set, b: &Self::Set) -> Result<Self::Set, TheoremError> {
        Ok(PlPoints::new(a.0.iter().chain(&b.0).cloned().collect()))
    }

    fn image_power(&self, set: &Self::Set, k: &BigUint) -> Result<Self::Set, TheoremError> {
        let mut out = Vec::with_capacity(set.0.len());
        for x in &set.0 {
            let r = self.return_time(x)?;
            let steps = (k % BigUint::from(r)).to_usize().expect("small remainder");
            out.push(self.map.eval_iter(x, steps));
        }
        Ok(PlPoints::new(out))
    }

    fn is_valid_set(&self, set: &Self::Set) -> Result<(), TheoremError> {
        if set.0.is_empty() {
            return Err(TheoremError::Invalid("empty point set".into()));
        }
        if set.0.iter().any(|x| x.is_negative_value() || *x > T::one()) {
            return Err(TheoremError::Invalid("point outside [0, 1]".into()));
        }
        if PlPoints::new(set.0.clone()) != *set {
            return Err(TheoremError::Invalid("point set not sorted and distinct".into()));
        }
        Ok(())
    }
}

/// Re-evaluates `(T_K)^k Z = Z`.
pub fn check_periodic_set<D: SetDynamics>(
    dynamics: &D,
    witness: &PeriodicSetWitness<D::Set>,
) -> Result<(), TheoremError> {
    if witness.k.is_zero() {
        return Err(TheoremError::Invalid("k must be positive".into()));
    }
    dynamics.is_valid_set(&witness.z)?;
    let image = dynamics.image_power(&witness.z, &witness.k)?;
    if image != witness.z {
        return Err(TheoremError::Invalid(format!("T_K^{} Z != Z", witness.k)));
    }
    Ok(())
}
