//! The witness transformers: invariant families to invariant sets, invariant
//! sets to periodic kernels, and periodic pieces to one periodic set.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use super::witness::{FamilyWitness, PeriodicSetWitness, SetDynamics};
use super::TheoremError;
use crate::hyperspace::HyperSystem;
use crate::metric::ClosedSet;
use crate::properties::certificate::SmallPeriodicWitness;
use crate::scalar::Scalar;
use crate::systems::finite::{image_under, power_table, FiniteDynamics};
use crate::systems::{PeriodicPoint, ShiftSystem};

/// How the exponents of the parts are combined.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CombineMode {
    /// `k = k_1 * ... * k_n`.
    #[default]
    Product,
    /// `k = lcm(k_1, ..., k_n)`.
    Lcm,
}

/// `Y = ∪𝒜` for a family of states of the hyperspace that `(T_K)^k` maps into
/// itself, each member inside `open`. Returns `(open, Y, k)` after re-checking
/// `Y ⊆ U` and `T^k Y ⊆ Y`.
pub fn union_closure<T: Scalar>(
    family: &FamilyWitness,
    open: &ClosedSet,
    hyper: &HyperSystem<T>,
) -> Result<SmallPeriodicWitness, TheoremError> {
    let base = hyper.base();
    if family.family.is_empty() {
        return Err(TheoremError::Invalid("empty family".into()));
    }
    if family.k == 0 {
        return Err(TheoremError::Invalid("k must be positive".into()));
    }
    let table = power_table(base, family.k);
    let mut y: Option<ClosedSet> = None;
    for a in &family.family {
        if !a.is_subset(open) {
            return Err(TheoremError::Invalid(format!("{a:?} is not inside the open {open:?}")));
        }
        let image = image_under(&table, a);
        if !family.family.contains(&image) {
            return Err(TheoremError::Invalid(format!("T^{} of {a:?} leaves the family", family.k)));
        }
        y = Some(match y {
            None => a.clone(),
            Some(acc) => acc.union(a)?,
        });
    }
    let y = y.expect("nonempty family");
    if !image_under(&table, &y).is_subset(&y) {
        return Err(TheoremError::Invalid("T^k Y is not inside Y".into()));
    }
    Ok(SmallPeriodicWitness { open: open.clone(), y, k: family.k })
}

/// The eventual image `∩_m T^{km} Y` of a set with `T^k Y ⊆ Y`, which `T^k`
/// maps onto itself.
pub fn periodic_kernel(y: &ClosedSet, k: u64, sys: &dyn FiniteDynamics) -> Result<ClosedSet, TheoremError> {
    if k == 0 {
        return Err(TheoremError::Invalid("k must be positive".into()));
    }
    if y.universe() != sys.size() {
        return Err(TheoremError::Invalid("set over the wrong space".into()));
    }
    let table = power_table(sys, k);
    let mut z = y.clone();
    let first = image_under(&table, &z);
    if !first.is_subset(&z) {
        return Err(TheoremError::Invalid(format!("T^{k} Y is not inside Y")));
    }
    // the images form a decreasing chain, so it stabilizes within |Y| steps
    loop {
        let next = image_under(&table, &z);
        if next == z {
            return Ok(z);
        }
        z = next;
    }
}

/// Unions the parts and combines their exponents, then re-checks
/// `(T_K)^k Z = Z` on the result.
pub fn combine_witnesses<D: SetDynamics>(
    dynamics: &D,
    parts: &[PeriodicSetWitness<D::Set>],
    mode: CombineMode,
) -> Result<PeriodicSetWitness<D::Set>, TheoremError> {
    let (first, rest) = parts.split_first().ok_or_else(|| TheoremError::Invalid("no parts".into()))?;
    for part in parts {
        super::witness::check_periodic_set(dynamics, part)?;
    }
    let mut z = first.z.clone();
    let mut k = first.k.clone();
    for part in rest {
        z = dynamics.union(&z, &part.z)?;
        k = match mode {
            CombineMode::Product => k * &part.k,
            CombineMode::Lcm => k.lcm(&part.k),
        };
    }
    let combined = PeriodicSetWitness { z, k };
    super::witness::check_periodic_set(dynamics, &combined)?;
    Ok(combined)
}

/// The point `(u r)^∞` where `r` is the interior of a shortest path from the
/// last symbol of `u` back to its first; returns the point and its least period.
pub fn find_periodic_point_in_cylinder(sft: &ShiftSystem, u: &[usize]) -> Result<(PeriodicPoint, u64), TheoremError> {
    let w = sft.cycle_word_through(u)?;
    let point = PeriodicPoint::new(sft, &w)?;
    let period = point.least_period() as u64;
    Ok((point, period))
}

/// `k` of a combined witness in product mode, for callers that only need the number.
pub fn product_of(ks: impl IntoIterator<Item = u64>) -> BigUint {
    ks.into_iter().fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}
