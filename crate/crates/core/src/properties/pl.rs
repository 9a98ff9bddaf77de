//! Resolution-bounded certification for piecewise-linear interval maps.
//!
//! Checks run over the dyadic cells of a fixed depth with exact interval
//! images. A finite cover cannot refute a topological property of the map,
//! so these checkers only ever return proved-at-resolution or unknown.

use super::certificate::{dyadic_cells, CellPeriodicWitness, Certificate};
use super::verdict::{Method, Verdict};
use super::{Budget, Property};
use crate::scalar::Scalar;
use crate::systems::{Interval, PlSystem};

fn unknown<T>(note: String) -> Verdict<T> {
    Verdict::unknown(Method::BoundedSearch, note)
}

pub fn transitive<T: Scalar>(f: &PlSystem<T>, depth: u32, horizon: u64) -> Verdict<T> {
    let cells = dyadic_cells::<T>(depth);
    let mut table = Vec::with_capacity(cells.len());
    for (i, cell) in cells.iter().enumerate() {
        let mut row = vec![0u64; cells.len()];
        let mut missing = cells.len();
        let mut image = cell.clone();
        for n in 1..=horizon {
            image = match f.iterate_interval(&image, 1) {
                Ok(img) => img,
                Err(e) => return unknown(e.to_string()),
            };
            for (j, target) in cells.iter().enumerate() {
                if row[j] == 0 && image.interiors_meet(target) {
                    row[j] = n;
                    missing -= 1;
                }
            }
            if missing == 0 {
                break;
            }
        }
        if missing > 0 {
            return unknown(format!("cell {i} at depth {depth} misses some cell within {horizon} steps"));
        }
        table.push(row);
    }
    Verdict::proved(Method::BoundedSearch, Certificate::CellHits { depth, table })
}

fn cover_steps<T: Scalar>(f: &PlSystem<T>, depth: u32, horizon: u64) -> Result<Vec<u64>, String> {
    dyadic_cells::<T>(depth)
        .iter()
        .enumerate()
        .map(|(i, cell)| match f.steps_to_cover(cell, horizon as usize) {
            Ok(Some(n)) => Ok(n as u64),
            Ok(None) => Err(format!("cell {i} at depth {depth} does not cover [0, 1] within {horizon} steps")),
            Err(e) => Err(e.to_string()),
        })
        .collect()
}

pub fn topologically_exact<T: Scalar>(f: &PlSystem<T>, depth: u32, horizon: u64) -> Verdict<T> {
    match cover_steps(f, depth, horizon) {
        Ok(steps) => Verdict::proved(Method::BoundedSearch, Certificate::CellCovers { depth, steps }),
        Err(note) => unknown(note),
    }
}

/// Exactness at resolution gives mixing, hence weak mixing and total transitivity.
pub fn via_exactness<T: Scalar>(f: &PlSystem<T>, depth: u32, horizon: u64) -> Verdict<T> {
    match cover_steps(f, depth, horizon) {
        Ok(steps) => Verdict::proved(Method::BoundedSearch, Certificate::ExactSurjective { depth, steps }),
        Err(note) => unknown(format!("no exactness certificate: {note}")),
    }
}

/// An exact periodic point inside the middle half of a cell, as a fixed point
/// of the smallest power `f^n` that has one there.
pub fn periodic_point_in_cell<T: Scalar>(f: &PlSystem<T>, cell: &Interval<T>, horizon: u64) -> Option<(T, u64)> {
    let inner = cell.middle_half();
    (1..=horizon).find_map(|n| f.fixed_point_of_power(&inner, n as usize).ok().flatten().map(|x| (x, n)))
}

pub fn periodic_points<T: Scalar>(f: &PlSystem<T>, depth: u32, horizon: u64) -> Result<Vec<CellPeriodicWitness<T>>, String> {
    dyadic_cells::<T>(depth)
        .iter()
        .enumerate()
        .map(|(i, cell)| {
            periodic_point_in_cell(f, cell, horizon)
                .map(|(x, period)| CellPeriodicWitness { cell: i as u64, x, period })
                .ok_or_else(|| format!("no periodic point of period <= {horizon} found in cell {i} at depth {depth}"))
        })
        .collect()
}

pub fn dense_periodic_points<T: Scalar>(f: &PlSystem<T>, depth: u32, horizon: u64) -> Verdict<T> {
    match periodic_points(f, depth, horizon) {
        Ok(points) => Verdict::proved(Method::BoundedSearch, Certificate::CellPeriodicPoints { depth, points }),
        Err(note) => unknown(note),
    }
}

pub fn check<T: Scalar>(f: &PlSystem<T>, property: Property, budget: &Budget) -> Verdict<T> {
    let (depth, horizon) = (budget.depth, budget.pl_horizon());
    match property {
        Property::Transitive => transitive(f, depth, horizon),
        Property::TotallyTransitive | Property::WeaklyMixing => via_exactness(f, depth, horizon),
        Property::DensePeriodicPoints | Property::DenseSmallPeriodicSets => dense_periodic_points(f, depth, horizon),
        Property::TopologicallyExact => topologically_exact(f, depth, horizon),
        composite => unreachable!("composite {composite} is split before dispatch"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::certificate::{validate_verdict, SystemRef};
    use crate::properties::Status;
    use crate::Rational;

    #[test]
    fn tent_map_is_proved_at_resolution() {
        let tent = PlSystem::<Rational>::tent();
        let budget = Budget::default();
        for p in Property::ATOMIC {
            let v = check(&tent, p, &budget);
            assert!(v.is_proved_at_resolution(), "{p}: {v:?}");
            validate_verdict(&v, p, SystemRef::Pl(&tent)).unwrap();
        }
        let Some(Certificate::CellCovers { steps, .. }) = topologically_exact(&tent, 3, 12).certificate().cloned() else {
            panic!()
        };
        assert!(steps.iter().all(|&n| n == 3));
    }

    #[test]
    fn identity_is_unknown_not_refuted() {
        let id = PlSystem::<Rational>::new(
            vec![Rational::from_integer(0.into()), Rational::from_integer(1.into())],
            vec![Rational::from_integer(0.into()), Rational::from_integer(1.into())],
        )
        .unwrap();
        for p in [Property::Transitive, Property::TopologicallyExact, Property::WeaklyMixing] {
            assert_eq!(check(&id, p, &Budget::default()).status(), Status::Unknown);
        }
        // every point of the identity is fixed
        assert_eq!(check(&id, Property::DensePeriodicPoints, &Budget::default()).status(), Status::Proved);
    }
}
