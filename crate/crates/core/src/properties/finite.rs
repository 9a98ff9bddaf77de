//! Exact checkers for finite systems with the discrete topology. Singleton
//! opens suffice here, so every property reduces to the cycle structure of
//! the map.

use super::certificate::{Certificate, SmallPeriodicWitness};
use super::verdict::{Method, Verdict};
use super::{Budget, Property};
use crate::metric::ClosedSet;
use crate::scalar::Scalar;
use crate::systems::finite::FiniteDynamics;

/// Least period of every point (`None` off the cycles), in linear time.
pub fn least_periods(sys: &dyn FiniteDynamics) -> Vec<Option<u64>> {
    let n = sys.size();
    // 0 = unvisited, 1 = on the current path, 2 = done
    let mut state = vec![0u8; n];
    let mut period = vec![None; n];
    for start in 0..n {
        if state[start] != 0 {
            continue;
        }
        let mut path = Vec::new();
        let mut x = start;
        while state[x] == 0 {
            state[x] = 1;
            path.push(x);
            x = sys.step(x);
        }
        if state[x] == 1 {
            let pos = path.iter().position(|&p| p == x).expect("on the current path");
            let len = (path.len() - pos) as u64;
            for &p in &path[pos..] {
                period[p] = Some(len);
            }
        }
        for &p in &path {
            state[p] = 2;
        }
    }
    period
}

fn single(n: usize, x: usize) -> ClosedSet {
    ClosedSet::singleton(n, x).expect("point in range")
}

/// The orbit of 0 when the map is one cycle through every point.
fn full_cycle(sys: &dyn FiniteDynamics) -> Option<Vec<usize>> {
    let n = sys.size();
    let mut order = Vec::with_capacity(n);
    let mut x = 0;
    for _ in 0..n {
        order.push(x);
        x = sys.step(x);
    }
    (x == 0 && least_periods(sys)[0] == Some(n as u64)).then_some(order)
}

/// Singletons `{x}, {y}` with `y` never reached from `x`; exists exactly
/// when the map is not a single full cycle.
fn unreachable_pair(sys: &dyn FiniteDynamics, periods: &[Option<u64>]) -> (usize, usize) {
    if let Some(x) = periods.iter().position(Option::is_none) {
        return (x, x);
    }
    // all points periodic: pick a point outside the cycle of 0
    let mut on_cycle = vec![false; sys.size()];
    let mut x = 0;
    loop {
        on_cycle[x] = true;
        x = sys.step(x);
        if x == 0 {
            break;
        }
    }
    (0, on_cycle.iter().position(|&b| !b).expect("more than one cycle"))
}

pub fn transitive<T>(sys: &dyn FiniteDynamics) -> Verdict<T> {
    if let Some(order) = full_cycle(sys) {
        return Verdict::proved(Method::Exhaustive, Certificate::CyclicOrder { order });
    }
    let (x, y) = unreachable_pair(sys, &least_periods(sys));
    let n = sys.size();
    Verdict::refuted(Method::Exhaustive, Certificate::SetsNeverMeet { power: 1, u: single(n, x), v: single(n, y) })
}

pub fn totally_transitive<T>(sys: &dyn FiniteDynamics) -> Verdict<T> {
    let n = sys.size();
    if n == 1 {
        return Verdict::proved(Method::Exhaustive, Certificate::SinglePoint);
    }
    if full_cycle(sys).is_some() {
        // T^n is the identity on n >= 2 points
        return Verdict::refuted(
            Method::Exhaustive,
            Certificate::SetsNeverMeet { power: n as u64, u: single(n, 0), v: single(n, 1) },
        );
    }
    let (x, y) = unreachable_pair(sys, &least_periods(sys));
    Verdict::refuted(Method::Exhaustive, Certificate::SetsNeverMeet { power: 1, u: single(n, x), v: single(n, y) })
}

pub fn weakly_mixing<T>(sys: &dyn FiniteDynamics) -> Verdict<T> {
    let n = sys.size();
    if n == 1 {
        return Verdict::proved(Method::Exhaustive, Certificate::SinglePoint);
    }
    let (u1, v1, u2, v2) = match full_cycle(sys) {
        // 0 -> 0 needs n | steps while 0 -> T(0) needs steps = 1 mod n
        Some(_) => (0, 0, 0, sys.step(0)),
        None => {
            let (x, y) = unreachable_pair(sys, &least_periods(sys));
            (x, y, x, y)
        }
    };
    Verdict::refuted(
        Method::Exhaustive,
        Certificate::ProductNeverMeets { u1: single(n, u1), u2: single(n, u2), v1: single(n, v1), v2: single(n, v2) },
    )
}

pub fn dense_periodic_points<T>(sys: &dyn FiniteDynamics) -> Verdict<T> {
    let periods = least_periods(sys);
    match periods.iter().position(Option::is_none) {
        Some(x) => Verdict::refuted(Method::Exhaustive, Certificate::NoPeriodicPointIn { open: single(sys.size(), x) }),
        None => Verdict::proved(
            Method::Exhaustive,
            Certificate::PeriodicPoints {
                points: periods.iter().enumerate().map(|(x, p)| (x, p.expect("periodic"))).collect(),
            },
        ),
    }
}

/// Above this size a small-periodic-set proof lists least periods instead
/// of one pair of sets per point.
pub const MAX_LISTED_SETS: usize = 1024;

/// For the open `{x}` the only candidate is `Y = {x}`, and the smallest `k`
/// is the least period of `x`.
pub fn dense_small_periodic_sets<T>(sys: &dyn FiniteDynamics, k_max: u64) -> Verdict<T> {
    let n = sys.size();
    let periods = least_periods(sys);
    if let Some(x) = periods.iter().position(Option::is_none) {
        return Verdict::refuted(
            Method::Exhaustive,
            Certificate::NoInvariantSubset { open: single(n, x), k_bound: k_max.max(n as u64) },
        );
    }
    if let Some(x) = periods.iter().position(|p| p.is_some_and(|p| p > k_max)) {
        return Verdict::unknown(Method::Exhaustive, format!("k_max {k_max} is below the period of point {x}"));
    }
    if n > MAX_LISTED_SETS {
        let points = periods.iter().enumerate().map(|(x, p)| (x, p.expect("periodic"))).collect();
        return Verdict::proved(Method::Exhaustive, Certificate::PeriodicPoints { points });
    }
    let sets = periods
        .iter()
        .enumerate()
        .map(|(x, p)| SmallPeriodicWitness { open: single(n, x), y: single(n, x), k: p.expect("periodic") })
        .collect();
    Verdict::proved(Method::Exhaustive, Certificate::SmallPeriodicSets { sets })
}

/// Images of a singleton stay singletons, so only a one-point space is exact.
pub fn topologically_exact<T>(sys: &dyn FiniteDynamics) -> Verdict<T> {
    let n = sys.size();
    if n == 1 {
        return Verdict::proved(Method::Exhaustive, Certificate::ExactCover { opens: vec![(single(1, 0), 1)] });
    }
    Verdict::refuted(Method::Exhaustive, Certificate::NeverCovers { open: single(n, 0) })
}

pub fn check_dynamics<T>(sys: &dyn FiniteDynamics, property: Property, budget: &Budget) -> Verdict<T> {
    match property {
        Property::Transitive => transitive(sys),
        Property::TotallyTransitive => totally_transitive(sys),
        Property::WeaklyMixing => weakly_mixing(sys),
        Property::DensePeriodicPoints => dense_periodic_points(sys),
        Property::DenseSmallPeriodicSets => dense_small_periodic_sets(sys, budget.finite_k_max(sys.size())),
        Property::TopologicallyExact => topologically_exact(sys),
        composite => unreachable!("composite {composite} is split before dispatch"),
    }
}

pub fn check<T: Scalar, D: FiniteDynamics>(sys: &D, property: Property, budget: &Budget) -> Verdict<T> {
    check_dynamics(sys, property, budget)
}
