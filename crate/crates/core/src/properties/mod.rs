//! Witness-carrying checkers for the chaos properties and their composites.

pub mod certificate;
pub mod finite;
pub mod oracle;
pub mod pl;
pub mod shift;
pub mod verdict;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;
use crate::systems::{FiniteSystem, PlSystem, ShiftSystem};
use certificate::{Certificate, NamedCertificate, SystemRef};
pub use oracle::brute_force_oracle;
pub use verdict::{Method, Outcome, Status, Verdict};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Property {
    Transitive,
    TotallyTransitive,
    WeaklyMixing,
    DensePeriodicPoints,
    DenseSmallPeriodicSets,
    TopologicallyExact,
    /// transitive with dense periodic points
    Devaney,
    /// totally transitive with dense periodic points
    FSystem,
    /// totally transitive with dense small periodic sets
    HySystem,
    /// topologically exact with dense periodic points
    ExactDevaney,
    /// topologically exact, totally transitive, dense small periodic sets
    ExactHySystem,
}

impl Property {
    pub const ATOMIC: [Property; 6] = [
        Property::Transitive,
        Property::TotallyTransitive,
        Property::WeaklyMixing,
        Property::DensePeriodicPoints,
        Property::DenseSmallPeriodicSets,
        Property::TopologicallyExact,
    ];

    pub const ALL: [Property; 11] = [
        Property::Transitive,
        Property::TotallyTransitive,
        Property::WeaklyMixing,
        Property::DensePeriodicPoints,
        Property::DenseSmallPeriodicSets,
        Property::TopologicallyExact,
        Property::Devaney,
        Property::FSystem,
        Property::HySystem,
        Property::ExactDevaney,
        Property::ExactHySystem,
    ];

    pub fn is_atomic(self) -> bool {
        Self::ATOMIC.contains(&self)
    }

    /// The atomic properties whose conjunction this is (itself when atomic).
    pub fn conjuncts(self) -> Vec<Property> {
        use Property::*;
        match self {
            Devaney => vec![Transitive, DensePeriodicPoints],
            FSystem => vec![TotallyTransitive, DensePeriodicPoints],
            HySystem => vec![TotallyTransitive, DenseSmallPeriodicSets],
            ExactDevaney => vec![TopologicallyExact, DensePeriodicPoints],
            ExactHySystem => vec![TopologicallyExact, TotallyTransitive, DenseSmallPeriodicSets],
            atomic => vec![atomic],
        }
    }

    pub fn id(self) -> &'static str {
        use Property::*;
        match self {
            Transitive => "transitive",
            TotallyTransitive => "totally-transitive",
            WeaklyMixing => "weakly-mixing",
            DensePeriodicPoints => "dense-periodic-points",
            DenseSmallPeriodicSets => "dense-small-periodic-sets",
            TopologicallyExact => "topologically-exact",
            Devaney => "devaney",
            FSystem => "f-system",
            HySystem => "hy-system",
            ExactDevaney => "exact-devaney",
            ExactHySystem => "exact-hy-system",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Property {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Property::ALL.into_iter().find(|p| p.id() == s).ok_or_else(|| format!("unknown property {s:?}"))
    }
}

/// Search budgets. `None` fields take family-specific defaults.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Budget {
    /// Cylinder level for shift hyperspace checks.
    pub level: usize,
    /// Step horizon for bounded searches.
    pub horizon: Option<u64>,
    /// Largest `k` tried for small periodic sets.
    pub k_max: Option<u64>,
    /// Largest power tried for total transitivity where it is searched.
    pub n_max: Option<u64>,
    /// Largest finite base whose powerset is enumerated.
    pub cap: usize,
    /// Dyadic depth of the interval-map cover.
    pub depth: u32,
}

impl Default for Budget {
    fn default() -> Self {
        Budget { level: 3, horizon: None, k_max: None, n_max: None, cap: crate::hyperspace::DEFAULT_CAP, depth: 3 }
    }
}

pub const DEFAULT_PL_HORIZON: u64 = 12;

impl Budget {
    /// `2 (m^ℓ)^2 + ℓ` for an alphabet of `m` symbols at level `ℓ`.
    pub fn shift_horizon(&self, m: usize, level: usize) -> u64 {
        self.horizon.unwrap_or_else(|| {
            let w = (m as u64).saturating_pow(level as u32);
            2 * w.saturating_mul(w) + level as u64
        })
    }

    pub fn pl_horizon(&self) -> u64 {
        self.horizon.unwrap_or(DEFAULT_PL_HORIZON)
    }

    pub fn finite_k_max(&self, n: usize) -> u64 {
        self.k_max.unwrap_or(n as u64)
    }

    pub fn finite_horizon(&self, n: usize) -> u64 {
        self.horizon.unwrap_or(n as u64)
    }

    /// `ℓ m^ℓ` for an alphabet of `m` symbols.
    pub fn shift_k_max(&self, m: usize, level: usize) -> u64 {
        self.k_max.unwrap_or_else(|| level as u64 * (m as u64).saturating_pow(level as u32))
    }
}

/// Any of the three supported families.
#[derive(Debug, Clone, PartialEq)]
pub enum System<T> {
    Finite(FiniteSystem<T>),
    Shift(ShiftSystem),
    Pl(PlSystem<T>),
}

impl<T: Scalar> System<T> {
    pub fn as_ref(&self) -> SystemRef<'_, T> {
        match self {
            System::Finite(f) => SystemRef::Finite(f),
            System::Shift(s) => SystemRef::Shift(s),
            System::Pl(p) => SystemRef::Pl(p),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            System::Finite(_) => "finite",
            System::Shift(_) => "shift",
            System::Pl(_) => "pl",
        }
    }
}

/// Runs the checker for one property (atomic or composite).
pub fn check<T: Scalar>(sys: &System<T>, property: Property, budget: &Budget) -> Verdict<T> {
    if !property.is_atomic() {
        let parts = property.conjuncts().into_iter().map(|p| (p, check(sys, p, budget))).collect();
        return conjunction(parts);
    }
    match sys {
        System::Finite(f) => finite::check(f, property, budget),
        System::Shift(s) => shift::check(s, property, budget),
        System::Pl(p) => pl::check(p, property, budget),
    }
}

pub fn is_transitive<T: Scalar>(sys: &System<T>, budget: &Budget) -> Verdict<T> {
    check(sys, Property::Transitive, budget)
}

pub fn is_totally_transitive<T: Scalar>(sys: &System<T>, budget: &Budget) -> Verdict<T> {
    check(sys, Property::TotallyTransitive, budget)
}

pub fn is_weakly_mixing<T: Scalar>(sys: &System<T>, budget: &Budget) -> Verdict<T> {
    check(sys, Property::WeaklyMixing, budget)
}

pub fn has_dense_periodic_points<T: Scalar>(sys: &System<T>, budget: &Budget) -> Verdict<T> {
    check(sys, Property::DensePeriodicPoints, budget)
}

pub fn has_dense_small_periodic_sets<T: Scalar>(sys: &System<T>, budget: &Budget) -> Verdict<T> {
    check(sys, Property::DenseSmallPeriodicSets, budget)
}

pub fn is_topologically_exact<T: Scalar>(sys: &System<T>, budget: &Budget) -> Verdict<T> {
    check(sys, Property::TopologicallyExact, budget)
}

/// Three-valued conjunction of named parts: the first refuted part wins,
/// otherwise any unknown part makes the whole unknown.
pub fn conjunction<T: Scalar>(parts: Vec<(Property, Verdict<T>)>) -> Verdict<T> {
    if let Some((property, v)) = parts.iter().find(|(_, v)| v.status() == Status::Refuted) {
        let certificate = v.certificate().expect("refuted verdicts carry a certificate").clone();
        let part = Box::new(NamedCertificate { property: *property, certificate });
        return Verdict::refuted(v.method, Certificate::Because { part });
    }
    let method = weakest_method(parts.iter().map(|(_, v)| v.method));
    let notes: Vec<String> = parts
        .iter()
        .filter_map(|(p, v)| v.note().map(|n| format!("{p}: {n}")))
        .collect();
    if !notes.is_empty() {
        return Verdict::unknown(method, notes.join("; "));
    }
    let parts = parts
        .into_iter()
        .map(|(property, v)| NamedCertificate {
            property,
            certificate: v.certificate().expect("proved verdicts carry a certificate").clone(),
        })
        .collect();
    Verdict::proved(method, Certificate::AllOf { parts })
}

/// Bounded search is weaker than a graph reduction, which is weaker than exhaustion.
pub fn weakest_method(methods: impl IntoIterator<Item = Method>) -> Method {
    let mut out = Method::Exhaustive;
    for m in methods {
        out = match (out, m) {
            (_, Method::BoundedSearch) | (Method::BoundedSearch, _) => Method::BoundedSearch,
            (_, Method::GraphReduction) | (Method::GraphReduction, _) => Method::GraphReduction,
            _ => Method::Exhaustive,
        };
    }
    out
}

/// Atomic and composite verdicts for one system.
#[derive(Debug, Clone, PartialEq)]
pub struct Classification<T> {
    pub verdicts: Vec<(Property, Verdict<T>)>,
}

impl<T: Scalar> Classification<T> {
    pub fn get(&self, property: Property) -> Option<&Verdict<T>> {
        self.verdicts.iter().find(|(p, _)| *p == property).map(|(_, v)| v)
    }

    pub fn status(&self, property: Property) -> Option<Status> {
        self.get(property).map(Verdict::status)
    }
}

/// Every atomic checker, then Devaney, F-system and HY-system composed from
/// them with three-valued conjunction.
pub fn classify<T: Scalar>(sys: &System<T>, budget: &Budget) -> Classification<T> {
    let mut verdicts: Vec<(Property, Verdict<T>)> =
        Property::ATOMIC.iter().map(|&p| (p, check(sys, p, budget))).collect();
    for composite in [Property::Devaney, Property::FSystem, Property::HySystem] {
        let parts = composite
            .conjuncts()
            .into_iter()
            .map(|p| {
                let v = verdicts.iter().find(|(q, _)| *q == p).expect("atomic computed").1.clone();
                (p, v)
            })
            .collect();
        verdicts.push((composite, conjunction(parts)));
    }
    Classification { verdicts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    #[test]
    fn property_ids_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.id().parse::<Property>().unwrap(), p);
            assert_eq!(serde_json::to_string(&p).unwrap(), format!("\"{}\"", p.id()));
        }
    }

    #[test]
    fn conjunction_prefers_refutation() {
        let proved: Verdict<Rational> = Verdict::proved(Method::Exhaustive, Certificate::SinglePoint);
        let unknown: Verdict<Rational> = Verdict::unknown(Method::BoundedSearch, "budget");
        let refuted: Verdict<Rational> =
            Verdict::refuted(Method::Exhaustive, Certificate::WordOffCycle { word: vec![0] });
        let p = Property::Transitive;
        assert_eq!(conjunction(vec![(p, proved.clone()), (p, unknown.clone())]).status(), Status::Unknown);
        assert_eq!(conjunction(vec![(p, unknown), (p, refuted)]).status(), Status::Refuted);
        assert_eq!(conjunction(vec![(p, proved.clone()), (p, proved)]).status(), Status::Proved);
    }
}
