//! Certificates attached to verdicts and their independent re-validation.
//!
//! Validation never calls the checker that produced a certificate: it
//! re-evaluates maps, images, orbits and reach relations directly.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::verdict::{Outcome, Verdict};
use super::Property;
use crate::hyperspace::cylinder_reach;
use crate::metric::{vietoris_membership, ClosedSet};
use crate::scalar::{as_string, Scalar};
use crate::systems::finite::{image_under, orbit_hits, power_table, FiniteDynamics};
use crate::systems::graph::bool_product;
use crate::systems::{Interval, PeriodicPoint, PlSystem, ShiftSystem, Word};
use crate::theorems::witness::{
    check_periodic_set, PeriodicSetWitness, PlPoints, PlSets, ShiftSets,
};

/// Closed invariant piece `Y ⊆ U` with `T^k Y ⊆ Y`, for one open `U`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SmallPeriodicWitness {
    pub open: ClosedSet,
    pub y: ClosedSet,
    pub k: u64,
}

/// `Y = {p}` for a periodic point `p` in the cylinder, with `T^k p = p`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CylinderPeriodicWitness {
    pub cylinder: Word,
    pub point: PeriodicPoint,
    pub k: u64,
}

/// An exact periodic point strictly inside dyadic cell `cell`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CellPeriodicWitness<T> {
    pub cell: u64,
    #[serde(with = "as_string")]
    pub x: T,
    pub period: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct NamedCertificate<T> {
    pub property: Property,
    pub certificate: Certificate<T>,
}

/// Opens given as cylinder words, with the periodic set constructed for them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CylinderOpenWitness {
    pub open: Vec<Word>,
    pub witness: PeriodicSetWitness<Vec<PeriodicPoint>>,
}

/// Opens given as dyadic cell indices, with the periodic set constructed for them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct CellOpenWitness<T> {
    pub open: Vec<u64>,
    pub witness: PeriodicSetWitness<PlPoints<T>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", bound = "T: Scalar")]
pub enum Certificate<T> {
    // finite systems
    SinglePoint,
    CyclicOrder { order: Vec<usize> },
    SetsNeverMeet { power: u64, u: ClosedSet, v: ClosedSet },
    HitTable { power: u64, rows: Vec<(ClosedSet, ClosedSet, u64)> },
    PowerHitTables { tables: Vec<(u64, Vec<(ClosedSet, ClosedSet, u64)>)> },
    ProductNeverMeets { u1: ClosedSet, u2: ClosedSet, v1: ClosedSet, v2: ClosedSet },
    RectangleHitTable { rows: Vec<([ClosedSet; 4], u64)> },
    PeriodicPoints { points: Vec<(usize, u64)> },
    PeriodicInOpens { rows: Vec<(ClosedSet, usize, u64)> },
    NoPeriodicPointIn { open: ClosedSet },
    SmallPeriodicSets { sets: Vec<SmallPeriodicWitness> },
    NoInvariantSubset { open: ClosedSet, k_bound: u64 },
    ExactCover { opens: Vec<(ClosedSet, u64)> },
    NeverCovers { open: ClosedSet },

    // shift spaces
    CoveringWalk { walk: Word },
    SymbolUnreachable { from: usize, to: usize },
    AperiodicCover { walk: Word, cycles: Vec<Word> },
    CyclicClasses { period: u64, from: usize, to: usize },
    PositivePower { exponent: u64 },
    ProductUnreachable { from: (usize, usize), to: (usize, usize) },
    CylinderCycles { entries: Vec<(Word, PeriodicPoint)> },
    WordOffCycle { word: Word },
    CylinderSmallPeriodic { entries: Vec<CylinderPeriodicWitness> },
    ExactSteps { steps: Vec<(usize, u64)> },
    ReachSetsCycle { symbol: usize },

    // hyperspaces of shift spaces, over level-`level` cylinder opens
    VietorisPairTable { level: usize, step: u64, rows: Vec<(u64, u64, u64)> },
    VietorisStuck { level: usize, step: u64, masks: Vec<u64>, preperiod: u64, period: u64 },
    VietorisMixing { level: usize, index: u64 },
    VietorisPeriodicSets { level: usize, witnesses: Vec<CylinderOpenWitness> },

    /// exact-step coverage `sigma^n [u] = X` for every level-`level` word
    CylinderExactSteps { level: usize, steps: Vec<(Word, u64)> },

    // interval maps, over dyadic cells of depth `depth`
    CellHits { depth: u32, table: Vec<Vec<u64>> },
    CellCovers { depth: u32, steps: Vec<u64> },
    ExactSurjective { depth: u32, steps: Vec<u64> },
    CellPeriodicPoints { depth: u32, points: Vec<CellPeriodicWitness<T>> },
    CellVietorisPeriodicSets { depth: u32, witnesses: Vec<CellOpenWitness<T>> },

    // composites and reductions
    AllOf { parts: Vec<NamedCertificate<T>> },
    Because { part: Box<NamedCertificate<T>> },
    Inferred { rule: String, premise: Box<NamedCertificate<T>> },
}

impl<T: Scalar> Certificate<T> {
    /// The serialized tag, e.g. `cyclic-order`.
    pub fn kind(&self) -> String {
        serde_json::to_value(self)
            .ok()
            .and_then(|v| v.get("kind").and_then(|k| k.as_str().map(str::to_owned)))
            .unwrap_or_default()
    }
}

/// The system a certificate talks about.
pub enum SystemRef<'a, T> {
    Finite(&'a dyn FiniteDynamics),
    Shift(&'a ShiftSystem),
    /// The hyperspace of a shift, seen through cylinder-level Vietoris opens.
    ShiftHyper(&'a ShiftSystem),
    Pl(&'a PlSystem<T>),
    /// The hyperspace of an interval map, seen through dyadic Vietoris opens.
    PlHyper(&'a PlSystem<T>),
}

impl<T> Clone for SystemRef<'_, T> {
    fn clone(&self) -> Self {
        *self
    }
}

impl<T> Copy for SystemRef<'_, T> {}

impl<T> SystemRef<'_, T> {
    /// The base system a reduction premise refers to.
    fn base(self) -> Self {
        match self {
            SystemRef::ShiftHyper(s) => SystemRef::Shift(s),
            SystemRef::PlHyper(p) => SystemRef::Pl(p),
            other => other,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("certificate rejected: {0}")]
pub struct CertificateError(pub String);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(CertificateError(format!($($msg)+)));
        }
    };
}

type Check = Result<(), CertificateError>;

/// Re-validates the certificate carried by a verdict about `property`.
pub fn validate_verdict<T: Scalar>(verdict: &Verdict<T>, property: Property, sys: SystemRef<'_, T>) -> Check {
    match &verdict.outcome {
        Outcome::Proved { witness } => validate_proof(witness, property, sys),
        Outcome::Refuted { counterexample } => validate_refutation(counterexample, property, sys),
        Outcome::Unknown { budget_note } => {
            ensure!(!budget_note.is_empty(), "unknown verdict without a budget note");
            Ok(())
        }
    }
}

fn mismatch<T: Scalar>(cert: &Certificate<T>, property: Property, what: &str) -> CertificateError {
    CertificateError(format!("a {} certificate cannot {what} {property}", cert.kind()))
}

/// Checks that `cert` proves `property` for `sys`.
pub fn validate_proof<T: Scalar>(cert: &Certificate<T>, property: Property, sys: SystemRef<'_, T>) -> Check {
    use Certificate as C;
    use Property as P;
    match (cert, sys) {
        (C::AllOf { parts }, _) => {
            let needed = property.conjuncts();
            ensure!(
                needed.iter().all(|p| parts.iter().any(|part| part.property == *p)),
                "conjunction does not cover every part of {property}"
            );
            for part in parts {
                validate_proof(&part.certificate, part.property, sys)?;
            }
            Ok(())
        }
        (C::Inferred { rule, premise }, _) => {
            ensure!(
                inference_allowed(rule, premise.property, property),
                "rule {rule} does not derive {property} from {}",
                premise.property
            );
            validate_proof(&premise.certificate, premise.property, sys.base())
        }
        (C::SinglePoint, SystemRef::Finite(d)) => {
            ensure!(d.size() == 1, "single-point certificate on {} points", d.size());
            Ok(())
        }
        (C::CyclicOrder { order }, SystemRef::Finite(d)) if property == P::Transitive => cyclic_order(d, order),
        (C::HitTable { power, rows }, SystemRef::Finite(d)) if property == P::Transitive => {
            ensure!(*power == 1, "transitivity table must use T itself");
            hit_table(d, *power, rows)
        }
        (C::PowerHitTables { tables }, SystemRef::Finite(d)) if property == P::TotallyTransitive => {
            ensure!(tables.len() >= d.size(), "powers only checked up to {}", tables.len());
            for (i, (power, rows)) in tables.iter().enumerate() {
                ensure!(*power == i as u64 + 1, "powers must be 1, 2, ...");
                hit_table(d, *power, rows)?;
            }
            Ok(())
        }
        (C::RectangleHitTable { rows }, SystemRef::Finite(d)) if property == P::WeaklyMixing => rectangle_table(d, rows),
        // a point of least period k gives Y = {x} with T^k Y = Y inside {x}
        (C::PeriodicPoints { points }, SystemRef::Finite(d))
            if matches!(property, P::DensePeriodicPoints | P::DenseSmallPeriodicSets) =>
        {
            let covered: BTreeSet<usize> = points.iter().map(|p| p.0).collect();
            ensure!(covered.len() == d.size() && points.len() == d.size(), "not every point listed");
            for &(x, period) in points {
                ensure!(x < d.size(), "point {x} out of range");
                ensure!(exact_least_period(d, x, period), "{x} does not have least period {period}");
            }
            Ok(())
        }
        (C::PeriodicInOpens { rows }, SystemRef::Finite(d)) if property == P::DensePeriodicPoints => {
            let mut singles = HashSet::new();
            for (open, x, period) in rows {
                ensure!(open.universe() == d.size() && open.contains(*x), "{x} not in its open");
                ensure!(*period >= 1 && power_table(d, *period)[*x] == *x, "T^{period}({x}) != {x}");
                if open.len() == 1 {
                    singles.insert(open.first());
                }
            }
            ensure!(singles.len() == d.size(), "some singleton open has no periodic point");
            Ok(())
        }
        (C::SmallPeriodicSets { sets }, SystemRef::Finite(d)) if property == P::DenseSmallPeriodicSets => {
            let mut singles = HashSet::new();
            for w in sets {
                ensure!(w.open.universe() == d.size(), "open over the wrong space");
                ensure!(w.y.is_subset(&w.open), "Y not inside its open");
                ensure!(w.k >= 1, "k must be positive");
                let image = image_under(&power_table(d, w.k), &w.y);
                ensure!(image.is_subset(&w.y), "T^{} Y not inside Y", w.k);
                if w.open.len() == 1 {
                    singles.insert(w.open.first());
                }
            }
            ensure!(singles.len() == d.size(), "some singleton open lacks a witness");
            Ok(())
        }
        (C::ExactCover { opens }, SystemRef::Finite(d)) if property == P::TopologicallyExact => {
            let mut singles = HashSet::new();
            for (open, n) in opens {
                ensure!(open.universe() == d.size() && *n >= 1, "bad exactness row");
                ensure!(image_under(&power_table(d, *n), open).is_full(), "T^{n} U != X");
                if open.len() == 1 {
                    singles.insert(open.first());
                }
            }
            ensure!(singles.len() == d.size(), "some singleton open not covered");
            Ok(())
        }

        (C::CoveringWalk { walk }, SystemRef::Shift(s)) if property == P::Transitive => covering_walk(s, walk),
        (C::AperiodicCover { walk, cycles }, SystemRef::Shift(s))
            if matches!(property, P::TotallyTransitive | P::Transitive) =>
        {
            covering_walk(s, walk)?;
            let mut g = 0u64;
            for cycle in cycles {
                ensure!(cycle.len() >= 2 && s.is_allowed(cycle), "bad cycle");
                ensure!(cycle.first() == cycle.last(), "cycle not closed");
                g = g.gcd(&(cycle.len() as u64 - 1));
            }
            ensure!(g == 1, "cycle lengths have gcd {g}");
            Ok(())
        }
        (C::PositivePower { exponent }, SystemRef::Shift(s))
            if matches!(property, P::WeaklyMixing | P::TotallyTransitive | P::Transitive | P::TopologicallyExact) =>
        {
            ensure!(*exponent >= 1, "exponent must be positive");
            let mut power = s.matrix().to_vec();
            for _ in 1..*exponent {
                power = bool_product(&power, s.matrix());
            }
            ensure!(power.iter().flatten().all(|&b| b), "M^{exponent} has a zero entry");
            Ok(())
        }
        (C::CylinderCycles { entries }, SystemRef::Shift(s)) if property == P::DensePeriodicPoints => {
            let mut covered = HashSet::new();
            for (word, point) in entries {
                point.validate(s).map_err(|e| CertificateError(e.to_string()))?;
                ensure!(point.in_cylinder(word), "{point} not in [{}]", s.format_word(word));
                covered.insert(word.clone());
            }
            require_words(s, &covered, &[1, 2])
        }
        (C::CylinderSmallPeriodic { entries }, SystemRef::Shift(s)) if property == P::DenseSmallPeriodicSets => {
            let mut covered = HashSet::new();
            for w in entries {
                w.point.validate(s).map_err(|e| CertificateError(e.to_string()))?;
                ensure!(w.point.in_cylinder(&w.cylinder), "point outside its cylinder");
                ensure!(w.k >= 1 && w.k % w.point.least_period() as u64 == 0, "T^{} p != p", w.k);
                covered.insert(w.cylinder.clone());
            }
            require_words(s, &covered, &[1, 2])
        }
        (C::ExactSteps { steps }, SystemRef::Shift(s)) if property == P::TopologicallyExact => {
            let symbols: BTreeSet<usize> = steps.iter().map(|p| p.0).collect();
            ensure!(symbols.len() == s.size(), "not every symbol listed");
            for &(a, n) in steps {
                ensure!(a < s.size() && n >= 1, "bad exactness row");
                let mut reach = vec![false; s.size()];
                reach[a] = true;
                for _ in 0..n {
                    reach = successor_set(s, &reach);
                }
                ensure!(reach.iter().all(|&b| b), "sigma^{n}[{a}] != X");
            }
            Ok(())
        }

        (C::VietorisPairTable { level, step, rows }, SystemRef::ShiftHyper(s))
            if property == P::Transitive =>
        {
            ensure!(*step == 1, "transitivity uses T_K itself");
            vietoris_pair_table(s, *level, rows)
        }
        (C::VietorisMixing { level, index }, SystemRef::ShiftHyper(s))
            if matches!(property, P::Transitive | P::TotallyTransitive | P::WeaklyMixing) =>
        {
            let words = s.allowed_words(*level).map_err(|e| CertificateError(e.to_string()))?;
            let mut reach = ReachCache::new(s, &words);
            ensure!(*index >= 1, "index must be positive");
            for n in [*index, index + 1] {
                let rel = reach.relation(n);
                ensure!(rel.iter().all(|row| *row == full_mask(words.len())), "R_{n} is not full");
            }
            Ok(())
        }
        (C::VietorisPeriodicSets { level, witnesses }, SystemRef::ShiftHyper(s))
            if matches!(property, P::DensePeriodicPoints | P::DenseSmallPeriodicSets) =>
        {
            let words = s.allowed_words(*level).map_err(|e| CertificateError(e.to_string()))?;
            ensure!(words.len() < 64, "too many cylinders");
            let mut seen = HashSet::new();
            for w in witnesses {
                ensure!(!w.open.is_empty(), "empty open");
                let mut mask = 0u64;
                for u in &w.open {
                    let i = words.iter().position(|x| x == u);
                    ensure!(i.is_some(), "open cell is not an allowed level-{level} word");
                    mask |= 1 << i.unwrap();
                }
                ensure!(mask.count_ones() as usize == w.open.len(), "repeated cell");
                check_periodic_set(&ShiftSets(s), &w.witness).map_err(|e| CertificateError(e.to_string()))?;
                ensure!(
                    vietoris_membership(&w.witness.z, &w.open, |u, p| p.in_cylinder(u)),
                    "Z not in its Vietoris open"
                );
                seen.insert(mask);
            }
            ensure!(seen.len() as u64 == full_mask(words.len()), "some basic open lacks a witness");
            Ok(())
        }
        (C::CylinderExactSteps { level, steps }, SystemRef::Shift(s))
            if property == P::TopologicallyExact =>
        {
            let words = s.allowed_words(*level).map_err(|e| CertificateError(e.to_string()))?;
            let listed: HashSet<&Word> = steps.iter().map(|(w, _)| w).collect();
            ensure!(listed.len() == words.len() && words.iter().all(|w| listed.contains(w)), "missing words");
            for (u, n) in steps {
                ensure!(*n >= 1, "n must be positive");
                for v in &words {
                    let hit = cylinder_reach(s, u, v, *n as usize).map_err(|e| CertificateError(e.to_string()))?;
                    ensure!(hit, "sigma^{n}[{}] misses [{}]", s.format_word(u), s.format_word(v));
                }
            }
            Ok(())
        }

        (C::CellHits { depth, table }, SystemRef::Pl(f)) if property == P::Transitive => {
            let cells = dyadic_cells::<T>(*depth);
            ensure!(table.len() == cells.len(), "table size");
            for (i, row) in table.iter().enumerate() {
                ensure!(row.len() == cells.len(), "table size");
                for (j, &n) in row.iter().enumerate() {
                    ensure!(n >= 1, "n must be positive");
                    let img = f.iterate_interval(&cells[i], n as usize).map_err(|e| CertificateError(e.to_string()))?;
                    ensure!(img.interiors_meet(&cells[j]), "f^{n}(C_{i}) misses C_{j}");
                }
            }
            Ok(())
        }
        (C::CellCovers { depth, steps }, SystemRef::Pl(f)) if property == P::TopologicallyExact => {
            cell_covers(f, *depth, steps)
        }
        (C::ExactSurjective { depth, steps }, SystemRef::Pl(f) | SystemRef::PlHyper(f))
            if matches!(
                property,
                P::TotallyTransitive | P::WeaklyMixing | P::Transitive | P::TopologicallyExact
            ) =>
        {
            cell_covers(f, *depth, steps)?;
            let img = f.image_of_interval(&Interval::unit()).map_err(|e| CertificateError(e.to_string()))?;
            ensure!(img.as_interval().is_some_and(|i| i.is_unit()), "f is not onto [0, 1]");
            Ok(())
        }
        (C::CellPeriodicPoints { depth, points }, SystemRef::Pl(f))
            if matches!(property, P::DensePeriodicPoints | P::DenseSmallPeriodicSets) =>
        {
            let cells = dyadic_cells::<T>(*depth);
            let listed: BTreeSet<u64> = points.iter().map(|p| p.cell).collect();
            ensure!(listed.len() == cells.len() && points.len() == cells.len(), "not every cell listed");
            for p in points {
                let cell = cells.get(p.cell as usize);
                ensure!(cell.is_some_and(|c| c.contains_interior(&p.x)), "{} not inside cell {}", p.x, p.cell);
                ensure!(p.period >= 1 && f.eval_iter(&p.x, p.period as usize) == p.x, "f^{}(x) != x", p.period);
            }
            Ok(())
        }
        (C::CellVietorisPeriodicSets { depth, witnesses }, SystemRef::PlHyper(f))
            if matches!(property, P::DensePeriodicPoints | P::DenseSmallPeriodicSets) =>
        {
            let cells = dyadic_cells::<T>(*depth);
            ensure!(cells.len() < 64, "too many cells");
            let sets = PlSets { map: f, return_cap: 1 << 12 };
            let mut seen = HashSet::new();
            for w in witnesses {
                let mut mask = 0u64;
                for &c in &w.open {
                    ensure!((c as usize) < cells.len(), "cell {c} out of range");
                    mask |= 1 << c;
                }
                ensure!(!w.open.is_empty() && mask.count_ones() as usize == w.open.len(), "bad open");
                check_periodic_set(&sets, &w.witness).map_err(|e| CertificateError(e.to_string()))?;
                ensure!(
                    vietoris_membership(&w.witness.z.0, &w.open, |&c, x| cells[c as usize].contains_interior(x)),
                    "Z not in its Vietoris open"
                );
                seen.insert(mask);
            }
            ensure!(seen.len() as u64 == full_mask(cells.len()), "some basic open lacks a witness");
            Ok(())
        }
        _ => Err(mismatch(cert, property, "prove")),
    }
}

/// Checks that `cert` refutes `property` for `sys`.
pub fn validate_refutation<T: Scalar>(cert: &Certificate<T>, property: Property, sys: SystemRef<'_, T>) -> Check {
    use Certificate as C;
    use Property as P;
    match (cert, sys) {
        (C::Because { part }, _) => {
            ensure!(property.conjuncts().contains(&part.property), "{} is not part of {property}", part.property);
            validate_refutation(&part.certificate, part.property, sys)
        }
        (C::Inferred { rule, premise }, _) => {
            ensure!(
                refutation_inference_allowed(rule, premise.property, property),
                "rule {rule} does not refute {property} from {}",
                premise.property
            );
            validate_refutation(&premise.certificate, premise.property, sys.base())
        }
        (C::SetsNeverMeet { power, u, v }, SystemRef::Finite(d))
            if property == P::TotallyTransitive || (property == P::Transitive && *power == 1) =>
        {
            ensure!(*power >= 1, "power must be positive");
            ensure!(u.universe() == d.size() && v.universe() == d.size(), "sets over the wrong space");
            let table = power_table(d, *power);
            let mut seen = HashSet::new();
            let mut cur = image_under(&table, u);
            while seen.insert(cur.clone()) {
                ensure!(!cur.intersects(v), "the orbit of U meets V");
                cur = image_under(&table, &cur);
            }
            Ok(())
        }
        (C::ProductNeverMeets { u1, u2, v1, v2 }, SystemRef::Finite(d)) if property == P::WeaklyMixing => {
            ensure!([u1, u2, v1, v2].iter().all(|s| s.universe() == d.size()), "sets over the wrong space");
            let table: Vec<usize> = (0..d.size()).map(|x| d.step(x)).collect();
            let mut seen = HashSet::new();
            let mut cur = (image_under(&table, u1), image_under(&table, u2));
            while seen.insert(cur.clone()) {
                ensure!(!(cur.0.intersects(v1) && cur.1.intersects(v2)), "the rectangles meet");
                cur = (image_under(&table, &cur.0), image_under(&table, &cur.1));
            }
            Ok(())
        }
        (C::NoPeriodicPointIn { open }, SystemRef::Finite(d))
            if matches!(property, P::DensePeriodicPoints | P::DenseSmallPeriodicSets) =>
        {
            ensure!(open.universe() == d.size(), "open over the wrong space");
            for x in open.iter() {
                ensure!(!orbit_hits(d, x, x), "{x} is periodic");
            }
            Ok(())
        }
        (C::NoInvariantSubset { open, k_bound }, SystemRef::Finite(d)) if property == P::DenseSmallPeriodicSets => {
            ensure!(open.universe() == d.size() && open.len() <= 16, "open too large to re-check");
            ensure!(*k_bound >= d.size() as u64, "k bound below the number of points");
            let members: Vec<usize> = open.iter().collect();
            for k in 1..=*k_bound {
                let table = power_table(d, k);
                for sub in 1u64..(1 << members.len()) {
                    let y = ClosedSet::new(d.size(), members.iter().enumerate().filter(|(i, _)| sub >> i & 1 == 1).map(|(_, &x)| x))
                        .expect("nonempty");
                    ensure!(!image_under(&table, &y).is_subset(&y), "found an invariant subset");
                }
            }
            Ok(())
        }
        (C::NeverCovers { open }, SystemRef::Finite(d)) if property == P::TopologicallyExact => {
            ensure!(open.universe() == d.size(), "open over the wrong space");
            let table: Vec<usize> = (0..d.size()).map(|x| d.step(x)).collect();
            let mut seen = HashSet::new();
            let mut cur = image_under(&table, open);
            while seen.insert(cur.clone()) {
                ensure!(!cur.is_full(), "an iterate of U is all of X");
                cur = image_under(&table, &cur);
            }
            Ok(())
        }

        (C::SymbolUnreachable { from, to }, SystemRef::Shift(s))
            if matches!(property, P::Transitive | P::TotallyTransitive | P::WeaklyMixing | P::TopologicallyExact) =>
        {
            ensure!(*from < s.size() && *to < s.size(), "symbol out of range");
            let mut start = vec![false; s.size()];
            start[*from] = true;
            let reach = closure(s, &successor_set(s, &start), 1);
            ensure!(!reach[*to], "{to} is reachable from {from}");
            Ok(())
        }
        (C::CyclicClasses { period, from, to }, SystemRef::Shift(s))
            if matches!(property, P::TotallyTransitive | P::WeaklyMixing | P::TopologicallyExact) =>
        {
            ensure!(*period >= 2, "period must be at least 2");
            ensure!(*from < s.size() && *to < s.size(), "symbol out of range");
            let mut start = vec![false; s.size()];
            start[*from] = true;
            let p = *period as usize;
            let first = (0..p).fold(start, |set, _| successor_set(s, &set));
            let reach = closure(s, &first, p);
            ensure!(!reach[*to], "{to} reachable from {from} in a multiple of {period} steps");
            Ok(())
        }
        (C::ProductUnreachable { from, to }, SystemRef::Shift(s))
            if matches!(property, P::WeaklyMixing | P::TopologicallyExact | P::TotallyTransitive) =>
        {
            let m = s.size();
            ensure!(from.0 < m && from.1 < m && to.0 < m && to.1 < m, "symbol out of range");
            let mut seen = vec![false; m * m];
            let mut queue = Vec::new();
            for a in s.successors(from.0) {
                for b in s.successors(from.1) {
                    if !seen[a * m + b] {
                        seen[a * m + b] = true;
                        queue.push((a, b));
                    }
                }
            }
            while let Some((a, b)) = queue.pop() {
                for c in s.successors(a) {
                    for d in s.successors(b) {
                        if !seen[c * m + d] {
                            seen[c * m + d] = true;
                            queue.push((c, d));
                        }
                    }
                }
            }
            ensure!(!seen[to.0 * m + to.1], "product vertex reachable");
            Ok(())
        }
        (C::WordOffCycle { word }, SystemRef::Shift(s) | SystemRef::ShiftHyper(s))
            if matches!(property, P::DensePeriodicPoints | P::DenseSmallPeriodicSets) =>
        {
            s.check_word(word).map_err(|e| CertificateError(e.to_string()))?;
            let mut start = vec![false; s.size()];
            start[*word.last().expect("nonempty")] = true;
            let reach = closure(s, &successor_set(s, &start), 1);
            ensure!(!reach[word[0]], "a cycle returns to [{}]", s.format_word(word));
            Ok(())
        }
        (C::ReachSetsCycle { symbol }, SystemRef::Shift(s) | SystemRef::ShiftHyper(s))
            if property == P::TopologicallyExact =>
        {
            ensure!(*symbol < s.size(), "symbol out of range");
            let mut cur = vec![false; s.size()];
            cur[*symbol] = true;
            let mut seen = HashSet::new();
            cur = successor_set(s, &cur);
            while seen.insert(cur.clone()) {
                ensure!(!cur.iter().all(|&b| b), "some iterate of [{symbol}] is X");
                cur = successor_set(s, &cur);
            }
            Ok(())
        }
        (C::VietorisStuck { level, step, masks, preperiod, period }, SystemRef::ShiftHyper(s)) => {
            let arity_ok = match property {
                P::Transitive => masks.len() == 2 && *step == 1,
                P::TotallyTransitive => masks.len() == 2 && *step >= 1,
                P::WeaklyMixing => masks.len() == 4 && *step == 1,
                _ => false,
            };
            ensure!(arity_ok, "stuck opens do not match {property}");
            vietoris_stuck(s, *level, *step, masks, *preperiod, *period)
        }
        _ => Err(mismatch(cert, property, "refute")),
    }
}

/// Implications usable by `Inferred` proofs: premise property of the base
/// system to a property of the same system or of its hyperspace.
fn inference_allowed(rule: &str, premise: Property, conclusion: Property) -> bool {
    use Property as P;
    match rule {
        // base weak mixing lifts to the hyperspace, which is then weakly
        // mixing, transitive and (mixing powers) totally transitive
        "weak-mixing-lifts" => {
            premise == P::WeaklyMixing
                && matches!(conclusion, P::WeaklyMixing | P::Transitive | P::TotallyTransitive)
        }
        "exactness-lifts" => premise == P::TopologicallyExact && conclusion == P::TopologicallyExact,
        // finite sets of periodic points are periodic in the hyperspace and
        // dense there when periodic points are dense in the base
        "periodic-points-lift" => {
            premise == P::DensePeriodicPoints
                && matches!(conclusion, P::DensePeriodicPoints | P::DenseSmallPeriodicSets)
        }
        "periodic-sets-give-small-periodic-sets" => {
            premise == P::DensePeriodicPoints && conclusion == P::DenseSmallPeriodicSets
        }
        _ => false,
    }
}

fn refutation_inference_allowed(rule: &str, premise: Property, conclusion: Property) -> bool {
    use Property as P;
    match rule {
        "weak-mixing-descends" => {
            premise == P::WeaklyMixing
                && matches!(conclusion, P::WeaklyMixing | P::Transitive | P::TotallyTransitive)
        }
        "exactness-descends" => premise == P::TopologicallyExact && conclusion == P::TopologicallyExact,
        _ => false,
    }
}

fn exact_least_period(d: &dyn FiniteDynamics, x: usize, period: u64) -> bool {
    if period == 0 {
        return false;
    }
    let mut y = x;
    for k in 1..=period {
        y = d.step(y);
        if y == x {
            return k == period;
        }
    }
    false
}

fn cyclic_order(d: &dyn FiniteDynamics, order: &[usize]) -> Check {
    let n = d.size();
    ensure!(order.len() == n, "cycle has {} points, space has {n}", order.len());
    let distinct: HashSet<usize> = order.iter().copied().collect();
    ensure!(distinct.len() == n && order.iter().all(|&x| x < n), "not a permutation of the points");
    for i in 0..n {
        ensure!(d.step(order[i]) == order[(i + 1) % n], "T({}) != {}", order[i], order[(i + 1) % n]);
    }
    Ok(())
}

fn hit_table(d: &dyn FiniteDynamics, power: u64, rows: &[(ClosedSet, ClosedSet, u64)]) -> Check {
    let mut pairs = HashSet::new();
    for (u, v, n) in rows {
        ensure!(*n >= 1, "n must be positive");
        ensure!(u.universe() == d.size() && v.universe() == d.size(), "sets over the wrong space");
        let img = image_under(&power_table(d, power * n), u);
        ensure!(img.intersects(v), "T^{} U misses V", power * n);
        if u.len() == 1 && v.len() == 1 {
            pairs.insert((u.first(), v.first()));
        }
    }
    ensure!(pairs.len() == d.size() * d.size(), "some pair of singleton opens is missing");
    Ok(())
}

fn rectangle_table(d: &dyn FiniteDynamics, rows: &[([ClosedSet; 4], u64)]) -> Check {
    let mut quads = HashSet::new();
    for ([u1, u2, v1, v2], n) in rows {
        ensure!(*n >= 1, "n must be positive");
        let table = power_table(d, *n);
        ensure!(
            image_under(&table, u1).intersects(v1) && image_under(&table, u2).intersects(v2),
            "rectangles do not meet at n = {n}"
        );
        if [u1, u2, v1, v2].iter().all(|s| s.len() == 1) {
            quads.insert((u1.first(), u2.first(), v1.first(), v2.first()));
        }
    }
    ensure!(quads.len() == d.size().pow(4), "some singleton rectangle pair is missing");
    Ok(())
}

fn successor_set(s: &ShiftSystem, set: &[bool]) -> Vec<bool> {
    let mut out = vec![false; s.size()];
    for a in (0..s.size()).filter(|&a| set[a]) {
        for b in s.successors(a) {
            out[b] = true;
        }
    }
    out
}

/// Closure of `start` under `stride`-step moves.
fn closure(s: &ShiftSystem, start: &[bool], stride: usize) -> Vec<bool> {
    let mut reach = start.to_vec();
    loop {
        let mut next = reach.clone();
        let stepped = (0..stride).fold(reach.clone(), |set, _| successor_set(s, &set));
        for (n, st) in next.iter_mut().zip(stepped) {
            *n |= st;
        }
        if next == reach {
            return reach;
        }
        reach = next;
    }
}

fn covering_walk(s: &ShiftSystem, walk: &[usize]) -> Check {
    ensure!(walk.len() >= 2 && s.is_allowed(walk), "walk is not an allowed word");
    ensure!(walk.first() == walk.last(), "walk is not closed");
    let symbols: HashSet<usize> = walk.iter().copied().collect();
    ensure!(symbols.len() == s.size(), "walk misses a symbol");
    Ok(())
}

fn require_words(s: &ShiftSystem, covered: &HashSet<Word>, levels: &[usize]) -> Check {
    for &level in levels {
        for w in s.allowed_words(level).map_err(|e| CertificateError(e.to_string()))? {
            ensure!(covered.contains(&w), "no witness for [{}]", s.format_word(&w));
        }
    }
    Ok(())
}

fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Reach relations computed word by word from the cylinder definition.
struct ReachCache<'a> {
    sft: &'a ShiftSystem,
    words: &'a [Word],
    relations: HashMap<u64, Vec<u64>>,
}

impl<'a> ReachCache<'a> {
    fn new(sft: &'a ShiftSystem, words: &'a [Word]) -> Self {
        ReachCache { sft, words, relations: HashMap::new() }
    }

    fn relation(&mut self, n: u64) -> Vec<u64> {
        let (sft, words) = (self.sft, self.words);
        self.relations
            .entry(n)
            .or_insert_with(|| {
                words
                    .iter()
                    .map(|u| {
                        words.iter().enumerate().fold(0u64, |acc, (j, v)| {
                            if cylinder_reach(sft, u, v, n as usize).unwrap_or(false) {
                                acc | 1 << j
                            } else {
                                acc
                            }
                        })
                    })
                    .collect()
            })
            .clone()
    }
}

fn pair_ok(rel: &[u64], p: u64, q: u64) -> bool {
    let mut image = 0u64;
    for (u, row) in rel.iter().enumerate() {
        if p >> u & 1 == 1 {
            if row & q == 0 {
                return false;
            }
            image |= row;
        }
    }
    image & q == q
}

fn vietoris_pair_table(s: &ShiftSystem, level: usize, rows: &[(u64, u64, u64)]) -> Check {
    let words = s.allowed_words(level).map_err(|e| CertificateError(e.to_string()))?;
    ensure!(words.len() < 32, "too many cylinders to enumerate pairs");
    let all = full_mask(words.len());
    let mut reach = ReachCache::new(s, &words);
    let mut pairs = HashSet::new();
    for &(p, q, n) in rows {
        ensure!(p != 0 && q != 0 && p & !all == 0 && q & !all == 0, "bad cylinder set");
        ensure!(n >= 1, "n must be positive");
        ensure!(pair_ok(&reach.relation(n), p, q), "pair ({p:#b}, {q:#b}) fails at n = {n}");
        pairs.insert((p, q));
    }
    ensure!(pairs.len() as u64 == all * all, "some pair of basic opens is missing");
    Ok(())
}

fn vietoris_stuck(s: &ShiftSystem, level: usize, step: u64, masks: &[u64], pre: u64, period: u64) -> Check {
    let words = s.allowed_words(level).map_err(|e| CertificateError(e.to_string()))?;
    ensure!(words.len() < 64, "too many cylinders");
    let all = full_mask(words.len());
    ensure!(masks.iter().all(|&m| m != 0 && m & !all == 0), "bad cylinder set");
    ensure!(pre >= 1 && period >= 1, "preperiod and period must be positive");
    let mut reach = ReachCache::new(s, &words);
    ensure!(reach.relation(pre) == reach.relation(pre + period), "R_{pre} != R_{}", pre + period);
    // multiples of `step` up to this bound hit every residue of the cycle
    let t_max = pre.div_ceil(step) + period;
    for t in 1..=t_max {
        let n = step * t;
        let idx = if n < pre { n } else { pre + (n - pre) % period };
        let rel = reach.relation(idx);
        let ok = masks.chunks(2).all(|pq| pair_ok(&rel, pq[0], pq[1]));
        ensure!(!ok, "opens connect at n = {n}");
    }
    Ok(())
}

pub fn dyadic_cells<T: Scalar>(depth: u32) -> Vec<Interval<T>> {
    (0..1u64 << depth).map(|j| Interval::dyadic(depth, j)).collect()
}

fn cell_covers<T: Scalar>(f: &PlSystem<T>, depth: u32, steps: &[u64]) -> Check {
    let cells = dyadic_cells::<T>(depth);
    ensure!(steps.len() == cells.len(), "not every cell listed");
    for (cell, &n) in cells.iter().zip(steps) {
        ensure!(n >= 1, "n must be positive");
        let img = f.iterate_interval(cell, n as usize).map_err(|e| CertificateError(e.to_string()))?;
        ensure!(img.is_unit(), "f^{n}([{}, {}]) != [0, 1]", cell.lo, cell.hi);
    }
    Ok(())
}
