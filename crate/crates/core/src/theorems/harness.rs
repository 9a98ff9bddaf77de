//! Evaluates both sides of each hyperspace equivalence on a concrete system
//! and reports whether the decided sides agree.
//!
//! Finite systems are checked exhaustively on the full powerset hyperspace.
//! For shifts the hyperspace conditions come from bounded Vietoris
//! verification, cross-checked by reduction to base-space properties.
//! Interval maps use reductions plus periodic sets built cell by cell.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::pipeline::{combine_witnesses, periodic_kernel, union_closure, CombineMode};
use super::witness::{FamilyWitness, FiniteSets, PeriodicSetWitness, PlPoints, PlSets};
use crate::hyperspace::vietoris::{MAX_CYLINDERS, MAX_PERIODIC_CYLINDERS};
use crate::hyperspace::{
    powerset_hyperspace, vietoris_periodic_dense_bounded, vietoris_totally_transitive_bounded,
    vietoris_transitive_bounded, vietoris_weakly_mixing_bounded, HyperSystem,
};
use crate::metric::ClosedSet;
use crate::properties::certificate::{
    dyadic_cells, validate_verdict, CellOpenWitness, Certificate, CertificateError, NamedCertificate, SystemRef,
};
use crate::properties::{self, conjunction, finite, pl, shift, Budget, Method, Property, Status, System, Verdict};
use crate::scalar::Scalar;
use crate::systems::graph::strongly_connected_components;
use crate::systems::{PlSystem, ShiftSystem};

/// Largest finite base for which pipeline witnesses are listed per state.
pub const MAX_PIPELINE_POINTS: usize = 10;
/// Largest dyadic depth used for hyperspace periodic sets of interval maps.
pub const MAX_PL_HYPER_DEPTH: u32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Target {
    Base,
    Hyperspace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Agreement {
    Agree,
    Disagree,
    Inconclusive,
}

/// One verdict about `property` of the base or the hyperspace, with the route that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Evaluation<T> {
    pub route: String,
    pub target: Target,
    pub property: Property,
    pub verdict: Verdict<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Condition<T> {
    pub name: String,
    pub primary: Evaluation<T>,
    /// Independent routes to the same statement; a decided disagreement
    /// with the primary verdict makes the report disagree.
    pub cross_checks: Vec<Evaluation<T>>,
}

impl<T> Condition<T> {
    pub fn status(&self) -> Status {
        self.primary.verdict.status()
    }

    pub fn methods(&self) -> Vec<String> {
        std::iter::once(&self.primary).chain(&self.cross_checks).map(|e| e.route.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Hypothesis {
    pub infinite_space: bool,
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct EquivalenceReport<T> {
    pub check: String,
    pub conditions: Vec<Condition<T>>,
    pub agreement: Agreement,
    pub hypothesis: Hypothesis,
    /// Objects built by the proof constructions, re-validated like verdicts.
    pub witnesses: Vec<Evaluation<T>>,
}

impl<T: Scalar> EquivalenceReport<T> {
    fn new(check: &str, conditions: Vec<Condition<T>>, hypothesis: Hypothesis, witnesses: Vec<Evaluation<T>>) -> Self {
        let agreement = agreement_of(&conditions);
        EquivalenceReport { check: check.to_string(), conditions, agreement, hypothesis, witnesses }
    }

    pub fn statuses(&self) -> Vec<Status> {
        self.conditions.iter().map(Condition::status).collect()
    }

    /// Every condition decided with the given status.
    pub fn all(&self, status: Status) -> bool {
        self.conditions.iter().all(|c| c.status() == status)
    }
}

fn agreement_of<T>(conditions: &[Condition<T>]) -> Agreement {
    let mut decided = Vec::new();
    for c in conditions {
        let s = c.status();
        for x in &c.cross_checks {
            let xs = x.verdict.status();
            if s.is_decided() && xs.is_decided() && xs != s {
                return Agreement::Disagree;
            }
        }
        if s.is_decided() {
            decided.push(s);
        }
    }
    if decided.windows(2).any(|w| w[0] != w[1]) {
        Agreement::Disagree
    } else if decided.len() >= 2 {
        Agreement::Agree
    } else {
        Agreement::Inconclusive
    }
}

fn eval<T>(route: &str, target: Target, property: Property, verdict: Verdict<T>) -> Evaluation<T> {
    Evaluation { route: route.to_string(), target, property, verdict }
}

fn condition<T>(name: &str, primary: Evaluation<T>, cross_checks: Vec<Evaluation<T>>) -> Condition<T> {
    Condition { name: name.to_string(), primary, cross_checks }
}

fn hyper_name(p: Property) -> String {
    format!("{p}(K(X))")
}

fn base_name(p: Property) -> String {
    format!("{p}(X)")
}

/// Lifts a base verdict to the hyperspace through an equivalence: proofs
/// with `lift`, refutations with `descend` (when the converse holds).
fn transfer<T: Scalar>(
    base_property: Property,
    base: &Verdict<T>,
    lift: &str,
    descend: Option<&str>,
) -> Verdict<T> {
    let premise = |v: &Verdict<T>| {
        Box::new(NamedCertificate {
            property: base_property,
            certificate: v.certificate().expect("decided verdict").clone(),
        })
    };
    match base.status() {
        Status::Proved => {
            Verdict::proved(base.method, Certificate::Inferred { rule: lift.to_string(), premise: premise(base) })
        }
        Status::Refuted => match descend {
            Some(rule) => Verdict::refuted(
                base.method,
                Certificate::Inferred { rule: rule.to_string(), premise: premise(base) },
            ),
            None => Verdict::unknown(base.method, format!("no converse for {lift}")),
        },
        Status::Unknown => Verdict::unknown(base.method, format!("premise {base_property} undecided")),
    }
}

fn from_error<T>(e: impl std::fmt::Display) -> Verdict<T> {
    Verdict::unknown(Method::BoundedSearch, e.to_string())
}

/// Hyperspace verdicts for one system, computed once and shared by the checks.
struct Sides<T> {
    hypothesis: Hypothesis,
    base: Box<dyn Fn(Property) -> Verdict<T>>,
    /// `(route, verdict)` for an atomic hyperspace property, primary route.
    hyper: Box<dyn Fn(Property) -> (String, Verdict<T>)>,
    /// Independent cross-checks for an atomic hyperspace property.
    hyper_cross: Box<dyn Fn(Property) -> Vec<(String, Verdict<T>)>>,
    witnesses: Box<dyn Fn() -> Vec<Evaluation<T>>>,
}

fn composite<T: Scalar>(
    property: Property,
    atomic: &dyn Fn(Property) -> (String, Verdict<T>),
) -> (String, Verdict<T>) {
    let parts: Vec<(Property, (String, Verdict<T>))> =
        property.conjuncts().into_iter().map(|p| (p, atomic(p))).collect();
    let mut routes: Vec<String> = parts.iter().map(|(_, (r, _))| r.clone()).collect();
    routes.dedup();
    let verdict = conjunction(parts.into_iter().map(|(p, (_, v))| (p, v)).collect());
    (routes.join("+"), verdict)
}

fn hyper_condition<T: Scalar>(sides: &Sides<T>, property: Property) -> Condition<T> {
    let (route, verdict) = composite(property, &*sides.hyper);
    let primary = eval(&route, Target::Hyperspace, property, verdict);
    // a cross-check of a composite replaces each atomic part that has an
    // independent route and keeps the primary verdict for the others
    let mut cross = Vec::new();
    let alternatives: Vec<(Property, Vec<(String, Verdict<T>)>)> =
        property.conjuncts().into_iter().map(|p| (p, (sides.hyper_cross)(p))).collect();
    let rounds = alternatives.iter().map(|(_, alts)| alts.len()).max().unwrap_or(0);
    for i in 0..rounds {
        let mut names = Vec::new();
        let parts = alternatives
            .iter()
            .map(|(p, alts)| match alts.get(i) {
                Some((r, v)) => {
                    names.push(r.clone());
                    (*p, v.clone())
                }
                None => (*p, (sides.hyper)(*p).1),
            })
            .collect();
        names.dedup();
        cross.push(eval(&names.join("+"), Target::Hyperspace, property, conjunction(parts)));
    }
    condition(&hyper_name(property), primary, cross)
}

fn base_condition<T: Scalar>(sides: &Sides<T>, property: Property, cross: Vec<Evaluation<T>>) -> Condition<T> {
    let verdict = (sides.base)(property);
    let route = format!("base:{}", verdict.method);
    condition(&base_name(property), eval(&route, Target::Base, property, verdict), cross)
}

/// Devaney(K(X)) ⟺ HY(K(X)) ⟺ HY(X).
pub fn check_theorem_main<T: Scalar>(sys: &System<T>, budget: &Budget) -> EquivalenceReport<T> {
    let sides = sides(sys, budget);
    let conditions = vec![
        hyper_condition(&sides, Property::Devaney),
        hyper_condition(&sides, Property::HySystem),
        base_condition(&sides, Property::HySystem, vec![]),
    ];
    EquivalenceReport::new("theorem-main", conditions, sides.hypothesis.clone(), (sides.witnesses)())
}

/// WM(K(X)) ⟺ transitive(K(X)) ⟺ WM(X).
pub fn check_lemma_wm<T: Scalar>(sys: &System<T>, budget: &Budget) -> EquivalenceReport<T> {
    let sides = sides(sys, budget);
    let conditions = vec![
        hyper_condition(&sides, Property::WeaklyMixing),
        hyper_condition(&sides, Property::Transitive),
        base_condition(&sides, Property::WeaklyMixing, vec![]),
    ];
    EquivalenceReport::new("lemma-wm", conditions, sides.hypothesis.clone(), vec![])
}

/// exact(K(X)) ⟺ exact(X).
pub fn check_lemma_exact<T: Scalar>(sys: &System<T>, budget: &Budget) -> EquivalenceReport<T> {
    let sides = sides(sys, budget);
    let cross = match sys {
        System::Shift(s) => {
            let level = pick_level(s, budget.level, MAX_CYLINDERS);
            let horizon = budget.shift_horizon(s.size(), level);
            vec![eval(
                &format!("cylinder-level-{level}"),
                Target::Base,
                Property::TopologicallyExact,
                shift::exact_at_level(s, level, horizon),
            )]
        }
        _ => vec![],
    };
    let conditions = vec![
        hyper_condition(&sides, Property::TopologicallyExact),
        base_condition(&sides, Property::TopologicallyExact, cross),
    ];
    EquivalenceReport::new("lemma-exact", conditions, sides.hypothesis.clone(), vec![])
}

/// K(X) exactly Devaney (exact with dense periodic points) ⟺ X is an exact HY-system.
pub fn check_corollary<T: Scalar>(sys: &System<T>, budget: &Budget) -> EquivalenceReport<T> {
    let sides = sides(sys, budget);
    let conditions = vec![
        hyper_condition(&sides, Property::ExactDevaney),
        base_condition(&sides, Property::ExactHySystem, vec![]),
    ];
    EquivalenceReport::new("corollary", conditions, sides.hypothesis.clone(), vec![])
}

/// Largest level `≤ max_level` (at least 1) with at most `max_words` allowed words.
pub fn pick_level(sft: &ShiftSystem, max_level: usize, max_words: usize) -> usize {
    (1..=max_level.max(1))
        .rev()
        .find(|&l| sft.allowed_words(l).map(|w| w.len() <= max_words).unwrap_or(false))
        .unwrap_or(1)
}

/// A vertex shift is finite exactly when each strongly connected component
/// carrying a cycle is a single simple cycle.
pub fn shift_is_infinite(sft: &ShiftSystem) -> bool {
    let adj = sft.adjacency();
    let (comp, count) = strongly_connected_components(&adj);
    (0..count).any(|c| {
        let members: Vec<usize> = (0..sft.size()).filter(|&a| comp[a] == c).collect();
        let inner_edges: usize = members.iter().map(|&a| adj[a].iter().filter(|&&b| comp[b] == c).count()).sum();
        inner_edges > members.len()
    })
}

fn sides<T: Scalar>(sys: &System<T>, budget: &Budget) -> Sides<T> {
    match sys {
        System::Finite(f) => finite_sides(f.clone(), budget.clone()),
        System::Shift(s) => shift_sides(s.clone(), budget.clone()),
        System::Pl(p) => pl_sides(p.clone(), budget.clone()),
    }
}

fn base_checker<T: Scalar>(sys: System<T>, budget: Budget) -> Box<dyn Fn(Property) -> Verdict<T>> {
    Box::new(move |p| properties::check(&sys, p, &budget))
}

fn finite_sides<T: Scalar>(f: crate::systems::FiniteSystem<T>, budget: Budget) -> Sides<T> {
    let hypothesis = Hypothesis {
        infinite_space: false,
        note: "X is finite: the infinite-space hypothesis is unmet, so agreement is expected but not guaranteed"
            .into(),
    };
    let hyper = powerset_hyperspace(&f, budget.cap);
    let base = base_checker(System::Finite(f.clone()), budget.clone());
    let hyper_for_check = hyper.clone();
    let b2 = budget.clone();
    let hyper_fn = move |p: Property| match &hyper_for_check {
        Ok(h) => ("exhaustive:powerset".to_string(), finite::check(h, p, &b2)),
        Err(e) => ("exhaustive:powerset".to_string(), from_error(e)),
    };
    let witnesses = {
        let f = f.clone();
        let budget = budget.clone();
        move || match &hyper {
            Ok(h) => finite_pipeline(&f, h, &budget),
            Err(_) => vec![],
        }
    };
    Sides {
        hypothesis,
        base,
        hyper: Box::new(hyper_fn),
        hyper_cross: Box::new(|_| vec![]),
        witnesses: Box::new(witnesses),
    }
}

/// Proof constructions on a finite system: periodic kernels of the base
/// invariant sets combined into a periodic state for every basic open of
/// the hyperspace, and unions of invariant families of states back to
/// invariant sets of the base.
fn finite_pipeline<T: Scalar>(
    f: &crate::systems::FiniteSystem<T>,
    h: &HyperSystem<T>,
    budget: &Budget,
) -> Vec<Evaluation<T>> {
    let n = f.len();
    if n > MAX_PIPELINE_POINTS {
        return vec![];
    }
    let mut out = Vec::new();
    let base_small = finite::dense_small_periodic_sets::<T>(f, budget.finite_k_max(n));
    if let Some(Certificate::SmallPeriodicSets { sets }) = base_small.certificate() {
        let verdict = (|| -> Result<Verdict<T>, super::TheoremError> {
            let dynamics = FiniteSets(f);
            let kernels: Vec<PeriodicSetWitness<ClosedSet>> = sets
                .iter()
                .map(|w| {
                    let z = periodic_kernel(&w.y, w.k, f)?;
                    Ok(PeriodicSetWitness { z, k: BigUint::from(w.k) })
                })
                .collect::<Result<_, super::TheoremError>>()?;
            let mut rows = Vec::with_capacity(h.len());
            for state in 0..h.len() {
                let cells = h.state_set(state);
                let parts: Vec<_> = cells.iter().map(|x| kernels[x].clone()).collect();
                let combined = combine_witnesses(&dynamics, &parts, CombineMode::Product)?;
                let z = h.state_of(&combined.z).expect("same space");
                let k = crate::systems::finite::big_to_u64(&combined.k)
                    .ok_or_else(|| super::TheoremError::Invalid("k does not fit in 64 bits".into()))?;
                let open = ClosedSet::singleton(h.len(), state)?;
                rows.push((open, z, k));
            }
            Ok(Verdict::proved(Method::Exhaustive, Certificate::PeriodicInOpens { rows }))
        })()
        .unwrap_or_else(from_error);
        out.push(eval("pipeline:periodic-kernel+combine", Target::Hyperspace, Property::DensePeriodicPoints, verdict));
    }
    let hyper_small = finite::dense_small_periodic_sets::<T>(h, budget.finite_k_max(h.len()));
    if let Some(Certificate::SmallPeriodicSets { sets }) = hyper_small.certificate() {
        let verdict = (|| -> Result<Verdict<T>, super::TheoremError> {
            let mut base_sets = Vec::with_capacity(n);
            for x in 0..n {
                let state = h.state_of(&ClosedSet::singleton(n, x)?).expect("same space");
                let w = sets.iter().find(|w| w.open.len() == 1 && w.open.first() == state).expect("all singletons");
                let family = FamilyWitness { family: w.y.iter().map(|s| h.state_set(s)).collect(), k: w.k };
                base_sets.push(union_closure(&family, &ClosedSet::singleton(n, x)?, h)?);
            }
            Ok(Verdict::proved(Method::Exhaustive, Certificate::SmallPeriodicSets { sets: base_sets }))
        })()
        .unwrap_or_else(from_error);
        out.push(eval("pipeline:union-closure", Target::Base, Property::DenseSmallPeriodicSets, verdict));
    }
    out
}

fn shift_sides<T: Scalar>(s: ShiftSystem, budget: Budget) -> Sides<T> {
    let infinite = shift_is_infinite(&s);
    let hypothesis = Hypothesis {
        infinite_space: infinite,
        note: if infinite {
            "X is infinite".into()
        } else {
            "X is a finite shift space: the infinite-space hypothesis is unmet".into()
        },
    };
    let base = base_checker(System::Shift(s.clone()), budget.clone());
    let level = pick_level(&s, budget.level, MAX_PERIODIC_CYLINDERS);
    let horizon = budget.shift_horizon(s.size(), level);
    let p_max = budget.n_max.unwrap_or_else(|| s.allowed_words(level).map_or(1, |w| w.len() as u64));
    let vietoris_route = format!("bounded-vietoris:level-{level}");
    let s1 = s.clone();
    let hyper = move |p: Property| -> (String, Verdict<T>) {
        let v = match p {
            Property::Transitive => vietoris_transitive_bounded(&s1, level, horizon),
            Property::TotallyTransitive => vietoris_totally_transitive_bounded(&s1, level, horizon, p_max),
            Property::WeaklyMixing => vietoris_weakly_mixing_bounded(&s1, level, horizon),
            Property::DensePeriodicPoints | Property::DenseSmallPeriodicSets => {
                vietoris_periodic_dense_bounded(&s1, level)
            }
            Property::TopologicallyExact => {
                let b = shift::topologically_exact(&s1);
                return (
                    "reduction:exactness".into(),
                    transfer(Property::TopologicallyExact, &b, "exactness-lifts", Some("exactness-descends")),
                );
            }
            composite => unreachable!("composite {composite}"),
        };
        (vietoris_route.clone(), v.unwrap_or_else(from_error))
    };
    let s2 = s.clone();
    let cross = move |p: Property| -> Vec<(String, Verdict<T>)> {
        let wm = shift::weakly_mixing::<T>(&s2);
        match p {
            Property::Transitive | Property::TotallyTransitive | Property::WeaklyMixing => vec![(
                "reduction:weak-mixing".into(),
                transfer(Property::WeaklyMixing, &wm, "weak-mixing-lifts", Some("weak-mixing-descends")),
            )],
            Property::DensePeriodicPoints => {
                let dpp = shift::dense_periodic_points::<T>(&s2);
                let v = match dpp.status() {
                    // a cylinder off every cycle carries no periodic closed set either
                    Status::Refuted => dpp,
                    _ => transfer(Property::DensePeriodicPoints, &dpp, "periodic-points-lift", None),
                };
                vec![("reduction:periodic-points".into(), v)]
            }
            _ => vec![],
        }
    };
    Sides {
        hypothesis,
        base,
        hyper: Box::new(hyper),
        hyper_cross: Box::new(cross),
        witnesses: Box::new(Vec::new),
    }
}

fn pl_sides<T: Scalar>(f: PlSystem<T>, budget: Budget) -> Sides<T> {
    let hypothesis = Hypothesis { infinite_space: true, note: "X = [0, 1] is infinite".into() };
    let base = base_checker(System::Pl(f.clone()), budget.clone());
    let (depth, horizon) = (budget.depth.min(MAX_PL_HYPER_DEPTH), budget.pl_horizon());
    let b = budget.clone();
    let hyper = move |p: Property| -> (String, Verdict<T>) {
        match p {
            Property::Transitive | Property::TotallyTransitive | Property::WeaklyMixing => {
                let wm = pl::check(&f, Property::WeaklyMixing, &b);
                ("reduction:weak-mixing".into(), transfer(Property::WeaklyMixing, &wm, "weak-mixing-lifts", None))
            }
            Property::TopologicallyExact => {
                let ex = pl::check(&f, Property::TopologicallyExact, &b);
                ("reduction:exactness".into(), transfer(Property::TopologicallyExact, &ex, "exactness-lifts", None))
            }
            Property::DensePeriodicPoints | Property::DenseSmallPeriodicSets => {
                (format!("pipeline:cells-depth-{depth}"), pl_periodic_sets(&f, depth, horizon))
            }
            composite => unreachable!("composite {composite}"),
        }
    };
    Sides {
        hypothesis,
        base,
        hyper: Box::new(hyper),
        hyper_cross: Box::new(|_| vec![]),
        witnesses: Box::new(Vec::new),
    }
}

/// A periodic finite set in every basic open built from dyadic cells: one
/// exact periodic point per cell, combined with the product of periods.
pub fn pl_periodic_sets<T: Scalar>(f: &PlSystem<T>, depth: u32, horizon: u64) -> Verdict<T> {
    let points = match pl::periodic_points(f, depth, horizon) {
        Ok(p) => p,
        Err(note) => return Verdict::unknown(Method::BoundedSearch, note),
    };
    let cells = dyadic_cells::<T>(depth).len();
    let sets = PlSets { map: f, return_cap: 1 << 12 };
    let mut witnesses = Vec::new();
    for mask in 1u64..1 << cells {
        let open: Vec<u64> = (0..cells as u64).filter(|&i| mask >> i & 1 == 1).collect();
        let parts: Vec<PeriodicSetWitness<PlPoints<T>>> = open
            .iter()
            .map(|&i| {
                let p = &points[i as usize];
                PeriodicSetWitness { z: PlPoints::new(vec![p.x.clone()]), k: BigUint::from(p.period) }
            })
            .collect();
        match combine_witnesses(&sets, &parts, CombineMode::Product) {
            Ok(witness) => witnesses.push(CellOpenWitness { open, witness }),
            Err(e) => return from_error(e),
        }
    }
    Verdict::proved(Method::BoundedSearch, Certificate::CellVietorisPeriodicSets { depth, witnesses })
}

/// Re-validates every verdict in a report against the system it talks
/// about; returns how many decided verdicts were checked.
pub fn validate_report<T: Scalar>(
    report: &EquivalenceReport<T>,
    sys: &System<T>,
    budget: &Budget,
) -> Result<usize, CertificateError> {
    let hyper = finite_hyperspace(sys, budget);
    let all = report
        .conditions
        .iter()
        .flat_map(|c| std::iter::once(&c.primary).chain(&c.cross_checks))
        .chain(&report.witnesses);
    let mut checked = 0;
    for e in all {
        checked += validate_evaluation_with(e, sys, hyper.as_ref())?;
    }
    Ok(checked)
}

/// Re-validates one evaluation; returns 1 when its verdict is decided.
pub fn validate_evaluation<T: Scalar>(
    e: &Evaluation<T>,
    sys: &System<T>,
    budget: &Budget,
) -> Result<usize, CertificateError> {
    validate_evaluation_with(e, sys, finite_hyperspace(sys, budget).as_ref())
}

fn finite_hyperspace<T: Scalar>(sys: &System<T>, budget: &Budget) -> Option<HyperSystem<T>> {
    match sys {
        System::Finite(f) => powerset_hyperspace(f, budget.cap).ok(),
        _ => None,
    }
}

fn validate_evaluation_with<T: Scalar>(
    e: &Evaluation<T>,
    sys: &System<T>,
    hyper: Option<&HyperSystem<T>>,
) -> Result<usize, CertificateError> {
    let decided = e.verdict.status().is_decided();
    let target = match (e.target, sys) {
        (Target::Base, s) => s.as_ref(),
        (Target::Hyperspace, System::Finite(_)) => match hyper {
            Some(h) => SystemRef::Finite(h),
            None if decided => {
                return Err(CertificateError("decided hyperspace verdict beyond the powerset cap".into()));
            }
            None => return Ok(0),
        },
        (Target::Hyperspace, System::Shift(s)) => SystemRef::ShiftHyper(s),
        (Target::Hyperspace, System::Pl(p)) => SystemRef::PlHyper(p),
    };
    validate_verdict(&e.verdict, e.property, target)
        .map_err(|err| CertificateError(format!("{} via {}: {}", e.property, e.route, err.0)))?;
    Ok(usize::from(decided))
}
