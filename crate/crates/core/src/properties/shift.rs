//! Decision procedures for vertex shifts, by reduction to the transition graph.
//!
//! Transitivity is strong connectivity. Total transitivity, weak mixing and
//! exactness all coincide with primitivity for essential vertex shifts; they
//! are decided here by three different routes (cycle gcd, power positivity,
//! exact-step reach sets) so that their agreement is a real check.

use std::collections::BTreeSet;

use num_integer::Integer;

use super::certificate::{Certificate, CylinderPeriodicWitness};
use super::verdict::{Method, Verdict};
use super::{Budget, Property};
use crate::hyperspace::cylinder_reach;
use crate::systems::graph::{bfs_levels, shortest_nonempty_path};
use crate::systems::{PeriodicPoint, ShiftSystem, Word};
use crate::theorems::pipeline::find_periodic_point_in_cylinder;

/// Symbols reachable from `a` by walks of length at least one.
fn reach_from(sft: &ShiftSystem, a: usize) -> Vec<bool> {
    let mut seen = vec![false; sft.size()];
    let mut stack: Vec<usize> = sft.successors(a).collect();
    for &b in &stack {
        seen[b] = true;
    }
    while let Some(v) = stack.pop() {
        for w in sft.successors(v) {
            if !seen[w] {
                seen[w] = true;
                stack.push(w);
            }
        }
    }
    seen
}

fn unreachable_pair(sft: &ShiftSystem) -> Option<(usize, usize)> {
    (0..sft.size()).find_map(|a| reach_from(sft, a).iter().position(|&r| !r).map(|b| (a, b)))
}

/// A closed walk through every symbol, from shortest paths `0 -> 1 -> ... -> 0`.
fn covering_walk(sft: &ShiftSystem) -> Word {
    let adj = sft.adjacency();
    let m = sft.size();
    let mut walk = vec![0];
    for target in (1..m).chain([0]) {
        let from = *walk.last().expect("nonempty");
        let path = shortest_nonempty_path(&adj, from, target).expect("irreducible");
        walk.extend_from_slice(&path[1..]);
    }
    walk
}

/// Period of an irreducible graph, with a class index (BFS level mod period) per symbol.
fn period_and_classes(sft: &ShiftSystem) -> (u64, Vec<u64>) {
    let adj = sft.adjacency();
    let level = bfs_levels(&adj, 0);
    let mut g = 0u64;
    for (u, succ) in adj.iter().enumerate() {
        for &v in succ {
            g = g.gcd(&((level[u] + 1).abs_diff(level[v]) as u64));
        }
    }
    let classes = level.iter().map(|&l| l as u64 % g).collect();
    (g, classes)
}

pub fn transitive<T>(sft: &ShiftSystem) -> Verdict<T> {
    match unreachable_pair(sft) {
        Some((from, to)) => Verdict::refuted(Method::GraphReduction, Certificate::SymbolUnreachable { from, to }),
        None => Verdict::proved(Method::GraphReduction, Certificate::CoveringWalk { walk: covering_walk(sft) }),
    }
}

/// Closed walks `0 -> u -> v -> 0` through single edges, kept while they
/// lower the gcd of lengths, until it reaches 1.
fn aperiodic_cycles(sft: &ShiftSystem) -> Vec<Word> {
    let adj = sft.adjacency();
    let mut cycles = Vec::new();
    let mut g = 0usize;
    for u in 0..sft.size() {
        for v in sft.successors(u) {
            let mut walk = if u == 0 { vec![0] } else { shortest_nonempty_path(&adj, 0, u).expect("irreducible") };
            walk.push(v);
            if v != 0 {
                let back = shortest_nonempty_path(&adj, v, 0).expect("irreducible");
                walk.extend_from_slice(&back[1..]);
            }
            let len = walk.len() - 1;
            if g.gcd(&len) != g {
                g = g.gcd(&len);
                cycles.push(walk);
                if g == 1 {
                    return cycles;
                }
            }
        }
    }
    cycles
}

/// Irreducible with period 1, witnessed by cycles whose lengths have gcd 1.
pub fn totally_transitive<T>(sft: &ShiftSystem) -> Verdict<T> {
    if let Some((from, to)) = unreachable_pair(sft) {
        return Verdict::refuted(Method::GraphReduction, Certificate::SymbolUnreachable { from, to });
    }
    let (period, classes) = period_and_classes(sft);
    if period == 1 {
        let walk = covering_walk(sft);
        return Verdict::proved(Method::GraphReduction, Certificate::AperiodicCover { walk, cycles: aperiodic_cycles(sft) });
    }
    let to = classes.iter().position(|&c| c != 0).expect("period > 1 has several classes");
    Verdict::refuted(Method::GraphReduction, Certificate::CyclicClasses { period, from: 0, to })
}

/// Primitivity by positivity of some power up to the bound `(m - 1)^2 + 1`.
pub fn weakly_mixing<T>(sft: &ShiftSystem) -> Verdict<T> {
    let m = sft.size();
    let bound = (m as u64 - 1).pow(2) + 1;
    let mut power: Vec<Vec<bool>> = sft.matrix().to_vec();
    for e in 1..=bound {
        if power.iter().flatten().all(|&b| b) {
            return Verdict::proved(Method::GraphReduction, Certificate::PositivePower { exponent: e });
        }
        power = crate::systems::graph::bool_product(&power, sft.matrix());
    }
    if let Some((from, to)) = unreachable_pair(sft) {
        return Verdict::refuted(Method::GraphReduction, Certificate::SymbolUnreachable { from, to });
    }
    // irreducible but periodic: the class difference is invariant on the product graph
    let (_, classes) = period_and_classes(sft);
    let v = classes.iter().position(|&c| c != 0).expect("periodic graph has several classes");
    Verdict::refuted(Method::GraphReduction, Certificate::ProductUnreachable { from: (0, 0), to: (0, v) })
}

/// Every edge lies on a cycle exactly when every allowed word does.
fn word_off_cycle(sft: &ShiftSystem) -> Option<Word> {
    for a in 0..sft.size() {
        if !reach_from(sft, a)[a] {
            return Some(vec![a]);
        }
    }
    for a in 0..sft.size() {
        for b in sft.successors(a) {
            if !reach_from(sft, b)[a] {
                return Some(vec![a, b]);
            }
        }
    }
    None
}

fn witness_words(sft: &ShiftSystem) -> Vec<Word> {
    let mut words = sft.allowed_words(1).expect("positive length");
    words.extend(sft.allowed_words(2).expect("positive length"));
    words
}

pub fn dense_periodic_points<T>(sft: &ShiftSystem) -> Verdict<T> {
    if let Some(word) = word_off_cycle(sft) {
        return Verdict::refuted(Method::GraphReduction, Certificate::WordOffCycle { word });
    }
    let entries = witness_words(sft)
        .into_iter()
        .map(|u| {
            let (p, _) = find_periodic_point_in_cylinder(sft, &u).expect("word on a cycle");
            (u, p)
        })
        .collect();
    Verdict::proved(Method::GraphReduction, Certificate::CylinderCycles { entries })
}

/// `Y = {p}` for a periodic point `p` in each cylinder, with `k` its period.
pub fn dense_small_periodic_sets<T>(sft: &ShiftSystem) -> Verdict<T> {
    if let Some(word) = word_off_cycle(sft) {
        return Verdict::refuted(Method::GraphReduction, Certificate::WordOffCycle { word });
    }
    let entries = witness_words(sft)
        .into_iter()
        .map(|u| {
            let (point, k) = find_periodic_point_in_cylinder(sft, &u).expect("word on a cycle");
            CylinderPeriodicWitness { cylinder: u, point, k }
        })
        .collect();
    Verdict::proved(Method::GraphReduction, Certificate::CylinderSmallPeriodic { entries })
}

fn step_set(sft: &ShiftSystem, set: &[bool]) -> Vec<bool> {
    let mut out = vec![false; sft.size()];
    for a in (0..sft.size()).filter(|&a| set[a]) {
        for b in sft.successors(a) {
            out[b] = true;
        }
    }
    out
}

/// `σ^n [a] = X` exactly when every symbol is reachable from `a` in exactly
/// `n` steps; the reach sets are iterated until they fill up or repeat.
pub fn topologically_exact<T>(sft: &ShiftSystem) -> Verdict<T> {
    let m = sft.size();
    let mut steps = Vec::with_capacity(m);
    for a in 0..m {
        let mut seen = BTreeSet::new();
        let mut cur = vec![false; m];
        cur[a] = true;
        let mut n = 0u64;
        loop {
            cur = step_set(sft, &cur);
            n += 1;
            if cur.iter().all(|&b| b) {
                steps.push((a, n));
                break;
            }
            if !seen.insert(cur.clone()) {
                return Verdict::refuted(Method::GraphReduction, Certificate::ReachSetsCycle { symbol: a });
            }
        }
    }
    Verdict::proved(Method::GraphReduction, Certificate::ExactSteps { steps })
}

/// Cross-check of exactness at cylinder level `ℓ`: for every allowed word
/// `u`, the smallest `n ≤ horizon` with `σ^n [u]` meeting (hence covering)
/// every level-`ℓ` cylinder.
pub fn exact_at_level<T>(sft: &ShiftSystem, level: usize, horizon: u64) -> Verdict<T> {
    let words = match sft.allowed_words(level) {
        Ok(w) => w,
        Err(e) => return Verdict::unknown(Method::BoundedSearch, e.to_string()),
    };
    let mut steps = Vec::with_capacity(words.len());
    for u in &words {
        let found = (1..=horizon).find(|&n| {
            words.iter().all(|v| cylinder_reach(sft, u, v, n as usize).expect("allowed words of equal length"))
        });
        match found {
            Some(n) => steps.push((u.clone(), n)),
            None => {
                return Verdict::unknown(
                    Method::BoundedSearch,
                    format!("[{}] does not cover within {horizon} steps", sft.format_word(u)),
                )
            }
        }
    }
    Verdict::proved(Method::BoundedSearch, Certificate::CylinderExactSteps { level, steps })
}

pub fn check<T>(sft: &ShiftSystem, property: Property, _budget: &Budget) -> Verdict<T> {
    match property {
        Property::Transitive => transitive(sft),
        Property::TotallyTransitive => totally_transitive(sft),
        Property::WeaklyMixing => weakly_mixing(sft),
        Property::DensePeriodicPoints => dense_periodic_points(sft),
        Property::DenseSmallPeriodicSets => dense_small_periodic_sets(sft),
        Property::TopologicallyExact => topologically_exact(sft),
        composite => unreachable!("composite {composite} is split before dispatch"),
    }
}

/// The periodic point returned for cylinder `u` in a proof, for display.
pub fn periodic_point_in(sft: &ShiftSystem, u: &[usize]) -> Option<PeriodicPoint> {
    find_periodic_point_in_cylinder(sft, u).ok().map(|(p, _)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::certificate::{validate_verdict, SystemRef};
    use crate::properties::Status;
    use crate::Rational;

    fn run(sft: &ShiftSystem, property: Property) -> Verdict<Rational> {
        let v = check(sft, property, &Budget::default());
        validate_verdict(&v, property, SystemRef::Shift(sft)).unwrap();
        v
    }

    #[test]
    fn golden_mean_examples() {
        let g = ShiftSystem::from_rows(&["11", "10"]).unwrap();
        for p in Property::ATOMIC {
            assert_eq!(run(&g, p).status(), Status::Proved, "{p}");
        }
        assert_eq!(run(&g, Property::WeaklyMixing).certificate(), Some(&Certificate::PositivePower { exponent: 2 }));
        let Some(Certificate::CylinderSmallPeriodic { entries }) = run(&g, Property::DenseSmallPeriodicSets).certificate().cloned()
        else {
            panic!()
        };
        let one = entries.iter().find(|e| e.cylinder == vec![1]).unwrap();
        assert_eq!((one.point.word(), one.k), (&[1, 0][..], 2));
    }

    #[test]
    fn full_shift_examples() {
        let f = ShiftSystem::full(2);
        assert_eq!(run(&f, Property::TotallyTransitive).status(), Status::Proved);
        assert_eq!(run(&f, Property::WeaklyMixing).certificate(), Some(&Certificate::PositivePower { exponent: 1 }));
        assert_eq!(
            run(&f, Property::TopologicallyExact).certificate(),
            Some(&Certificate::ExactSteps { steps: vec![(0, 1), (1, 1)] })
        );
        let lvl: Verdict<Rational> = exact_at_level(&f, 3, 10);
        validate_verdict(&lvl, Property::TopologicallyExact, SystemRef::Shift(&f)).unwrap();
    }

    #[test]
    fn period_two_and_reducible() {
        let p2 = ShiftSystem::from_rows(&["01", "10"]).unwrap();
        assert_eq!(run(&p2, Property::Transitive).status(), Status::Proved);
        for p in [Property::TotallyTransitive, Property::WeaklyMixing, Property::TopologicallyExact] {
            assert_eq!(run(&p2, p).status(), Status::Refuted, "{p}");
        }
        assert_eq!(run(&p2, Property::DensePeriodicPoints).status(), Status::Proved);

        let reducible = ShiftSystem::from_rows(&["11", "01"]).unwrap();
        for p in Property::ATOMIC {
            if p != Property::DensePeriodicPoints && p != Property::DenseSmallPeriodicSets {
                assert_eq!(run(&reducible, p).status(), Status::Refuted, "{p}");
            }
        }
        assert_eq!(
            run(&reducible, Property::DensePeriodicPoints).certificate(),
            Some(&Certificate::WordOffCycle { word: vec![0, 1] })
        );
    }
}
