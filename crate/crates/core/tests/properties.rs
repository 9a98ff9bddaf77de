//! Randomized invariants across the metric, system, hyperspace and checker layers.

mod common;

use hyperdyn::hyperspace::{cylinder_reach, induced_image};
use hyperdyn::metric::{hausdorff_distance, ClosedSet};
use hyperdyn::properties::certificate::{validate_verdict, SystemRef};
use hyperdyn::properties::finite::check_dynamics;
use hyperdyn::properties::oracle::{brute_force_oracle, OracleBounds};
use hyperdyn::properties::{self, shift, Budget, Property, Status, System, Verdict};
use hyperdyn::systems::{FiniteDynamics, FiniteSystem, Interval, PlSystem, ShiftSystem};
use hyperdyn::theorems::witness::{check_periodic_set, FiniteSets};
use hyperdyn::theorems::{combine_witnesses, periodic_kernel, CombineMode, PeriodicSetWitness};
use hyperdyn::Rational;
use num_bigint::BigUint;
use num_integer::Integer;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn map_strategy(max_n: usize) -> impl Strategy<Value = Vec<usize>> {
    (1..=max_n).prop_flat_map(|n| prop::collection::vec(0..n, n))
}

fn matrix_strategy(max_m: usize) -> impl Strategy<Value = Vec<Vec<bool>>> {
    (1..=max_m).prop_flat_map(|m| prop::collection::vec(prop::collection::vec(any::<bool>(), m), m))
}

fn shift_of(rows: &[Vec<bool>]) -> Option<ShiftSystem> {
    ShiftSystem::new((0..rows.len()).map(|i| i.to_string()).collect(), rows.to_vec()).ok()
}

/// Primitivity by explicit boolean powers up to the Wielandt bound.
fn primitive(sft: &ShiftSystem) -> bool {
    let m = sft.size();
    let a = sft.matrix();
    let mut p = a.to_vec();
    for _ in 0..(m - 1) * (m - 1) + 1 {
        if p.iter().all(|row| row.iter().all(|&x| x)) {
            return true;
        }
        p = (0..m).map(|i| (0..m).map(|j| (0..m).any(|k| p[i][k] && a[k][j])).collect()).collect();
    }
    p.iter().all(|row| row.iter().all(|&x| x))
}

fn rank(s: Status) -> u8 {
    match s {
        Status::Refuted => 0,
        Status::Unknown => 1,
        Status::Proved => 2,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn hausdorff_is_a_metric(seed in any::<u64>(), n in 1usize..=6, masks in prop::collection::vec(1u64..64, 3)) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let space = common::random_metric(&mut rng, n);
        let full = (1u64 << n) - 1;
        let sets: Vec<ClosedSet> = masks.iter().map(|m| ClosedSet::from_mask(n, (m & full).max(1)).unwrap()).collect();
        let d = |a: &ClosedSet, b: &ClosedSet| hausdorff_distance(a, b, &space).unwrap();
        let (a, b, c) = (&sets[0], &sets[1], &sets[2]);
        prop_assert_eq!(d(a, b), d(b, a));
        prop_assert_eq!(d(a, b) == common::rational(0, 1), a == b);
        prop_assert!(d(a, c) <= d(a, b) + d(b, c));
        // singletons recover the base metric
        let (x, y) = (a.first(), b.first());
        prop_assert_eq!(&d(&ClosedSet::singleton(n, x).unwrap(), &ClosedSet::singleton(n, y).unwrap()), space.dist(x, y));
    }

    #[test]
    fn induced_image_preserves_unions_and_order(map in map_strategy(8), a in 1u64..256, b in 1u64..256) {
        let n = map.len();
        let full = (1u64 << n) - 1;
        let sys = FiniteSystem::<Rational>::discrete(map).unwrap();
        let (a, b) = (ClosedSet::from_mask(n, (a & full).max(1)).unwrap(), ClosedSet::from_mask(n, (b & full).max(1)).unwrap());
        let union = a.union(&b).unwrap();
        let img = |s: &ClosedSet| induced_image(s, &sys).unwrap();
        prop_assert_eq!(img(&union), img(&a).union(&img(&b)).unwrap());
        prop_assert!(img(&a).is_subset(&img(&union)));
    }

    #[test]
    fn allowed_words_are_prefix_closed(rows in matrix_strategy(4), len in 1usize..5) {
        let Some(sft) = shift_of(&rows) else { return Ok(()) };
        let longer = sft.allowed_words(len + 1).unwrap();
        let shorter = sft.allowed_words(len).unwrap();
        for w in &longer {
            prop_assert!(shorter.contains(&w[..len].to_vec()));
            prop_assert!(shorter.contains(&w[1..].to_vec()));
        }
        // every allowed word extends, since trimmed shifts have no dead ends
        for w in &shorter {
            prop_assert!(longer.iter().any(|x| x[..len] == w[..]));
        }
    }

    #[test]
    fn cylinder_reach_is_monotone_in_the_matrix(
        rows in matrix_strategy(3), extra in (0usize..3, 0usize..3), n in 1usize..6, u in 0usize..3, v in 0usize..3,
    ) {
        let m = rows.len();
        let mut rows = rows;
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = true; // self loops keep every symbol alive
        }
        let small = shift_of(&rows).unwrap();
        rows[extra.0 % m][extra.1 % m] = true;
        let large = shift_of(&rows).unwrap();
        let (u, v) = ([u % m], [v % m]);
        if cylinder_reach(&small, &u, &v, n).unwrap() {
            prop_assert!(cylinder_reach(&large, &u, &v, n).unwrap());
        }
    }

    #[test]
    fn pl_images_are_monotone(values in prop::collection::vec(0i64..=6, 2..6), lo in 0i64..=12, hi in 0i64..=12, n in 1usize..4) {
        let pieces = values.len() - 1;
        let breakpoints = (0..=pieces).map(|i| common::rational(i as i64, pieces as i64)).collect();
        let f = PlSystem::new(breakpoints, values.iter().map(|&v| common::rational(v, 6)).collect()).unwrap();
        let (lo, hi) = (lo.min(hi), lo.max(hi));
        let inner = Interval::new(common::rational(lo, 12), common::rational(hi, 12));
        let unit = Interval::new(common::rational(0, 1), common::rational(1, 1));
        let small = f.iterate_interval(&inner, n).unwrap();
        prop_assert!(f.iterate_interval(&unit, n).unwrap().includes(&small));
        prop_assert!(small.contains(&f.eval_iter(&inner.lo, n)));
        prop_assert!(small.contains(&f.eval_iter(&inner.hi, n)));
    }

    #[test]
    fn periodic_kernel_is_periodic(map in map_strategy(8), seed_mask in 1u64..256, k in 1u64..5) {
        let n = map.len();
        let seed = ClosedSet::from_mask(n, (seed_mask & ((1 << n) - 1)).max(1)).unwrap();
        // the forward orbit of any set is forward invariant
        let mut y = seed.clone();
        loop {
            let next = y.union(&induced_image(&y, &FiniteSystem::<Rational>::discrete(map.clone()).unwrap()).unwrap()).unwrap();
            if next == y { break; }
            y = next;
        }
        let z = periodic_kernel(&y, k, &map).unwrap();
        prop_assert!(z.is_subset(&y));
        let w = PeriodicSetWitness { z, k: BigUint::from(k) };
        prop_assert!(check_periodic_set(&FiniteSets(&map), &w).is_ok());
    }

    #[test]
    fn combined_periods_multiply(map in map_strategy(8), parts in prop::collection::vec((0usize..8, 1u64..5), 1..4)) {
        let n = map.len();
        let dynamics = FiniteSets(&map);
        let full = ClosedSet::full(n).unwrap();
        let witnesses: Vec<PeriodicSetWitness<ClosedSet>> = parts
            .iter()
            .map(|&(_, k)| PeriodicSetWitness { z: periodic_kernel(&full, k, &map).unwrap(), k: BigUint::from(k) })
            .collect();
        let product = combine_witnesses(&dynamics, &witnesses, CombineMode::Product).unwrap();
        let lcm = combine_witnesses(&dynamics, &witnesses, CombineMode::Lcm).unwrap();
        prop_assert!(product.k.is_multiple_of(&lcm.k));
        prop_assert!(check_periodic_set(&dynamics, &product).is_ok());
        prop_assert!(check_periodic_set(&dynamics, &lcm).is_ok());
    }

    #[test]
    fn checkers_match_the_oracle_on_six_points(map in prop::collection::vec(0usize..6, 6)) {
        for p in Property::ATOMIC {
            let fast: Verdict<Rational> = check_dynamics(&map, p, &Budget::default());
            let slow: Verdict<Rational> = brute_force_oracle(&map, p, OracleBounds::for_size(6)).unwrap();
            prop_assert_eq!(fast.status(), slow.status(), "{:?} {}", map, p);
        }
    }

    #[test]
    fn implication_chain_on_finite_maps(map in map_strategy(6)) {
        let sys = common::finite(&map);
        let c = properties::classify(&sys, &Budget::default());
        let s = |p| rank(c.status(p).unwrap());
        prop_assert!(s(Property::TopologicallyExact) <= s(Property::WeaklyMixing));
        prop_assert!(s(Property::WeaklyMixing) <= s(Property::TotallyTransitive));
        prop_assert!(s(Property::TotallyTransitive) <= s(Property::Transitive));
        prop_assert_eq!(s(Property::DensePeriodicPoints), s(Property::DenseSmallPeriodicSets));
        for (p, v) in &c.verdicts {
            prop_assert!(validate_verdict(v, *p, sys.as_ref()).is_ok());
        }
    }

    #[test]
    fn f64_and_rational_backends_agree(map in map_strategy(6)) {
        let exact = common::finite(&map);
        let float = System::Finite(FiniteSystem::<f64>::discrete(map.clone()).unwrap());
        for p in Property::ALL {
            let a = properties::check(&exact, p, &Budget::default()).status();
            let b = properties::check(&float, p, &Budget::default()).status();
            prop_assert_eq!(a, b);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn shift_mixing_properties_coincide_with_primitivity(rows in matrix_strategy(4)) {
        let Some(sft) = shift_of(&rows) else { return Ok(()) };
        let tt: Verdict<Rational> = shift::totally_transitive(&sft);
        let wm: Verdict<Rational> = shift::weakly_mixing(&sft);
        let ex: Verdict<Rational> = shift::topologically_exact(&sft);
        let expected = if primitive(&sft) { Status::Proved } else { Status::Refuted };
        prop_assert_eq!(tt.status(), expected);
        prop_assert_eq!(wm.status(), expected);
        prop_assert_eq!(ex.status(), expected);
        let sys = SystemRef::Shift(&sft);
        prop_assert!(validate_verdict(&tt, Property::TotallyTransitive, sys).is_ok());
        prop_assert!(validate_verdict(&wm, Property::WeaklyMixing, sys).is_ok());
        prop_assert!(validate_verdict(&ex, Property::TopologicallyExact, sys).is_ok());
    }

    #[test]
    fn implication_chain_on_shifts(rows in matrix_strategy(4)) {
        let Some(sft) = shift_of(&rows) else { return Ok(()) };
        let sys = System::Shift(sft);
        let c = properties::classify::<Rational>(&sys, &Budget::default());
        let s = |p| rank(c.status(p).unwrap());
        prop_assert!(s(Property::TopologicallyExact) <= s(Property::WeaklyMixing));
        prop_assert!(s(Property::WeaklyMixing) <= s(Property::TotallyTransitive));
        prop_assert!(s(Property::TotallyTransitive) <= s(Property::Transitive));
        for (p, v) in &c.verdicts {
            prop_assert!(validate_verdict(v, *p, sys.as_ref()).is_ok(), "{}", p);
        }
    }
}

#[test]
fn finite_dynamics_helpers_agree_with_tables() {
    let map = vec![1, 2, 0, 0];
    assert_eq!((0..4).map(|x| map.step(x)).collect::<Vec<_>>(), map);
}
