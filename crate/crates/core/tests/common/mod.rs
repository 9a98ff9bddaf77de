//! Helpers shared by the integration test targets.
#![allow(dead_code)]

use hyperdyn::metric::FinitePointSpace;
use hyperdyn::properties::System;
use hyperdyn::systems::{FiniteSystem, PlSystem, ShiftSystem};
use hyperdyn::Rational;
use num_bigint::BigInt;
use rand::Rng;

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Every self-map of `0..n`, in lexicographic order of the table.
pub fn all_maps(n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = n.pow(n as u32);
    (0..total).map(move |mut code| {
        (0..n)
            .map(|_| {
                let x = code % n;
                code /= n;
                x
            })
            .collect()
    })
}

/// Shortest-path metric of a complete graph with random positive rational weights.
pub fn random_metric(rng: &mut impl Rng, n: usize) -> FinitePointSpace<Rational> {
    let mut d = vec![vec![rational(0, 1); n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let w = rational(rng.gen_range(1..=20), rng.gen_range(1..=6));
            d[i][j] = w.clone();
            d[j][i] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = &d[i][k] + &d[k][j];
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    FinitePointSpace::from_rows(d).expect("shortest paths form a metric")
}

pub fn finite(map: &[usize]) -> System<Rational> {
    System::Finite(FiniteSystem::discrete(map.to_vec()).unwrap())
}

pub fn shift(rows: &[&str]) -> System<Rational> {
    System::Shift(ShiftSystem::from_rows(rows).unwrap())
}

pub fn tent() -> System<Rational> {
    System::Pl(PlSystem::tent())
}

/// The reference battery with the expected status of every equivalence condition.
pub fn battery() -> Vec<(&'static str, System<Rational>, bool)> {
    vec![
        ("singleton", finite(&[0]), true),
        ("identity-2", finite(&[0, 1]), false),
        ("cycle-4", finite(&[1, 2, 3, 0]), false),
        ("into-fixed", finite(&[1, 2, 2]), false),
        ("full-2", shift(&["11", "11"]), true),
        ("full-3", shift(&["111", "111", "111"]), true),
        ("golden-mean", shift(&["11", "10"]), true),
        ("period-2", shift(&["01", "10"]), false),
        ("primitive", shift(&["01", "11"]), true),
    ]
}
