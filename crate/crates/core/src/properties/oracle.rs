//! Definition-level evaluation on small finite systems: every nonempty
//! subset is an open set, and the existential searches run to the stated
//! bounds with no structural shortcut.

use thiserror::Error;

use super::certificate::{Certificate, SmallPeriodicWitness};
use super::verdict::{Method, Verdict};
use super::Property;
use crate::metric::ClosedSet;
use crate::systems::finite::{table, FiniteDynamics};

pub const ORACLE_MAX_POINTS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("the oracle handles at most {ORACLE_MAX_POINTS} points, got {0}")]
    TooLarge(usize),
    #[error("{0} is not an atomic property")]
    Composite(Property),
}

/// Bounds for the existential searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleBounds {
    pub n_max: u64,
    pub k_max: u64,
    pub horizon: u64,
}

impl OracleBounds {
    /// Every bound equal to the number of points.
    pub fn for_size(n: usize) -> Self {
        OracleBounds { n_max: n as u64, k_max: n as u64, horizon: n as u64 }
    }
}

struct Masks {
    n: usize,
    table: Vec<usize>,
}

impl Masks {
    fn all(&self) -> u64 {
        (1u64 << self.n) - 1
    }

    fn image(&self, set: u64) -> u64 {
        (0..self.n).filter(|&x| set >> x & 1 == 1).fold(0, |acc, x| acc | 1 << self.table[x])
    }

    fn image_power(&self, set: u64, k: u64) -> u64 {
        (0..k).fold(set, |s, _| self.image(s))
    }

    fn set(&self, mask: u64) -> ClosedSet {
        ClosedSet::from_mask(self.n, mask).expect("nonempty mask")
    }

    /// Smallest `n` in `1..=bound` with `T^{power n} U ∩ V ≠ ∅`.
    fn first_hit(&self, power: u64, u: u64, v: u64, bound: u64) -> Option<u64> {
        let mut cur = u;
        (1..=bound).find(|_| {
            cur = self.image_power(cur, power);
            cur & v != 0
        })
    }
}

pub fn brute_force_oracle<T>(
    sys: &dyn FiniteDynamics,
    property: Property,
    bounds: OracleBounds,
) -> Result<Verdict<T>, OracleError> {
    let n = sys.size();
    if n > ORACLE_MAX_POINTS {
        return Err(OracleError::TooLarge(n));
    }
    let m = Masks { n, table: table(sys) };
    let reach_bound = n as u64;
    Ok(match property {
        Property::Transitive => power_transitive(&m, 1, reach_bound).map_or_else(
            |(u, v)| refute(Certificate::SetsNeverMeet { power: 1, u: m.set(u), v: m.set(v) }),
            |rows| prove(Certificate::HitTable { power: 1, rows }),
        ),
        Property::TotallyTransitive => {
            let mut tables = Vec::new();
            for power in 1..=bounds.n_max {
                match power_transitive(&m, power, reach_bound) {
                    Ok(rows) => tables.push((power, rows)),
                    Err((u, v)) => {
                        return Ok(refute(Certificate::SetsNeverMeet { power, u: m.set(u), v: m.set(v) }));
                    }
                }
            }
            prove(Certificate::PowerHitTables { tables })
        }
        Property::WeaklyMixing => weakly_mixing(&m),
        Property::DensePeriodicPoints => {
            let mut rows = Vec::new();
            for u in 1..=m.all() {
                let found = (0..n)
                    .filter(|&x| u >> x & 1 == 1)
                    .find_map(|x| (1..=reach_bound).find(|&k| m.image_power(1 << x, k) == 1 << x).map(|k| (x, k)));
                match found {
                    Some((x, k)) => rows.push((m.set(u), x, k)),
                    None => return Ok(refute(Certificate::NoPeriodicPointIn { open: m.set(u) })),
                }
            }
            prove(Certificate::PeriodicInOpens { rows })
        }
        Property::DenseSmallPeriodicSets => {
            let k_bound = n as u64 * bounds.k_max;
            let mut sets = Vec::new();
            for u in 1..=m.all() {
                let found = (1..=k_bound).find_map(|k| {
                    submasks(u).find(|&y| m.image_power(y, k) & !y == 0).map(|y| (y, k))
                });
                match found {
                    Some((y, k)) => sets.push(SmallPeriodicWitness { open: m.set(u), y: m.set(y), k }),
                    None => return Ok(refute(Certificate::NoInvariantSubset { open: m.set(u), k_bound })),
                }
            }
            prove(Certificate::SmallPeriodicSets { sets })
        }
        Property::TopologicallyExact => {
            let mut opens = Vec::new();
            for u in 1..=m.all() {
                let mut cur = u;
                let found = (1..=bounds.horizon).find(|_| {
                    cur = m.image(cur);
                    cur == m.all()
                });
                match found {
                    Some(k) => opens.push((m.set(u), k)),
                    None => return Ok(refute(Certificate::NeverCovers { open: m.set(u) })),
                }
            }
            prove(Certificate::ExactCover { opens })
        }
        composite => return Err(OracleError::Composite(composite)),
    })
}

fn prove<T>(c: Certificate<T>) -> Verdict<T> {
    Verdict::proved(Method::Exhaustive, c)
}

fn refute<T>(c: Certificate<T>) -> Verdict<T> {
    Verdict::refuted(Method::Exhaustive, c)
}

/// Nonempty submasks of `u` in increasing numeric order.
fn submasks(u: u64) -> impl Iterator<Item = u64> {
    (1..=u).filter(move |y| y & !u == 0)
}

type Rows = Vec<(ClosedSet, ClosedSet, u64)>;

fn power_transitive(m: &Masks, power: u64, bound: u64) -> Result<Rows, (u64, u64)> {
    let mut rows = Vec::new();
    for u in 1..=m.all() {
        for v in 1..=m.all() {
            match m.first_hit(power, u, v, bound) {
                Some(k) => rows.push((m.set(u), m.set(v), k)),
                None => return Err((u, v)),
            }
        }
    }
    Ok(rows)
}

/// Transitivity of `T × T`, over rectangles `U1 × U2` and `V1 × V2`, with
/// `n` up to the size of the product space.
fn weakly_mixing<T>(m: &Masks) -> Verdict<T> {
    let bound = (m.n * m.n) as u64;
    let all = m.all();
    let mut rows = Vec::new();
    for u1 in 1..=all {
        for u2 in 1..=all {
            for v1 in 1..=all {
                for v2 in 1..=all {
                    let (mut a, mut b) = (u1, u2);
                    let found = (1..=bound).find(|_| {
                        a = m.image(a);
                        b = m.image(b);
                        a & v1 != 0 && b & v2 != 0
                    });
                    match found {
                        Some(k) => rows.push(([m.set(u1), m.set(u2), m.set(v1), m.set(v2)], k)),
                        None => {
                            return refute(Certificate::ProductNeverMeets {
                                u1: m.set(u1),
                                u2: m.set(u2),
                                v1: m.set(v1),
                                v2: m.set(v2),
                            })
                        }
                    }
                }
            }
        }
    }
    prove(Certificate::RectangleHitTable { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::certificate::{validate_verdict, SystemRef};
    use crate::properties::Status;
    use crate::Rational;

    fn oracle(map: &[usize], p: Property) -> Verdict<Rational> {
        let v = brute_force_oracle(&map.to_vec(), p, OracleBounds::for_size(map.len())).unwrap();
        validate_verdict(&v, p, SystemRef::Finite(&map.to_vec())).unwrap();
        v
    }

    #[test]
    fn examples() {
        assert_eq!(oracle(&[0, 1], Property::Transitive).status(), Status::Refuted);
        assert_eq!(oracle(&[1, 2, 3, 0], Property::DenseSmallPeriodicSets).status(), Status::Proved);
        assert_eq!(oracle(&[1, 2, 0], Property::WeaklyMixing).status(), Status::Refuted);
        for p in Property::ATOMIC {
            assert_eq!(oracle(&[0], p).status(), Status::Proved);
        }
    }

    #[test]
    fn size_cap() {
        let big: Vec<usize> = (0..7).collect();
        assert!(brute_force_oracle::<Rational>(&big, Property::Transitive, OracleBounds::for_size(7)).is_err());
    }
}
