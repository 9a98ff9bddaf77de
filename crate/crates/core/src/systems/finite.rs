//! Finite systems: a finite metric space with a total self-map.

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use super::SystemError;
use crate::metric::{ClosedSet, FinitePointSpace};
use crate::scalar::Scalar;

/// Anything that is a self-map of `0..size()`. The discrete topology makes
/// continuity automatic, so the checkers only ever look at the map.
pub trait FiniteDynamics {
    fn size(&self) -> usize;
    fn step(&self, point: usize) -> usize;

    fn label(&self, point: usize) -> String {
        point.to_string()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FiniteSystem<T> {
    space: FinitePointSpace<T>,
    map: Vec<usize>,
}

impl<T: Scalar> FiniteSystem<T> {
    pub fn new(space: FinitePointSpace<T>, map: Vec<usize>) -> Result<Self, SystemError> {
        let n = space.len();
        if map.len() < n {
            return Err(SystemError::MissingEntry { point: map.len() });
        }
        if map.len() > n {
            return Err(SystemError::TableTooLong { expected: n, found: map.len() });
        }
        if let Some((point, &target)) = map.iter().enumerate().find(|(_, &t)| t >= n) {
            return Err(SystemError::OutOfRange { point, target, size: n });
        }
        Ok(FiniteSystem { space, map })
    }

    /// A self-map on `map.len()` points with the discrete metric.
    pub fn discrete(map: Vec<usize>) -> Result<Self, SystemError> {
        let space = FinitePointSpace::discrete(map.len())?;
        Self::new(space, map)
    }
}

impl<T> FiniteSystem<T> {
    pub fn space(&self) -> &FinitePointSpace<T> {
        &self.space
    }

    pub fn map_table(&self) -> &[usize] {
        &self.map
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

impl<T> FiniteDynamics for FiniteSystem<T> {
    fn size(&self) -> usize {
        self.map.len()
    }

    fn step(&self, point: usize) -> usize {
        self.map[point]
    }

    fn label(&self, point: usize) -> String {
        self.space.labels()[point].clone()
    }
}

impl FiniteDynamics for [usize] {
    fn size(&self) -> usize {
        self.len()
    }

    fn step(&self, point: usize) -> usize {
        self[point]
    }
}

impl FiniteDynamics for Vec<usize> {
    fn size(&self) -> usize {
        self.len()
    }

    fn step(&self, point: usize) -> usize {
        self[point]
    }
}

pub fn table<D: FiniteDynamics + ?Sized>(sys: &D) -> Vec<usize> {
    (0..sys.size()).map(|x| sys.step(x)).collect()
}

fn compose(outer: &[usize], inner: &[usize]) -> Vec<usize> {
    inner.iter().map(|&x| outer[x]).collect()
}

/// Table of `T^k` by repeated squaring.
pub fn power_table<D: FiniteDynamics + ?Sized>(sys: &D, k: u64) -> Vec<usize> {
    power_table_big(sys, &BigUint::from(k))
}

pub fn power_table_big<D: FiniteDynamics + ?Sized>(sys: &D, k: &BigUint) -> Vec<usize> {
    let mut result: Vec<usize> = (0..sys.size()).collect();
    let mut base = table(sys);
    for bit in 0..k.bits() {
        if k.bit(bit) {
            result = compose(&base, &result);
        }
        base = compose(&base, &base);
    }
    result
}

/// Pointwise image of a set.
pub fn image_of<D: FiniteDynamics + ?Sized>(sys: &D, set: &ClosedSet) -> ClosedSet {
    ClosedSet::new(set.universe(), set.iter().map(|x| sys.step(x))).expect("image of a nonempty set")
}

pub fn image_under(table: &[usize], set: &ClosedSet) -> ClosedSet {
    image_of(table, set)
}

/// Least period of `x`, or `None` if `x` never returns.
pub fn least_period<D: FiniteDynamics + ?Sized>(sys: &D, x: usize) -> Option<usize> {
    let mut y = x;
    for k in 1..=sys.size() {
        y = sys.step(y);
        if y == x {
            return Some(k);
        }
    }
    None
}

/// Whether `to` appears among `T^n(from)`, n >= 1. The forward orbit is
/// walked until a state repeats, so the answer covers every n.
pub fn orbit_hits<D: FiniteDynamics + ?Sized>(sys: &D, from: usize, to: usize) -> bool {
    let mut seen = vec![false; sys.size()];
    let mut y = sys.step(from);
    while !seen[y] {
        if y == to {
            return true;
        }
        seen[y] = true;
        y = sys.step(y);
    }
    false
}

pub fn big_to_u64(k: &BigUint) -> Option<u64> {
    if k.is_zero() {
        return None;
    }
    k.to_u64()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Sys = FiniteSystem<BigRational>;

    #[test]
    fn construction_examples() {
        assert!(Sys::discrete(vec![0]).is_ok());
        assert!(Sys::discrete(vec![1, 2, 3, 0]).is_ok());
        let err = Sys::new(FinitePointSpace::discrete(4).unwrap(), vec![1, 2, 7, 0]).unwrap_err();
        assert_eq!(err, SystemError::OutOfRange { point: 2, target: 7, size: 4 });
        let err = Sys::new(FinitePointSpace::discrete(4).unwrap(), vec![1, 2]).unwrap_err();
        assert_eq!(err, SystemError::MissingEntry { point: 2 });
    }

    #[test]
    fn powers_and_periods() {
        let sys = Sys::discrete(vec![1, 2, 3, 0]).unwrap();
        assert_eq!(power_table(&sys, 4), vec![0, 1, 2, 3]);
        assert_eq!(power_table(&sys, 5), vec![1, 2, 3, 0]);
        assert_eq!(power_table_big(&sys, &BigUint::from(10u32).pow(20)), vec![0, 1, 2, 3]);
        assert_eq!(least_period(&sys, 2), Some(4));
        let tail = Sys::discrete(vec![1, 1]).unwrap();
        assert_eq!(least_period(&tail, 0), None);
        assert!(!orbit_hits(&tail, 0, 0));
        assert!(orbit_hits(&tail, 0, 1));
    }
}
