//! `(K(X), T_K)` for a finite `X`: every nonempty subset is a state.

use super::HyperError;
use crate::metric::{hausdorff_distance, ClosedSet, FinitePointSpace};
use crate::scalar::Scalar;
use crate::systems::finite::{image_of, FiniteDynamics};
use crate::systems::FiniteSystem;

/// Largest base space enumerated by default.
pub const DEFAULT_CAP: usize = 16;

/// The hyperspace of a finite system. State `s` is the subset with bit mask
/// `s + 1`, so states are ordered by numeric mask value. Distances are
/// Hausdorff distances computed on demand.
#[derive(Debug, Clone)]
pub struct HyperSystem<T> {
    base: FiniteSystem<T>,
    images: Vec<usize>,
}

/// `T_K(C) = TC`.
pub fn induced_image<T>(set: &ClosedSet, sys: &FiniteSystem<T>) -> Result<ClosedSet, HyperError> {
    if set.universe() != sys.len() {
        return Err(crate::metric::MetricError::MismatchedSpaces { left: set.universe(), right: sys.len() }.into());
    }
    Ok(image_of(sys, set))
}

pub fn powerset_hyperspace<T: Scalar>(sys: &FiniteSystem<T>, cap: usize) -> Result<HyperSystem<T>, HyperError> {
    let n = sys.len();
    if n > cap || n > 30 {
        return Err(HyperError::CapExceeded { points: n, cap: cap.min(30) });
    }
    let full = 1usize << n;
    let mut image_mask = vec![0usize; full];
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        image_mask[mask] = image_mask[mask & (mask - 1)] | 1 << sys.step(low);
    }
    let images = image_mask[1..].iter().map(|&m| m - 1).collect();
    Ok(HyperSystem { base: sys.clone(), images })
}

impl<T: Scalar> HyperSystem<T> {
    pub fn base(&self) -> &FiniteSystem<T> {
        &self.base
    }

    pub fn len(&self) -> usize {
        self.images.len()
    }

    pub fn is_empty(&self) -> bool {
        self.images.is_empty()
    }

    pub fn state_set(&self, state: usize) -> ClosedSet {
        ClosedSet::from_mask(self.base.len(), state as u64 + 1).expect("valid state")
    }

    pub fn state_of(&self, set: &ClosedSet) -> Option<usize> {
        (set.universe() == self.base.len()).then(|| set.to_mask().expect("small universe") as usize - 1)
    }

    pub fn image(&self, state: usize) -> usize {
        self.images[state]
    }

    pub fn induced_map(&self) -> &[usize] {
        &self.images
    }

    pub fn distance(&self, a: usize, b: usize) -> T {
        hausdorff_distance(&self.state_set(a), &self.state_set(b), self.base.space()).expect("same space")
    }

    /// All pairwise Hausdorff distances, row-major over states. Directed
    /// distances are built by a subset recursion: for a fixed target `B`,
    /// `dir(A) = max(dir(A minus its lowest point), dist(lowest point, B))`.
    pub fn distance_table(&self) -> Vec<T> {
        let n = self.len();
        let points = self.base.len();
        let space = self.base.space();
        // directed[b * n + a] = max over x in A of min over y in B of d(x, y)
        let mut directed: Vec<T> = Vec::with_capacity(n * n);
        for b in 0..n {
            let target = self.state_set(b);
            let to_target: Vec<T> = (0..points)
                .map(|x| {
                    target
                        .iter()
                        .map(|y| space.dist(x, y))
                        .reduce(|m, d| if d < m { d } else { m })
                        .expect("nonempty")
                        .clone()
                })
                .collect();
            let row_start = directed.len();
            for a in 0..n {
                let mask = a + 1;
                let low = mask.trailing_zeros() as usize;
                let rest = mask & (mask - 1);
                let value = if rest == 0 {
                    to_target[low].clone()
                } else {
                    let prev = &directed[row_start + rest - 1];
                    if to_target[low] > *prev { to_target[low].clone() } else { prev.clone() }
                };
                directed.push(value);
            }
        }
        (0..n * n)
            .map(|i| {
                let (a, b) = (i / n, i % n);
                let (ab, ba) = (&directed[b * n + a], &directed[a * n + b]);
                if ab > ba { ab.clone() } else { ba.clone() }
            })
            .collect()
    }

    /// The hyperspace as an ordinary finite system with the Hausdorff metric.
    /// Quadratic in the number of states, so meant for small bases.
    pub fn to_finite_system(&self) -> FiniteSystem<T> {
        let labels = (0..self.len())
            .map(|s| {
                let members: Vec<String> = self.state_set(s).iter().map(|x| self.base.label(x)).collect();
                format!("{{{}}}", members.join(","))
            })
            .collect();
        let space = FinitePointSpace::from_trusted(labels, self.distance_table());
        FiniteSystem::new(space, self.images.clone()).expect("induced map is total")
    }
}

impl<T: Scalar> FiniteDynamics for HyperSystem<T> {
    fn size(&self) -> usize {
        self.images.len()
    }

    fn step(&self, point: usize) -> usize {
        self.images[point]
    }

    fn label(&self, point: usize) -> String {
        let members: Vec<String> = self.state_set(point).iter().map(|x| self.base.label(x)).collect();
        format!("{{{}}}", members.join(","))
    }
}
