//! Continuous piecewise-linear self-maps of `[0, 1]` with exact breakpoints.

use serde::{Deserialize, Serialize};

use super::SystemError;
use crate::scalar::{as_string, max_of, min_of, Scalar};

/// A closed interval `[lo, hi]`; `lo == hi` is a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Interval<T> {
    #[serde(with = "as_string")]
    pub lo: T,
    #[serde(with = "as_string")]
    pub hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Self {
        debug_assert!(lo <= hi);
        Interval { lo, hi }
    }

    pub fn point(x: T) -> Self {
        Interval { lo: x.clone(), hi: x }
    }

    pub fn unit() -> Self {
        Interval { lo: T::zero(), hi: T::one() }
    }

    /// Cell `j` of the dyadic partition of `[0, 1]` at the given depth.
    pub fn dyadic(depth: u32, j: u64) -> Self {
        let den = T::from_u64(1u64 << depth).expect("dyadic denominator");
        let lo = T::from_u64(j).expect("dyadic numerator") / den.clone();
        let hi = T::from_u64(j + 1).expect("dyadic numerator") / den;
        Interval { lo, hi }
    }

    pub fn width(&self) -> T {
        self.hi.clone() - self.lo.clone()
    }

    pub fn contains(&self, x: &T) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_interior(&self, x: &T) -> bool {
        self.lo < *x && *x < self.hi
    }

    pub fn includes(&self, other: &Interval<T>) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn is_unit(&self) -> bool {
        self.lo.is_zero() && self.hi.is_one()
    }

    /// Whether the interiors overlap.
    pub fn interiors_meet(&self, other: &Interval<T>) -> bool {
        max_of(self.lo.clone(), other.lo.clone()) < min_of(self.hi.clone(), other.hi.clone())
    }

    /// The closed middle half `[lo + w/4, hi - w/4]`, which sits inside the interior.
    pub fn middle_half(&self) -> Self {
        let quarter = self.width() / T::from_u64(4).expect("4");
        Interval { lo: self.lo.clone() + quarter.clone(), hi: self.hi.clone() - quarter }
    }
}

/// Finitely many disjoint closed intervals, sorted.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct IntervalUnion<T> {
    parts: Vec<Interval<T>>,
}

impl<T: Scalar> IntervalUnion<T> {
    /// Sorts and merges overlapping or touching intervals.
    pub fn normalized(mut parts: Vec<Interval<T>>) -> Self {
        parts.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("comparable endpoints"));
        let mut merged: Vec<Interval<T>> = Vec::with_capacity(parts.len());
        for part in parts {
            match merged.last_mut() {
                Some(last) if part.lo <= last.hi => {
                    if part.hi > last.hi {
                        last.hi = part.hi;
                    }
                }
                _ => merged.push(part),
            }
        }
        IntervalUnion { parts: merged }
    }

    pub fn parts(&self) -> &[Interval<T>] {
        &self.parts
    }

    /// The single interval, when the union is connected.
    pub fn as_interval(&self) -> Option<&Interval<T>> {
        match self.parts.as_slice() {
            [one] => Some(one),
            _ => None,
        }
    }
}

/// An affine map `x -> slope * x + offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Affine<T> {
    pub slope: T,
    pub offset: T,
}

impl<T: Scalar> Affine<T> {
    pub fn apply(&self, x: &T) -> T {
        self.slope.clone() * x.clone() + self.offset.clone()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlSystem<T> {
    breakpoints: Vec<T>,
    values: Vec<T>,
}

impl<T: Scalar> PlSystem<T> {
    pub fn new(breakpoints: Vec<T>, values: Vec<T>) -> Result<Self, SystemError> {
        if breakpoints.len() < 2 {
            return Err(SystemError::Pl("need at least two breakpoints".into()));
        }
        if breakpoints.len() != values.len() {
            return Err(SystemError::Pl(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        if !breakpoints[0].is_zero() || !breakpoints[breakpoints.len() - 1].is_one() {
            return Err(SystemError::Pl("breakpoints must start at 0 and end at 1".into()));
        }
        if breakpoints.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SystemError::Pl("breakpoints must be strictly increasing".into()));
        }
        if let Some(v) = values.iter().find(|v| v.is_negative_value() || **v > T::one()) {
            return Err(SystemError::Pl(format!("value {v} outside [0, 1]")));
        }
        Ok(PlSystem { breakpoints, values })
    }

    /// `x -> 1 - |2x - 1|`.
    pub fn tent() -> Self {
        Self::new(
            vec![T::zero(), T::from_ratio(1, 2), T::one()],
            vec![T::zero(), T::one(), T::zero()],
        )
        .expect("tent map is valid")
    }

    pub fn breakpoints(&self) -> &[T] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    fn pieces(&self) -> usize {
        self.breakpoints.len() - 1
    }

    /// The affine formula valid on piece `i`.
    pub fn piece_formula(&self, i: usize) -> Affine<T> {
        let (b0, b1) = (&self.breakpoints[i], &self.breakpoints[i + 1]);
        let (v0, v1) = (&self.values[i], &self.values[i + 1]);
        let slope = (v1.clone() - v0.clone()) / (b1.clone() - b0.clone());
        let offset = v0.clone() - slope.clone() * b0.clone();
        Affine { slope, offset }
    }

    fn piece_containing(&self, x: &T) -> usize {
        (0..self.pieces())
            .find(|&i| *x <= self.breakpoints[i + 1])
            .unwrap_or(self.pieces() - 1)
    }

    pub fn eval(&self, x: &T) -> T {
        self.piece_formula(self.piece_containing(x)).apply(x)
    }

    pub fn eval_iter(&self, x: &T, n: usize) -> T {
        (0..n).fold(x.clone(), |y, _| self.eval(&y))
    }

    fn check_domain(&self, j: &Interval<T>) -> Result<(), SystemError> {
        if j.lo > j.hi || j.lo.is_negative_value() || j.hi > T::one() {
            return Err(SystemError::OutsideDomain(j.lo.to_string(), j.hi.to_string()));
        }
        Ok(())
    }

    /// Exact image `f(J)`, assembled from the images of the monotone pieces.
    pub fn image_of_interval(&self, j: &Interval<T>) -> Result<IntervalUnion<T>, SystemError> {
        self.check_domain(j)?;
        let mut parts = Vec::new();
        for i in 0..self.pieces() {
            let lo = max_of(j.lo.clone(), self.breakpoints[i].clone());
            let hi = min_of(j.hi.clone(), self.breakpoints[i + 1].clone());
            if lo > hi {
                continue;
            }
            let (a, b) = (self.eval(&lo), self.eval(&hi));
            parts.push(if a <= b { Interval::new(a, b) } else { Interval::new(b, a) });
        }
        Ok(IntervalUnion::normalized(parts))
    }

    /// `f^n(J)` as a single interval (images of intervals stay connected).
    pub fn iterate_interval(&self, j: &Interval<T>, n: usize) -> Result<Interval<T>, SystemError> {
        let mut cur = j.clone();
        for _ in 0..n {
            let img = self.image_of_interval(&cur)?;
            cur = img.as_interval().cloned().expect("continuous image of an interval is an interval");
        }
        Ok(cur)
    }

    /// Steps until `f^n(J) = [0, 1]`, searching `1..=horizon`.
    pub fn steps_to_cover(&self, j: &Interval<T>, horizon: usize) -> Result<Option<usize>, SystemError> {
        let mut cur = j.clone();
        for n in 1..=horizon {
            cur = self.iterate_interval(&cur, 1)?;
            if cur.is_unit() {
                return Ok(Some(n));
            }
        }
        Ok(None)
    }

    /// Pieces of `f^n` restricted to `J`: subintervals on which `f^n` is affine.
    pub fn power_pieces(&self, j: &Interval<T>, n: usize) -> Result<Vec<(Interval<T>, Affine<T>)>, SystemError> {
        self.check_domain(j)?;
        let identity = Affine { slope: T::one(), offset: T::zero() };
        let mut pieces = vec![(j.clone(), identity)];
        for _ in 0..n {
            let mut next = Vec::new();
            for (dom, g) in pieces {
                // cut `dom` where g crosses an interior breakpoint of f
                let mut cuts = vec![dom.lo.clone()];
                if !g.slope.is_zero() {
                    let mut inner: Vec<T> = self.breakpoints[1..self.breakpoints.len() - 1]
                        .iter()
                        .map(|b| (b.clone() - g.offset.clone()) / g.slope.clone())
                        .filter(|x| dom.contains_interior(x))
                        .collect();
                    inner.sort_by(|a, b| a.partial_cmp(b).expect("comparable"));
                    cuts.extend(inner);
                }
                cuts.push(dom.hi.clone());
                for w in cuts.windows(2) {
                    let sub = Interval::new(w[0].clone(), w[1].clone());
                    let mid = (sub.lo.clone() + sub.hi.clone()) / T::from_u64(2).expect("2");
                    let f = self.piece_formula(self.piece_containing(&g.apply(&mid)));
                    let composed = Affine {
                        slope: f.slope.clone() * g.slope.clone(),
                        offset: f.slope.clone() * g.offset.clone() + f.offset.clone(),
                    };
                    next.push((sub, composed));
                }
            }
            pieces = next;
        }
        Ok(pieces)
    }

    /// Smallest fixed point of `f^n` inside `J`, if any.
    pub fn fixed_point_of_power(&self, j: &Interval<T>, n: usize) -> Result<Option<T>, SystemError> {
        let mut best: Option<T> = None;
        for (dom, g) in self.power_pieces(j, n)? {
            let candidate = if g.slope.is_one() {
                g.offset.is_zero().then(|| dom.lo.clone())
            } else {
                let x = g.offset.clone() / (T::one() - g.slope.clone());
                dom.contains(&x).then_some(x)
            };
            if let Some(x) = candidate {
                if best.as_ref().is_none_or(|b| x < *b) {
                    best = Some(x);
                }
            }
        }
        Ok(best)
    }
}
