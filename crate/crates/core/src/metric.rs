//! Finite metric spaces, their nonempty closed subsets, the Hausdorff
//! distance between them and Vietoris basic-open membership.
//!
//! On a finite space every subset is closed and open, so a closed set is just
//! a nonempty bit set over the point indices.

use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("malformed distance table: {0}")]
    Malformed(TableDefect),
    #[error("metric axiom violated: {0}")]
    Violation(AxiomViolation),
    #[error("closed sets must be nonempty")]
    EmptySet,
    #[error("point index {index} out of range for a space of {size} points")]
    OutOfRange { index: usize, size: usize },
    #[error("sets live in spaces of different sizes ({left} vs {right})")]
    MismatchedSpaces { left: usize, right: usize },
    #[error("a Vietoris open needs at least one cell")]
    NoCells,
}

/// Structural problems with the raw table, reported before any axiom is tested.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TableDefect {
    Empty,
    LabelCount { labels: usize, rows: usize },
    MissingEntry { row: usize, col: usize },
    ExtraEntry { row: usize },
    Negative { row: usize, col: usize },
}

impl fmt::Display for TableDefect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableDefect::Empty => write!(f, "no points"),
            TableDefect::LabelCount { labels, rows } => {
                write!(f, "{labels} labels for {rows} rows")
            }
            TableDefect::MissingEntry { row, col } => write!(f, "missing entry ({row},{col})"),
            TableDefect::ExtraEntry { row } => write!(f, "row {row} has too many entries"),
            TableDefect::Negative { row, col } => write!(f, "negative entry ({row},{col})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AxiomViolation {
    NonzeroSelfDistance { p: usize },
    ZeroBetweenDistinct { p: usize, q: usize },
    Asymmetric { p: usize, q: usize },
    Triangle { p: usize, q: usize, r: usize },
}

impl fmt::Display for AxiomViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomViolation::NonzeroSelfDistance { p } => write!(f, "d({p},{p}) != 0"),
            AxiomViolation::ZeroBetweenDistinct { p, q } => write!(f, "d({p},{q}) = 0"),
            AxiomViolation::Asymmetric { p, q } => write!(f, "d({p},{q}) != d({q},{p})"),
            AxiomViolation::Triangle { p, q, r } => {
                write!(f, "d({p},{r}) > d({p},{q}) + d({q},{r})")
            }
        }
    }
}

/// Outcome of [`check_metric_axioms`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricReport {
    Pass,
    Malformed(TableDefect),
    Violation(AxiomViolation),
}

impl MetricReport {
    pub fn is_pass(&self) -> bool {
        matches!(self, MetricReport::Pass)
    }
}

/// Validates a square distance table. Structural defects win over axiom
/// violations; among violations the first in (p, q, r) order is reported.
pub fn check_metric_axioms<T: Scalar>(rows: &[Vec<T>]) -> MetricReport {
    let n = rows.len();
    if n == 0 {
        return MetricReport::Malformed(TableDefect::Empty);
    }
    for (row, entries) in rows.iter().enumerate() {
        if entries.len() < n {
            return MetricReport::Malformed(TableDefect::MissingEntry { row, col: entries.len() });
        }
        if entries.len() > n {
            return MetricReport::Malformed(TableDefect::ExtraEntry { row });
        }
        if let Some(col) = entries.iter().position(|d| d.is_negative_value()) {
            return MetricReport::Malformed(TableDefect::Negative { row, col });
        }
    }
    for p in 0..n {
        if !rows[p][p].is_zero() {
            return MetricReport::Violation(AxiomViolation::NonzeroSelfDistance { p });
        }
        for q in 0..n {
            if p != q && rows[p][q].is_zero() {
                return MetricReport::Violation(AxiomViolation::ZeroBetweenDistinct { p, q });
            }
            if rows[p][q] != rows[q][p] {
                return MetricReport::Violation(AxiomViolation::Asymmetric { p, q });
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                if rows[p][r] > rows[p][q].clone() + rows[q][r].clone() {
                    return MetricReport::Violation(AxiomViolation::Triangle { p, q, r });
                }
            }
        }
    }
    MetricReport::Pass
}

/// A finite metric space with an exact distance table.
#[derive(Debug, Clone)]
pub struct FinitePointSpace<T> {
    labels: Vec<String>,
    dist: Vec<T>,
    /// Position of each entry in the sorted order of distinct distances,
    /// built on first use so comparisons avoid scalar arithmetic.
    ranks: OnceLock<Vec<u32>>,
}

impl<T: PartialEq> PartialEq for FinitePointSpace<T> {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels && self.dist == other.dist
    }
}

impl<T: Scalar> FinitePointSpace<T> {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<T>>) -> Result<Self, MetricError> {
        if labels.len() != rows.len() {
            return Err(MetricError::Malformed(TableDefect::LabelCount {
                labels: labels.len(),
                rows: rows.len(),
            }));
        }
        match check_metric_axioms(&rows) {
            MetricReport::Pass => {}
            MetricReport::Malformed(d) => return Err(MetricError::Malformed(d)),
            MetricReport::Violation(v) => return Err(MetricError::Violation(v)),
        }
        Ok(FinitePointSpace { labels, dist: rows.into_iter().flatten().collect(), ranks: OnceLock::new() })
    }

    /// Points labelled `0..n`.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self, MetricError> {
        let labels = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::new(labels, rows)
    }

    /// The discrete metric: distance one between distinct points.
    pub fn discrete(n: usize) -> Result<Self, MetricError> {
        let rows = (0..n)
            .map(|p| (0..n).map(|q| if p == q { T::zero() } else { T::one() }).collect())
            .collect();
        Self::from_rows(rows)
    }

    /// Points on the real line at the given (distinct) coordinates.
    pub fn on_line(coords: &[T]) -> Result<Self, MetricError> {
        let rows = coords
            .iter()
            .map(|a| {
                coords
                    .iter()
                    .map(|b| {
                        if a > b {
                            a.clone() - b.clone()
                        } else {
                            b.clone() - a.clone()
                        }
                    })
                    .collect()
            })
            .collect();
        let labels = coords.iter().map(|c| c.to_string()).collect();
        Self::new(labels, rows)
    }

    /// Skips axiom checks; callers guarantee the table is a metric.
    pub(crate) fn from_trusted(labels: Vec<String>, dist: Vec<T>) -> Self {
        debug_assert_eq!(labels.len() * labels.len(), dist.len());
        FinitePointSpace { labels, dist, ranks: OnceLock::new() }
    }

    fn ranks(&self) -> &[u32] {
        self.ranks.get_or_init(|| {
            let mut order: Vec<usize> = (0..self.dist.len()).collect();
            order.sort_by(|&a, &b| self.dist[a].partial_cmp(&self.dist[b]).expect("distances are comparable"));
            let mut ranks = vec![0u32; self.dist.len()];
            let mut rank = 0u32;
            for w in 0..order.len() {
                if w > 0 && self.dist[order[w]] != self.dist[order[w - 1]] {
                    rank += 1;
                }
                ranks[order[w]] = rank;
            }
            ranks
        })
    }
}

impl<T> FinitePointSpace<T> {
    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dist(&self, p: usize, q: usize) -> &T {
        &self.dist[p * self.labels.len() + q]
    }

    pub fn rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        self.dist.chunks(self.labels.len()).map(|c| c.to_vec()).collect()
    }
}

/// A nonempty subset of the points of a finite space, stored as a bit set
/// indexed by point order. Set equality is representational equality and
/// [`Ord`] follows the numeric value of the mask.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ClosedSet {
    universe: usize,
    words: Vec<u64>,
}

fn word_count(universe: usize) -> usize {
    universe.div_ceil(64).max(1)
}

impl ClosedSet {
    pub fn new<I: IntoIterator<Item = usize>>(universe: usize, members: I) -> Result<Self, MetricError> {
        let mut words = vec![0u64; word_count(universe)];
        let mut any = false;
        for index in members {
            if index >= universe {
                return Err(MetricError::OutOfRange { index, size: universe });
            }
            words[index / 64] |= 1 << (index % 64);
            any = true;
        }
        if !any {
            return Err(MetricError::EmptySet);
        }
        Ok(ClosedSet { universe, words })
    }

    pub fn singleton(universe: usize, index: usize) -> Result<Self, MetricError> {
        Self::new(universe, [index])
    }

    pub fn full(universe: usize) -> Result<Self, MetricError> {
        Self::new(universe, 0..universe)
    }

    pub fn from_mask(universe: usize, mask: u64) -> Result<Self, MetricError> {
        Self::new(universe, (0..64).filter(|i| mask >> i & 1 == 1))
    }

    /// The mask as a single word, when the universe fits in 64 points.
    pub fn to_mask(&self) -> Option<u64> {
        (self.universe <= 64).then(|| self.words[0])
    }

    pub fn universe(&self) -> usize {
        self.universe
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.universe && self.words[index / 64] >> (index % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.universe).filter(move |&i| self.contains(i))
    }

    pub fn first(&self) -> usize {
        self.iter().next().expect("closed sets are nonempty")
    }

    fn same_universe(&self, other: &ClosedSet) -> Result<(), MetricError> {
        if self.universe != other.universe {
            return Err(MetricError::MismatchedSpaces { left: self.universe, right: other.universe });
        }
        Ok(())
    }

    pub fn is_subset(&self, other: &ClosedSet) -> bool {
        self.universe == other.universe
            && self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &ClosedSet) -> bool {
        self.universe == other.universe
            && self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn union(&self, other: &ClosedSet) -> Result<ClosedSet, MetricError> {
        self.same_universe(other)?;
        let words = self.words.iter().zip(&other.words).map(|(a, b)| a | b).collect();
        Ok(ClosedSet { universe: self.universe, words })
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe
    }
}

impl Ord for ClosedSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.universe
            .cmp(&other.universe)
            .then_with(|| self.words.iter().rev().cmp(other.words.iter().rev()))
    }
}

impl PartialOrd for ClosedSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for ClosedSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[derive(Serialize, Deserialize)]
struct ClosedSetRepr {
    universe: usize,
    members: Vec<usize>,
}

impl Serialize for ClosedSet {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> Result<S::Ok, S::Error> {
        ClosedSetRepr { universe: self.universe, members: self.iter().collect() }.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for ClosedSet {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> Result<Self, D::Error> {
        let repr = ClosedSetRepr::deserialize(de)?;
        ClosedSet::new(repr.universe, repr.members).map_err(serde::de::Error::custom)
    }
}

/// Table index of the directed distance `max over x in from of min over y in to`.
fn directed<T: Scalar>(from: &ClosedSet, to: &ClosedSet, space: &FinitePointSpace<T>) -> usize {
    let ranks = space.ranks();
    let n = space.len();
    from.iter()
        .map(|x| to.iter().map(|y| x * n + y).min_by_key(|&i| ranks[i]).expect("nonempty"))
        .max_by_key(|&i| ranks[i])
        .expect("nonempty")
}

/// Exact Hausdorff distance: the larger of the two directed max-min distances.
pub fn hausdorff_distance<T: Scalar>(
    a: &ClosedSet,
    b: &ClosedSet,
    space: &FinitePointSpace<T>,
) -> Result<T, MetricError> {
    a.same_universe(b)?;
    if a.universe != space.len() {
        return Err(MetricError::MismatchedSpaces { left: a.universe, right: space.len() });
    }
    let (ab, ba) = (directed(a, b, space), directed(b, a, space));
    let ranks = space.ranks();
    Ok(space.dist[if ranks[ab] >= ranks[ba] { ab } else { ba }].clone())
}

/// A basic open `<S_1, ..., S_n>` of the Vietoris topology over a finite space.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VietorisOpen {
    cells: Vec<ClosedSet>,
}

impl VietorisOpen {
    pub fn new(cells: Vec<ClosedSet>) -> Result<Self, MetricError> {
        let first = cells.first().ok_or(MetricError::NoCells)?;
        for cell in &cells[1..] {
            first.same_universe(cell)?;
        }
        Ok(VietorisOpen { cells })
    }

    pub fn cells(&self) -> &[ClosedSet] {
        &self.cells
    }
}

/// Membership in a Vietoris basic open for any point and cell representation:
/// every point lies in some cell and every cell contains some point.
pub fn vietoris_membership<P, C>(points: &[P], cells: &[C], contains: impl Fn(&C, &P) -> bool) -> bool {
    !cells.is_empty()
        && points.iter().all(|p| cells.iter().any(|c| contains(c, p)))
        && cells.iter().all(|c| points.iter().any(|p| contains(c, p)))
}

/// `A` is covered by the union of the cells and meets every cell.
pub fn vietoris_contains(set: &ClosedSet, open: &VietorisOpen) -> Result<bool, MetricError> {
    let mut cover = open.cells[0].clone();
    for cell in &open.cells[1..] {
        cover = cover.union(cell)?;
    }
    set.same_universe(&cover)?;
    Ok(set.is_subset(&cover) && open.cells.iter().all(|c| set.intersects(c)))
}
