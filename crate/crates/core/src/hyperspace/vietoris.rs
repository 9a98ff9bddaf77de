//! Bounded verification of Vietoris basic-open conditions for the
//! hyperspace of a vertex shift.
//!
//! A basic open built from level-`ℓ` cylinders is `⟨[u] : u ∈ P⟩` for a
//! nonempty set `P` of allowed words of length `ℓ`. A closed set `A` in it
//! has `σ^n A ∈ ⟨[v] : v ∈ Q⟩` for some choice of `A` exactly when every
//! `u ∈ P` reaches some `v ∈ Q` in `n` steps and every `v ∈ Q` is reached
//! from some `u ∈ P` (finite sets of witness points are closed). These
//! `n`-step relations are powers of the block graph, which are eventually
//! periodic; once the cycle is found, failing every residue is a proof.

use std::collections::HashMap;

use num_bigint::BigUint;

use super::HyperError;
use crate::properties::certificate::{Certificate, CylinderOpenWitness};
use crate::properties::verdict::{Method, Verdict};
use crate::systems::{PeriodicPoint, ShiftSystem, SystemError, Word};
use crate::theorems::pipeline::{combine_witnesses, find_periodic_point_in_cylinder, CombineMode};
use crate::theorems::witness::{PeriodicSetWitness, ShiftSets};

/// Block graphs are stored as `u64` row masks.
pub const MAX_CYLINDERS: usize = 64;
/// Largest cylinder count for which all pairs of basic opens are enumerated.
pub const MAX_PAIR_CYLINDERS: usize = 6;
/// Largest cylinder count for which every basic open gets a periodic set.
pub const MAX_PERIODIC_CYLINDERS: usize = 12;

/// The level-`ℓ` cylinders a closed set meets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CylinderProfile {
    level: usize,
    blocks: Vec<Word>,
}

impl CylinderProfile {
    pub fn new(sft: &ShiftSystem, level: usize, mut blocks: Vec<Word>) -> Result<Self, HyperError> {
        if level == 0 {
            return Err(HyperError::ZeroBudget);
        }
        if blocks.is_empty() {
            return Err(crate::metric::MetricError::EmptySet.into());
        }
        for b in &blocks {
            sft.check_word(b)?;
            if b.len() != level {
                return Err(SystemError::UnequalLengths(b.len(), level).into());
            }
        }
        blocks.sort();
        blocks.dedup();
        Ok(CylinderProfile { level, blocks })
    }

    /// Profile of a finite set of periodic points.
    pub fn of_points(sft: &ShiftSystem, level: usize, points: &[PeriodicPoint]) -> Result<Self, HyperError> {
        let blocks = points.iter().map(|p| (0..level).map(|i| p.symbol_at(i)).collect()).collect();
        Self::new(sft, level, blocks)
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn blocks(&self) -> &[Word] {
        &self.blocks
    }
}

/// Whether some point of `[u]` lands in `[v]` after `n` shifts: an allowed
/// word `y` of length `n + ℓ` starts with `u` and has `v` at position `n`.
pub fn cylinder_reach(sft: &ShiftSystem, u: &[usize], v: &[usize], n: usize) -> Result<bool, HyperError> {
    if u.len() != v.len() {
        return Err(SystemError::UnequalLengths(u.len(), v.len()).into());
    }
    sft.check_word(u)?;
    sft.check_word(v)?;
    if n == 0 {
        return Err(HyperError::ZeroBudget);
    }
    let len = n + u.len();
    let mut fixed: Vec<Option<usize>> = vec![None; len];
    for (i, &s) in u.iter().enumerate() {
        fixed[i] = Some(s);
    }
    for (i, &s) in v.iter().enumerate() {
        match fixed[n + i] {
            Some(t) if t != s => return Ok(false),
            _ => fixed[n + i] = Some(s),
        }
    }
    let m = sft.size();
    let allowed_at = |i: usize, s: usize| fixed[i].is_none_or(|t| t == s);
    let mut possible: Vec<bool> = (0..m).map(|s| allowed_at(0, s)).collect();
    for i in 1..len {
        let next: Vec<bool> = (0..m)
            .map(|b| allowed_at(i, b) && (0..m).any(|a| possible[a] && sft.allows(a, b)))
            .collect();
        possible = next;
    }
    Ok(possible.iter().any(|&b| b))
}

/// Allowed level-`ℓ` words with their one-step successor masks.
#[derive(Debug, Clone)]
pub struct BlockGraph {
    level: usize,
    words: Vec<Word>,
    succ: Vec<u64>,
}

impl BlockGraph {
    pub fn new(sft: &ShiftSystem, level: usize) -> Result<Self, HyperError> {
        if level == 0 {
            return Err(HyperError::ZeroBudget);
        }
        let words = sft.allowed_words(level)?;
        if words.len() > MAX_CYLINDERS {
            return Err(HyperError::TooManyCylinders { level, words: words.len(), max: MAX_CYLINDERS });
        }
        let index: HashMap<&[usize], usize> = words.iter().enumerate().map(|(i, w)| (w.as_slice(), i)).collect();
        let succ = words
            .iter()
            .map(|w| {
                let last = *w.last().expect("nonempty");
                sft.successors(last).fold(0u64, |acc, b| {
                    let mut next = w[1..].to_vec();
                    next.push(b);
                    acc | 1 << index[next.as_slice()]
                })
            })
            .collect();
        Ok(BlockGraph { level, words, succ })
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn full_mask(&self) -> u64 {
        mask_of(self.words.len())
    }

    fn advance(&self, rel: &[u64]) -> Vec<u64> {
        rel.iter()
            .map(|&row| {
                (0..self.len()).filter(|&w| row >> w & 1 == 1).fold(0u64, |acc, w| acc | self.succ[w])
            })
            .collect()
    }

    /// `R_1, R_2, ...` until a repeat or the horizon.
    pub fn relations(&self, horizon: u64) -> Relations {
        let mut seen: HashMap<Vec<u64>, u64> = HashMap::new();
        let mut rels = Vec::new();
        let mut cur = self.succ.clone();
        let mut cycle = None;
        for n in 1..=horizon {
            if let Some(&first) = seen.get(&cur) {
                cycle = Some((first, n - first));
                break;
            }
            seen.insert(cur.clone(), n);
            let next = self.advance(&cur);
            rels.push(cur);
            cur = next;
        }
        Relations { rels, cycle }
    }

    pub fn mask_of_words(&self, words: &[Word]) -> Option<u64> {
        words.iter().try_fold(0u64, |acc, w| self.words.iter().position(|x| x == w).map(|i| acc | 1 << i))
    }

    pub fn words_of_mask(&self, mask: u64) -> Vec<Word> {
        (0..self.len()).filter(|&i| mask >> i & 1 == 1).map(|i| self.words[i].clone()).collect()
    }
}

fn mask_of(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// The computed prefix of the relation sequence and, if found, its cycle
/// `R_pre = R_{pre + period}`.
#[derive(Debug, Clone)]
pub struct Relations {
    rels: Vec<Vec<u64>>,
    cycle: Option<(u64, u64)>,
}

impl Relations {
    pub fn get(&self, n: u64) -> Option<&[u64]> {
        let computed = self.rels.len() as u64;
        if n >= 1 && n <= computed {
            return Some(&self.rels[n as usize - 1]);
        }
        let (pre, period) = self.cycle?;
        (n >= 1).then(|| &self.rels[(pre + (n - pre) % period) as usize - 1][..])
    }

    pub fn cycle(&self) -> Option<(u64, u64)> {
        self.cycle
    }

    pub fn first_full(&self, full: u64) -> Option<u64> {
        self.rels.iter().position(|r| r.iter().all(|&row| row == full)).map(|i| i as u64 + 1)
    }

    /// Multiples of `step` worth trying: all of them up to the horizon, or
    /// enough to visit every residue of the cycle.
    fn candidates(&self, step: u64) -> Vec<u64> {
        let t_max = match self.cycle {
            Some((pre, period)) => pre.div_ceil(step) + period,
            None => self.rels.len() as u64 / step,
        };
        (1..=t_max).map(|t| t * step).collect()
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

enum Search {
    Found(Vec<(u64, u64, u64)>),
    Stuck(Vec<u64>),
    Open(String),
}

/// Looks for `n` in the multiples of `step` satisfying every `(P, Q)` pair
/// of `pairs` simultaneously.
fn first_common(seq: &Relations, step: u64, pairs: &[(u64, u64)]) -> Option<u64> {
    seq.candidates(step)
        .into_iter()
        .find(|&n| seq.get(n).is_some_and(|rel| pairs.iter().all(|&(p, q)| pair_ok(rel, p, q))))
}

fn search_pairs(g: &BlockGraph, seq: &Relations, step: u64, enumerate_all: bool) -> Search {
    let w = g.len();
    let decided = seq.cycle().is_some();
    for u in 0..w {
        for v in 0..w {
            let (p, q) = (1u64 << u, 1u64 << v);
            if decided && first_common(seq, step, &[(p, q)]).is_none() {
                return Search::Stuck(vec![p, q]);
            }
        }
    }
    if !enumerate_all {
        return Search::Open(format!("{w} level-{} cylinders are too many to enumerate all pairs", g.level));
    }
    let full = g.full_mask();
    let mut rows = Vec::new();
    for p in 1..=full {
        for q in 1..=full {
            match first_common(seq, step, &[(p, q)]) {
                Some(n) => rows.push((p, q, n / step)),
                None if decided => return Search::Stuck(vec![p, q]),
                None => {
                    return Search::Open(format!(
                        "no n <= {} works for cylinder sets {:#b} -> {:#b}",
                        seq.rels.len(),
                        p,
                        q
                    ))
                }
            }
        }
    }
    Search::Found(rows)
}

fn stuck<T>(level: usize, step: u64, masks: Vec<u64>, seq: &Relations) -> Verdict<T> {
    let (preperiod, period) = seq.cycle().expect("stuck only after the cycle is known");
    Verdict::refuted(Method::BoundedSearch, Certificate::VietorisStuck { level, step, masks, preperiod, period })
}

/// Transitivity of `(K(X), T_K)` over all basic opens of level `ℓ`.
pub fn vietoris_transitive_bounded<T>(sft: &ShiftSystem, level: usize, horizon: u64) -> Result<Verdict<T>, HyperError> {
    if horizon == 0 {
        return Err(HyperError::ZeroBudget);
    }
    let g = BlockGraph::new(sft, level)?;
    let seq = g.relations(horizon);
    if let Some(index) = seq.first_full(g.full_mask()) {
        return Ok(Verdict::proved(Method::BoundedSearch, Certificate::VietorisMixing { level, index }));
    }
    Ok(match search_pairs(&g, &seq, 1, g.len() <= MAX_PAIR_CYLINDERS) {
        Search::Found(rows) => {
            Verdict::proved(Method::BoundedSearch, Certificate::VietorisPairTable { level, step: 1, rows })
        }
        Search::Stuck(masks) => stuck(level, 1, masks, &seq),
        Search::Open(note) => Verdict::unknown(Method::BoundedSearch, format!("horizon {horizon}: {note}")),
    })
}

/// Total transitivity of `(K(X), T_K)` at level `ℓ`, trying powers up to `p_max`
/// for a refutation.
pub fn vietoris_totally_transitive_bounded<T>(
    sft: &ShiftSystem,
    level: usize,
    horizon: u64,
    p_max: u64,
) -> Result<Verdict<T>, HyperError> {
    if horizon == 0 || p_max == 0 {
        return Err(HyperError::ZeroBudget);
    }
    let g = BlockGraph::new(sft, level)?;
    let seq = g.relations(horizon);
    if let Some(index) = seq.first_full(g.full_mask()) {
        return Ok(Verdict::proved(Method::BoundedSearch, Certificate::VietorisMixing { level, index }));
    }
    if seq.cycle().is_none() {
        return Ok(Verdict::unknown(
            Method::BoundedSearch,
            format!("horizon {horizon}: block relations neither full nor periodic yet"),
        ));
    }
    for step in 1..=p_max {
        if let Search::Stuck(masks) = search_pairs(&g, &seq, step, g.len() <= MAX_PAIR_CYLINDERS) {
            return Ok(stuck(level, step, masks, &seq));
        }
    }
    Ok(Verdict::unknown(Method::BoundedSearch, format!("no stuck pair for powers up to {p_max}")))
}

/// Weak mixing of `(K(X), T_K)` at level `ℓ`.
pub fn vietoris_weakly_mixing_bounded<T>(sft: &ShiftSystem, level: usize, horizon: u64) -> Result<Verdict<T>, HyperError> {
    if horizon == 0 {
        return Err(HyperError::ZeroBudget);
    }
    let g = BlockGraph::new(sft, level)?;
    let seq = g.relations(horizon);
    if let Some(index) = seq.first_full(g.full_mask()) {
        return Ok(Verdict::proved(Method::BoundedSearch, Certificate::VietorisMixing { level, index }));
    }
    if seq.cycle().is_none() {
        return Ok(Verdict::unknown(
            Method::BoundedSearch,
            format!("horizon {horizon}: block relations neither full nor periodic yet"),
        ));
    }
    if let Search::Stuck(pq) = search_pairs(&g, &seq, 1, g.len() <= MAX_PAIR_CYLINDERS) {
        let masks = vec![pq[0], pq[1], pq[0], pq[1]];
        return Ok(stuck(level, 1, masks, &seq));
    }
    let w = g.len();
    if w.pow(4) <= 1 << 20 {
        for quad in 0..w.pow(4) {
            let idx = [quad / (w * w * w), quad / (w * w) % w, quad / w % w, quad % w];
            let masks: Vec<u64> = idx.iter().map(|&i| 1u64 << i).collect();
            if first_common(&seq, 1, &[(masks[0], masks[1]), (masks[2], masks[3])]).is_none() {
                return Ok(stuck(level, 1, masks, &seq));
            }
        }
    }
    Ok(Verdict::unknown(Method::BoundedSearch, "no stuck rectangle among single cylinders"))
}

/// Periodic closed sets in every basic open of level `ℓ`, built from one
/// periodic point per cylinder and combined with the product of periods.
pub fn vietoris_periodic_dense_bounded<T>(sft: &ShiftSystem, level: usize) -> Result<Verdict<T>, HyperError> {
    let words = sft.allowed_words(level)?;
    let mut points = Vec::with_capacity(words.len());
    for u in &words {
        match find_periodic_point_in_cylinder(sft, u) {
            Ok(found) => points.push(found),
            Err(_) => {
                return Ok(Verdict::refuted(Method::BoundedSearch, Certificate::WordOffCycle { word: u.clone() }));
            }
        }
    }
    if words.len() > MAX_PERIODIC_CYLINDERS {
        return Err(HyperError::TooManyCylinders { level, words: words.len(), max: MAX_PERIODIC_CYLINDERS });
    }
    let sets = ShiftSets(sft);
    let mut witnesses = Vec::new();
    for mask in 1u64..1 << words.len() {
        let chosen: Vec<usize> = (0..words.len()).filter(|&i| mask >> i & 1 == 1).collect();
        let parts: Vec<PeriodicSetWitness<Vec<PeriodicPoint>>> = chosen
            .iter()
            .map(|&i| PeriodicSetWitness { z: vec![points[i].0.clone()], k: BigUint::from(points[i].1) })
            .collect();
        let witness = combine_witnesses(&sets, &parts, CombineMode::Product)
            .map_err(|e| HyperError::Witness(e.to_string()))?;
        witnesses.push(CylinderOpenWitness { open: chosen.iter().map(|&i| words[i].clone()).collect(), witness });
    }
    Ok(Verdict::proved(Method::BoundedSearch, Certificate::VietorisPeriodicSets { level, witnesses }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::properties::certificate::{validate_verdict, SystemRef};
    use crate::properties::Property;
    use crate::Rational;

    fn golden() -> ShiftSystem {
        ShiftSystem::from_rows(&["11", "10"]).unwrap()
    }

    #[test]
    fn cylinder_reach_examples() {
        let full = ShiftSystem::full(2);
        for n in 2..5 {
            for u in full.allowed_words(2).unwrap() {
                for v in full.allowed_words(2).unwrap() {
                    assert!(cylinder_reach(&full, &u, &v, n).unwrap());
                }
            }
        }
        let g = golden();
        assert!(!cylinder_reach(&g, &[1], &[1], 1).unwrap());
        assert!(cylinder_reach(&g, &[1], &[1], 2).unwrap());
        assert!(cylinder_reach(&g, &[1], &[1, 0], 1).is_err());
        assert!(cylinder_reach(&g, &[1, 1], &[1, 0], 1).is_err());
    }

    #[test]
    fn block_relations_match_cylinder_reach() {
        for rows in [&["11", "10"][..], &["01", "10"], &["011", "101", "110"]] {
            let sft = ShiftSystem::from_rows(rows).unwrap();
            for level in 1..=3 {
                let g = BlockGraph::new(&sft, level).unwrap();
                let seq = g.relations(40);
                for n in 1..=12u64 {
                    let rel = seq.get(n).unwrap();
                    for (i, u) in g.words().iter().enumerate() {
                        for (j, v) in g.words().iter().enumerate() {
                            let direct = cylinder_reach(&sft, u, v, n as usize).unwrap();
                            assert_eq!(rel[i] >> j & 1 == 1, direct, "{rows:?} l={level} n={n}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn full_shift_is_vietoris_transitive() {
        let full = ShiftSystem::full(2);
        let v: Verdict<Rational> = vietoris_transitive_bounded(&full, 1, 2).unwrap();
        assert_eq!(v.certificate(), Some(&Certificate::VietorisMixing { level: 1, index: 1 }));
        validate_verdict(&v, Property::Transitive, SystemRef::ShiftHyper(&full)).unwrap();
    }

    #[test]
    fn period_two_shift_is_stuck() {
        let sft = ShiftSystem::from_rows(&["01", "10"]).unwrap();
        let v: Verdict<Rational> = vietoris_transitive_bounded(&sft, 1, 10).unwrap();
        match v.certificate() {
            Some(Certificate::VietorisStuck { masks, .. }) => assert_eq!(masks, &vec![0b01, 0b11]),
            other => panic!("unexpected {other:?}"),
        }
        validate_verdict(&v, Property::Transitive, SystemRef::ShiftHyper(&sft)).unwrap();
        let w: Verdict<Rational> = vietoris_weakly_mixing_bounded(&sft, 1, 10).unwrap();
        validate_verdict(&w, Property::WeaklyMixing, SystemRef::ShiftHyper(&sft)).unwrap();
    }

    #[test]
    fn self_loop_pair_hits_at_once() {
        let g = golden();
        let b = BlockGraph::new(&g, 1).unwrap();
        let seq = b.relations(10);
        assert_eq!(first_common(&seq, 1, &[(0b01, 0b01)]), Some(1));
    }

    #[test]
    fn periodic_sets_examples() {
        let full = ShiftSystem::full(2);
        let v: Verdict<Rational> = vietoris_periodic_dense_bounded(&full, 1).unwrap();
        let Some(Certificate::VietorisPeriodicSets { witnesses, .. }) = v.certificate() else { panic!() };
        let both = witnesses.iter().find(|w| w.open.len() == 2).unwrap();
        assert_eq!(both.witness.z.iter().map(|p| p.word().to_vec()).collect::<Vec<_>>(), vec![vec![0], vec![1]]);
        assert_eq!(both.witness.k, BigUint::from(1u32));

        let g = golden();
        let v: Verdict<Rational> = vietoris_periodic_dense_bounded(&g, 1).unwrap();
        let Some(Certificate::VietorisPeriodicSets { witnesses, .. }) = v.certificate() else { panic!() };
        let one = witnesses.iter().find(|w| w.open == vec![vec![1]]).unwrap();
        assert_eq!(one.witness.z[0].word(), &[1, 0]);
        assert_eq!(one.witness.k, BigUint::from(2u32));
        validate_verdict(&v, Property::DensePeriodicPoints, SystemRef::ShiftHyper(&g)).unwrap();

        let single = ShiftSystem::full(1);
        for level in 1..=3 {
            let v: Verdict<Rational> = vietoris_periodic_dense_bounded(&single, level).unwrap();
            let Some(Certificate::VietorisPeriodicSets { witnesses, .. }) = v.certificate() else { panic!() };
            assert_eq!(witnesses.len(), 1);
            assert_eq!(witnesses[0].witness.k, BigUint::from(1u32));
        }
    }

    #[test]
    fn profile_of_points() {
        let g = golden();
        let pts = vec![PeriodicPoint::new(&g, &[1, 0]).unwrap(), PeriodicPoint::new(&g, &[0]).unwrap()];
        let prof = CylinderProfile::of_points(&g, 2, &pts).unwrap();
        assert_eq!(prof.blocks(), &[vec![0, 0], vec![1, 0]]);
        assert!(CylinderProfile::new(&g, 2, vec![vec![1, 1]]).is_err());
    }
}
