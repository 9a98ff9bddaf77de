//! One-sided vertex shifts of finite type.
//!
//! A point is an infinite sequence `x_0 x_1 ...` with every transition
//! `x_i -> x_{i+1}` allowed by the 0/1 matrix; `T` is the left shift.

use std::fmt;

use num_bigint::BigUint;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use super::graph::{self, Adjacency};
use super::SystemError;

/// A finite word over the alphabet, as symbol indices.
pub type Word = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShiftSystem {
    alphabet: Vec<String>,
    allowed: Vec<Vec<bool>>,
    trimmed: Vec<String>,
}

impl ShiftSystem {
    /// Validates the matrix and trims every symbol that cannot occur in an
    /// infinite sequence (iteratively dropping zero in- or out-degree).
    pub fn new(alphabet: Vec<String>, transition: Vec<Vec<bool>>) -> Result<Self, SystemError> {
        let m = alphabet.len();
        if m == 0 {
            return Err(SystemError::EmptyShift);
        }
        if transition.len() != m || transition.iter().any(|row| row.len() != m) {
            return Err(SystemError::NotSquare(format!("{m} symbols")));
        }
        let mut alive = vec![true; m];
        loop {
            let mut changed = false;
            for a in 0..m {
                if !alive[a] {
                    continue;
                }
                let out = (0..m).any(|b| alive[b] && transition[a][b]);
                let inn = (0..m).any(|b| alive[b] && transition[b][a]);
                if !out || !inn {
                    alive[a] = false;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        let keep: Vec<usize> = (0..m).filter(|&a| alive[a]).collect();
        if keep.is_empty() {
            return Err(SystemError::EmptyShift);
        }
        let trimmed = (0..m).filter(|&a| !alive[a]).map(|a| alphabet[a].clone()).collect();
        let allowed = keep.iter().map(|&a| keep.iter().map(|&b| transition[a][b]).collect()).collect();
        let alphabet = keep.iter().map(|&a| alphabet[a].clone()).collect();
        Ok(ShiftSystem { alphabet, allowed, trimmed })
    }

    /// Matrix rows as 0/1 strings, symbols named `0..m`.
    pub fn from_rows(rows: &[&str]) -> Result<Self, SystemError> {
        let alphabet = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::new(alphabet, parse_rows(rows.iter().copied())?)
    }

    /// The full shift on `m` symbols.
    pub fn full(m: usize) -> Self {
        let alphabet = (0..m).map(|i| i.to_string()).collect();
        Self::new(alphabet, vec![vec![true; m]; m]).expect("full shift is essential")
    }

    pub fn alphabet(&self) -> &[String] {
        &self.alphabet
    }

    pub fn size(&self) -> usize {
        self.alphabet.len()
    }

    /// Symbols removed during trimming, in input order.
    pub fn trimmed(&self) -> &[String] {
        &self.trimmed
    }

    pub fn allows(&self, a: usize, b: usize) -> bool {
        self.allowed[a][b]
    }

    pub fn matrix(&self) -> &[Vec<bool>] {
        &self.allowed
    }

    pub fn matrix_rows(&self) -> Vec<String> {
        self.allowed
            .iter()
            .map(|row| row.iter().map(|&b| if b { '1' } else { '0' }).collect())
            .collect()
    }

    pub fn successors(&self, a: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.size()).filter(move |&b| self.allowed[a][b])
    }

    pub fn adjacency(&self) -> Adjacency {
        (0..self.size()).map(|a| self.successors(a).collect()).collect()
    }

    pub fn is_allowed(&self, word: &[usize]) -> bool {
        word.iter().all(|&s| s < self.size()) && word.windows(2).all(|w| self.allowed[w[0]][w[1]])
    }

    pub fn check_word(&self, word: &[usize]) -> Result<(), SystemError> {
        if word.is_empty() {
            return Err(SystemError::ZeroLength);
        }
        if !self.is_allowed(word) {
            return Err(SystemError::DisallowedWord(self.format_word(word)));
        }
        Ok(())
    }

    /// All allowed words of the given length in lexicographic (symbol index) order.
    pub fn allowed_words(&self, length: usize) -> Result<Vec<Word>, SystemError> {
        if length == 0 {
            return Err(SystemError::ZeroLength);
        }
        let mut words: Vec<Word> = (0..self.size()).map(|a| vec![a]).collect();
        for _ in 1..length {
            words = words
                .into_iter()
                .flat_map(|w| {
                    let last = *w.last().expect("nonempty word");
                    self.successors(last).map(move |b| {
                        let mut next = w.clone();
                        next.push(b);
                        next
                    })
                })
                .collect();
        }
        Ok(words)
    }

    fn single_char_alphabet(&self) -> bool {
        self.alphabet.iter().all(|s| s.chars().count() == 1)
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        let names = word.iter().map(|&s| self.alphabet.get(s).map_or("?", |s| s.as_str()));
        if self.single_char_alphabet() {
            names.collect()
        } else {
            names.collect::<Vec<_>>().join(",")
        }
    }

    /// Parses a word: one character per symbol for single-character
    /// alphabets, otherwise comma-separated symbol names.
    pub fn parse_word(&self, text: &str) -> Result<Word, SystemError> {
        let lookup = |name: &str| {
            self.alphabet
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| SystemError::UnknownSymbol(name.to_string()))
        };
        if self.single_char_alphabet() && !text.contains(',') {
            text.chars().map(|c| lookup(&c.to_string())).collect()
        } else {
            text.split(',').map(|s| lookup(s.trim())).collect()
        }
    }

    /// Shortest cycle through the word graph that starts with `u`: the
    /// returned word `w` has prefix `u` and `w^inf` is a point of `[u]`
    /// of period `|w|` (not necessarily least).
    pub fn cycle_word_through(&self, u: &[usize]) -> Result<Word, SystemError> {
        self.check_word(u)?;
        let first = u[0];
        let last = *u.last().expect("nonempty");
        let path = graph::shortest_nonempty_path(&self.adjacency(), last, first)
            .ok_or_else(|| SystemError::NoReturnPath(self.format_word(u)))?;
        let mut w = u.to_vec();
        w.extend_from_slice(&path[1..path.len() - 1]);
        Ok(w)
    }
}

pub fn parse_rows<'a>(rows: impl Iterator<Item = &'a str>) -> Result<Vec<Vec<bool>>, SystemError> {
    rows.map(|row| {
        row.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(SystemError::NotBoolean(row.to_string())),
            })
            .collect()
    })
    .collect()
}

/// A periodic point `w^inf` stored by its primitive root, so equal points
/// have equal representations.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PeriodicPoint {
    word: Word,
}

impl PeriodicPoint {
    pub fn new(sft: &ShiftSystem, word: &[usize]) -> Result<Self, SystemError> {
        sft.check_word(word)?;
        let closing = [*word.last().expect("nonempty"), word[0]];
        if !sft.is_allowed(&closing) {
            return Err(SystemError::DisallowedWord(format!("({})^inf", sft.format_word(word))));
        }
        Ok(Self::from_cycle(word))
    }

    fn from_cycle(word: &[usize]) -> Self {
        let n = word.len();
        let p = (1..=n)
            .find(|&p| n % p == 0 && (0..n).all(|i| word[i] == word[i % p]))
            .expect("p = n always works");
        PeriodicPoint { word: word[..p].to_vec() }
    }

    /// Re-checks a deserialized point against a shift.
    pub fn validate(&self, sft: &ShiftSystem) -> Result<(), SystemError> {
        let fresh = Self::new(sft, &self.word)?;
        if fresh != *self {
            return Err(SystemError::DisallowedWord("non-canonical periodic word".into()));
        }
        Ok(())
    }

    pub fn word(&self) -> &[usize] {
        &self.word
    }

    pub fn least_period(&self) -> usize {
        self.word.len()
    }

    pub fn symbol_at(&self, i: usize) -> usize {
        self.word[i % self.word.len()]
    }

    pub fn in_cylinder(&self, u: &[usize]) -> bool {
        u.iter().enumerate().all(|(i, &s)| self.symbol_at(i) == s)
    }

    /// `T^k` of the point.
    pub fn shifted(&self, k: &BigUint) -> PeriodicPoint {
        let r = (k % BigUint::from(self.word.len())).to_usize().expect("small remainder");
        let mut word = self.word[r..].to_vec();
        word.extend_from_slice(&self.word[..r]);
        PeriodicPoint { word }
    }
}

impl fmt::Display for PeriodicPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for s in &self.word {
            write!(f, "{s}")?;
        }
        write!(f, ")^inf")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn golden() -> ShiftSystem {
        ShiftSystem::from_rows(&["11", "10"]).unwrap()
    }

    #[test]
    fn construction_examples() {
        let full = ShiftSystem::from_rows(&["11", "11"]).unwrap();
        assert!(full.trimmed().is_empty());
        assert_eq!(golden().size(), 2);
        assert_eq!(ShiftSystem::from_rows(&["00", "00"]).unwrap_err(), SystemError::EmptyShift);
    }

    #[test]
    fn trimming_is_iterated() {
        // 0 -> 1 -> 2 -> 2 : 0 has no incoming edge, after removing it 1 has none either.
        let sft = ShiftSystem::from_rows(&["010", "001", "001"]).unwrap();
        assert_eq!(sft.alphabet(), &["2".to_string()]);
        assert_eq!(sft.trimmed(), &["0".to_string(), "1".to_string()]);
        // a -> b only: nothing survives.
        assert_eq!(ShiftSystem::from_rows(&["01", "00"]).unwrap_err(), SystemError::EmptyShift);
    }

    #[test]
    fn allowed_words_examples() {
        let full = ShiftSystem::full(2);
        assert_eq!(full.allowed_words(2).unwrap(), vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
        assert_eq!(golden().allowed_words(2).unwrap(), vec![vec![0, 0], vec![0, 1], vec![1, 0]]);
        assert_eq!(golden().allowed_words(1).unwrap(), vec![vec![0], vec![1]]);
        assert_eq!(full.allowed_words(0).unwrap_err(), SystemError::ZeroLength);
    }

    #[test]
    fn cycle_words() {
        assert_eq!(ShiftSystem::full(2).cycle_word_through(&[0]).unwrap(), vec![0]);
        assert_eq!(golden().cycle_word_through(&[1]).unwrap(), vec![1, 0]);
        assert_eq!(ShiftSystem::full(2).cycle_word_through(&[0, 0]).unwrap(), vec![0, 0]);
    }

    #[test]
    fn periodic_points_are_canonical() {
        let full = ShiftSystem::full(2);
        let a = PeriodicPoint::new(&full, &[0, 1, 0, 1]).unwrap();
        assert_eq!(a.word(), &[0, 1]);
        assert_eq!(a.shifted(&BigUint::from(3u32)).word(), &[1, 0]);
        assert!(a.in_cylinder(&[0, 1, 0]));
        assert!(PeriodicPoint::new(&golden(), &[1]).is_err());
    }

    #[test]
    fn words_parse_and_format() {
        let sft = ShiftSystem::new(
            vec!["ab".into(), "c".into()],
            vec![vec![true, true], vec![true, true]],
        )
        .unwrap();
        let w = sft.parse_word("ab,c,ab").unwrap();
        assert_eq!(w, vec![0, 1, 0]);
        assert_eq!(sft.format_word(&w), "ab,c,ab");
        assert_eq!(golden().parse_word("010").unwrap(), vec![0, 1, 0]);
    }
}
