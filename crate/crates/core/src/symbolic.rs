//! Finite words over the generator alphabet `{1, ..., k}`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

/// A finite word; letter `i` names the `i`-th generator (1-based).
///
/// As a map the word applies its first letter first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word(Vec<u16>);

impl Word {
    pub fn identity() -> Self {
        Word(Vec::new())
    }

    /// Panics on the letter `0`; letters are 1-based.
    pub fn new(letters: Vec<u16>) -> Self {
        assert!(letters.iter().all(|&l| l >= 1), "word letters are 1-based");
        Word(letters)
    }

    pub fn single(letter: u16) -> Self {
        Word::new(vec![letter])
    }

    pub fn letters(&self) -> &[u16] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, letter: u16) {
        assert!(letter >= 1, "word letters are 1-based");
        self.0.push(letter);
    }

    pub fn max_letter(&self) -> u16 {
        self.0.iter().copied().max().unwrap_or(0)
    }

    /// `u` then `v`.
    pub fn concat(&self, v: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&v.0);
        Word(letters)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    /// Breadth-first order: shorter words first, then lexicographic.
    pub fn bfs_cmp(&self, other: &Word) -> Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl From<Vec<u16>> for Word {
    fn from(letters: Vec<u16>) -> Self {
        Word::new(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{l}")?;
        }
        write!(f, ")")
    }
}

pub fn concat(u: &Word, v: &Word) -> Word {
    u.concat(v)
}

/// Words over `{1..k}` in breadth-first lexicographic order, starting with
/// the identity, up to length `max_len` or `budget` words.
pub fn enumerate_words(k: usize, max_len: usize, budget: usize) -> WordStream {
    WordStream { k: k as u16, max_len, remaining: budget, current: Some(Vec::new()) }
}

#[derive(Clone, Debug)]
pub struct WordStream {
    k: u16,
    max_len: usize,
    remaining: usize,
    current: Option<Vec<u16>>,
}

impl Iterator for WordStream {
    type Item = Word;

    fn next(&mut self) -> Option<Word> {
        if self.remaining == 0 || self.k == 0 {
            return None;
        }
        let cur = self.current.take()?;
        if cur.len() > self.max_len {
            return None;
        }
        self.remaining -= 1;
        // odometer increment, growing the length on overflow
        let mut next = cur.clone();
        let mut i = next.len();
        loop {
            if i == 0 {
                next = vec![1; cur.len() + 1];
                break;
            }
            i -= 1;
            if next[i] < self.k {
                next[i] += 1;
                break;
            }
            next[i] = 1;
        }
        self.current = Some(next);
        Some(Word(cur))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(l: &[u16]) -> Word {
        Word::new(l.to_vec())
    }

    #[test]
    fn enumeration_order() {
        let words: Vec<Word> = enumerate_words(2, 2, usize::MAX).collect();
        assert_eq!(words, vec![w(&[]), w(&[1]), w(&[2]), w(&[1, 1]), w(&[1, 2]), w(&[2, 1]), w(&[2, 2])]);
        let unary: Vec<Word> = enumerate_words(1, 3, usize::MAX).collect();
        assert_eq!(unary, vec![w(&[]), w(&[1]), w(&[1, 1]), w(&[1, 1, 1])]);
    }

    #[test]
    fn enumeration_respects_budget() {
        assert_eq!(enumerate_words(3, 10, 5).count(), 5);
        assert_eq!(enumerate_words(2, 0, 10).count(), 1);
    }

    #[test]
    fn concat_examples() {
        assert_eq!(concat(&w(&[1, 2]), &w(&[2])), w(&[1, 2, 2]));
        assert_eq!(concat(&w(&[2, 1]), &Word::identity()), w(&[2, 1]));
        assert_eq!(w(&[1, 2, 3]).reversed(), w(&[3, 2, 1]));
    }

    proptest! {
        #[test]
        fn enumeration_count_and_prefix_closure(k in 2usize..5, len in 0usize..5) {
            let words: Vec<Word> = enumerate_words(k, len, usize::MAX).collect();
            let expected = (k.pow(len as u32 + 1) - 1) / (k - 1);
            prop_assert_eq!(words.len(), expected);
            let seen: std::collections::HashSet<&Word> = words.iter().collect();
            for (i, word) in words.iter().enumerate() {
                if !word.is_empty() {
                    let prefix = Word(word.letters()[..word.len() - 1].to_vec());
                    prop_assert!(seen.contains(&prefix));
                    let pos = words.iter().position(|x| *x == prefix).unwrap();
                    prop_assert!(pos < i);
                }
                if i > 0 {
                    prop_assert_eq!(words[i - 1].bfs_cmp(word), Ordering::Less);
                }
            }
        }

        #[test]
        fn concat_adds_lengths(a in prop::collection::vec(1u16..4, 0..8), b in prop::collection::vec(1u16..4, 0..8)) {
            let (u, v) = (Word::new(a), Word::new(b));
            prop_assert_eq!(u.concat(&v).len(), u.len() + v.len());
        }
    }
}
