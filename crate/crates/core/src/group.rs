//! Reduced words in the free group of rank `n - 1` and its order-two
//! anti-automorphism `a_i -> a_{n-i}`.

use std::fmt;

use crate::error::{Error, Result};

/// A generator `a_index` raised to `+1` or `-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub index: usize,
    pub inverted: bool,
}

impl Letter {
    pub fn new(index: usize, inverted: bool) -> Self {
        Letter { index, inverted }
    }

    pub fn inverse(self) -> Self {
        Letter {
            index: self.index,
            inverted: !self.inverted,
        }
    }

    fn cancels(self, other: Letter) -> bool {
        self.index == other.index && self.inverted != other.inverted
    }
}

/// A freely reduced word. The empty word is the neutral element.
///
/// The rank is carried along because the star map depends on it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupWord {
    rank: usize,
    letters: Vec<Letter>,
}

impl GroupWord {
    pub fn identity(rank: usize) -> Self {
        GroupWord {
            rank,
            letters: Vec::new(),
        }
    }

    /// The generator `a_index`.
    pub fn generator(rank: usize, index: usize) -> Result<Self> {
        Self::from_letters(rank, vec![Letter::new(index, false)])
    }

    /// Builds a word from arbitrary letters, reducing eagerly.
    pub fn from_letters(rank: usize, letters: Vec<Letter>) -> Result<Self> {
        let mut out: Vec<Letter> = Vec::with_capacity(letters.len());
        for l in letters {
            if l.index == 0 || l.index > rank {
                return Err(Error::GeneratorOutOfRange {
                    index: l.index,
                    rank,
                });
            }
            push_reduced(&mut out, l);
        }
        Ok(GroupWord { rank, letters: out })
    }

    /// The positive word `a_i a_{i+1} ... a_{j-1}`; empty when `i == j`.
    pub fn ascending(rank: usize, i: usize, j: usize) -> Result<Self> {
        Self::from_letters(rank, (i..j).map(|k| Letter::new(k, false)).collect())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_trivial(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &GroupWord) -> Result<GroupWord> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        let mut out = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut out, l);
        }
        Ok(GroupWord {
            rank: self.rank,
            letters: out,
        })
    }

    pub fn inverse(&self) -> GroupWord {
        GroupWord {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// The anti-automorphism induced by `a_i -> a_{n-i}` where `n = rank + 1`.
    pub fn star(&self) -> GroupWord {
        let n = self.rank + 1;
        GroupWord {
            rank: self.rank,
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter::new(n - l.index, l.inverted))
                .collect(),
        }
    }

    /// Parses `e` or `a<k>[^-1]` terms joined by `.`.
    pub fn parse(text: &str, rank: usize) -> Result<GroupWord> {
        let bad = |reason: &str| Error::MalformedWord {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        if text == "e" {
            return Ok(GroupWord::identity(rank));
        }
        if text.is_empty() {
            return Err(bad("empty input"));
        }
        let mut letters = Vec::new();
        for term in text.split('.') {
            let body = term
                .strip_prefix('a')
                .ok_or_else(|| bad("generator term must start with `a`"))?;
            let (digits, inverted) = match body.strip_suffix("^-1") {
                Some(d) => (d, true),
                None => (body, false),
            };
            if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad("generator index must be a decimal number"));
            }
            let index: usize = digits.parse().map_err(|_| bad("index overflow"))?;
            letters.push(Letter::new(index, inverted));
        }
        GroupWord::from_letters(rank, letters)
    }
}

fn push_reduced(out: &mut Vec<Letter>, l: Letter) {
    match out.last() {
        Some(&last) if last.cancels(l) => {
            out.pop();
        }
        _ => out.push(l),
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("e");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "a{}", l.index)?;
            if l.inverted {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(text: &str, rank: usize) -> GroupWord {
        GroupWord::parse(text, rank).unwrap()
    }

    #[test]
    fn mul_examples() {
        assert!(w("a1", 2).mul(&w("a1^-1", 2)).unwrap().is_trivial());
        let p = w("a1", 2).mul(&w("a2", 2)).unwrap();
        assert_eq!(p, w("a1.a2", 2));
        assert_eq!(p.len(), 2);
        let q = w("a1.a2", 2).mul(&w("a2^-1.a1", 2)).unwrap();
        assert_eq!(q, w("a1.a1", 2));
    }

    #[test]
    fn mul_rank_mismatch() {
        assert_eq!(
            w("a1", 2).mul(&w("a1", 3)),
            Err(Error::RankMismatch { left: 2, right: 3 })
        );
    }

    #[test]
    fn star_examples() {
        assert!(GroupWord::identity(3).star().is_trivial());
        assert_eq!(w("a1.a2", 2).star(), w("a1.a2", 2));
        assert_eq!(w("a1", 3).star(), w("a3", 3));
    }

    #[test]
    fn parse_format() {
        let x = w("a1.a2^-1", 2);
        assert_eq!(x.letters(), &[Letter::new(1, false), Letter::new(2, true)]);
        assert_eq!(w("a1.a2", 2).inverse(), w("a2^-1.a1^-1", 2));
        assert_eq!(GroupWord::identity(2).to_string(), "e");
        assert_eq!(x.to_string(), "a1.a2^-1");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            GroupWord::parse("a3", 2),
            Err(Error::GeneratorOutOfRange { index: 3, rank: 2 })
        ));
        for bad in ["", "a", "b1", "a1..a2", "a1^2", "a1 .a2", "a-1"] {
            assert!(
                matches!(GroupWord::parse(bad, 2), Err(Error::MalformedWord { .. })),
                "{bad:?}"
            );
        }
    }

    #[test]
    fn ascending_words_are_positive() {
        for i in 1..6 {
            for j in i + 1..=6 {
                let g = GroupWord::ascending(5, i, j).unwrap();
                assert_eq!(g.len(), j - i);
                assert!(g.letters().iter().all(|l| !l.inverted));
            }
        }
    }
}
