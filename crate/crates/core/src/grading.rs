//! The elementary grading `deg e_{i,i+1} = a_i` on `UT_n`: support lookup,
//! good sequences, symmetric degrees and the shelf bound.
//!
//! A good sequence of length `l` is the same thing as a strictly increasing
//! chain of `l + 1` positions `i_1 < ... < i_{l+1}` in `1..=n`; most of the
//! functions here go through that chain.

use itertools::Itertools;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::group::GroupWord;

/// `a_i a_{i+1} ... a_{j-1}`, the degree of the matrix unit `e_ij`.
pub fn deg_unit(n: usize, i: usize, j: usize) -> Result<GroupWord> {
    if !(1 <= i && i < j && j <= n) {
        return Err(Error::Precondition(format!(
            "deg_unit needs 1 <= i < j <= n, got i={i}, j={j}, n={n}"
        )));
    }
    GroupWord::ascending(n - 1, i, j)
}

/// The unique `(i, j)` with `deg e_ij = g`, or `None` when `g` is outside
/// the support (or trivial).
pub fn support_lookup(n: usize, g: &GroupWord) -> Option<(usize, usize)> {
    if n == 0 || g.rank() != n - 1 || g.is_trivial() {
        return None;
    }
    let letters = g.letters();
    let start = letters[0].index;
    for (k, l) in letters.iter().enumerate() {
        if l.inverted || l.index != start + k {
            return None;
        }
    }
    Some((start, start + letters.len()))
}

/// A finite sequence of group elements, typically the degrees of the
/// nontrivial variables of a monomial read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DegreeSequence(pub Vec<GroupWord>);

impl DegreeSequence {
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            self.0
                .iter()
                .map(|g| Value::String(g.to_string()))
                .collect(),
        )
    }

    pub fn from_json(value: &Value, rank: usize) -> Result<Self> {
        let bad = || Error::Precondition("degree sequence must be a JSON array of words".into());
        let items = value.as_array().ok_or_else(bad)?;
        items
            .iter()
            .map(|v| GroupWord::parse(v.as_str().ok_or_else(bad)?, rank))
            .collect::<Result<Vec<_>>>()
            .map(DegreeSequence)
    }
}

/// The chain of positions realising `seq`, when it is good.
pub fn chain_of(n: usize, seq: &[GroupWord]) -> Option<Vec<usize>> {
    let mut balls: Vec<usize> = Vec::with_capacity(seq.len() + 1);
    for g in seq {
        let (i, j) = support_lookup(n, g)?;
        match balls.last() {
            None => {
                balls.push(i);
                balls.push(j);
            }
            Some(&last) if last == i => balls.push(j),
            Some(_) => return None,
        }
    }
    Some(balls)
}

pub fn is_good(n: usize, seq: &[GroupWord]) -> bool {
    chain_of(n, seq).is_some()
}

/// A good sequence together with the chain of positions that induces it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodSequence {
    pub chain: Vec<usize>,
    pub degrees: DegreeSequence,
}

/// All good sequences of length `l`, one per `(l+1)`-subset of `1..=n` in
/// lexicographic order. For `l = 0` this yields `n` copies of the empty
/// sequence, one per single position.
pub fn good_sequences(n: usize, l: usize) -> Vec<GoodSequence> {
    if n == 0 || l > n - 1 {
        return Vec::new();
    }
    (1..=n)
        .combinations(l + 1)
        .map(|chain| {
            let degrees = chain
                .windows(2)
                .map(|w| GroupWord::ascending(n - 1, w[0], w[1]).expect("indices in range"))
                .collect();
            GoodSequence {
                chain,
                degrees: DegreeSequence(degrees),
            }
        })
        .collect()
}

pub fn is_symmetric_degree(n: usize, g: &GroupWord) -> bool {
    matches!(support_lookup(n, g), Some((i, j)) if i + j == n + 1)
}

/// Symmetric blocks of a chain, as 1-based `(a, b)` with `a <= b`:
/// `i_a + i_{b+1} = n + 1`.
pub(crate) fn symmetric_blocks(n: usize, chain: &[usize]) -> Vec<(usize, usize)> {
    let l = chain.len().saturating_sub(1);
    let mut out = Vec::new();
    for a in 1..=l {
        for b in a..=l {
            if chain[a - 1] + chain[b] == n + 1 {
                out.push((a, b));
            }
        }
    }
    out
}

/// All 1-based `(a, b)`, `a <= b`, such that `g_a ... g_b` is symmetric.
pub fn symmetric_subsequences(n: usize, seq: &[GroupWord]) -> Result<Vec<(usize, usize)>> {
    let chain = chain_of(n, seq).ok_or_else(|| {
        Error::Precondition("symmetric_subsequences needs a good sequence".into())
    })?;
    Ok(symmetric_blocks(n, &chain))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ShelfReport {
    pub count: usize,
    /// `l - ceil(n/2) + 1`, possibly nonpositive.
    pub bound: i64,
    pub bound_satisfied: bool,
    /// Odd `n` only: the count exceeds the bound or a middle degree occurs.
    pub odd_addendum: Option<bool>,
}

/// Checks the pigeonhole lower bound on the number of symmetric
/// subsequences of a good sequence with `l >= floor((n-1)/2)`.
pub fn check_shelf_bound(n: usize, seq: &[GroupWord]) -> Result<ShelfReport> {
    if n < 2 {
        return Err(Error::Precondition("shelf bound needs n > 1".into()));
    }
    let l = seq.len();
    if l < (n - 1) / 2 {
        return Err(Error::Precondition(format!(
            "shelf bound needs l >= floor((n-1)/2), got l={l}, n={n}"
        )));
    }
    let count = symmetric_subsequences(n, seq)?.len();
    let bound = l as i64 - n.div_ceil(2) as i64 + 1;
    let bound_satisfied = count as i64 >= bound;
    let odd_addendum = if n % 2 == 1 {
        let has_middle = seq
            .iter()
            .map(|g| middle_degree_kind(n, g))
            .any(|k| !matches!(k, Ok(MiddleKind::Neither)));
        Some(count as i64 > bound || has_middle)
    } else {
        None
    };
    Ok(ShelfReport {
        count,
        bound,
        bound_satisfied,
        odd_addendum,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MiddleKind {
    /// `g = deg e_{k+1, j}` for some `j > k+1`.
    LeftMiddle,
    /// `g = deg e_{i, k+1}` for some `i < k+1`.
    RightMiddle,
    Neither,
}

/// Classifies `g` against the centre position `k + 1` of `n = 2k + 1`.
pub fn middle_degree_kind(n: usize, g: &GroupWord) -> Result<MiddleKind> {
    if n.is_multiple_of(2) {
        return Err(Error::Precondition(format!(
            "middle degrees need odd n, got {n}"
        )));
    }
    let centre = n / 2 + 1;
    Ok(match support_lookup(n, g) {
        Some((i, _)) if i == centre => MiddleKind::LeftMiddle,
        Some((_, j)) if j == centre => MiddleKind::RightMiddle,
        _ => MiddleKind::Neither,
    })
}
