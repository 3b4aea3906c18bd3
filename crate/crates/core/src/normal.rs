//! Normal forms modulo the identities of `UT_n`, and the basis of the
//! relatively free algebra.
//!
//! A normal monomial is `w_0 z_1 w_1 ... z_l w_l`: `l` variables of
//! nontrivial degree whose (star-adjusted) degrees form a good sequence,
//! separated by `l + 1` blocks of commuting trivial-degree variables. Block
//! `k` sits at the chain position `i_{k+1}`; a trivial variable there
//! evaluates to `xi[i_{k+1}]` when plain and to `xi[n+1-i_{k+1}]` when
//! starred.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigUint;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::freestar::{GradedVar, StarMonomial, StarPoly};
use crate::grading::{
    chain_of, good_sequences, middle_degree_kind, support_lookup, symmetric_blocks, MiddleKind,
};
use crate::group::GroupWord;
use crate::scalar::{Field, Scalar};
use crate::utmatrix::InvolutionKind;

/// A block of commuting trivial-degree variables: plain ids, then starred
/// ids, each ascending (repeats allowed).
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Block {
    pub plain: Vec<u32>,
    pub starred: Vec<u32>,
}

impl Block {
    fn is_sorted(&self) -> bool {
        self.plain.is_sorted() && self.starred.is_sorted()
    }

    fn sort(&mut self) {
        self.plain.sort_unstable();
        self.starred.sort_unstable();
    }

    fn swapped(&self) -> Block {
        Block {
            plain: self.starred.clone(),
            starred: self.plain.clone(),
        }
    }

    fn len(&self) -> usize {
        self.plain.len() + self.starred.len()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalMonomial {
    pub n: usize,
    pub zs: Vec<GradedVar>,
    pub blocks: Vec<Block>,
}

type StateKey = (Vec<u32>, Vec<bool>, Vec<GroupWord>, Vec<Block>);

impl NormalMonomial {
    pub fn factors(&self) -> Vec<GradedVar> {
        let rank = self.n - 1;
        let mut out = Vec::with_capacity(self.degree_total());
        for (k, b) in self.blocks.iter().enumerate() {
            if k > 0 {
                out.push(self.zs[k - 1].clone());
            }
            out.extend(
                b.plain
                    .iter()
                    .map(|&id| GradedVar::trivial(rank, id, false)),
            );
            out.extend(
                b.starred
                    .iter()
                    .map(|&id| GradedVar::trivial(rank, id, true)),
            );
        }
        out
    }

    pub fn to_monomial(&self, field: Field) -> StarMonomial {
        StarMonomial::unit(field, self.factors())
    }

    pub fn degree_total(&self) -> usize {
        self.zs.len() + self.blocks.iter().map(Block::len).sum::<usize>()
    }

    /// Chain positions of the star-adjusted z-degrees (empty when `l = 0`).
    pub fn chain(&self) -> Vec<usize> {
        let seq: Vec<_> = self.zs.iter().map(GradedVar::effective_degree).collect();
        chain_of(self.n, &seq).unwrap_or_default()
    }

    fn key(&self) -> StateKey {
        (
            self.zs.iter().map(|v| v.id).collect(),
            self.zs.iter().map(|v| v.starred).collect(),
            self.zs.iter().map(|v| v.degree.clone()).collect(),
            self.blocks.clone(),
        )
    }
}

impl fmt::Display for NormalMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = self.factors().iter().map(ToString::to_string).join(" ");
        if text.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&text)
        }
    }
}

/// Tags of the rewrite rules.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    /// Annihilate: a degree outside the support or a bad z-sequence.
    R1,
    /// Unstar a z of symmetric degree, times `epsilon`.
    R2,
    /// Sort commuting trivial variables inside a block.
    R3,
    /// Move a starred trivial variable across a symmetric stretch.
    R4,
    /// Odd `n`: unstar a trivial variable sitting at the centre position.
    R5,
    /// Finite field: reduce exponents with `x^q = x`.
    R6,
    /// `n = 1`: the involution is trivial.
    R7,
    /// Pick the canonical representative under `w -> epsilon w^*` on
    /// symmetric stretches.
    R8,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteTrace {
    pub input: StarMonomial,
    pub steps: Vec<(Rule, StarPoly)>,
    pub output: StarPoly,
}

impl fmt::Display for RewriteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{}", self.input)?;
        for (rule, p) in &self.steps {
            writeln!(f, "  {rule}: {p}")?;
        }
        write!(f, "  = {}", self.output)
    }
}

struct Ctx {
    n: usize,
    field: Field,
    eps: Scalar,
}

impl Ctx {
    fn new(n: usize, kind: InvolutionKind, field: Field) -> Self {
        Ctx {
            n,
            field,
            eps: field.from_i64(kind.epsilon()),
        }
    }
}

type Log<'a> = Option<&'a mut Vec<(Rule, StarPoly)>>;

fn record(log: &mut Log<'_>, rule: Rule, coeff: &Scalar, st: Option<&NormalMonomial>) {
    if let Some(steps) = log.as_deref_mut() {
        let p = match st {
            Some(st) => StarPoly::from_monomial(StarMonomial::new(coeff.clone(), st.factors())),
            None => StarPoly::zero(),
        };
        steps.push((rule, p));
    }
}

fn cap_exponents(block: &mut Block, q: u64) {
    let cap = |ids: &mut Vec<u32>| {
        let counts = ids.iter().copied().counts();
        let mut out: Vec<u32> = counts
            .into_iter()
            .flat_map(|(id, c)| {
                let c = c as u64;
                let keep = if c >= q { (c - 1) % (q - 1) + 1 } else { c };
                std::iter::repeat_n(id, keep as usize)
            })
            .collect();
        out.sort_unstable();
        *ids = out;
    };
    cap(&mut block.plain);
    cap(&mut block.starred);
}

/// R2, R4/R5, R3, R6 on a state whose z-sequence is known to be good.
fn settle(ctx: &Ctx, st: &mut NormalMonomial, coeff: &mut Scalar, log: &mut Log<'_>) {
    let n = ctx.n;
    let mut changed = false;
    for z in st.zs.iter_mut() {
        if z.starred && matches!(support_lookup(n, &z.degree), Some((i, j)) if i + j == n + 1) {
            z.starred = false;
            *coeff = &*coeff * &ctx.eps;
            changed = true;
        }
    }
    if changed {
        record(log, Rule::R2, coeff, Some(st));
    }
    if !st.zs.is_empty() {
        let chain = st.chain();
        let mut moved = [false, false];
        for k in 0..st.blocks.len() {
            let ball = chain[k];
            let Some(t) = chain.iter().position(|&c| c == n + 1 - ball) else {
                continue;
            };
            let ids = std::mem::take(&mut st.blocks[k].starred);
            if !ids.is_empty() {
                moved[usize::from(t != k)] = true;
                st.blocks[t].plain.extend(ids);
            }
        }
        if moved[0] {
            record(log, Rule::R5, coeff, Some(st));
        }
        if moved[1] {
            record(log, Rule::R4, coeff, Some(st));
        }
    }
    if st.blocks.iter().any(|b| !b.is_sorted()) {
        st.blocks.iter_mut().for_each(Block::sort);
        record(log, Rule::R3, coeff, Some(st));
    } else {
        st.blocks.iter_mut().for_each(Block::sort);
    }
    if let Some(q) = ctx.field.order() {
        let before = st.blocks.clone();
        st.blocks.iter_mut().for_each(|b| cap_exponents(b, q));
        if before != st.blocks {
            record(log, Rule::R6, coeff, Some(st));
        }
    }
}

/// `w -> epsilon * w^*` on the stretch `z_a ... z_b` (1-based, `a < b`).
fn flip_stretch(st: &NormalMonomial, a: usize, b: usize) -> NormalMonomial {
    let mut zs = st.zs[..a - 1].to_vec();
    zs.extend(st.zs[a - 1..b].iter().rev().map(GradedVar::toggled));
    zs.extend(st.zs[b..].iter().cloned());
    let mut blocks = st.blocks[..a].to_vec();
    blocks.extend(st.blocks[a..b].iter().rev().map(Block::swapped));
    blocks.extend(st.blocks[b..].iter().cloned());
    NormalMonomial {
        n: st.n,
        zs,
        blocks,
    }
}

/// Orbit of `st` under stretch flips; returns the least state and the
/// scalar `c` with `st = c * least` modulo the identities.
fn orbit_min(ctx: &Ctx, st: &NormalMonomial) -> (NormalMonomial, Scalar) {
    let mut seen: BTreeMap<StateKey, (NormalMonomial, Scalar)> = BTreeMap::new();
    let mut queue = VecDeque::new();
    seen.insert(st.key(), (st.clone(), ctx.field.one()));
    queue.push_back((st.clone(), ctx.field.one()));
    while let Some((cur, c)) = queue.pop_front() {
        for (a, b) in symmetric_blocks(ctx.n, &cur.chain()) {
            if a == b {
                continue;
            }
            let mut next = flip_stretch(&cur, a, b);
            let mut c2 = &c * &ctx.eps;
            settle(ctx, &mut next, &mut c2, &mut None);
            let key = next.key();
            match seen.get(&key) {
                Some((_, old)) => debug_assert!(old == &c2, "inconsistent signs in orbit"),
                None => {
                    seen.insert(key, (next.clone(), c2.clone()));
                    queue.push_back((next, c2));
                }
            }
        }
    }
    let (_, (best, c)) = seen.into_iter().next().expect("orbit contains the start");
    // st = c * best, since every move is an equality up to its recorded factor
    (best, c)
}

/// Splits factors into z's and trivial blocks, without reordering.
fn split(n: usize, factors: &[GradedVar]) -> NormalMonomial {
    let mut zs = Vec::new();
    let mut blocks = vec![Block::default()];
    for v in factors {
        if v.is_trivial() {
            let b = blocks.last_mut().expect("nonempty");
            if v.starred {
                b.starred.push(v.id);
            } else {
                b.plain.push(v.id);
            }
        } else {
            zs.push(v.clone());
            blocks.push(Block::default());
        }
    }
    NormalMonomial { n, zs, blocks }
}

/// Trivial factors of a block must be plain-then-starred, each run sorted.
fn block_runs_sorted(factors: &[GradedVar]) -> bool {
    let mut seen_star = false;
    for v in factors.iter().filter(|v| v.is_trivial()) {
        if v.starred {
            seen_star = true;
        } else if seen_star {
            return false;
        }
    }
    true
}

fn reduce_monomial(
    ctx: &Ctx,
    m: &StarMonomial,
    mut log: Log<'_>,
) -> Option<(Scalar, NormalMonomial)> {
    let n = ctx.n;
    let mut coeff = m.coeff.clone();
    if coeff.is_zero() {
        return None;
    }
    if n == 1 {
        let mut st = split(1, &m.factors);
        if !st.blocks[0].starred.is_empty() {
            let b = &mut st.blocks[0];
            b.plain.append(&mut b.starred);
            record(&mut log, Rule::R7, &coeff, Some(&st));
        }
        settle(ctx, &mut st, &mut coeff, &mut log);
        return Some((coeff, st));
    }
    if m.factors
        .iter()
        .any(|v| !v.is_trivial() && support_lookup(n, &v.degree).is_none())
    {
        record(&mut log, Rule::R1, &coeff, None);
        return None;
    }
    let mut st = split(n, &m.factors);
    if st.zs.is_empty() {
        settle(ctx, &mut st, &mut coeff, &mut log);
        return Some((coeff, st));
    }
    let seq: Vec<_> = st.zs.iter().map(GradedVar::effective_degree).collect();
    if chain_of(n, &seq).is_none() {
        record(&mut log, Rule::R1, &coeff, None);
        return None;
    }
    settle(ctx, &mut st, &mut coeff, &mut log);
    let (best, c) = orbit_min(ctx, &st);
    if best != st {
        coeff = &coeff * &c;
        st = best;
        record(&mut log, Rule::R8, &coeff, Some(&st));
    }
    Some((coeff, st))
}

/// The normal form of a single monomial: `None` when it lies in the ideal.
pub fn normalize_monomial(
    n: usize,
    kind: InvolutionKind,
    field: Field,
    m: &StarMonomial,
) -> Result<Option<(Scalar, NormalMonomial)>> {
    check_args(n, kind)?;
    Ok(reduce_monomial(&Ctx::new(n, kind, field), m, None))
}

fn check_args(n: usize, kind: InvolutionKind) -> Result<()> {
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    kind.check_size(n)
}

/// Rewrites `p` into a combination of normal monomials, congruent to `p`
/// modulo the identities.
pub fn normalize(n: usize, kind: InvolutionKind, field: Field, p: &StarPoly) -> Result<StarPoly> {
    check_args(n, kind)?;
    let ctx = Ctx::new(n, kind, field);
    let mut out = StarPoly::zero();
    for m in p.monomials() {
        if let Some((c, st)) = reduce_monomial(&ctx, &m, None) {
            out.add_term(st.factors(), c);
        }
    }
    Ok(out)
}

pub fn normalize_traced(
    n: usize,
    kind: InvolutionKind,
    field: Field,
    m: &StarMonomial,
) -> Result<RewriteTrace> {
    check_args(n, kind)?;
    let ctx = Ctx::new(n, kind, field);
    let mut steps = Vec::new();
    let output = match reduce_monomial(&ctx, m, Some(&mut steps)) {
        Some((c, st)) => StarPoly::from_monomial(StarMonomial::new(c, st.factors())),
        None => StarPoly::zero(),
    };
    Ok(RewriteTrace {
        input: m.clone(),
        steps,
        output,
    })
}

/// Shape and star restrictions of a normal monomial; the coefficient is
/// ignored.
pub fn is_normal(n: usize, kind: InvolutionKind, field: Field, m: &StarMonomial) -> bool {
    if check_args(n, kind).is_err() {
        return false;
    }
    let ctx = Ctx::new(n, kind, field);
    // the blocks must already be in plain-then-starred sorted order
    let st = split(n, &m.factors);
    let mut start = 0;
    for (k, block) in st.blocks.iter().enumerate() {
        let end = start + block.len();
        if !block.is_sorted() || !block_runs_sorted(&m.factors[start..end]) {
            return false;
        }
        start = end + usize::from(k < st.zs.len());
    }
    if let Some(q) = field.order() {
        let mut capped = st.blocks.clone();
        capped.iter_mut().for_each(|b| cap_exponents(b, q));
        if capped != st.blocks {
            return false;
        }
    }
    if n == 1 {
        return st.blocks[0].starred.is_empty();
    }
    if st.zs.iter().any(|z| support_lookup(n, &z.degree).is_none()) {
        return false;
    }
    if st.zs.is_empty() {
        return true;
    }
    let seq: Vec<_> = st.zs.iter().map(GradedVar::effective_degree).collect();
    let Some(chain) = chain_of(n, &seq) else {
        return false;
    };
    if st.zs.iter().any(|z| {
        z.starred && matches!(support_lookup(n, &z.degree), Some((i, j)) if i + j == n + 1)
    }) {
        return false;
    }
    for (a, b) in symmetric_blocks(n, &chain) {
        if !st.blocks[a - 1].starred.is_empty() || !st.blocks[b].starred.is_empty() {
            return false;
        }
    }
    if n % 2 == 1 {
        for (k, g) in seq.iter().enumerate() {
            let blocked = match middle_degree_kind(n, g) {
                Ok(MiddleKind::LeftMiddle) => &st.blocks[k],
                Ok(MiddleKind::RightMiddle) => &st.blocks[k + 1],
                _ => continue,
            };
            if !blocked.starred.is_empty() {
                return false;
            }
        }
    }
    orbit_min(&ctx, &st).0 == st
}

/// Least star pattern in the orbit of `pattern` under flipping the stars
/// of a symmetric stretch (`a <= b`), each flip costing a factor
/// `epsilon`; returns the pattern and the sign `s` with
/// `input = s * representative`.
///
/// This ignores the reversal that a true application of the involution
/// performs, so it is a counting device: the representatives index the
/// `2^(l - #stretches)` classes per good sequence.
pub fn canonical_star_pattern(
    n: usize,
    kind: InvolutionKind,
    seq: &[GroupWord],
    pattern: &[bool],
) -> Result<(Vec<bool>, i64)> {
    let chain = chain_of(n, seq).ok_or_else(|| {
        Error::Precondition("canonical_star_pattern needs a good sequence".into())
    })?;
    if pattern.len() != seq.len() {
        return Err(Error::Precondition(format!(
            "pattern length {} differs from sequence length {}",
            pattern.len(),
            seq.len()
        )));
    }
    let blocks = symmetric_blocks(n, &chain);
    let mut seen: BTreeMap<Vec<bool>, i64> = BTreeMap::new();
    let mut queue = VecDeque::from([(pattern.to_vec(), 1i64)]);
    seen.insert(pattern.to_vec(), 1);
    while let Some((p, s)) = queue.pop_front() {
        for &(a, b) in &blocks {
            let mut q = p.clone();
            q[a - 1..b].iter_mut().for_each(|x| *x = !*x);
            let s2 = s * kind.epsilon();
            if let std::collections::btree_map::Entry::Vacant(e) = seen.entry(q.clone()) {
                e.insert(s2);
                queue.push_back((q, s2));
            }
        }
    }
    Ok(seen.into_iter().next().expect("orbit contains the input"))
}

/// Representative star patterns of a good sequence, in lexicographic order.
fn canonical_patterns(n: usize, kind: InvolutionKind, seq: &[GroupWord]) -> Vec<Vec<bool>> {
    let l = seq.len();
    if l == 0 {
        return vec![Vec::new()];
    }
    (0..l)
        .map(|_| [false, true])
        .multi_cartesian_product()
        .filter(|p| {
            canonical_star_pattern(n, kind, seq, p)
                .map(|(q, _)| &q == p)
                .unwrap_or(false)
        })
        .collect()
}

/// Places a trivial variable may occupy in a normal monomial over `chain`:
/// `(block, starred)`.
fn placements(n: usize, chain: &[usize]) -> Vec<(usize, bool)> {
    if chain.is_empty() {
        return if n == 1 {
            vec![(0, false)]
        } else {
            vec![(0, false), (0, true)]
        };
    }
    let mut out = Vec::new();
    for (k, &ball) in chain.iter().enumerate() {
        out.push((k, false));
        if !chain.contains(&(n + 1 - ball)) {
            out.push((k, true));
        }
    }
    out
}

fn check_basis_args(n: usize, kind: InvolutionKind, l: usize, m: usize) -> Result<()> {
    check_args(n, kind)?;
    if l > n - 1 || l > m {
        return Err(Error::Precondition(format!(
            "basis needs 0 <= l <= min(m, n-1), got n={n}, l={l}, m={m}"
        )));
    }
    Ok(())
}

/// `(chain, z-variables)` for every good sequence and representative
/// pattern; z ids are `m-l+1..=m` along the chain.
fn skeletons(
    n: usize,
    kind: InvolutionKind,
    l: usize,
    m: usize,
) -> Vec<(Vec<usize>, Vec<GradedVar>)> {
    if l == 0 {
        return vec![(Vec::new(), Vec::new())];
    }
    let k = (m - l) as u32;
    let mut out = Vec::new();
    for gs in good_sequences(n, l) {
        let g = &gs.degrees.0;
        for p in canonical_patterns(n, kind, g) {
            let zs = g
                .iter()
                .zip(&p)
                .enumerate()
                .map(|(t, (d, &s))| {
                    GradedVar::new(k + 1 + t as u32, if s { d.star() } else { d.clone() }, s)
                })
                .collect();
            out.push((gs.chain.clone(), zs));
        }
    }
    out
}

/// Normal monomials of total degree `m` with `l` nontrivial variables.
///
/// Trivial ids are `1..=m-l`; in multilinear mode each is used once,
/// otherwise monomials are all multisets of `m-l` trivial occurrences
/// (exponents at most `q-1` per block and star flag over `F_q`).
pub fn enumerate_basis(
    n: usize,
    kind: InvolutionKind,
    field: Field,
    l: usize,
    m: usize,
    multilinear: bool,
) -> Result<Vec<NormalMonomial>> {
    check_basis_args(n, kind, l, m)?;
    let k = m - l;
    let cap = field.order().map(|q| (q - 1) as usize);
    let out: Vec<Vec<NormalMonomial>> = skeletons(n, kind, l, m)
        .par_iter()
        .map(|(chain, zs)| {
            let opts = placements(n, chain);
            let build = |assign: &[(u32, (usize, bool))]| {
                let mut blocks = vec![Block::default(); l + 1];
                for &(id, (b, s)) in assign {
                    if s {
                        blocks[b].starred.push(id);
                    } else {
                        blocks[b].plain.push(id);
                    }
                }
                blocks.iter_mut().for_each(Block::sort);
                NormalMonomial {
                    n,
                    zs: zs.clone(),
                    blocks,
                }
            };
            if multilinear {
                if k == 0 {
                    return vec![build(&[])];
                }
                (0..k)
                    .map(|_| opts.iter().copied())
                    .multi_cartesian_product()
                    .map(|choice| {
                        let assign: Vec<_> = choice
                            .into_iter()
                            .enumerate()
                            .map(|(i, o)| (i as u32 + 1, o))
                            .collect();
                        build(&assign)
                    })
                    .collect()
            } else {
                let items: Vec<(u32, (usize, bool))> = (1..=k as u32)
                    .cartesian_product(opts.iter().copied())
                    .collect();
                items
                    .iter()
                    .copied()
                    .combinations_with_replacement(k)
                    .filter(|c| cap.is_none_or(|cap| c.iter().counts().values().all(|&v| v <= cap)))
                    .map(|c| build(&c))
                    .collect()
            }
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, t| acc * (n - t) / (t + 1))
}

/// Number of multisets of size `k` over `kinds` elements with each
/// multiplicity at most `cap`.
fn bounded_multisets(kinds: u64, k: u64, cap: Option<u64>) -> BigUint {
    if k == 0 {
        return BigUint::one();
    }
    match cap {
        None => binomial(kinds + k - 1, k),
        Some(cap) => {
            // coefficient of t^k in (1 + t + ... + t^cap)^kinds
            let mut dp = vec![BigUint::zero(); k as usize + 1];
            dp[0] = BigUint::one();
            for _ in 0..kinds {
                let mut next = vec![BigUint::zero(); k as usize + 1];
                for (s, v) in dp.iter().enumerate() {
                    if v.is_zero() {
                        continue;
                    }
                    for e in 0..=cap.min(k - s as u64) {
                        next[s + e as usize] += v;
                    }
                }
                dp = next;
            }
            dp.swap_remove(k as usize)
        }
    }
}

/// `|enumerate_basis(..)|` without listing the monomials.
pub fn count_basis(
    n: usize,
    kind: InvolutionKind,
    field: Field,
    l: usize,
    m: usize,
    multilinear: bool,
) -> Result<BigUint> {
    check_basis_args(n, kind, l, m)?;
    let k = (m - l) as u64;
    let cap = field.order().map(|q| q - 1);
    Ok(skeletons(n, kind, l, m)
        .iter()
        .map(|(chain, _)| {
            let opts = placements(n, chain).len() as u64;
            if multilinear {
                BigUint::from(opts).pow(k as u32)
            } else {
                bounded_multisets(k * opts, k, cap)
            }
        })
        .sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;
    const TAU: InvolutionKind = InvolutionKind::Orthogonal;
    const SYMP: InvolutionKind = InvolutionKind::Symplectic;

    fn mono(text: &str, n: usize) -> StarMonomial {
        StarMonomial::parse(text, n - 1, Q).unwrap()
    }

    fn nf(text: &str, n: usize, kind: InvolutionKind) -> String {
        normalize(n, kind, Q, &StarPoly::from_monomial(mono(text, n)))
            .unwrap()
            .to_string()
    }

    fn words(texts: &[&str], n: usize) -> Vec<GroupWord> {
        texts
            .iter()
            .map(|t| GroupWord::parse(t, n - 1).unwrap())
            .collect()
    }

    #[test]
    fn is_normal_examples() {
        assert!(is_normal(2, TAU, Q, &mono("x2[a1] x1", 2)));
        assert!(!is_normal(2, TAU, Q, &mono("x1' x2[a1]", 2)));
        assert!(!is_normal(2, TAU, Q, &mono("x2[a1] x1'", 2)));
        assert!(is_normal(2, TAU, Q, &mono("x1 x1'", 2)));
        assert!(!is_normal(2, TAU, Q, &mono("x1' x1", 2)));
        assert!(!is_normal(2, TAU, Q, &mono("x2 x1", 2)));
        assert!(!is_normal(2, TAU, Q, &mono("x1[a1]'", 2)));
        // n = 3, left-middle z: no star on its left
        assert!(!is_normal(3, TAU, Q, &mono("x1' x2[a2]", 3)));
        assert!(is_normal(3, TAU, Q, &mono("x2[a2] x1'", 3)));
        assert!(!is_normal(3, TAU, Field::Prime(3), &mono("x1 x1 x1", 3)));
        assert!(is_normal(
            3,
            TAU,
            Field::Prime(3),
            &mono("x1 x1 x1' x1'", 3)
        ));
    }

    #[test]
    fn normalize_examples() {
        assert_eq!(nf("x1' x2[a1]", 2, TAU), "x2[a1] x1");
        assert_eq!(nf("x1[a1]'", 2, TAU), "x1[a1]");
        assert_eq!(nf("x1[a1]'", 2, SYMP), "-1 x1[a1]");
        assert_eq!(nf("x1' x2[a2]", 3, TAU), "x1 x2[a2]");
        assert_eq!(nf("x2[a1] x1'", 2, TAU), "x1 x2[a1]");
        assert_eq!(nf("x2 x1' x1", 2, TAU), "x1 x2 x1'");
        assert_eq!(nf("x1[a2] x2[a1]", 3, TAU), "0");
        assert_eq!(nf("x1[a1^-1]", 3, TAU), "0");
        assert_eq!(nf("x1' x2'", 1, TAU), "x1 x2");
    }

    #[test]
    fn finite_field_exponents() {
        let f = Field::Prime(3);
        let p =
            StarPoly::from_monomial(StarMonomial::parse("x1 x1 x1 x1 x1' x1' x1'", 1, f).unwrap());
        assert_eq!(normalize(2, TAU, f, &p).unwrap().to_string(), "x1 x1 x1'");
    }

    #[test]
    fn reversal_moves() {
        // n = 3: x1[a1] x2[a2] is equal to x2[a2]' x1[a1]' (stretch is symmetric)
        assert_eq!(nf("x2[a2]' x1[a1]'", 3, TAU), "x1[a1] x2[a2]");
        let t = normalize_traced(3, TAU, Q, &mono("x2[a2]' x1[a1]'", 3)).unwrap();
        assert_eq!(t.steps.last().unwrap().0, Rule::R8);
        let t = normalize_traced(3, TAU, Q, &mono("x1 x2[a1]' x3[a1.a2] x4", 3)).unwrap();
        assert!(t.output.is_zero());
        assert_eq!(t.steps[0].0, Rule::R1);
    }

    #[test]
    fn canonical_pattern_examples() {
        let (p, s) = canonical_star_pattern(2, SYMP, &words(&["a1"], 2), &[true]).unwrap();
        assert_eq!((p, s), (vec![false], -1));
        let seq = words(&["a1", "a2", "a3"], 4);
        let reps: std::collections::BTreeSet<_> = (0..3)
            .map(|_| [false, true])
            .multi_cartesian_product()
            .map(|p| canonical_star_pattern(4, TAU, &seq, &p).unwrap().0)
            .collect();
        assert_eq!(reps.len(), 2);
        let (p, s) =
            canonical_star_pattern(3, TAU, &words(&["a1", "a2"], 3), &[false, false]).unwrap();
        assert_eq!((p, s), (vec![false, false], 1));
        assert!(canonical_star_pattern(3, TAU, &words(&["a2", "a1"], 3), &[false, false]).is_err());
    }

    #[test]
    fn basis_examples() {
        let b = enumerate_basis(2, TAU, Q, 1, 2, true).unwrap();
        let texts: Vec<_> = b.iter().map(ToString::to_string).collect();
        assert_eq!(texts, ["x1 x2[a1]", "x2[a1] x1"]);
        let b = enumerate_basis(2, TAU, Q, 0, 1, true).unwrap();
        let texts: Vec<_> = b.iter().map(ToString::to_string).collect();
        assert_eq!(texts, ["x1", "x1'"]);
        assert_eq!(enumerate_basis(3, TAU, Q, 2, 2, true).unwrap().len(), 2);
        assert!(enumerate_basis(3, TAU, Q, 3, 4, true).is_err());
    }

    #[test]
    fn top_count_closed_form() {
        for n in 2..=4usize {
            for kind in InvolutionKind::applicable(n) {
                for m in n - 1..=n + 2 {
                    let b = enumerate_basis(n, kind, Q, n - 1, m, true).unwrap();
                    let expect = (1usize << ((n - 1) / 2)) * n.pow((m + 1 - n) as u32);
                    assert_eq!(b.len(), expect, "n={n} m={m}");
                }
            }
        }
    }

    #[test]
    fn basis_outputs_are_fixed_points() {
        for n in 1..=4usize {
            for kind in InvolutionKind::applicable(n) {
                for field in [Q, Field::Prime(3)] {
                    for m in 0..=3usize {
                        for l in 0..=m.min(n - 1) {
                            for multilinear in [true, false] {
                                let b = enumerate_basis(n, kind, field, l, m, multilinear).unwrap();
                                let count = count_basis(n, kind, field, l, m, multilinear).unwrap();
                                assert_eq!(BigUint::from(b.len()), count, "n={n} l={l} m={m}");
                                for nm in &b {
                                    let mo = nm.to_monomial(field);
                                    assert!(is_normal(n, kind, field, &mo), "{nm}");
                                    let r =
                                        normalize_monomial(n, kind, field, &mo).unwrap().unwrap();
                                    assert_eq!(r, (field.one(), nm.clone()));
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bounded_multiset_counts() {
        assert_eq!(bounded_multisets(3, 2, None), BigUint::from(6u32));
        assert_eq!(bounded_multisets(3, 2, Some(1)), BigUint::from(3u32));
        assert_eq!(bounded_multisets(2, 5, Some(2)), BigUint::zero());
    }
}
