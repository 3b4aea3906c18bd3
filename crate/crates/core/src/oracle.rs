//! Brute-force verification by generic evaluation.
//!
//! A trivial-degree variable `x_l` is sent to the generic diagonal
//! `sum_j xi[j,l] e_jj`; a variable of nontrivial degree `g` is sent to the
//! bare matrix unit spanning the component of degree `g` (zero outside the
//! support); a starred occurrence is sent to the involution of that image.
//! Everything here is independent of the rewriting code in `normal`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::freestar::{GradedVar, StarMonomial, StarPoly};
use crate::grading::{good_sequences, middle_degree_kind, support_lookup, MiddleKind};
use crate::group::{GroupWord, Letter};
use crate::poly::{MPoly, XiLabel, XiMonomial};
use crate::scalar::{Field, Scalar};
use crate::utmatrix::{involution_on_unit, InvolutionKind, UtMatrix};

/// Default cap on the number of finite-field evaluations.
pub const DEFAULT_BUDGET: u128 = 10_000_000;

type EvalKey = ((usize, usize), XiMonomial);

/// Sparse vector indexed by `(matrix position, xi-monomial)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct EvalVector(BTreeMap<EvalKey, Scalar>);

impl EvalVector {
    pub fn from_matrix(a: &UtMatrix) -> Self {
        let mut out = BTreeMap::new();
        for (&pos, p) in a.entries() {
            for (m, c) in p.terms() {
                out.insert((pos, m.clone()), c.clone());
            }
        }
        EvalVector(out)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&EvalKey, &Scalar)> {
        self.0.iter()
    }

    pub fn add_scaled(&mut self, other: &EvalVector, c: &Scalar) {
        for (k, v) in &other.0 {
            let s = match self.0.get(k) {
                Some(old) => old + &(v * c),
                None => v * c,
            };
            if s.is_zero() {
                self.0.remove(k);
            } else {
                self.0.insert(k.clone(), s);
            }
        }
    }
}

impl fmt::Display for EvalVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("0");
        }
        for (k, (((i, j), m), c)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.degree() == 0 {
                write!(f, "({c})*e{i}{j}")?;
            } else {
                write!(f, "({c})*{m}*e{i}{j}")?;
            }
        }
        Ok(())
    }
}

fn xi(slot: usize, var: u32) -> XiLabel {
    XiLabel {
        slot: slot as u32,
        var,
    }
}

/// Image of a single occurrence as a polynomial matrix.
fn var_image(n: usize, kind: InvolutionKind, field: Field, v: &GradedVar) -> Result<UtMatrix> {
    let plain = if v.is_trivial() {
        UtMatrix::diagonal(
            (1..=n)
                .map(|j| MPoly::term(field.one(), XiMonomial::var(xi(j, v.id))))
                .collect(),
        )
    } else {
        match support_lookup(n, &v.degree) {
            Some((i, j)) => UtMatrix::unit(n, i, j, field)?,
            None => UtMatrix::zero(n),
        }
    };
    if v.starred {
        plain.apply_involution(kind)
    } else {
        Ok(plain)
    }
}

/// Generic evaluation as a polynomial matrix, computed with plain matrix
/// products.
pub fn generic_eval(n: usize, kind: InvolutionKind, m: &StarMonomial) -> Result<UtMatrix> {
    kind.check_size(n)?;
    let field = m.coeff.field();
    let mut acc = UtMatrix::identity(n, field);
    for v in &m.factors {
        acc = acc.mul(&var_image(n, kind, field, v)?)?;
    }
    Ok(acc.scale(&m.coeff))
}

pub fn generic_eval_poly(n: usize, kind: InvolutionKind, p: &StarPoly) -> Result<UtMatrix> {
    kind.check_size(n)?;
    p.monomials().try_fold(UtMatrix::zero(n), |acc, m| {
        acc.add(&generic_eval(n, kind, &m)?)
    })
}

/// Products of generic diagonals and matrix units stay "one signed
/// xi-monomial per entry": either diagonal, or a single off-diagonal entry.
enum Shape {
    Diagonal(Vec<XiMonomial>),
    Single {
        row: usize,
        col: usize,
        sign: i64,
        mono: XiMonomial,
    },
    Zero,
}

/// Generic evaluation straight into an [`EvalVector`], exploiting the
/// single-term structure of every entry. Agrees with [`generic_eval`].
pub fn eval_vector(n: usize, kind: InvolutionKind, m: &StarMonomial) -> Result<EvalVector> {
    kind.check_size(n)?;
    let mut shape = Shape::Diagonal(vec![XiMonomial::one(); n]);
    for v in &m.factors {
        shape = match shape {
            Shape::Zero => return Ok(EvalVector::default()),
            s if v.is_trivial() => {
                let slot = |j: usize| if v.starred { n + 1 - j } else { j };
                match s {
                    Shape::Diagonal(d) => Shape::Diagonal(
                        d.iter()
                            .enumerate()
                            .map(|(k, mono)| mono.mul(&XiMonomial::var(xi(slot(k + 1), v.id))))
                            .collect(),
                    ),
                    Shape::Single {
                        row,
                        col,
                        sign,
                        mono,
                    } => Shape::Single {
                        row,
                        col,
                        sign,
                        mono: mono.mul(&XiMonomial::var(xi(slot(col), v.id))),
                    },
                    Shape::Zero => unreachable!(),
                }
            }
            s => {
                let Some((i, j)) = support_lookup(n, &v.degree) else {
                    return Ok(EvalVector::default());
                };
                let (sign2, (a, b)) = if v.starred {
                    involution_on_unit(n, kind, i, j)
                } else {
                    (1, (i, j))
                };
                match s {
                    Shape::Diagonal(d) => Shape::Single {
                        row: a,
                        col: b,
                        sign: sign2,
                        mono: d[a - 1].clone(),
                    },
                    Shape::Single {
                        row,
                        col,
                        sign,
                        mono,
                    } if col == a => Shape::Single {
                        row,
                        col: b,
                        sign: sign * sign2,
                        mono,
                    },
                    _ => Shape::Zero,
                }
            }
        };
    }
    let field = m.coeff.field();
    let mut out = BTreeMap::new();
    match shape {
        Shape::Zero => {}
        Shape::Diagonal(d) => {
            for (k, mono) in d.into_iter().enumerate() {
                if !m.coeff.is_zero() {
                    out.insert(((k + 1, k + 1), mono), m.coeff.clone());
                }
            }
        }
        Shape::Single {
            row,
            col,
            sign,
            mono,
        } => {
            let c = &m.coeff * &field.from_i64(sign);
            if !c.is_zero() {
                out.insert(((row, col), mono), c);
            }
        }
    }
    Ok(EvalVector(out))
}

/// Exact rank of the vectors over their coefficient field.
pub fn rank_of(vectors: &[EvalVector]) -> usize {
    let mut columns: BTreeSet<&EvalKey> = BTreeSet::new();
    for v in vectors {
        columns.extend(v.0.keys());
    }
    let index: HashMap<&EvalKey, usize> = columns
        .into_iter()
        .enumerate()
        .map(|(k, c)| (c, k))
        .collect();
    let modulus = vectors
        .iter()
        .flat_map(|v| v.0.values())
        .find_map(|c| match c {
            Scalar::Modular { modulus, .. } => Some(*modulus),
            Scalar::Rational(_) => None,
        });
    match modulus {
        Some(p) => {
            let rows = vectors.iter().map(|v| {
                let mut row: Vec<(usize, u64)> =
                    v.0.iter()
                        .map(|(k, c)| match c {
                            Scalar::Modular { value, .. } => (index[k], *value),
                            Scalar::Rational(_) => panic!("scalar field mismatch"),
                        })
                        .collect();
                row.sort_unstable();
                row
            });
            rank_mod_p(rows, p)
        }
        None => {
            let rows = vectors.iter().map(|v| {
                let lcm =
                    v.0.values()
                        .filter_map(Scalar::as_rational)
                        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
                let mut row: Vec<(usize, BigInt)> =
                    v.0.iter()
                        .map(|(k, c)| {
                            let r = c.as_rational().expect("rational scalar");
                            (index[k], r.numer() * (&lcm / r.denom()))
                        })
                        .collect();
                row.sort_unstable_by_key(|e| e.0);
                row
            });
            rank_fraction_free(rows)
        }
    }
}

fn primitive(row: &mut [(usize, BigInt)]) {
    let g = row.iter().fold(BigInt::zero(), |acc, (_, c)| acc.gcd(c));
    if !g.is_zero() && !g.is_one() {
        for (_, c) in row.iter_mut() {
            *c /= &g;
        }
    }
}

/// Row echelon form keyed by leading column; each new row is reduced by
/// cross-multiplication against existing pivots and kept primitive.
fn rank_fraction_free(rows: impl Iterator<Item = Vec<(usize, BigInt)>>) -> usize {
    let mut pivots: HashMap<usize, Vec<(usize, BigInt)>> = HashMap::new();
    for mut row in rows {
        primitive(&mut row);
        while let Some(&(lead, _)) = row.first() {
            let Some(p) = pivots.get(&lead) else {
                pivots.insert(lead, row);
                break;
            };
            let a = p[0].1.clone();
            let b = row[0].1.clone();
            row = combine(&row, &a, p, &b);
            primitive(&mut row);
        }
    }
    pivots.len()
}

/// `a * x - b * y` on sparse sorted rows.
fn combine(
    x: &[(usize, BigInt)],
    a: &BigInt,
    y: &[(usize, BigInt)],
    b: &BigInt,
) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        let (col, v) = if take_x {
            i += 1;
            (x[i - 1].0, a * &x[i - 1].1)
        } else if take_y {
            j += 1;
            (y[j - 1].0, -(b * &y[j - 1].1))
        } else {
            i += 1;
            j += 1;
            (x[i - 1].0, a * &x[i - 1].1 - b * &y[j - 1].1)
        };
        if !v.is_zero() {
            out.push((col, v));
        }
    }
    out
}

fn rank_mod_p(rows: impl Iterator<Item = Vec<(usize, u64)>>, p: u64) -> usize {
    let inv = |a: u64| {
        let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        acc
    };
    let mut pivots: HashMap<usize, Vec<(usize, u64)>> = HashMap::new();
    for row in rows {
        let mut row: Vec<(usize, u64)> = row.into_iter().filter(|e| e.1 % p != 0).collect();
        while let Some(&(lead, c)) = row.first() {
            let Some(piv) = pivots.get(&lead) else {
                let s = inv(c);
                pivots.insert(lead, row.iter().map(|&(k, v)| (k, v * s % p)).collect());
                break;
            };
            // piv is monic
            let mut merged: BTreeMap<usize, u64> = row.iter().copied().collect();
            for &(k, v) in piv {
                let e = merged.entry(k).or_insert(0);
                *e = (*e + p - c * v % p) % p;
            }
            row = merged.into_iter().filter(|e| e.1 != 0).collect();
        }
    }
    pivots.len()
}

/// Multiset of `(id, degree)` of every factor: the multihomogeneous profile.
fn profile(m: &StarMonomial) -> Vec<(u32, GroupWord)> {
    let mut p: Vec<_> = m.factors.iter().map(|v| (v.id, v.degree.clone())).collect();
    p.sort();
    p
}

/// Dimension of the span of `monomials` modulo the graded *-identities:
/// the sum over multihomogeneous profiles of the rank of their generic
/// evaluations.
pub fn space_dim(n: usize, kind: InvolutionKind, monomials: &[StarMonomial]) -> Result<usize> {
    kind.check_size(n)?;
    if monomials.iter().any(|m| !m.coeff.field().is_char_zero()) {
        return Err(Error::RequiresCharacteristicZero);
    }
    let mut groups: BTreeMap<Vec<(u32, GroupWord)>, Vec<&StarMonomial>> = BTreeMap::new();
    for m in monomials {
        groups.entry(profile(m)).or_default().push(m);
    }
    let groups: Vec<_> = groups.into_values().collect();
    groups
        .par_iter()
        .map(|ms| {
            let vs = ms
                .iter()
                .map(|m| eval_vector(n, kind, m))
                .collect::<Result<Vec<_>>>()?;
            Ok(rank_of(&vs))
        })
        .sum()
}

/// The full multilinear span in degree `m` with `l` nontrivial variables:
/// trivial ids `1..=m-l`, nontrivial ids `m-l+1..=m` ranging over all
/// support degrees, every ordering and star assignment.
pub fn full_multilinear_span(n: usize, l: usize, m: usize) -> Vec<StarMonomial> {
    let rank = n.saturating_sub(1);
    let k = m - l;
    let supp: Vec<GroupWord> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .map(|(i, j)| GroupWord::ascending(rank, i, j).expect("support word"))
        .collect();
    let profiles: Vec<Vec<GroupWord>> = if l == 0 {
        vec![Vec::new()]
    } else {
        (0..l)
            .map(|_| supp.iter().cloned())
            .multi_cartesian_product()
            .collect()
    };
    let mut out = Vec::new();
    for h in profiles {
        let mut mu: Vec<(u32, GroupWord)> = (1..=k as u32)
            .map(|id| (id, GroupWord::identity(rank)))
            .collect();
        mu.extend(
            h.into_iter()
                .enumerate()
                .map(|(t, g)| ((k + 1 + t) as u32, g)),
        );
        let span = crate::freestar::multilinear_span(
            &crate::freestar::VarSequence(mu),
            Field::Rationals,
            crate::freestar::StarPolicy::All,
        )
        .expect("distinct ids");
        out.extend(span);
    }
    out
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, t| acc * t)
}

/// Number of evaluations `omega_oracle` performs, saturating at `u128::MAX`.
pub fn omega_oracle_cost(n: usize, l: usize, m: usize) -> u128 {
    if n == 0 || l > m || l > n - 1 {
        return 0;
    }
    let k = m - l;
    let chains = if l == 0 {
        1
    } else {
        binomial_u128(n as u128, (l + 1) as u128)
    };
    [
        chains,
        factorial_u128(l),
        1u128.checked_shl(l as u32).unwrap_or(u128::MAX),
        binomial_u128(m as u128, l as u128),
        factorial_u128(k),
        1u128.checked_shl(k as u32).unwrap_or(u128::MAX),
    ]
    .into_iter()
    .fold(1u128, |acc, f| acc.saturating_mul(f))
}

fn factorial_u128(k: usize) -> u128 {
    (1..=k as u128).fold(1u128, |acc, t| acc.saturating_mul(t))
}

fn binomial_u128(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, t| acc.saturating_mul(n - t) / (t + 1))
}

/// `omega(l, m)` by brute force: the total rank of the multilinear spaces
/// over every profile of `l` nontrivial variables, divided by `l!`.
///
/// Orderings whose nontrivial degree sequence is bad evaluate to zero and
/// are skipped up front; everything else is evaluated and ranked.
pub fn omega_oracle(n: usize, kind: InvolutionKind, l: usize, m: usize) -> Result<BigUint> {
    kind.check_size(n)?;
    if n == 0 || l > m || l > n - 1 {
        return Err(Error::Precondition(format!(
            "omega needs 0 <= l <= min(m, n-1), got n={n}, l={l}, m={m}"
        )));
    }
    let rank = n - 1;
    let k = m - l;
    let field = Field::Rationals;
    let x_orders: Vec<Vec<usize>> = (1..=k).permutations(k).collect();
    let x_masks: Vec<Vec<bool>> = (0..k)
        .map(|_| [false, true])
        .multi_cartesian_product()
        .collect();
    let x_masks = if k == 0 { vec![Vec::new()] } else { x_masks };
    let x_words: Vec<Vec<GradedVar>> = x_orders
        .iter()
        .cartesian_product(&x_masks)
        .map(|(ord, mask)| {
            ord.iter()
                .zip(mask)
                .map(|(&id, &s)| GradedVar::trivial(rank, id as u32, s))
                .collect()
        })
        .collect();
    if l == 0 {
        let rows = x_words
            .par_iter()
            .map(|w| eval_vector(n, kind, &StarMonomial::unit(field, w.clone())))
            .collect::<Result<Vec<_>>>()?;
        return Ok(BigUint::from(rank_of(&rows)));
    }
    // (profile, nontrivial word) for every good arrangement
    let mut arrangements: Vec<(Vec<GroupWord>, Vec<GradedVar>)> = Vec::new();
    for gs in good_sequences(n, l) {
        let g = &gs.degrees.0;
        for sigma in (0..l).permutations(l) {
            for mask in (0..l).map(|_| [false, true]).multi_cartesian_product() {
                let mut h = vec![GroupWord::identity(rank); l];
                let mut zs = Vec::with_capacity(l);
                for pos in 0..l {
                    let own = if mask[pos] {
                        g[pos].star()
                    } else {
                        g[pos].clone()
                    };
                    h[sigma[pos]] = own.clone();
                    zs.push(GradedVar::new((k + 1 + sigma[pos]) as u32, own, mask[pos]));
                }
                arrangements.push((h, zs));
            }
        }
    }
    let slots: Vec<Vec<usize>> = (0..m).combinations(l).collect();
    let evaluated: Vec<(Vec<GroupWord>, Vec<EvalVector>)> = arrangements
        .par_iter()
        .map(|(h, zs)| {
            let mut rows = Vec::with_capacity(slots.len() * x_words.len());
            for z_slots in &slots {
                for xw in &x_words {
                    let mut word = Vec::with_capacity(m);
                    let (mut zi, mut xi_) = (0, 0);
                    for s in 0..m {
                        if zi < l && z_slots[zi] == s {
                            word.push(zs[zi].clone());
                            zi += 1;
                        } else {
                            word.push(xw[xi_].clone());
                            xi_ += 1;
                        }
                    }
                    rows.push(eval_vector(n, kind, &StarMonomial::unit(field, word))?);
                }
            }
            Ok((h.clone(), rows))
        })
        .collect::<Result<_>>()?;
    let mut buckets: BTreeMap<Vec<GroupWord>, Vec<EvalVector>> = BTreeMap::new();
    for (h, rows) in evaluated {
        buckets.entry(h).or_default().extend(rows);
    }
    let buckets: Vec<_> = buckets.into_values().collect();
    let total: usize = buckets.par_iter().map(|rows| rank_of(rows)).sum();
    let (q, r) = BigUint::from(total).div_rem(&factorial(l));
    if !r.is_zero() {
        return Err(Error::Verification(format!(
            "oracle total {total} for n={n}, l={l}, m={m} is not divisible by {l}!"
        )));
    }
    Ok(q)
}

/// `Ok(None)` when `p` vanishes on the algebra, otherwise a witness.
///
/// Over the rationals the polynomial is split by the multiset of its
/// nontrivial variables (each such component is tested with bare units,
/// which is exact because every nontrivial component is one-dimensional);
/// over `F_p` every substitution is tried, up to `budget` evaluations.
pub fn identity_witness(
    n: usize,
    kind: InvolutionKind,
    field: Field,
    p: &StarPoly,
    budget: u128,
) -> Result<Option<String>> {
    kind.check_size(n)?;
    if field.is_char_zero() {
        let mut parts: BTreeMap<Vec<(u32, GroupWord)>, EvalVector> = BTreeMap::new();
        for m in p.monomials() {
            let mut key: Vec<_> = m
                .factors
                .iter()
                .filter(|v| !v.is_trivial())
                .map(|v| (v.id, v.degree.clone()))
                .collect();
            key.sort();
            let v = eval_vector(n, kind, &m)?;
            parts.entry(key).or_default().add_scaled(&v, &field.one());
        }
        Ok(parts
            .into_values()
            .find(|v| !v.is_zero())
            .map(|v| format!("generic evaluation {v}")))
    } else {
        exhaustive_witness(n, kind, field, p, budget)
    }
}

pub fn is_identity(
    n: usize,
    kind: InvolutionKind,
    field: Field,
    p: &StarPoly,
    budget: u128,
) -> Result<bool> {
    Ok(identity_witness(n, kind, field, p, budget)?.is_none())
}

/// Dense `n x n` matrices over `F_p`, row-major.
#[derive(Clone)]
struct Dense {
    n: usize,
    p: u64,
    a: Vec<u64>,
}

impl Dense {
    fn zero(n: usize, p: u64) -> Self {
        Dense {
            n,
            p,
            a: vec![0; n * n],
        }
    }

    fn identity(n: usize, p: u64) -> Self {
        let mut d = Dense::zero(n, p);
        for i in 0..n {
            d.a[i * n + i] = 1;
        }
        d
    }

    fn mul(&self, o: &Dense) -> Dense {
        let n = self.n;
        let mut out = Dense::zero(n, self.p);
        for i in 0..n {
            for k in i..n {
                let x = self.a[i * n + k];
                if x == 0 {
                    continue;
                }
                for j in k..n {
                    out.a[i * n + j] = (out.a[i * n + j] + x * o.a[k * n + j]) % self.p;
                }
            }
        }
        out
    }

    fn add_scaled(&mut self, o: &Dense, c: u64) {
        for (x, y) in self.a.iter_mut().zip(&o.a) {
            *x = (*x + c * y) % self.p;
        }
    }

    fn involution(&self, kind: InvolutionKind) -> Dense {
        let n = self.n;
        let mut out = Dense::zero(n, self.p);
        for i in 1..=n {
            for j in i..=n {
                let v = self.a[(i - 1) * n + j - 1];
                if v == 0 {
                    continue;
                }
                let (sign, (a, b)) = involution_on_unit(n, kind, i, j);
                out.a[(a - 1) * n + b - 1] = if sign < 0 { (self.p - v) % self.p } else { v };
            }
        }
        out
    }

    fn is_zero(&self) -> bool {
        self.a.iter().all(|&x| x == 0)
    }
}

fn exhaustive_witness(
    n: usize,
    kind: InvolutionKind,
    field: Field,
    poly: &StarPoly,
    budget: u128,
) -> Result<Option<String>> {
    let p = field.characteristic();
    let vars: BTreeSet<(u32, GroupWord)> = poly
        .monomials()
        .flat_map(|m| m.factors.into_iter().map(|v| (v.id, v.degree)))
        .collect();
    // per variable: number of free F_p coordinates
    let dims: Vec<(&(u32, GroupWord), u32)> = vars
        .iter()
        .map(|v| {
            let d = if v.1.is_trivial() {
                n as u32
            } else if support_lookup(n, &v.1).is_some() {
                1
            } else {
                0
            };
            (v, d)
        })
        .collect();
    let coords: u32 = dims.iter().map(|d| d.1).sum();
    let needed = (p as u128).checked_pow(coords).unwrap_or(u128::MAX);
    if needed > budget {
        return Err(Error::BudgetExceeded { needed, budget });
    }
    let terms: Vec<(u64, Vec<(usize, bool)>)> = poly
        .monomials()
        .map(|m| {
            let c = match m.coeff {
                Scalar::Modular { value, .. } => value,
                Scalar::Rational(_) => panic!("scalar field mismatch"),
            };
            let idx = m
                .factors
                .iter()
                .map(|v| {
                    let k = vars
                        .iter()
                        .position(|w| w.0 == v.id && w.1 == v.degree)
                        .expect("collected");
                    (k, v.starred)
                })
                .collect();
            (c, idx)
        })
        .collect();
    let mut digits = vec![0u64; coords as usize];
    for _ in 0..needed {
        let mut images = Vec::with_capacity(dims.len());
        let mut cursor = 0;
        for (v, d) in &dims {
            let mut a = Dense::zero(n, p);
            if v.1.is_trivial() {
                for j in 0..n {
                    a.a[j * n + j] = digits[cursor + j];
                }
            } else if let Some((i, j)) = support_lookup(n, &v.1) {
                a.a[(i - 1) * n + j - 1] = digits[cursor];
            }
            cursor += *d as usize;
            let star = a.involution(kind);
            images.push((a, star));
        }
        let mut total = Dense::zero(n, p);
        for (c, idx) in &terms {
            let prod = idx.iter().fold(Dense::identity(n, p), |acc, &(k, s)| {
                acc.mul(if s { &images[k].1 } else { &images[k].0 })
            });
            total.add_scaled(&prod, *c);
        }
        if !total.is_zero() {
            let assignment = dims
                .iter()
                .zip(&images)
                .map(|((v, _), (a, _))| {
                    let var = GradedVar::new(v.0, v.1.clone(), false);
                    format!("{var} = {:?}", a.a)
                })
                .join(", ");
            return Ok(Some(format!("nonzero at {assignment}: {:?}", total.a)));
        }
        // odometer
        for d in digits.iter_mut() {
            *d += 1;
            if *d < p {
                break;
            }
            *d = 0;
        }
    }
    Ok(None)
}

/// One instantiated generator of the identity ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub item: &'static str,
    pub identity: String,
    pub passed: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityReport {
    pub n: usize,
    pub kind: InvolutionKind,
    pub field: Field,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn items(&self) -> BTreeSet<&'static str> {
        self.checks.iter().map(|c| c.item).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "involution": self.kind.to_string(),
            "field": self.field.to_string(),
            "passed": self.all_passed(),
            "checks": self.checks.iter().map(|c| json!({
                "item": c.item,
                "identity": c.identity,
                "passed": c.passed,
                "witness": c.witness,
            })).collect::<Vec<_>>(),
        })
    }
}

/// Reduced nontrivial words of length at most 3 outside the support.
pub fn probe_words(n: usize) -> Vec<GroupWord> {
    let rank = n.saturating_sub(1);
    let letters: Vec<Letter> = (1..=rank)
        .flat_map(|i| [Letter::new(i, false), Letter::new(i, true)])
        .collect();
    let mut out = BTreeSet::new();
    for len in 1..=3 {
        for word in (0..len)
            .map(|_| letters.iter().copied())
            .multi_cartesian_product()
        {
            let g = GroupWord::from_letters(rank, word).expect("in range");
            if g.len() == len && support_lookup(n, &g).is_none() {
                out.insert(g);
            }
        }
    }
    out.into_iter().collect()
}

/// The generating identities, instantiated over every relevant degree.
pub fn theorem_identities(
    n: usize,
    kind: InvolutionKind,
    field: Field,
) -> Result<Vec<(&'static str, StarPoly)>> {
    kind.check_size(n)?;
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    let rank = n - 1;
    let one = field.one();
    let x = |id: u32, g: &GroupWord, s: bool| GradedVar::new(id, g.clone(), s);
    let mono = |c: Scalar, f: Vec<GradedVar>| StarPoly::from_monomial(StarMonomial::new(c, f));
    let e = GroupWord::identity(rank);
    let eps = field.from_i64(kind.epsilon());
    let mut out = Vec::new();
    for g in probe_words(n) {
        out.push(("i", mono(one.clone(), vec![x(1, &g, false)])));
    }
    for i in 1..=n {
        for j in i + 1..=n {
            if i + j == n + 1 {
                let g = GroupWord::ascending(rank, i, j)?;
                let p = mono(one.clone(), vec![x(1, &g, true)])
                    .sub(&mono(eps.clone(), vec![x(1, &g, false)]));
                out.push(("ii", p));
            }
        }
    }
    if n == 1 {
        // UT_1 is the field with the trivial involution
        out.push((
            "ii",
            mono(one.clone(), vec![x(1, &e, true)]).sub(&mono(one.clone(), vec![x(1, &e, false)])),
        ));
    }
    let comm = mono(one.clone(), vec![x(1, &e, false), x(2, &e, false)])
        .sub(&mono(one.clone(), vec![x(2, &e, false), x(1, &e, false)]));
    out.push(("iii", comm));
    if n % 2 == 1 && n > 1 {
        let diff =
            mono(one.clone(), vec![x(1, &e, true)]).sub(&mono(one.clone(), vec![x(1, &e, false)]));
        for i in 1..=n {
            for j in i + 1..=n {
                let g = GroupWord::ascending(rank, i, j)?;
                let z = mono(one.clone(), vec![x(2, &g, false)]);
                match middle_degree_kind(n, &g)? {
                    MiddleKind::LeftMiddle => out.push(("iv", diff.mul(&z))),
                    MiddleKind::RightMiddle => out.push(("iv", z.mul(&diff))),
                    MiddleKind::Neither => {}
                }
            }
        }
    }
    if let Some(q) = field.order() {
        let power = vec![x(1, &e, false); q as usize];
        out.push((
            "v",
            mono(one.clone(), power).sub(&mono(one.clone(), vec![x(1, &e, false)])),
        ));
    }
    Ok(out)
}

/// Checks every instantiated generator with [`identity_witness`].
pub fn verify_theorem_identities(
    n: usize,
    kind: InvolutionKind,
    field: Field,
    budget: u128,
) -> Result<IdentityReport> {
    let ids = theorem_identities(n, kind, field)?;
    let checks = ids
        .par_iter()
        .map(|(item, p)| {
            let witness = identity_witness(n, kind, field, p, budget)?;
            Ok(IdentityCheck {
                item,
                identity: p.to_string(),
                passed: witness.is_none(),
                witness,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IdentityReport {
        n,
        kind,
        field,
        checks,
    })
}

/// `true` when `v` is zero or a single `±` xi-monomial on one position.
pub fn is_signed_unit_monomial(v: &EvalVector) -> bool {
    match v.0.len() {
        0 => true,
        1 => v.0.values().all(|c| {
            c.as_rational()
                .is_some_and(|r| r.is_integer() && r.numer().abs().is_one())
        }),
        _ => false,
    }
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

    fn poly(terms: &[&str], n: usize, field: Field) -> StarPoly {
        StarPoly::from_terms(
            terms
                .iter()
                .map(|t| StarMonomial::parse(t, n - 1, field).unwrap()),
        )
    }

    #[test]
    fn generic_eval_examples() {
        let x = generic_eval(2, TAU, &mono("x1", 2)).unwrap();
        assert_eq!(
            x.to_json().to_string(),
            r#"{"1,1":"xi[1,1]","2,2":"xi[2,1]"}"#
        );
        let xs = generic_eval(2, TAU, &mono("x1'", 2)).unwrap();
        assert_eq!(
            xs.to_json().to_string(),
            r#"{"1,1":"xi[2,1]","2,2":"xi[1,1]"}"#
        );
        let xz = generic_eval(2, TAU, &mono("x1 x2[a1]", 2)).unwrap();
        assert_eq!(xz.to_json().to_string(), r#"{"1,2":"xi[1,1]"}"#);
    }

    #[test]
    fn fast_path_matches_matrix_products() {
        let texts = [
            "x1 x2[a1] x3'",
            "x1' x2[a2]' x1 x3[a3]",
            "x2[a1.a2]' x1'",
            "x2[a2] x3[a1]",
            "-3 x1 x1' x2",
            "x1[a2^-1]",
            "2",
        ];
        for n in [4] {
            for kind in [TAU, SYMP] {
                for t in texts {
                    let m = mono(t, n);
                    let slow = EvalVector::from_matrix(&generic_eval(n, kind, &m).unwrap());
                    assert_eq!(eval_vector(n, kind, &m).unwrap(), slow, "{t}");
                }
            }
        }
    }

    #[test]
    fn rank_examples() {
        let v = eval_vector(2, TAU, &mono("x1", 2)).unwrap();
        let mut w = EvalVector::default();
        w.add_scaled(&v, &Q.from_i64(2));
        assert_eq!(rank_of(&[v.clone(), w]), 1);
        assert_eq!(rank_of(&[]), 0);
        let four: Vec<_> = ["x1 x2", "x1 x2'", "x1' x2", "x1' x2'"]
            .iter()
            .map(|t| eval_vector(2, TAU, &mono(t, 2)).unwrap())
            .collect();
        assert_eq!(rank_of(&four), 4);
        // dependent combination with fractions
        let mut u = four[0].clone();
        u.add_scaled(&four[1], &Scalar::rational(-2, 3));
        let mut rows = four.clone();
        rows.push(u);
        assert_eq!(rank_of(&rows), 4);
    }

    #[test]
    fn rank_mod_p_matches() {
        let f = Field::Prime(7);
        let v = |t: &str| eval_vector(2, TAU, &StarMonomial::parse(t, 1, f).unwrap()).unwrap();
        let mut w = v("x1 x2");
        w.add_scaled(&v("x1' x2"), &f.from_i64(3));
        assert_eq!(rank_of(&[v("x1 x2"), v("x1' x2"), w, v("x2 x1")]), 2);
    }

    #[test]
    fn space_dim_examples() {
        assert_eq!(
            space_dim(2, TAU, &full_multilinear_span(2, 1, 2)).unwrap(),
            2
        );
        assert_eq!(
            space_dim(2, TAU, &full_multilinear_span(2, 0, 2)).unwrap(),
            4
        );
        let zz: Vec<_> = crate::freestar::multilinear_span(
            &crate::freestar::VarSequence(vec![
                (1, GroupWord::generator(1, 1).unwrap()),
                (2, GroupWord::generator(1, 1).unwrap()),
            ]),
            Q,
            crate::freestar::StarPolicy::All,
        )
        .unwrap();
        assert_eq!(space_dim(2, TAU, &zz).unwrap(), 0);
    }

    #[test]
    fn oracle_omega_small_values() {
        assert_eq!(omega_oracle(2, TAU, 1, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(omega_oracle(3, TAU, 2, 2).unwrap(), BigUint::from(2u32));
        assert_eq!(omega_oracle(2, TAU, 0, 2).unwrap(), BigUint::from(4u32));
        assert_eq!(omega_oracle(1, TAU, 0, 3).unwrap(), BigUint::from(1u32));
        for (n, l, m) in [(2, 1, 3), (3, 1, 3), (3, 2, 3), (4, 2, 3)] {
            for kind in InvolutionKind::applicable(n) {
                let full = space_dim(n, kind, &full_multilinear_span(n, l, m)).unwrap();
                let pruned = omega_oracle(n, kind, l, m).unwrap() * factorial(l);
                assert_eq!(pruned, BigUint::from(full), "n={n} l={l} m={m} {kind}");
            }
        }
    }

    #[test]
    fn identity_examples() {
        assert!(is_identity(
            3,
            TAU,
            Q,
            &poly(&["x1 x2", "-1 x2 x1"], 3, Q),
            DEFAULT_BUDGET
        )
        .unwrap());
        assert!(is_identity(
            3,
            TAU,
            Q,
            &poly(&["x1' x2[a2]", "-1 x1 x2[a2]"], 3, Q),
            DEFAULT_BUDGET
        )
        .unwrap());
        assert!(!is_identity(2, TAU, Q, &poly(&["x1'", "-1 x1"], 2, Q), DEFAULT_BUDGET).unwrap());
        // same evaluation, different variables: not an identity
        assert!(!is_identity(
            2,
            TAU,
            Q,
            &poly(&["x1[a1]", "-1 x2[a1]"], 2, Q),
            DEFAULT_BUDGET
        )
        .unwrap());
        let f3 = Field::Prime(3);
        assert!(is_identity(
            2,
            TAU,
            f3,
            &poly(&["x1 x1 x1", "-1 x1"], 2, f3),
            DEFAULT_BUDGET
        )
        .unwrap());
        assert!(!is_identity(
            2,
            TAU,
            f3,
            &poly(&["x1 x1", "-1 x1"], 2, f3),
            DEFAULT_BUDGET
        )
        .unwrap());
        assert!(matches!(
            is_identity(4, TAU, f3, &poly(&["x1 x2 x3", "-1 x3 x2 x1"], 4, f3), 1000),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn theorem_identity_examples() {
        let r = verify_theorem_identities(4, SYMP, Q, DEFAULT_BUDGET).unwrap();
        assert!(r.all_passed());
        assert!(r.checks.iter().any(|c| c.identity == "x1[a2] + x1[a2]'"));
        let r = verify_theorem_identities(3, TAU, Q, DEFAULT_BUDGET).unwrap();
        assert!(r.all_passed());
        assert_eq!(r.checks.iter().filter(|c| c.item == "iv").count(), 2);
        let r = verify_theorem_identities(2, TAU, Field::Prime(3), DEFAULT_BUDGET).unwrap();
        assert!(r.all_passed());
        assert!(r.items().contains("v"));
    }

    #[test]
    fn probe_words_avoid_support() {
        assert!(probe_words(1).is_empty());
        let w = probe_words(3);
        assert!(w.iter().any(|g| g.to_string() == "a2.a1"));
        assert!(w
            .iter()
            .all(|g| support_lookup(3, g).is_none() && !g.is_trivial()));
    }

    #[test]
    fn structural_single_entries() {
        for t in ["x1 x2[a1] x3'", "x2[a2]' x1 x3[a1]'", "x1[a1.a2.a3] x2'"] {
            for kind in [TAU, SYMP] {
                assert!(is_signed_unit_monomial(
                    &eval_vector(4, kind, &mono(t, 4)).unwrap()
                ));
            }
        }
    }
}
