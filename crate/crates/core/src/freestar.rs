//! Terms of the free graded algebra with involution: degree-labelled
//! variables, monomials, polynomials and multilinear spans.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use itertools::Itertools;
use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::group::GroupWord;
use crate::scalar::{Field, Scalar};

/// `x_id^{(degree)}`, optionally starred. Variables are identified by the
/// pair `(id, degree)`; the star flag belongs to the occurrence.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GradedVar {
    pub id: u32,
    pub degree: GroupWord,
    pub starred: bool,
}

impl GradedVar {
    pub fn new(id: u32, degree: GroupWord, starred: bool) -> Self {
        GradedVar {
            id,
            degree,
            starred,
        }
    }

    /// A trivial-degree variable `x_id` in rank `rank`.
    pub fn trivial(rank: usize, id: u32, starred: bool) -> Self {
        GradedVar::new(id, GroupWord::identity(rank), starred)
    }

    pub fn is_trivial(&self) -> bool {
        self.degree.is_trivial()
    }

    /// Degree of this occurrence: `star(degree)` when starred.
    pub fn effective_degree(&self) -> GroupWord {
        if self.starred {
            self.degree.star()
        } else {
            self.degree.clone()
        }
    }

    pub fn toggled(&self) -> Self {
        GradedVar::new(self.id, self.degree.clone(), !self.starred)
    }

    pub fn unstarred(&self) -> Self {
        GradedVar::new(self.id, self.degree.clone(), false)
    }

    /// Parses `x<id>`, `x<id>[<word>]`, each optionally followed by `'`.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let bad = |reason: &str| Error::MalformedMonomial {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let (body, starred) = match text.strip_suffix('\'') {
            Some(b) => (b, true),
            None => (text, false),
        };
        let body = body
            .strip_prefix('x')
            .ok_or_else(|| bad("variable must start with `x`"))?;
        let (digits, degree) = match body.find('[') {
            Some(k) => {
                let word = body[k + 1..]
                    .strip_suffix(']')
                    .ok_or_else(|| bad("unterminated degree bracket"))?;
                (&body[..k], GroupWord::parse(word, rank)?)
            }
            None => (body, GroupWord::identity(rank)),
        };
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad("variable id must be a decimal number"));
        }
        let id: u32 = digits.parse().map_err(|_| bad("id overflow"))?;
        if id == 0 {
            return Err(bad("variable ids start at 1"));
        }
        Ok(GradedVar::new(id, degree, starred))
    }
}

impl fmt::Display for GradedVar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.id)?;
        if !self.degree.is_trivial() {
            write!(f, "[{}]", self.degree)?;
        }
        if self.starred {
            f.write_str("'")?;
        }
        Ok(())
    }
}

/// `coeff * factors[0] * factors[1] * ...`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct StarMonomial {
    pub coeff: Scalar,
    pub factors: Vec<GradedVar>,
}

impl StarMonomial {
    pub fn new(coeff: Scalar, factors: Vec<GradedVar>) -> Self {
        StarMonomial { coeff, factors }
    }

    pub fn unit(field: Field, factors: Vec<GradedVar>) -> Self {
        StarMonomial::new(field.one(), factors)
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Product of the occurrence degrees, in rank `rank`.
    pub fn degree(&self, rank: usize) -> Result<GroupWord> {
        self.factors
            .iter()
            .try_fold(GroupWord::identity(rank), |acc, v| {
                acc.mul(&v.effective_degree())
            })
    }

    /// Reverses the factors and toggles every star; the coefficient is kept.
    pub fn star(&self) -> StarMonomial {
        StarMonomial {
            coeff: self.coeff.clone(),
            factors: self.factors.iter().rev().map(GradedVar::toggled).collect(),
        }
    }

    pub fn mul(&self, other: &StarMonomial) -> StarMonomial {
        let mut factors = self.factors.clone();
        factors.extend(other.factors.iter().cloned());
        StarMonomial::new(&self.coeff * &other.coeff, factors)
    }

    /// Inverse of `Display`. A leading token that is not a variable is the
    /// coefficient; a lone coefficient is the empty product.
    pub fn parse(text: &str, rank: usize, field: Field) -> Result<Self> {
        let bad = |reason: &str| Error::MalformedMonomial {
            text: text.to_string(),
            reason: reason.to_string(),
        };
        let mut tokens = text.split(' ').peekable();
        let mut coeff = field.one();
        if let Some(first) = tokens.peek() {
            if !first.starts_with('x') {
                coeff = parse_scalar(first, field).ok_or_else(|| bad("bad coefficient"))?;
                tokens.next();
            }
        }
        let factors = tokens
            .map(|t| {
                if t.is_empty() {
                    Err(bad("factors are separated by single spaces"))
                } else {
                    GradedVar::parse(t, rank)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        if factors.is_empty() && text.starts_with('x') {
            return Err(bad("empty monomial"));
        }
        Ok(StarMonomial { coeff, factors })
    }
}

fn parse_scalar(text: &str, field: Field) -> Option<Scalar> {
    let (num, den) = match text.split_once('/') {
        Some((a, b)) => (a.parse::<BigInt>().ok()?, b.parse::<BigInt>().ok()?),
        None => (text.parse::<BigInt>().ok()?, BigInt::from(1)),
    };
    if den == BigInt::from(0) {
        return None;
    }
    match field {
        Field::Rationals => Some(Scalar::Rational(BigRational::new(num, den))),
        Field::Prime(p) => {
            let reduce = |v: &BigInt| -> i64 {
                let r = v % BigInt::from(p);
                i64::try_from(r).expect("residue fits")
            };
            let d = field.from_i64(reduce(&den)).inv()?;
            Some(&field.from_i64(reduce(&num)) * &d)
        }
    }
}

impl fmt::Display for StarMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show_coeff = !self.coeff.is_one() || self.factors.is_empty();
        if show_coeff {
            write!(f, "{}", self.coeff)?;
        }
        for (k, v) in self.factors.iter().enumerate() {
            if k > 0 || show_coeff {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Linear combination of words; like terms are merged and zero
/// coefficients dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct StarPoly {
    terms: BTreeMap<Vec<GradedVar>, Scalar>,
}

impl StarPoly {
    pub fn zero() -> Self {
        StarPoly::default()
    }

    pub fn from_monomial(m: StarMonomial) -> Self {
        let mut p = StarPoly::zero();
        p.add_term(m.factors, m.coeff);
        p
    }

    pub fn from_terms(items: impl IntoIterator<Item = StarMonomial>) -> Self {
        let mut p = StarPoly::zero();
        for m in items {
            p.add_term(m.factors, m.coeff);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, factors: Vec<GradedVar>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&factors) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&factors);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(factors, c);
            }
        }
    }

    pub fn monomials(&self) -> impl Iterator<Item = StarMonomial> + '_ {
        self.terms
            .iter()
            .map(|(f, c)| StarMonomial::new(c.clone(), f.clone()))
    }

    pub fn coefficient(&self, factors: &[GradedVar]) -> Option<&Scalar> {
        self.terms.get(factors)
    }

    pub fn add(&self, other: &StarPoly) -> StarPoly {
        let mut out = self.clone();
        for (f, c) in &other.terms {
            out.add_term(f.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> StarPoly {
        let mut out = StarPoly::zero();
        for (f, v) in &self.terms {
            out.add_term(f.clone(), v * c);
        }
        out
    }

    pub fn neg(&self) -> StarPoly {
        StarPoly {
            terms: self.terms.iter().map(|(f, c)| (f.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &StarPoly) -> StarPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &StarPoly) -> StarPoly {
        let mut out = StarPoly::zero();
        for a in self.monomials() {
            for b in other.monomials() {
                let m = a.mul(&b);
                out.add_term(m.factors, m.coeff);
            }
        }
        out
    }

    pub fn star(&self) -> StarPoly {
        StarPoly::from_terms(self.monomials().map(|m| m.star()))
    }
}

impl fmt::Display for StarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, m) in self.monomials().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

/// Multilinear profile `mu`: distinct ids with their degrees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarSequence(pub Vec<(u32, GroupWord)>);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StarPolicy {
    /// Every occurrence may be starred or not.
    All,
    /// No stars: the plain graded span.
    Unstarred,
}

/// All orderings and star assignments of the profile, orderings in
/// lexicographic order of index permutations, star masks inner.
pub fn multilinear_span(
    mu: &VarSequence,
    field: Field,
    policy: StarPolicy,
) -> Result<Vec<StarMonomial>> {
    let ids: BTreeSet<u32> = mu.0.iter().map(|(id, _)| *id).collect();
    if ids.len() != mu.0.len() {
        return Err(Error::Precondition(
            "multilinear profile ids must be distinct".into(),
        ));
    }
    let k = mu.0.len();
    let masks: Vec<Vec<bool>> = match policy {
        StarPolicy::All => (0..k)
            .map(|_| [false, true])
            .multi_cartesian_product()
            .collect(),
        StarPolicy::Unstarred => vec![vec![false; k]],
    };
    // multi_cartesian_product of zero iterators yields nothing
    let masks = if k == 0 { vec![Vec::new()] } else { masks };
    let mut out = Vec::new();
    for perm in (0..k).permutations(k) {
        for mask in &masks {
            let factors = perm
                .iter()
                .zip(mask)
                .map(|(&i, &s)| GradedVar::new(mu.0[i].0, mu.0[i].1.clone(), s))
                .collect();
            out.push(StarMonomial::unit(field, factors));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const Q: Field = Field::Rationals;

    fn var(text: &str, rank: usize) -> GradedVar {
        GradedVar::parse(text, rank).unwrap()
    }

    fn mono(text: &str, rank: usize) -> StarMonomial {
        StarMonomial::parse(text, rank, Q).unwrap()
    }

    #[test]
    fn degree_examples() {
        assert_eq!(
            mono("x1[a1] x2[a2]", 2).degree(2).unwrap().to_string(),
            "a1.a2"
        );
        assert_eq!(mono("x1[a2]'", 2).degree(2).unwrap().to_string(), "a1");
        assert!(mono("x1 x2'", 2).degree(2).unwrap().is_trivial());
    }

    #[test]
    fn star_examples() {
        assert_eq!(mono("x1 x2[a1]", 1).star(), mono("x2[a1]' x1'", 1));
        let m = mono("3 x1", 1);
        assert_eq!(m.star().to_string(), "3 x1'");
    }

    #[test]
    fn text_round_trip() {
        for text in [
            "x1",
            "x3[a1.a2]'",
            "x1 x2[a2^-1]' x10",
            "-1/2 x1'",
            "1",
            "5",
        ] {
            assert_eq!(mono(text, 2).to_string(), text);
        }
        for bad in [
            "y1", "x", "x0", "x1  x2", "x1[a1", "x1[a3]", "x1*x2", "x1'' ",
        ] {
            assert!(StarMonomial::parse(bad, 2, Q).is_err(), "{bad}");
        }
        let f = Field::Prime(5);
        assert_eq!(
            StarMonomial::parse("-1 x1", 1, f).unwrap().coeff,
            f.from_i64(4)
        );
        assert_eq!(var("x2[a1]'", 1).effective_degree().to_string(), "a1");
    }

    #[test]
    fn span_sizes() {
        let t = GroupWord::identity(1);
        let a1 = GroupWord::generator(1, 1).unwrap();
        for (k, expect) in [(1, 2), (2, 8), (3, 48)] {
            let mu = VarSequence(
                (1..=k)
                    .map(|i| (i as u32, if i == 2 { a1.clone() } else { t.clone() }))
                    .collect(),
            );
            let span = multilinear_span(&mu, Q, StarPolicy::All).unwrap();
            assert_eq!(span.len(), expect);
            let distinct: BTreeSet<_> = span.iter().map(|m| m.factors.clone()).collect();
            assert_eq!(distinct.len(), expect);
            for m in &span {
                let ids: BTreeSet<_> = m.factors.iter().map(|v| v.id).collect();
                assert_eq!(ids.len(), k);
            }
        }
        let dup = VarSequence(vec![(1, t.clone()), (1, a1)]);
        assert!(multilinear_span(&dup, Q, StarPolicy::All).is_err());
        let plain = multilinear_span(
            &VarSequence(vec![(1, t.clone()), (2, t)]),
            Q,
            StarPolicy::Unstarred,
        )
        .unwrap();
        assert_eq!(plain.len(), 2);
    }

    #[test]
    fn reordering_changes_degree_only_with_nontrivial_factors() {
        // n = 3: x1[a1] x2[a2] has degree a1.a2, the swap has a2.a1
        let mu = VarSequence(vec![
            (1, GroupWord::parse("a1", 2).unwrap()),
            (2, GroupWord::parse("a2", 2).unwrap()),
        ]);
        let degrees: BTreeSet<_> = multilinear_span(&mu, Q, StarPolicy::Unstarred)
            .unwrap()
            .iter()
            .map(|m| m.degree(2).unwrap())
            .collect();
        assert_eq!(degrees.len(), 2);
        let trivial = VarSequence(vec![
            (1, GroupWord::identity(2)),
            (2, GroupWord::identity(2)),
        ]);
        for m in multilinear_span(&trivial, Q, StarPolicy::All).unwrap() {
            assert!(m.degree(2).unwrap().is_trivial());
        }
    }

    #[test]
    fn poly_merges_like_terms() {
        let a = StarPoly::from_monomial(mono("x1 x2", 1));
        let b = StarPoly::from_monomial(mono("-1 x1 x2", 1));
        assert!(a.add(&b).is_zero());
        let c = a.sub(&StarPoly::from_monomial(mono("x2 x1", 1)));
        assert_eq!(c.to_string(), "x1 x2 + -1 x2 x1");
        assert_eq!(c.star().to_string(), "-1 x1' x2' + x2' x1'");
    }

    fn arb_var() -> impl Strategy<Value = GradedVar> {
        (
            1u32..4,
            prop::collection::vec((1usize..=2, any::<bool>()), 0..3),
            any::<bool>(),
        )
            .prop_map(|(id, letters, starred)| {
                let letters = letters
                    .into_iter()
                    .map(|(i, inv)| crate::group::Letter::new(i, inv))
                    .collect();
                GradedVar::new(id, GroupWord::from_letters(2, letters).unwrap(), starred)
            })
    }

    fn arb_mono() -> impl Strategy<Value = StarMonomial> {
        (prop::collection::vec(arb_var(), 0..5), -3i64..=3)
            .prop_filter("nonzero", |(_, c)| *c != 0)
            .prop_map(|(factors, c)| StarMonomial::new(Q.from_i64(c), factors))
    }

    proptest! {
        #[test]
        fn star_is_involutive_anti_homomorphism(a in arb_mono(), b in arb_mono()) {
            prop_assert_eq!(a.star().star(), a.clone());
            prop_assert_eq!(a.mul(&b).star(), b.star().mul(&a.star()));
            prop_assert_eq!(a.star().degree(2).unwrap(), a.degree(2).unwrap().star());
        }

        #[test]
        fn monomial_text_round_trip(a in arb_mono()) {
            let text = a.to_string();
            prop_assert_eq!(StarMonomial::parse(&text, 2, Q).unwrap(), a);
        }
    }
}
