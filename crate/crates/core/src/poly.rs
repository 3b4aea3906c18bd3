//! Sparse commutative polynomials in the indeterminates `xi[j,l]`
//! (diagonal slot `j`, variable id `l`).

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct XiLabel {
    pub slot: u32,
    pub var: u32,
}

/// A monomial in the `xi` indeterminates. Exponents are positive and the
/// labels are sorted, so equality is syntactic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct XiMonomial(Vec<(XiLabel, u32)>);

impl XiMonomial {
    pub fn one() -> Self {
        XiMonomial(Vec::new())
    }

    pub fn var(label: XiLabel) -> Self {
        XiMonomial(vec![(label, 1)])
    }

    pub fn from_exponents(items: impl IntoIterator<Item = (XiLabel, u32)>) -> Self {
        let mut map: BTreeMap<XiLabel, u32> = BTreeMap::new();
        for (l, e) in items {
            *map.entry(l).or_default() += e;
        }
        XiMonomial(map.into_iter().filter(|&(_, e)| e > 0).collect())
    }

    pub fn exponents(&self) -> &[(XiLabel, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&(_, e)| e).sum()
    }

    pub fn mul(&self, other: &XiMonomial) -> XiMonomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        XiMonomial(out)
    }
}

// graded, then lexicographic on the sorted label list
impl Ord for XiMonomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for XiMonomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for XiMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for (k, (l, e)) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str("*")?;
            }
            write!(f, "xi[{},{}]", l.slot, l.var)?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

/// A polynomial with exact coefficients; zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MPoly {
    terms: BTreeMap<XiMonomial, Scalar>,
}

impl MPoly {
    pub fn zero() -> Self {
        MPoly::default()
    }

    pub fn constant(c: Scalar) -> Self {
        Self::term(c, XiMonomial::one())
    }

    pub fn one(field: Field) -> Self {
        Self::constant(field.one())
    }

    pub fn term(c: Scalar, m: XiMonomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        MPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&XiMonomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: XiMonomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                let s = &*v + &c;
                if s.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> MPoly {
        let mut out = MPoly::zero();
        for (m, v) in &self.terms {
            out.add_term(m.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for MPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            if m.0.is_empty() {
                write!(f, "{c}")?;
            } else if c.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{c}*{m}")?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn xi(slot: u32, var: u32) -> MPoly {
        MPoly::term(
            Field::Rationals.one(),
            XiMonomial::var(XiLabel { slot, var }),
        )
    }

    fn arb_poly() -> impl Strategy<Value = MPoly> {
        prop::collection::vec(
            (-3i64..=3, 1i64..=3, 0u32..3, 1u32..3, 1u32..3, 0u32..3),
            0..4,
        )
        .prop_map(|terms| {
            terms
                .into_iter()
                .fold(MPoly::zero(), |acc, (num, den, e1, s, v, e2)| {
                    let m = XiMonomial::from_exponents([
                        (XiLabel { slot: 1, var: 1 }, e1),
                        (XiLabel { slot: s, var: v }, e2),
                    ]);
                    acc.add(&MPoly::term(Scalar::rational(num, den), m))
                })
        })
    }

    #[test]
    fn cancellation_leaves_no_zero_terms() {
        let p = xi(1, 1).add(&xi(2, 1));
        let q = p.sub(&xi(2, 1));
        assert_eq!(q, xi(1, 1));
        assert!(p.sub(&p).is_zero());
        assert_eq!(p.sub(&p).len(), 0);
    }

    #[test]
    fn graded_order() {
        let a = XiMonomial::var(XiLabel { slot: 2, var: 1 });
        let b = XiMonomial::from_exponents([(XiLabel { slot: 1, var: 1 }, 2)]);
        assert!(a < b);
        assert!(XiMonomial::one() < a);
    }

    #[test]
    fn display() {
        let p = xi(1, 1)
            .mul(&xi(1, 1))
            .add(&MPoly::constant(Scalar::rational(-1, 2)));
        assert_eq!(p.to_string(), "-1/2 + xi[1,1]^2");
    }

    proptest! {
        #[test]
        fn ring_axioms(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(a.add(&b), b.add(&a));
            prop_assert_eq!(a.mul(&b), b.mul(&a));
            prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
            prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
            prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
            prop_assert!(a.sub(&a).is_zero());
            prop_assert_eq!(a.mul(&MPoly::one(Field::Rationals)), a.clone());
        }
    }
}
