//! Upper triangular `n x n` matrices with polynomial entries, and the
//! orthogonal and symplectic involutions.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{Map, Value};

use crate::error::{Error, Result};
use crate::grading::{deg_unit, support_lookup};
use crate::group::GroupWord;
use crate::poly::MPoly;
use crate::scalar::{Field, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum InvolutionKind {
    /// Reflection along the secondary diagonal.
    Orthogonal,
    /// `A -> D A^t' D^-1` with `D = diag(I_m, -I_m)`; needs `n = 2m`.
    Symplectic,
}

impl InvolutionKind {
    /// `+1` for orthogonal, `-1` for symplectic.
    pub fn epsilon(self) -> i64 {
        match self {
            InvolutionKind::Orthogonal => 1,
            InvolutionKind::Symplectic => -1,
        }
    }

    pub fn check_size(self, n: usize) -> Result<()> {
        if self == InvolutionKind::Symplectic && n % 2 == 1 {
            return Err(Error::SymplecticOddSize(n));
        }
        Ok(())
    }

    /// The involutions defined on `UT_n`.
    pub fn applicable(n: usize) -> Vec<InvolutionKind> {
        if n.is_multiple_of(2) {
            vec![InvolutionKind::Orthogonal, InvolutionKind::Symplectic]
        } else {
            vec![InvolutionKind::Orthogonal]
        }
    }
}

impl FromStr for InvolutionKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "orth" | "orthogonal" | "tau" => Ok(InvolutionKind::Orthogonal),
            "symp" | "symplectic" | "s" => Ok(InvolutionKind::Symplectic),
            _ => Err(Error::Precondition(format!(
                "unknown involution {s:?} (expected orth or symp)"
            ))),
        }
    }
}

impl fmt::Display for InvolutionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InvolutionKind::Orthogonal => "orth",
            InvolutionKind::Symplectic => "symp",
        })
    }
}

/// Image of the unit `e_ij` under the involution: `(sign, (p, q))` with
/// `e_ij^* = sign * e_pq`.
pub fn involution_on_unit(
    n: usize,
    kind: InvolutionKind,
    i: usize,
    j: usize,
) -> (i64, (usize, usize)) {
    let (p, q) = (n + 1 - j, n + 1 - i);
    let sign = match kind {
        InvolutionKind::Orthogonal => 1,
        InvolutionKind::Symplectic => {
            let half = n / 2;
            let d = |k: usize| if k <= half { 1 } else { -1 };
            d(p) * d(q)
        }
    };
    (sign, (p, q))
}

/// Sparse upper triangular matrix; absent entries are zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UtMatrix {
    n: usize,
    entries: BTreeMap<(usize, usize), MPoly>,
}

impl UtMatrix {
    pub fn zero(n: usize) -> Self {
        UtMatrix {
            n,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(n: usize, field: Field) -> Self {
        let mut m = Self::zero(n);
        for i in 1..=n {
            m.set(i, i, MPoly::one(field));
        }
        m
    }

    /// The matrix unit `e_ij` over `field`.
    pub fn unit(n: usize, i: usize, j: usize, field: Field) -> Result<Self> {
        let mut m = Self::zero(n);
        m.try_set(i, j, MPoly::one(field))?;
        Ok(m)
    }

    pub fn diagonal(entries: Vec<MPoly>) -> Self {
        let mut m = Self::zero(entries.len());
        for (k, p) in entries.into_iter().enumerate() {
            m.set(k + 1, k + 1, p);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> MPoly {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize), &MPoly)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn try_set(&mut self, i: usize, j: usize, p: MPoly) -> Result<()> {
        if !(1 <= i && i <= j && j <= self.n) {
            return Err(Error::Precondition(format!(
                "entry ({i},{j}) is not upper triangular in size {}",
                self.n
            )));
        }
        if p.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), p);
        }
        Ok(())
    }

    fn set(&mut self, i: usize, j: usize, p: MPoly) {
        self.try_set(i, j, p).expect("upper triangular position");
    }

    fn check_same(&self, other: &UtMatrix) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch {
                left: self.n,
                right: other.n,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &UtMatrix) -> Result<UtMatrix> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (&(i, j), p) in &other.entries {
            let s = out.get(i, j).add(p);
            out.set(i, j, s);
        }
        Ok(out)
    }

    pub fn neg(&self) -> UtMatrix {
        UtMatrix {
            n: self.n,
            entries: self.entries.iter().map(|(k, p)| (*k, p.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &UtMatrix) -> Result<UtMatrix> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Scalar) -> UtMatrix {
        let mut out = UtMatrix::zero(self.n);
        for (&(i, j), p) in &self.entries {
            out.set(i, j, p.scale(c));
        }
        out
    }

    pub fn mul(&self, other: &UtMatrix) -> Result<UtMatrix> {
        self.check_same(other)?;
        let mut rows: BTreeMap<usize, Vec<(usize, &MPoly)>> = BTreeMap::new();
        for (&(k, j), p) in &other.entries {
            rows.entry(k).or_default().push((j, p));
        }
        let mut out = UtMatrix::zero(self.n);
        for (&(i, k), a) in &self.entries {
            if let Some(row) = rows.get(&k) {
                for &(j, b) in row {
                    let s = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, s);
                }
            }
        }
        Ok(out)
    }

    /// Entry-level map `e_ij -> sign * e_{n-j+1, n-i+1}`; coefficients travel
    /// with their position.
    pub fn apply_involution(&self, kind: InvolutionKind) -> Result<UtMatrix> {
        kind.check_size(self.n)?;
        let mut out = UtMatrix::zero(self.n);
        for (&(i, j), p) in &self.entries {
            let (sign, (a, b)) = involution_on_unit(self.n, kind, i, j);
            let q = if sign < 0 { p.neg() } else { p.clone() };
            out.set(a, b, q);
        }
        Ok(out)
    }

    /// Debug dump: `"i,j" -> polynomial string`.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (&(i, j), p) in &self.entries {
            map.insert(format!("{i},{j}"), Value::String(p.to_string()));
        }
        Value::Object(map)
    }
}

impl fmt::Display for UtMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("0");
        }
        for (k, ((i, j), p)) in self.entries.iter().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({p})e{i}{j}")?;
        }
        Ok(())
    }
}

/// Executable check of `A_g^* ⊆ A_{g^*}` over every support pair and the
/// diagonal.
pub fn is_homogeneous_involution(n: usize, kind: InvolutionKind) -> bool {
    if kind.check_size(n).is_err() || n == 0 {
        return false;
    }
    for i in 1..=n {
        let (_, (a, b)) = involution_on_unit(n, kind, i, i);
        if a != b {
            return false;
        }
        for j in i + 1..=n {
            let (_, (a, b)) = involution_on_unit(n, kind, i, j);
            let (Ok(g), Ok(h)) = (deg_unit(n, i, j), deg_unit(n, a, b)) else {
                return false;
            };
            if h != g.star() {
                return false;
            }
        }
    }
    true
}

/// The homogeneous component of `g` is spanned by a single unit (or is zero).
pub fn component_unit(n: usize, g: &GroupWord) -> Option<(usize, usize)> {
    support_lookup(n, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{XiLabel, XiMonomial};
    use proptest::prelude::*;

    const Q: Field = Field::Rationals;

    fn e(n: usize, i: usize, j: usize) -> UtMatrix {
        UtMatrix::unit(n, i, j, Q).unwrap()
    }

    fn xi(slot: u32, var: u32) -> MPoly {
        MPoly::term(Q.one(), XiMonomial::var(XiLabel { slot, var }))
    }

    #[test]
    fn products() {
        assert_eq!(e(3, 1, 2).mul(&e(3, 2, 3)).unwrap(), e(3, 1, 3));
        assert!(e(3, 1, 2).mul(&e(3, 1, 2)).unwrap().is_zero());
        let mut d = UtMatrix::zero(2);
        d.set(1, 1, xi(1, 1));
        let mut expect = UtMatrix::zero(2);
        expect.set(1, 2, xi(1, 1));
        assert_eq!(d.mul(&e(2, 1, 2)).unwrap(), expect);
        assert!(matches!(
            e(2, 1, 2).mul(&e(3, 1, 2)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn involution_examples() {
        let t = InvolutionKind::Orthogonal;
        let s = InvolutionKind::Symplectic;
        assert_eq!(e(2, 1, 2).apply_involution(t).unwrap(), e(2, 1, 2));
        for n in [2, 4, 6] {
            assert_eq!(e(n, 1, n).apply_involution(s).unwrap(), e(n, 1, n).neg());
        }
        assert_eq!(e(4, 1, 3).apply_involution(s).unwrap(), e(4, 2, 4).neg());
        assert_eq!(
            e(3, 1, 2).apply_involution(s),
            Err(Error::SymplecticOddSize(3))
        );
    }

    #[test]
    fn epsilon_is_corner_coefficient() {
        for n in 1..=6 {
            for kind in InvolutionKind::applicable(n) {
                let img = e(n, 1, n).apply_involution(kind).unwrap();
                assert_eq!(img.get(1, n), MPoly::constant(Q.from_i64(kind.epsilon())));
            }
        }
    }

    #[test]
    fn homogeneity() {
        assert!(is_homogeneous_involution(3, InvolutionKind::Orthogonal));
        assert!(is_homogeneous_involution(4, InvolutionKind::Symplectic));
        assert!(is_homogeneous_involution(2, InvolutionKind::Orthogonal));
        assert!(!is_homogeneous_involution(3, InvolutionKind::Symplectic));
        for n in 1..=7 {
            for kind in InvolutionKind::applicable(n) {
                assert!(is_homogeneous_involution(n, kind));
            }
        }
    }

    #[test]
    fn json_dump() {
        let m = e(2, 1, 2)
            .add(&UtMatrix::diagonal(vec![xi(1, 1), MPoly::zero()]))
            .unwrap();
        assert_eq!(m.to_json().to_string(), r#"{"1,1":"xi[1,1]","1,2":"1"}"#);
    }

    fn arb_matrix(n: usize) -> impl Strategy<Value = UtMatrix> {
        prop::collection::vec((1..=n, 1..=n, -2i64..=2, 1u32..=3, 1u32..=2), 0..6).prop_map(
            move |items| {
                let mut m = UtMatrix::zero(n);
                for (a, b, c, slot, var) in items {
                    let (i, j) = (a.min(b), a.max(b));
                    let p = m.get(i, j).add(&xi(slot, var).scale(&Q.from_i64(c)));
                    m.set(i, j, p);
                }
                m
            },
        )
    }

    fn arb_case() -> impl Strategy<Value = (UtMatrix, UtMatrix, InvolutionKind)> {
        (1usize..=5).prop_flat_map(|n| {
            let kinds = InvolutionKind::applicable(n);
            (arb_matrix(n), arb_matrix(n), prop::sample::select(kinds))
        })
    }

    proptest! {
        #[test]
        fn involution_is_anti_automorphism((a, b, kind) in arb_case()) {
            let ab = a.mul(&b).unwrap().apply_involution(kind).unwrap();
            let ba = b.apply_involution(kind).unwrap().mul(&a.apply_involution(kind).unwrap()).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert_eq!(a.apply_involution(kind).unwrap().apply_involution(kind).unwrap(), a.clone());
            let sum = a.add(&b).unwrap().apply_involution(kind).unwrap();
            prop_assert_eq!(sum, a.apply_involution(kind).unwrap().add(&b.apply_involution(kind).unwrap()).unwrap());
        }
    }
}
