//! Codimensions: `omega(l, m)`, the summation formula for `c_m`, upper
//! bounds, the asymptotic equivalent and exponent enclosures.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::normal::count_basis;
use crate::oracle::omega_oracle;
use crate::scalar::{decimal_half_even, Field};
use crate::utmatrix::InvolutionKind;

/// How an `omega` value was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Method {
    /// Counting normal monomials.
    Enumerate,
    /// Rank of generic evaluations.
    Oracle,
    /// A closed formula.
    Formula,
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "enumerate" => Ok(Method::Enumerate),
            "oracle" => Ok(Method::Oracle),
            "formula" => Ok(Method::Formula),
            _ => Err(Error::Precondition(format!(
                "unknown method {s:?} (expected enumerate, oracle or formula)"
            ))),
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Enumerate => "enumerate",
            Method::Oracle => "oracle",
            Method::Formula => "formula",
        })
    }
}

fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    (0..k).fold(BigUint::one(), |acc, t| acc * (n - t) / (t + 1))
}

fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, t| acc * t)
}

fn pow(base: usize, e: usize) -> BigUint {
    BigUint::from(base).pow(e as u32)
}

fn check(n: usize, l: usize, m: usize, kind: InvolutionKind, field: Field) -> Result<()> {
    if !field.is_char_zero() {
        return Err(Error::RequiresCharacteristicZero);
    }
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    kind.check_size(n)?;
    if l > m || l > n - 1 {
        return Err(Error::Precondition(format!(
            "omega needs 0 <= l <= min(m, n-1), got n={n}, l={l}, m={m}"
        )));
    }
    Ok(())
}

/// `omega(l, m)`: the dimension attached to `l` nontrivial variables among
/// `m`, with the nontrivial ids fixed along the chain.
///
/// `Formula` is only available where a closed form exists (`l = n-1`,
/// `l = 0`, or `n = 1`).
pub fn omega(
    n: usize,
    l: usize,
    m: usize,
    kind: InvolutionKind,
    field: Field,
    method: Method,
) -> Result<BigUint> {
    check(n, l, m, kind, field)?;
    match method {
        Method::Enumerate => count_basis(n, kind, field, l, m, true),
        Method::Oracle => omega_oracle(n, kind, l, m),
        Method::Formula => {
            if n == 1 {
                Ok(BigUint::one())
            } else if l == n - 1 {
                omega_closed_top(n, m)
            } else if l == 0 {
                Ok(pow(2, m))
            } else {
                Err(Error::Precondition(format!(
                    "no closed form for omega at n={n}, l={l}"
                )))
            }
        }
    }
}

/// `omega` by enumeration and by the oracle; disagreement is an error.
pub fn omega_checked(
    n: usize,
    l: usize,
    m: usize,
    kind: InvolutionKind,
    field: Field,
) -> Result<BigUint> {
    let a = omega(n, l, m, kind, field, Method::Enumerate)?;
    let b = omega(n, l, m, kind, field, Method::Oracle)?;
    if a != b {
        return Err(Error::Verification(format!(
            "omega({l},{m}) for n={n}, {kind}: enumeration {a} != oracle {b}"
        )));
    }
    Ok(a)
}

/// `2^floor((n-1)/2) * n^(m-n+1)`.
pub fn omega_closed_top(n: usize, m: usize) -> Result<BigUint> {
    if n < 2 || m + 1 < n {
        return Err(Error::Precondition(format!(
            "closed form needs n > 1 and m >= n-1, got n={n}, m={m}"
        )));
    }
    Ok(pow(2, (n - 1) / 2) * pow(n, m + 1 - n))
}

/// The applicable upper bound for `omega(l, m)`, the minimum where both
/// apply; zero when `l > m`.
pub fn omega_upper(n: usize, l: usize, m: usize) -> BigUint {
    if l > m || n == 0 || l > n - 1 {
        return BigUint::zero();
    }
    let k = (n - 1) / 2;
    let c = binomial(n, l + 1);
    let first = (l <= k).then(|| pow(2, m) * &c * pow(l + 1, m - l));
    let second = (l >= k).then(|| pow(2, l) * &c * pow(n, m - l));
    match (first, second) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => unreachable!(),
    }
}

/// `2^floor((n-1)/2) * m^(n-1) * n^m / n^(n-1)`.
pub fn asymptotic_value(n: usize, m: usize) -> Result<BigRational> {
    if n < 2 {
        return Err(Error::Precondition(
            "the asymptotic equivalent needs n > 1".into(),
        ));
    }
    let num = pow(2, (n - 1) / 2) * pow(m, n - 1) * pow(n, m);
    Ok(BigRational::new(
        BigInt::from(num),
        BigInt::from(pow(n, n - 1)),
    ))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaEntry {
    pub l: usize,
    pub value: BigUint,
    pub bound: BigUint,
    pub method: Method,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodimReport {
    pub n: usize,
    pub m: usize,
    pub kind: InvolutionKind,
    pub omegas: Vec<OmegaEntry>,
    pub c_m: BigUint,
    /// Absent for `n = 1`.
    pub asymptotic: Option<BigRational>,
    pub ratio: Option<BigRational>,
}

impl CodimReport {
    /// `c_m = sum_l C(m,l) l! omega(l,m)` recomputed from the entries.
    pub fn is_consistent(&self) -> bool {
        if self.n == 1 {
            return self.c_m.is_one();
        }
        let total: BigUint = self
            .omegas
            .iter()
            .map(|e| binomial(self.m, e.l) * factorial(e.l) * &e.value)
            .sum();
        total == self.c_m
    }

    pub fn to_json(&self) -> Value {
        let rat = |r: &Option<BigRational>| {
            r.as_ref()
                .map(|r| json!({"num": r.numer().to_string(), "den": r.denom().to_string()}))
        };
        json!({
            "n": self.n,
            "m": self.m,
            "involution": self.kind.to_string(),
            "omegas": self.omegas.iter().map(|e| json!({
                "l": e.l,
                "omega": e.value.to_string(),
                "bound": e.bound.to_string(),
                "method": e.method.to_string(),
            })).collect::<Vec<_>>(),
            "c_m": self.c_m.to_string(),
            "asymptotic": rat(&self.asymptotic),
            "ratio": rat(&self.ratio),
            "ratio_decimal": self.ratio.as_ref().map(|r| decimal_half_even(r, 6)),
        })
    }
}

/// The full report for `(n, m)`. `Oracle` recomputes every `omega` by
/// brute force and fails on any disagreement with enumeration.
pub fn codimension(
    n: usize,
    m: usize,
    kind: InvolutionKind,
    method: Method,
) -> Result<CodimReport> {
    let field = Field::Rationals;
    if n == 0 {
        return Err(Error::Precondition("n must be positive".into()));
    }
    kind.check_size(n)?;
    if n == 1 {
        // UT_1 is the field itself, with trivial involution
        return Ok(CodimReport {
            n,
            m,
            kind,
            omegas: vec![OmegaEntry {
                l: 0,
                value: BigUint::one(),
                bound: omega_upper(1, 0, m),
                method: Method::Formula,
            }],
            c_m: BigUint::one(),
            asymptotic: None,
            ratio: None,
        });
    }
    let omegas = (0..=m.min(n - 1))
        .into_par_iter()
        .map(|l| {
            let value = match method {
                Method::Oracle => omega_checked(n, l, m, kind, field)?,
                Method::Formula if l == 0 || l == n - 1 => {
                    omega(n, l, m, kind, field, Method::Formula)?
                }
                _ => omega(n, l, m, kind, field, Method::Enumerate)?,
            };
            let used = match method {
                Method::Formula if !(l == 0 || l == n - 1) => Method::Enumerate,
                other => other,
            };
            Ok(OmegaEntry {
                l,
                value,
                bound: omega_upper(n, l, m),
                method: used,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let c_m: BigUint = omegas
        .iter()
        .map(|e| binomial(m, e.l) * factorial(e.l) * &e.value)
        .sum();
    let asymptotic = asymptotic_value(n, m)?;
    let ratio = (!asymptotic.is_zero())
        .then(|| BigRational::from_integer(BigInt::from(c_m.clone())) / &asymptotic);
    Ok(CodimReport {
        n,
        m,
        kind,
        omegas,
        c_m,
        asymptotic: Some(asymptotic),
        ratio,
    })
}

/// `c_m / asymptotic_value(n, m)`, exactly.
pub fn asymptotic_ratio(n: usize, m: usize, kind: InvolutionKind) -> Result<BigRational> {
    if n < 2 || m == 0 {
        return Err(Error::Precondition(
            "the ratio needs n > 1 and m > 0".into(),
        ));
    }
    codimension(n, m, kind, Method::Enumerate)?
        .ratio
        .ok_or_else(|| Error::Precondition("zero asymptotic value".into()))
}

/// A closed interval `[lo, hi]` of dyadic rationals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Enclosure {
    pub lo: BigRational,
    pub hi: BigRational,
}

impl Enclosure {
    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, x: &BigRational) -> bool {
        &self.lo <= x && x <= &self.hi
    }

    /// Every point of the enclosure is within `(a, b)`.
    pub fn within_open(&self, a: &BigRational, b: &BigRational) -> bool {
        a < &self.lo && &self.hi < b
    }

    /// Largest distance from `x` to a point of the enclosure.
    pub fn max_distance(&self, x: &BigRational) -> BigRational {
        let d1 = (&self.lo - x).abs();
        let d2 = (&self.hi - x).abs();
        d1.max(d2)
    }

    /// Smallest distance from `x` to a point of the enclosure.
    pub fn min_distance(&self, x: &BigRational) -> BigRational {
        if self.contains(x) {
            BigRational::zero()
        } else {
            (&self.lo - x).abs().min((&self.hi - x).abs())
        }
    }
}

/// `[a / 2^bits, (a+1) / 2^bits]` containing `value^(1/m)`, where `a` is
/// the exact integer floor of `value^(1/m) * 2^bits`.
pub fn root_enclosure(value: &BigUint, m: usize, bits: u32) -> Result<Enclosure> {
    if m == 0 {
        return Err(Error::Precondition("root of order zero".into()));
    }
    let scale = BigUint::one() << bits;
    let target: BigUint = value << (bits as usize * m);
    // largest a with a^m <= target
    let mut lo = BigUint::zero();
    let mut hi = (value + BigUint::one()) * &scale;
    while &lo + BigUint::one() < hi {
        let mid: BigUint = (&lo + &hi) >> 1;
        if mid.pow(m as u32) <= target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let den = BigInt::from(scale);
    Ok(Enclosure {
        lo: BigRational::new(BigInt::from(lo.clone()), den.clone()),
        hi: BigRational::new(BigInt::from(lo + BigUint::one()), den),
    })
}

/// Enclosure of `c_m^(1/m)` with width `2^-bits`.
pub fn exponent_estimate(n: usize, m: usize, kind: InvolutionKind, bits: u32) -> Result<Enclosure> {
    let c = codimension(n, m, kind, Method::Enumerate)?.c_m;
    root_enclosure(&c, m, bits)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rationals;
    const TAU: InvolutionKind = InvolutionKind::Orthogonal;

    fn big(v: u64) -> BigUint {
        BigUint::from(v)
    }

    fn rat(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn omega_examples() {
        for method in [Method::Enumerate, Method::Oracle] {
            assert_eq!(omega(2, 1, 2, TAU, Q, method).unwrap(), big(2));
            assert_eq!(omega(3, 2, 2, TAU, Q, method).unwrap(), big(2));
            assert_eq!(omega(2, 0, 2, TAU, Q, method).unwrap(), big(4));
        }
        assert!(matches!(
            omega(2, 0, 2, TAU, Field::Prime(3), Method::Enumerate),
            Err(Error::RequiresCharacteristicZero)
        ));
        assert!(omega(2, 2, 3, TAU, Q, Method::Enumerate).is_err());
    }

    #[test]
    fn closed_form_examples() {
        assert_eq!(omega_closed_top(2, 2).unwrap(), big(2));
        assert_eq!(omega_closed_top(4, 4).unwrap(), big(8));
        assert_eq!(omega_closed_top(3, 2).unwrap(), big(2));
        assert!(omega_closed_top(1, 3).is_err());
    }

    #[test]
    fn upper_bound_examples() {
        assert_eq!(omega_upper(2, 0, 2), big(8));
        assert_eq!(omega_upper(2, 1, 2), big(4));
        assert_eq!(omega_upper(3, 1, 1), big(6));
        assert_eq!(omega_upper(3, 2, 1), big(0));
    }

    #[test]
    fn codimension_examples() {
        for m in 1..=10 {
            assert_eq!(
                codimension(1, m, TAU, Method::Enumerate).unwrap().c_m,
                big(1)
            );
        }
        let r = codimension(2, 1, TAU, Method::Oracle).unwrap();
        assert_eq!(r.c_m, big(3));
        assert!(r.is_consistent());
        assert_eq!(codimension(2, 2, TAU, Method::Oracle).unwrap().c_m, big(8));
        assert_eq!(codimension(2, 2, TAU, Method::Formula).unwrap().c_m, big(8));
    }

    #[test]
    fn n2_ratio() {
        for m in 1..=20i64 {
            assert_eq!(asymptotic_ratio(2, m as usize, TAU).unwrap(), rat(m + 2, m));
        }
        assert_eq!(asymptotic_ratio(2, 20, TAU).unwrap(), rat(11, 10));
    }

    #[test]
    fn root_enclosures() {
        let e = root_enclosure(&big(589_824), 16, 20).unwrap();
        assert!(e.contains(&rat(22945, 10000)) || e.lo > rat(2294, 1000));
        assert!(e.within_open(&rat(229, 100), &rat(23, 10)));
        let e = root_enclosure(&big(81), 4, 8).unwrap();
        assert_eq!(e.lo, rat(3, 1));
        assert_eq!(e.width(), rat(1, 256));
        assert_eq!(e.max_distance(&rat(3, 1)), rat(1, 256));
        assert_eq!(e.min_distance(&rat(3, 1)), rat(0, 1));
    }
}
