//! The acceptance suite: ten end-to-end checks, each producing one
//! pass/fail line. Shared by the `acceptance` test target and `utstar
//! verify`.

use std::collections::BTreeSet;
use std::fmt;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Signed};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::codim::{self, Method};
use crate::freestar::{GradedVar, StarMonomial, StarPoly};
use crate::grading::{check_shelf_bound, good_sequences};
use crate::group::{GroupWord, Letter};
use crate::normal::{enumerate_basis, normalize};
use crate::oracle::{self, full_multilinear_span, space_dim, DEFAULT_BUDGET};
use crate::poly::{MPoly, XiLabel, XiMonomial};
use crate::scalar::{Field, Scalar};
use crate::utmatrix::{InvolutionKind, UtMatrix};

// Pinned scales and limits.
const IDENTITY_LIMIT: Duration = Duration::from_secs(30);
const BASIS_LIMIT: Duration = Duration::from_secs(120);
const CLOSED_FORM_LIMIT: Duration = Duration::from_secs(120);
const SHELF_LIMIT: Duration = Duration::from_secs(10);
const ASYMPTOTIC_LIMIT: Duration = Duration::from_secs(120);
const SOUNDNESS_LIMIT: Duration = Duration::from_secs(120);
const LAWS_LIMIT: Duration = Duration::from_secs(30);
/// Largest `m` for the exponent enclosures, per `n`.
const EXPONENT_M: [(usize, usize); 2] = [(2, 20), (3, 64)];
/// Enclosure width `2^-EXPONENT_BITS`.
const EXPONENT_BITS: u32 = 32;
const LAW_TRIALS: usize = 300;

#[derive(Clone, Debug)]
pub struct AcceptanceConfig {
    pub seed: u64,
    /// Random monomials for the rewriter soundness check.
    pub soundness_samples: usize,
    pub budget: u128,
}

impl Default for AcceptanceConfig {
    fn default() -> Self {
        AcceptanceConfig {
            seed: 0x5eed,
            soundness_samples: 10_000,
            budget: DEFAULT_BUDGET,
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionResult {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
    pub limit: Option<Duration>,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {:<22} {}  {} [{:.2}s",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail,
            self.elapsed.as_secs_f64()
        )?;
        if let Some(limit) = self.limit {
            write!(f, " / limit {}s", limit.as_secs())?;
        }
        f.write_str("]")
    }
}

/// `omega` values computed along the way, for the bound check.
#[derive(Clone, Debug, Default)]
pub struct OmegaLedger(pub Vec<(usize, usize, usize, BigUint)>);

type Outcome = std::result::Result<String, String>;

fn timed(
    id: u8,
    name: &'static str,
    limit: Option<Duration>,
    f: impl FnOnce() -> Outcome,
) -> CriterionResult {
    let start = Instant::now();
    let outcome = f();
    let elapsed = start.elapsed();
    let over = limit.is_some_and(|l| elapsed > l);
    let (passed, mut detail) = match outcome {
        Ok(d) => (!over, d),
        Err(d) => (false, d),
    };
    if over {
        detail.push_str(" (time limit exceeded)");
    }
    CriterionResult {
        id,
        name,
        passed,
        detail,
        elapsed,
        limit,
    }
}

fn fail<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

fn rat(a: i64, b: i64) -> BigRational {
    BigRational::new(a.into(), b.into())
}

pub fn identity_suite(cfg: &AcceptanceConfig) -> CriterionResult {
    timed(1, "identity suite", Some(IDENTITY_LIMIT), || {
        let mut cases: Vec<(usize, InvolutionKind, Field)> = (1..=5)
            .map(|n| (n, InvolutionKind::Orthogonal, Field::Rationals))
            .collect();
        cases.push((2, InvolutionKind::Symplectic, Field::Rationals));
        cases.push((4, InvolutionKind::Symplectic, Field::Rationals));
        cases.push((2, InvolutionKind::Orthogonal, Field::Prime(3)));
        let mut checks = 0;
        for (n, kind, field) in cases {
            let report =
                oracle::verify_theorem_identities(n, kind, field, cfg.budget).map_err(fail)?;
            checks += report.checks.len();
            if let Some(bad) = report.checks.iter().find(|c| !c.passed) {
                return Err(format!(
                    "n={n} {kind} {field}: ({}) {} fails: {}",
                    bad.item,
                    bad.identity,
                    bad.witness.clone().unwrap_or_default()
                ));
            }
            if !field.is_char_zero() && !report.items().contains("v") {
                return Err(format!("n={n} {field}: item (v) missing"));
            }
        }
        Ok(format!("{checks} instantiated identities vanish"))
    })
}

pub fn basis_equals_oracle(ledger: &mut OmegaLedger) -> CriterionResult {
    timed(2, "basis = oracle", Some(BASIS_LIMIT), || {
        let field = Field::Rationals;
        let mut cases = 0;
        for n in [2usize, 3, 4] {
            for kind in InvolutionKind::applicable(n) {
                for m in 1..=4usize {
                    for l in 0..=m.min(n - 1) {
                        let span = full_multilinear_span(n, l, m);
                        let dim = space_dim(n, kind, &span).map_err(fail)?;
                        let basis = enumerate_basis(n, kind, field, l, m, true).map_err(fail)?;
                        let fact: usize = (1..=l).product();
                        let tag = format!("n={n} {kind} l={l} m={m}");
                        if dim != fact * basis.len() {
                            return Err(format!("{tag}: span dim {dim} != {l}! * {}", basis.len()));
                        }
                        let monos: Vec<_> = basis.iter().map(|b| b.to_monomial(field)).collect();
                        if space_dim(n, kind, &monos).map_err(fail)? != basis.len() {
                            return Err(format!("{tag}: basis monomials are dependent"));
                        }
                        // normal forms of the whole span: exactly a basis
                        let mut forms = BTreeSet::new();
                        for mono in &span {
                            let p =
                                normalize(n, kind, field, &StarPoly::from_monomial(mono.clone()))
                                    .map_err(fail)?;
                            forms.extend(p.monomials().map(|t| t.factors));
                        }
                        let forms: Vec<_> = forms
                            .into_iter()
                            .map(|f| StarMonomial::unit(field, f))
                            .collect();
                        if forms.len() != dim || space_dim(n, kind, &forms).map_err(fail)? != dim {
                            return Err(format!(
                                "{tag}: {} normal forms for span dim {dim}",
                                forms.len()
                            ));
                        }
                        ledger.0.push((n, l, m, BigUint::from(basis.len())));
                        cases += 1;
                    }
                }
            }
        }
        Ok(format!(
            "{cases} (n, *, l, m) cases: l! * |basis| = span dim, normal forms independent"
        ))
    })
}

pub fn closed_form(ledger: &mut OmegaLedger) -> CriterionResult {
    timed(3, "closed form l = n-1", Some(CLOSED_FORM_LIMIT), || {
        let mut cases = 0;
        for n in 2..=4usize {
            for kind in InvolutionKind::applicable(n) {
                for m in n - 1..=n + 2 {
                    let l = n - 1;
                    let formula = codim::omega_closed_top(n, m).map_err(fail)?;
                    let e = codim::omega(n, l, m, kind, Field::Rationals, Method::Enumerate)
                        .map_err(fail)?;
                    let o = codim::omega(n, l, m, kind, Field::Rationals, Method::Oracle)
                        .map_err(fail)?;
                    if e != formula || o != formula {
                        return Err(format!(
                            "n={n} {kind} m={m}: enumerate {e}, oracle {o}, formula {formula}"
                        ));
                    }
                    ledger.0.push((n, l, m, o));
                    cases += 1;
                }
            }
        }
        Ok(format!(
            "{cases} cases agree with 2^floor((n-1)/2) * n^(m-n+1)"
        ))
    })
}

pub fn bounds(ledger: &OmegaLedger) -> CriterionResult {
    timed(4, "upper bounds", None, || {
        if ledger.0.is_empty() {
            return Err("no omega values recorded".into());
        }
        for (n, l, m, v) in &ledger.0 {
            let b = codim::omega_upper(*n, *l, *m);
            if v > &b {
                return Err(format!("omega({l},{m}) = {v} exceeds bound {b} at n={n}"));
            }
        }
        Ok(format!(
            "{} computed omega values within bounds",
            ledger.0.len()
        ))
    })
}

pub fn shelf() -> CriterionResult {
    timed(5, "shelf bound", Some(SHELF_LIMIT), || {
        let mut checked = 0;
        for n in 2..=6usize {
            for l in (n - 1) / 2..n {
                for gs in good_sequences(n, l) {
                    let r = check_shelf_bound(n, &gs.degrees.0).map_err(fail)?;
                    if !r.bound_satisfied || r.odd_addendum == Some(false) {
                        return Err(format!("n={n} chain {:?}: {r:?}", gs.chain));
                    }
                    checked += 1;
                }
            }
        }
        Ok(format!("{checked} good sequences satisfy the bound"))
    })
}

pub fn codimension_values() -> CriterionResult {
    timed(6, "codimension values", None, || {
        let tau = InvolutionKind::Orthogonal;
        for (m, expect) in [(1usize, 3u32), (2, 8)] {
            let r = codim::codimension(2, m, tau, Method::Oracle).map_err(fail)?;
            if r.c_m != BigUint::from(expect) || !r.is_consistent() {
                return Err(format!("c_{m}(UT_2) = {}, expected {expect}", r.c_m));
            }
        }
        for m in 1..=10 {
            let r = codim::codimension(1, m, tau, Method::Enumerate).map_err(fail)?;
            if !r.c_m.is_one() {
                return Err(format!("c_{m}(UT_1) = {}", r.c_m));
            }
        }
        Ok("c_1 = 3, c_2 = 8 for UT_2; c_m = 1 for UT_1, m <= 10".into())
    })
}

pub fn asymptotics() -> CriterionResult {
    timed(7, "asymptotic ratio", Some(ASYMPTOTIC_LIMIT), || {
        let tau = InvolutionKind::Orthogonal;
        for m in 1..=20i64 {
            let r = codim::asymptotic_ratio(2, m as usize, tau).map_err(fail)?;
            if r != rat(m + 2, m) {
                return Err(format!("n=2, m={m}: ratio {r} != {}/{m}", m + 2));
            }
        }
        if codim::asymptotic_ratio(2, 20, tau).map_err(fail)? != rat(11, 10) {
            return Err("n=2, m=20: ratio is not 11/10".into());
        }
        let one = BigRational::one();
        let mut prev: Option<BigRational> = None;
        for m in 5..=12 {
            let r = codim::asymptotic_ratio(3, m, tau).map_err(fail)?;
            let gap = (&r - &one).abs();
            if let Some(p) = &prev {
                if &gap >= p {
                    return Err(format!("n=3, m={m}: |ratio - 1| = {gap} did not decrease"));
                }
            }
            prev = Some(gap);
        }
        Ok("n=2 ratio = (m+2)/m for m <= 20; n=3 |ratio-1| strictly decreasing on 5..=12".into())
    })
}

pub fn exponent() -> CriterionResult {
    timed(8, "exponent trend", None, || {
        let tau = InvolutionKind::Orthogonal;
        let mut notes = Vec::new();
        for (n, m) in EXPONENT_M {
            let target = BigRational::from_integer((n as i64).into());
            let lo = &target - rat(4, 5);
            let hi = &target + rat(1, 2);
            let at_m = codim::exponent_estimate(n, m, tau, EXPONENT_BITS).map_err(fail)?;
            let at_half = codim::exponent_estimate(n, m / 2, tau, EXPONENT_BITS).map_err(fail)?;
            if !at_m.within_open(&lo, &hi) {
                return Err(format!(
                    "n={n}, m={m}: enclosure [{}, {}] outside ({lo}, {hi})",
                    at_m.lo, at_m.hi
                ));
            }
            if at_m.max_distance(&target) >= at_half.min_distance(&target) {
                return Err(format!(
                    "n={n}: m={m} is not closer to {n} than m={}",
                    m / 2
                ));
            }
            notes.push(format!(
                "n={n}: c_{m}^(1/{m}) in [{}, {}]",
                crate::scalar::decimal_half_even(&at_m.lo, 4),
                crate::scalar::decimal_half_even(&at_m.hi, 4)
            ));
        }
        Ok(notes.join("; "))
    })
}

fn random_word(rng: &mut ChaCha8Rng, rank: usize, max_len: usize) -> GroupWord {
    let len = rng.gen_range(0..=max_len);
    let letters = (0..len)
        .map(|_| Letter::new(rng.gen_range(1..=rank), rng.gen_bool(0.5)))
        .collect();
    GroupWord::from_letters(rank, letters).expect("in range")
}

/// A random monomial for the soundness check: mostly support and trivial
/// degrees, some arbitrary words, repeated ids allowed.
pub fn random_monomial(rng: &mut ChaCha8Rng, n: usize, max_len: usize) -> StarMonomial {
    let rank = n - 1;
    let len = rng.gen_range(1..=max_len);
    let factors = (0..len)
        .map(|_| {
            let id = rng.gen_range(1..=4);
            let roll = rng.gen_range(0..10);
            let degree = if rank == 0 || roll < 4 {
                GroupWord::identity(rank)
            } else if roll < 9 {
                let i = rng.gen_range(1..n);
                let j = rng.gen_range(i + 1..=n);
                GroupWord::ascending(rank, i, j).expect("support")
            } else {
                random_word(rng, rank, 3)
            };
            GradedVar::new(id, degree, rng.gen_bool(0.5))
        })
        .collect();
    StarMonomial::unit(Field::Rationals, factors)
}

pub fn rewriter_soundness(cfg: &AcceptanceConfig) -> CriterionResult {
    timed(9, "rewriter soundness", Some(SOUNDNESS_LIMIT), || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let field = Field::Rationals;
        let mut nonzero = 0;
        for _ in 0..cfg.soundness_samples {
            let n = rng.gen_range(1..=4usize);
            let kind = *InvolutionKind::applicable(n)
                .choose(&mut rng)
                .expect("nonempty");
            let m = random_monomial(&mut rng, n, 5);
            let p = StarPoly::from_monomial(m.clone());
            let q = normalize(n, kind, field, &p).map_err(fail)?;
            let before = oracle::generic_eval_poly(n, kind, &p).map_err(fail)?;
            let after = oracle::generic_eval_poly(n, kind, &q).map_err(fail)?;
            if before != after {
                return Err(format!("n={n} {kind}: {m} -> {q} changes the evaluation"));
            }
            if normalize(n, kind, field, &q).map_err(fail)? != q {
                return Err(format!("n={n} {kind}: normalize not idempotent on {m}"));
            }
            nonzero += usize::from(!q.is_zero());
        }
        Ok(format!(
            "{} random monomials ({nonzero} nonzero) keep their evaluation; idempotent",
            cfg.soundness_samples
        ))
    })
}

fn random_poly(rng: &mut ChaCha8Rng) -> MPoly {
    (0..rng.gen_range(0..4)).fold(MPoly::zero(), |acc, _| {
        let mono = XiMonomial::from_exponents((0..rng.gen_range(0..3)).map(|_| {
            (
                XiLabel {
                    slot: rng.gen_range(1..=3),
                    var: rng.gen_range(1..=2),
                },
                rng.gen_range(1..=2),
            )
        }));
        let c = Scalar::rational(rng.gen_range(-3..=3), rng.gen_range(1..=3));
        acc.add(&MPoly::term(c, mono))
    })
}

fn random_matrix(rng: &mut ChaCha8Rng, n: usize) -> UtMatrix {
    let mut a = UtMatrix::zero(n);
    for _ in 0..rng.gen_range(0..=n + 2) {
        let i = rng.gen_range(1..=n);
        let j = rng.gen_range(i..=n);
        let p = a.get(i, j).add(&random_poly(rng));
        a.try_set(i, j, p).expect("upper triangular");
    }
    a
}

pub fn algebraic_laws(cfg: &AcceptanceConfig) -> CriterionResult {
    timed(10, "algebraic laws", Some(LAWS_LIMIT), || {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0xa1fe);
        for _ in 0..LAW_TRIALS {
            let n = rng.gen_range(1..=5usize);
            for kind in InvolutionKind::applicable(n) {
                let a = random_matrix(&mut rng, n);
                let b = random_matrix(&mut rng, n);
                let star = |x: &UtMatrix| x.apply_involution(kind).expect("size checked");
                let ab = a.mul(&b).expect("same size");
                if star(&ab) != star(&b).mul(&star(&a)).expect("same size") || star(&star(&a)) != a
                {
                    return Err(format!("n={n} {kind}: involution law fails"));
                }
            }
            let rank = rng.gen_range(1..=4usize);
            let [u, v, w] = [0; 3].map(|_| random_word(&mut rng, rank, 6));
            let uv = u.mul(&v).map_err(fail)?;
            if uv.mul(&w).map_err(fail)? != u.mul(&v.mul(&w).map_err(fail)?).map_err(fail)?
                || uv.star() != v.star().mul(&u.star()).map_err(fail)?
                || u.star().star() != u
                || !u.mul(&u.inverse()).map_err(fail)?.is_trivial()
            {
                return Err(format!("free group law fails on {u}, {v}, {w}"));
            }
            let [p, q, r] = [0; 3].map(|_| random_poly(&mut rng));
            if p.mul(&q.add(&r)) != p.mul(&q).add(&p.mul(&r))
                || p.mul(&q).mul(&r) != p.mul(&q.mul(&r))
                || p.mul(&q) != q.mul(&p)
                || !p.sub(&p).is_zero()
            {
                return Err("polynomial ring axiom fails".into());
            }
            let f = Field::Prime(7);
            let [x, y, z] = [0; 3].map(|_| f.from_i64(rng.gen_range(0..7)));
            if &x * &(&y + &z) != &(&x * &y) + &(&x * &z)
                || (!x.is_zero() && !(&x * &x.inv().expect("nonzero")).is_one())
            {
                return Err("F_7 field axiom fails".into());
            }
        }
        Ok(format!(
            "{LAW_TRIALS} randomized rounds of involution, group and ring laws"
        ))
    })
}

/// Runs one criterion by number (1..=10); criterion 4 recomputes the
/// values of criteria 2 and 3.
pub fn run_criterion(id: u8, cfg: &AcceptanceConfig) -> Option<CriterionResult> {
    let mut ledger = OmegaLedger::default();
    Some(match id {
        1 => identity_suite(cfg),
        2 => basis_equals_oracle(&mut ledger),
        3 => closed_form(&mut ledger),
        4 => {
            basis_equals_oracle(&mut ledger);
            closed_form(&mut ledger);
            bounds(&ledger)
        }
        5 => shelf(),
        6 => codimension_values(),
        7 => asymptotics(),
        8 => exponent(),
        9 => rewriter_soundness(cfg),
        10 => algebraic_laws(cfg),
        _ => return None,
    })
}

pub fn run_all(cfg: &AcceptanceConfig) -> Vec<CriterionResult> {
    let mut ledger = OmegaLedger::default();
    let mut out = vec![
        identity_suite(cfg),
        basis_equals_oracle(&mut ledger),
        closed_form(&mut ledger),
    ];
    out.push(bounds(&ledger));
    out.push(shelf());
    out.push(codimension_values());
    out.push(asymptotics());
    out.push(exponent());
    out.push(rewriter_soundness(cfg));
    out.push(algebraic_laws(cfg));
    out
}

/// Convenience for callers that only need a verdict.
pub fn all_pass(results: &[CriterionResult]) -> bool {
    results.iter().all(|r| r.passed)
}
