//! Normal-form counts against brute-force ranks of generic evaluations.

use utstar::codim::{self, Method};
use utstar::freestar::StarPoly;
use utstar::normal::{count_basis, enumerate_basis, normalize};
use utstar::oracle::{full_multilinear_span, generic_eval_poly, omega_oracle, space_dim};
use utstar::{Field, InvolutionKind};

#[test]
fn span_dimension_is_factorial_times_basis() {
    for n in 2..=4usize {
        for kind in InvolutionKind::applicable(n) {
            for m in 1..=3usize {
                for l in 0..=m.min(n - 1) {
                    let dim = space_dim(n, kind, &full_multilinear_span(n, l, m)).unwrap();
                    let basis = enumerate_basis(n, kind, Field::Rationals, l, m, true).unwrap();
                    let fact: usize = (1..=l).product();
                    assert_eq!(dim, fact * basis.len(), "n={n} {kind} l={l} m={m}");
                }
            }
        }
    }
}

#[test]
fn count_matches_oracle_beyond_the_top_row() {
    let q = Field::Rationals;
    for (n, l, m) in [(3, 1, 5), (4, 1, 4), (4, 2, 4), (5, 2, 3)] {
        let kind = InvolutionKind::Orthogonal;
        assert_eq!(
            count_basis(n, kind, q, l, m, true).unwrap(),
            omega_oracle(n, kind, l, m).unwrap(),
            "n={n} l={l} m={m}"
        );
    }
}

#[test]
fn symplectic_and_orthogonal_agree_on_counts() {
    // the involutions differ only by signs, which do not change dimensions
    for m in 1..=5 {
        for l in 0..=3usize.min(m) {
            let a = codim::omega(
                4,
                l,
                m,
                InvolutionKind::Orthogonal,
                Field::Rationals,
                Method::Enumerate,
            )
            .unwrap();
            let b = codim::omega(
                4,
                l,
                m,
                InvolutionKind::Symplectic,
                Field::Rationals,
                Method::Enumerate,
            )
            .unwrap();
            assert_eq!(a, b);
        }
    }
}

#[test]
fn normalizing_a_span_preserves_every_evaluation() {
    for kind in InvolutionKind::applicable(4) {
        for mono in full_multilinear_span(4, 2, 3) {
            let p = StarPoly::from_monomial(mono);
            let q = normalize(4, kind, Field::Rationals, &p).unwrap();
            assert_eq!(
                generic_eval_poly(4, kind, &p).unwrap(),
                generic_eval_poly(4, kind, &q).unwrap()
            );
        }
    }
}

#[test]
fn codimension_by_oracle_matches_enumeration() {
    for n in 2..=3 {
        for m in 1..=4 {
            let a = codim::codimension(n, m, InvolutionKind::Orthogonal, Method::Oracle).unwrap();
            let b =
                codim::codimension(n, m, InvolutionKind::Orthogonal, Method::Enumerate).unwrap();
            assert_eq!(a.c_m, b.c_m);
            assert!(a.is_consistent());
        }
    }
}
