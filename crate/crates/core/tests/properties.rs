use proptest::prelude::*;
use utstar::freestar::{GradedVar, StarMonomial, StarPoly};
use utstar::group::Letter;
use utstar::normal::{is_normal, normalize};
use utstar::oracle::generic_eval_poly;
use utstar::{Field, GroupWord, InvolutionKind};

fn word(rank: usize) -> impl Strategy<Value = GroupWord> {
    prop::collection::vec((1..=rank, any::<bool>()), 0..6).prop_map(move |ls| {
        GroupWord::from_letters(
            rank,
            ls.into_iter().map(|(i, inv)| Letter::new(i, inv)).collect(),
        )
        .unwrap()
    })
}

/// A monomial for `UT_n`, degrees drawn from the support, the identity or
/// arbitrary short words.
fn monomial(n: usize) -> impl Strategy<Value = StarMonomial> {
    let rank = n - 1;
    let support: Vec<GroupWord> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| GroupWord::ascending(rank, i, j).unwrap()))
        .chain([GroupWord::identity(rank)])
        .collect();
    let degree = if rank == 0 {
        Just(GroupWord::identity(0)).boxed()
    } else {
        prop_oneof![4 => prop::sample::select(support), 1 => word(rank)].boxed()
    };
    prop::collection::vec((1u32..=3, degree, any::<bool>()), 0..5).prop_map(|fs| {
        StarMonomial::unit(
            Field::Rationals,
            fs.into_iter()
                .map(|(id, g, s)| GradedVar::new(id, g, s))
                .collect(),
        )
    })
}

fn case() -> impl Strategy<Value = (usize, InvolutionKind, StarMonomial)> {
    (1usize..=5).prop_flat_map(|n| {
        (
            Just(n),
            prop::sample::select(InvolutionKind::applicable(n)),
            monomial(n),
        )
    })
}

proptest! {
    #[test]
    fn group_laws((u, v, w) in (1usize..5).prop_flat_map(|r| (word(r), word(r), word(r)))) {
        prop_assert_eq!(u.mul(&v).unwrap().mul(&w).unwrap(), u.mul(&v.mul(&w).unwrap()).unwrap());
        prop_assert_eq!(u.mul(&v).unwrap().star(), v.star().mul(&u.star()).unwrap());
        prop_assert!(u.mul(&u.inverse()).unwrap().is_trivial());
    }

    #[test]
    fn normalization_is_sound_and_idempotent((n, kind, m) in case()) {
        let p = StarPoly::from_monomial(m);
        let q = normalize(n, kind, Field::Rationals, &p).unwrap();
        prop_assert_eq!(generic_eval_poly(n, kind, &p).unwrap(), generic_eval_poly(n, kind, &q).unwrap());
        prop_assert_eq!(normalize(n, kind, Field::Rationals, &q).unwrap(), q.clone());
        for t in q.monomials() {
            prop_assert!(is_normal(n, kind, Field::Rationals, &t));
        }
    }

    #[test]
    fn star_commutes_with_evaluation((n, kind, m) in case()) {
        let p = StarPoly::from_monomial(m);
        let lhs = generic_eval_poly(n, kind, &p.star()).unwrap();
        let rhs = generic_eval_poly(n, kind, &p).unwrap().apply_involution(kind).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn monomial_text_round_trips((n, _kind, m) in case()) {
        let text = m.to_string();
        prop_assert_eq!(StarMonomial::parse(&text, n - 1, Field::Rationals).unwrap(), m);
    }
}
