use proptest::prelude::*;

use num_bigint::BigInt;
use sphkernel::straighten::{normalize_with, relation_element, RelSpec, Strategy as Order};
use sphkernel::typ::{SphericalElement, TypeVector};
use sphkernel::expr::parse_expr_rank;
use sphkernel::{gauss_binom, parse_expr, render, straighten, ExactScalar, StrKind};

fn scalar() -> impl Strategy<Value = ExactScalar> {
    prop::collection::vec((-4i32..=4, -5i64..=5), 0..4).prop_map(|ts| {
        ts.into_iter()
            .fold(ExactScalar::zero(), |acc, (k, c)| acc + ExactScalar::monomial(BigInt::from(c), k))
    })
}

fn q_scalar() -> impl Strategy<Value = ExactScalar> {
    prop::collection::vec((-2i32..=3, -5i64..=5), 0..4).prop_map(|ts| ExactScalar::from_q_terms(&ts))
}

fn element(rank: usize, lo: i32, hi: i32) -> impl Strategy<Value = SphericalElement> {
    prop::collection::vec((prop::collection::vec(lo..=hi, rank), -3i64..=3, -2i32..=2), 1..4).prop_map(move |ts| {
        let mut x = SphericalElement::zero(rank);
        for (v, c, k) in ts {
            x.add_term(TypeVector(v), &(ExactScalar::from_int(c) * ExactScalar::q_pow(k))).unwrap();
        }
        x
    })
}

fn kind() -> impl Strategy<Value = StrKind> {
    prop_oneof![Just(StrKind::Natural), Just(StrKind::Flat), Just(StrKind::Phi)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ring_axioms(a in scalar(), b in scalar(), c in scalar()) {
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn exact_division_inverts_products(a in scalar(), b in scalar()) {
        prop_assume!(!b.is_zero());
        prop_assert_eq!((&a * &b).exact_div(&b).unwrap(), a);
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in q_scalar(), b in q_scalar(), q0 in prop_oneof![Just(3i64), Just(5), Just(7)]) {
        let ab = (&a * &b).eval_q(q0).unwrap();
        prop_assert_eq!(ab, a.eval_q(q0).unwrap() * b.eval_q(q0).unwrap());
    }

    #[test]
    fn gaussian_binomials(n in 0i64..7, i in 0i64..7) {
        let x = -ExactScalar::q();
        prop_assert_eq!(gauss_binom(n, i, &x).unwrap(), gauss_binom(n, n - i, &x).unwrap());
        if n >= 1 {
            let pascal = gauss_binom(n - 1, i - 1, &x).unwrap() + x.pow(i.max(0) as u32) * gauss_binom(n - 1, i, &x).unwrap();
            prop_assert_eq!(gauss_binom(n, i, &x).unwrap(), pascal);
        }
    }

    #[test]
    fn render_round_trips(x in element(3, -3, 3)) {
        prop_assert_eq!(parse_expr_rank(&render(&x), Some(3)).unwrap(), x.clone());
        if !x.is_zero() {
            prop_assert_eq!(parse_expr(&render(&x)).unwrap(), x);
        }
    }

    #[test]
    fn straightening_is_linear_and_idempotent(x in element(3, -3, 3), y in element(3, -3, 3), c in q_scalar(), k in kind()) {
        let sx = straighten(&x, k);
        prop_assert_eq!(straighten(&sx, k), sx.clone());
        let lhs = straighten(&x.add(&y.scale(&c)).unwrap(), k);
        let rhs = sx.add(&straighten(&y, k).scale(&c)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn orders_agree(x in element(4, -4, 4), k in kind(), seed in any::<u64>()) {
        let want = straighten(&x, k);
        prop_assert_eq!(normalize_with(&x, k, Order::Rightmost), want.clone());
        prop_assert_eq!(normalize_with(&x, k, Order::Random(seed)), want);
    }

    #[test]
    fn relations_are_annihilated(
        a in -3i32..3,
        gap in 0i32..4,
        left in prop::collection::vec(-3i32..=3, 0..3),
        right in prop::collection::vec(-3i32..=3, 0..2),
        k in kind(),
    ) {
        let spec = if gap == 0 { RelSpec::Adjacent { a } } else { RelSpec::Pair { a, b: a + gap + 1 } };
        let rel = relation_element(&spec, &left, &right, false).unwrap();
        prop_assert!(straighten(&rel, k).is_zero());
    }

    #[test]
    fn boundary_relations_are_annihilated(m in 1i32..4, left in prop::collection::vec(-2i32..=3, 0..3)) {
        let flat = relation_element(&RelSpec::Flat { m }, &left, &[], false).unwrap();
        prop_assert!(straighten(&flat, StrKind::Flat).is_zero());
        let phi = relation_element(&RelSpec::Phi { m }, &left, &[], false).unwrap();
        prop_assert!(straighten(&phi, StrKind::Phi).is_zero());
    }

    #[test]
    fn star_and_translation(x in element(2, -2, 2), y in element(1, -2, 2), z in element(1, -2, 2), e in prop::collection::vec(-2i32..=2, 2), f in prop::collection::vec(-2i32..=2, 2)) {
        prop_assert_eq!(x.star(&y).star(&z), x.star(&y.star(&z)));
        let sum: Vec<i32> = e.iter().zip(&f).map(|(a, b)| a + b).collect();
        prop_assert_eq!(x.translate(&e).unwrap().translate(&f).unwrap(), x.translate(&sum).unwrap());
        // translating the left factor commutes with appending the right one
        let ey: Vec<i32> = e.iter().copied().chain([0]).collect();
        prop_assert_eq!(x.translate(&e).unwrap().star(&y), x.star(&y).translate(&ey).unwrap());
    }
}
