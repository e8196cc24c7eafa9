use num_bigint::BigInt;
use proptest::prelude::*;

use sphkernel::oracle::count::{census, count_phi, count_table, hecke_matrix_row};
use sphkernel::oracle::lattice::lattice_of_type;
use sphkernel::oracle::{matrix, HermitianLattice, LocalRing};
use sphkernel::typ::{natural_types, TypeVector};
use sphkernel::{gauss_binom, ExactScalar};

#[test]
fn counts_do_not_depend_on_precision() {
    for f in natural_types(2, -1, 2) {
        let a = count_table(&f, 2, 3, 0).unwrap();
        let b = count_table(&f, 2, 3, 2).unwrap();
        assert_eq!(a, b, "f = {f}");
    }
}

#[test]
fn hecke_rows_count_subspaces() {
    // sublattices with Λ/L ≅ (O/ϖ)^i are the codimension i subspaces of Λ/ϖΛ
    let q2 = ExactScalar::q_pow(2);
    for r in 1..=3usize {
        for i in 0..=r {
            let want = gauss_binom(r as i64, i as i64, &q2).unwrap().eval_q_int(3).unwrap();
            let b = TypeVector::zeros(r);
            let got: BigInt = hecke_matrix_row(i, &b, 3).unwrap().values().sum();
            assert_eq!(got, want, "r={r} i={i}");
        }
    }
}

#[test]
fn phi_is_one_on_the_diagonal() {
    for e in natural_types(2, -1, 2) {
        assert_eq!(count_phi(&e, &e, 3).unwrap(), BigInt::from(1), "e = {e}");
    }
}

#[test]
fn types_of_sublattices_dominate() {
    // L ⊆ Λ means L^∨ ⊇ Λ^∨, so every entry of typ L is >= the matching entry of typ Λ
    let f = TypeVector(vec![1, -1]);
    for n in 0..=2 {
        for s in census(3, &f, n, 0, 100_000).unwrap() {
            assert_eq!(s.typ.sum(), f.sum() + 2 * n as i64);
            assert!(s.typ.0.iter().zip(&f.0).all(|(a, b)| a >= b), "{} from {f}", s.typ);
        }
    }
}

fn small_type() -> impl Strategy<Value = TypeVector> {
    prop::collection::vec(-2i32..=3, 1..=3).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        TypeVector(v)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dual_reverses_type(f in small_type(), p in prop_oneof![Just(3i64), Just(5)]) {
        let ring = LocalRing::new(p, 14).unwrap();
        let lat = lattice_of_type(ring, &f, None).unwrap();
        prop_assert_eq!(lat.typ().unwrap(), f.clone());
        let d = lat.dual().unwrap();
        let mut rev: Vec<i32> = f.0.iter().map(|x| -x).collect();
        rev.sort_unstable_by(|a, b| b.cmp(a));
        prop_assert_eq!(d.typ().unwrap(), TypeVector(rev));
        prop_assert!(d.dual().unwrap().same_as(&lat).unwrap());
        // integral lattices sit inside their duals
        prop_assert_eq!(d.contains(&lat).unwrap(), f.0.iter().all(|&x| x >= 0));
    }

    #[test]
    fn type_is_basis_invariant(a in 0i64..9, b in 0i64..9, c in 0i64..9) {
        // a unimodular change of basis leaves the type alone
        let ring = LocalRing::new(3, 12).unwrap();
        let g = matrix::diag(&ring, &[2, 0, 1]);
        let lat = HermitianLattice::standard(ring, g.clone(), 0).unwrap();
        let mut u = matrix::identity(&ring, 3);
        u[0][1] = ring.int(a);
        u[0][2] = ring.elem(b, c);
        u[1][2] = ring.elem(c, a);
        let moved = HermitianLattice::new(ring, g, 0, u, 0).unwrap();
        prop_assert_eq!(moved.typ().unwrap(), lat.typ().unwrap());
        prop_assert!(moved.same_as(&lat).unwrap());
    }
}
