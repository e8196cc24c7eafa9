use sphkernel::hecke::FlatHecke;
use sphkernel::phi::{combine, phi_span_solve, PhiTable};
use sphkernel::straighten::{straighten, StrKind};
use sphkernel::hecke::{build_delta, DeltaName, OpOptions};
use sphkernel::typ::{flat_types, SphericalElement, TypeVector, ZeroCount};
use sphkernel::{parse_expr, ExactScalar};

#[test]
fn t1_coordinates() {
    let h = FlatHecke::default();
    let t = PhiTable::build(1, 2);
    let x = h.t_r(&SphericalElement::delta_of(&[0])).unwrap();
    let c = phi_span_solve(&x, ZeroCount::AtMost(1), &t).unwrap();
    let want = parse_expr("[2] - (1+q)*[0]").unwrap();
    let got = SphericalElement::from_terms(1, c).unwrap();
    assert_eq!(got, want);
}

#[test]
fn t_r_in_span() {
    let h = FlatHecke::default();
    for r in 1..=4usize {
        let table = PhiTable::build(r, 2 * r as i64);
        let zero = SphericalElement::delta(TypeVector::zeros(r));
        for (name, x) in [("T", h.t_r(&zero).unwrap()), ("T'", h.t_r_prime(&zero).unwrap())] {
            let c = phi_span_solve(&x, ZeroCount::AtMost(1), &table)
                .unwrap_or_else(|err| panic!("{name}_{r}: {err}"));
            assert_eq!(combine(&c, &table).unwrap(), x);
        }
    }
}

#[test]
fn closure_under_half_flat() {
    let h = FlatHecke::default();
    for r in 1..=3usize {
        let table = PhiTable::build(r, 3 * r as i64);
        for e in flat_types(r, 2).into_iter().filter(|e| e.lambda(0) <= 1) {
            let phi = table.phi(&e).unwrap();
            for i in 0..=r {
                let x = h.s_half(i, &phi).unwrap();
                phi_span_solve(&x, ZeroCount::AtMost(1), &table)
                    .unwrap_or_else(|err| panic!("r={r} e={e} i={i}: {err}"));
            }
        }
    }
}

#[test]
fn flat_phi_expansion() {
    let h = FlatHecke::default();
    for r in 2..=3usize {
        let table = PhiTable::build(r, 3 * r as i64);
        for e in flat_types(r, 2) {
            let phi = table.phi(&e).unwrap();
            for i in 0..=r {
                let lhs = h.s_half(i, &phi).unwrap();
                let op = build_delta(&DeltaName::HalfFlat { i }, r, None, OpOptions::default()).unwrap();
                let mut rhs = SphericalElement::zero(r);
                for g in flat_types(r, (e.sum() + r as i64) as i32).into_iter().filter(|g| g.sum() <= e.sum() + r as i64) {
                    let c = straighten(&op.apply(&SphericalElement::delta(g.clone())).unwrap(), StrKind::Phi).coeff(&e);
                    if !c.is_zero() {
                        rhs.add_scaled(&table.phi(&g).unwrap(), &c).unwrap();
                    }
                }
                assert_eq!(lhs, rhs, "r={r} e={e} i={i}");
            }
        }
    }
    let _ = ExactScalar::one();
}
