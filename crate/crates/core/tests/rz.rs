use std::collections::HashMap;

use num_bigint::BigInt;

use sphkernel::rz::{change_generators, Building, Correspondence};
use sphkernel::typ::TypeVector;

#[test]
fn neighbour_counts() {
    // a self-dual vertex of the rank 2 split space meets q+1 maximal vertices,
    // and each of those meets q+1 self-dual ones
    let mut b = Building::new(3, 1).unwrap();
    let base = b.space.base();
    let bullets = b.bullets_of(&base).unwrap();
    assert_eq!(bullets.len(), 4);
    for m in &bullets {
        let circs = b.circs_of(m).unwrap();
        assert_eq!(circs.len(), 4);
        assert!(circs.contains(&base));
    }
}

#[test]
fn i_circ_is_the_composite() {
    let mut b = Building::new(3, 1).unwrap();
    let base = b.space.base();
    let circs = b.sample_circs(13, 7).unwrap();
    let g: HashMap<_, _> = circs.iter().enumerate().map(|(k, c)| (c.clone(), BigInt::from(k as i64 + 1))).collect();
    let mut mid = HashMap::new();
    for m in b.bullets_of(&base).unwrap() {
        let v = b.apply(Correspondence::BulletCirc, &g, &m).unwrap();
        mid.insert(m, v);
    }
    let two_steps = b.apply(Correspondence::CircBullet, &mid, &base).unwrap();
    assert_eq!(b.apply(Correspondence::ICirc, &g, &base).unwrap(), two_steps);
}

#[test]
fn identity_in_rank_one() {
    let mut b = Building::new(3, 1).unwrap();
    let circs = b.sample_circs(13, 1).unwrap();
    assert_eq!(circs.len(), 13);
    let mut seen_nonzero = false;
    for t in 0..=3 {
        for off in 0..=1 {
            let xs = b.space.diagonal_generators(&TypeVector(vec![t]), &[off]).unwrap();
            for c in &circs {
                let v = b.nabla_values(&xs, c).unwrap();
                assert!(v.totals.iter().all(|x| x == &v.rhs), "t={t} off={off}: {v:?}");
                seen_nonzero |= v.rhs != BigInt::from(0);
            }
        }
    }
    assert!(seen_nonzero);
}

#[test]
fn identity_is_basis_free() {
    let mut b = Building::new(3, 2).unwrap();
    let base = b.space.base();
    let xs = b.space.diagonal_generators(&TypeVector(vec![2, 1]), &[1, 0]).unwrap();
    let want = b.nabla_values(&xs, &base).unwrap();
    for seed in 0..3 {
        let ys = change_generators(&b.space.ring, &xs, seed);
        assert_eq!(b.nabla_values(&ys, &base).unwrap(), want);
    }
    assert!(want.totals.iter().all(|x| x == &want.rhs));
}
