//! Counting quantities over sublattices: `d_e(f)`, the weighted count that
//! defines `φ_e(f)`, and the GL Hecke action `T_i`.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicUsize, Ordering};

use num_bigint::BigInt;
use num_traits::Zero;

use super::lattice::{lattice_of_type, sublattice_matrices};
use super::local::LocalRing;
use super::matrix;
use crate::error::{Error, Result};
use crate::scalar::c_poly;
use crate::typ::TypeVector;

pub const DEFAULT_CAP: usize = 2_000_000;

static CAP: AtomicUsize = AtomicUsize::new(DEFAULT_CAP);

/// Largest sublattice census the counting functions will enumerate.
pub fn cap() -> usize {
    CAP.load(Ordering::Relaxed)
}

pub fn set_cap(n: usize) {
    CAP.store(n, Ordering::Relaxed);
}

/// What the oracle records about one sublattice `L ⊆ Λ_f`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubInfo {
    pub typ: TypeVector,
    pub colength: u32,
    /// `dim Λ/(ϖΛ + L)` over the residue field.
    pub cokernel_dim: usize,
    /// Nonzero exponents of `Λ/L ≅ ⊕ O/ϖ^{s_j}`, decreasing.
    pub shape: Vec<u32>,
}

/// Precision that keeps every sublattice type of colength `<= n_max` exact.
pub fn precision_for(f: &TypeVector, n_max: u32) -> u32 {
    let lo = f.0.iter().copied().min().unwrap_or(0).min(0);
    let hi = f.0.iter().copied().max().unwrap_or(0);
    (hi - lo) as u32 + 2 * n_max + 4
}

/// All sublattices of `Λ_f` of colength `n` with their data.
pub fn census(p: i64, f: &TypeVector, n: u32, extra_precision: u32, cap: usize) -> Result<Vec<SubInfo>> {
    let ring = LocalRing::new(p, precision_for(f, n) + extra_precision)?;
    let lat = lattice_of_type(ring, f, None)?;
    let r = f.rank();
    let mut out = Vec::new();
    for c in sublattice_matrices(&ring, r, n, cap)? {
        let typ = lat.sublattice(&c)?.typ()?;
        let mut shape: Vec<u32> = matrix::elementary_valuations(&ring, &c)?.into_iter().filter(|&x| x > 0).collect();
        shape.sort_unstable_by(|a, b| b.cmp(a));
        out.push(SubInfo { typ, colength: n, cokernel_dim: r - matrix::rank_mod_p(&ring, &c), shape });
    }
    Ok(out)
}

fn colength(e: &TypeVector, f: &TypeVector) -> Option<u32> {
    let d = e.sum() - f.sum();
    (d >= 0 && d % 2 == 0).then_some((d / 2) as u32)
}

/// `d_e(f) = #{L ⊆ Λ_f : typ L = e}`.
pub fn count_d(e: &TypeVector, f: &TypeVector, p: i64) -> Result<BigInt> {
    check_ranks(e, f)?;
    let Some(n) = colength(e, f) else { return Ok(BigInt::zero()) };
    Ok(BigInt::from(census(p, f, n, 0, cap())?.iter().filter(|s| &s.typ == e).count()))
}

/// `Σ_{L ⊆ Λ_f, typ L = e} c(dim Λ_f/(ϖΛ_f + L))` at `q = p`.
pub fn count_phi(e: &TypeVector, f: &TypeVector, p: i64) -> Result<BigInt> {
    check_ranks(e, f)?;
    let Some(n) = colength(e, f) else { return Ok(BigInt::zero()) };
    weighted(&census(p, f, n, 0, cap())?, e, p)
}

fn weighted(infos: &[SubInfo], e: &TypeVector, p: i64) -> Result<BigInt> {
    let mut total = BigInt::zero();
    for s in infos.iter().filter(|s| &s.typ == e) {
        total += c_poly(s.cokernel_dim as u32).eval_q_int(p)?;
    }
    Ok(total)
}

fn check_ranks(e: &TypeVector, f: &TypeVector) -> Result<()> {
    if e.rank() != f.rank() {
        return Err(Error::RankMismatch { expected: f.rank(), got: e.rank() });
    }
    Ok(())
}

/// `d_e(f)` and `φ_e(f)` for every `e` reachable from `f` within colength
/// `n_max`, from one census per colength.
pub fn count_table(f: &TypeVector, n_max: u32, p: i64, extra_precision: u32) -> Result<BTreeMap<TypeVector, (BigInt, BigInt)>> {
    let mut out: BTreeMap<TypeVector, (BigInt, BigInt)> = BTreeMap::new();
    for n in 0..=n_max {
        for s in census(p, f, n, extra_precision, cap())? {
            let w = c_poly(s.cokernel_dim as u32).eval_q_int(p)?;
            let slot = out.entry(s.typ).or_insert_with(|| (BigInt::zero(), BigInt::zero()));
            slot.0 += 1;
            slot.1 += w;
        }
    }
    Ok(out)
}

/// `(T_i g)(b) = Σ_{L ⊆ Λ_b, Λ_b/L ≅ (O/ϖ)^i} g(typ L)` for each `b` in
/// `targets`. `g` is given on `domain`; reaching a type outside the domain
/// is an error.
pub fn hecke_action_gl(
    i: usize,
    g: &BTreeMap<TypeVector, BigInt>,
    domain: &[TypeVector],
    targets: &[TypeVector],
    p: i64,
) -> Result<BTreeMap<TypeVector, BigInt>> {
    let mut out = BTreeMap::new();
    for b in targets {
        let mut total = BigInt::zero();
        for s in census(p, b, i as u32, 0, cap())? {
            if s.shape != vec![1; i] {
                continue;
            }
            if !domain.contains(&s.typ) {
                return Err(Error::WindowTooSmall(format!("T_{i} from {b} reaches {}", s.typ)));
            }
            if let Some(v) = g.get(&s.typ) {
                total += v;
            }
        }
        if !total.is_zero() {
            out.insert(b.clone(), total);
        }
    }
    Ok(out)
}

/// `#{L ⊆ Λ_b : Λ_b/L ≅ (O/ϖ)^i, typ L = a}` for all `a`.
pub fn hecke_matrix_row(i: usize, b: &TypeVector, p: i64) -> Result<BTreeMap<TypeVector, BigInt>> {
    let mut out: BTreeMap<TypeVector, BigInt> = BTreeMap::new();
    for s in census(p, b, i as u32, 0, cap())? {
        if s.shape == vec![1; i] {
            *out.entry(s.typ).or_insert_with(BigInt::zero) += 1;
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tv(v: &[i32]) -> TypeVector {
        TypeVector::from(v)
    }

    #[test]
    fn phi_counts() {
        assert_eq!(count_phi(&tv(&[2, 1]), &tv(&[2, 1]), 3).unwrap(), BigInt::from(1));
        assert_eq!(count_phi(&tv(&[1, 1]), &tv(&[0, 0]), 3).unwrap(), BigInt::from(-32));
        assert_eq!(count_phi(&tv(&[1, 0]), &tv(&[0, 0]), 3).unwrap(), BigInt::from(0));
        assert_eq!(count_phi(&tv(&[2]), &tv(&[0]), 3).unwrap(), BigInt::from(-8));
    }

    #[test]
    fn d_counts() {
        assert!(count_d(&tv(&[1, 1]), &tv(&[1, 1]), 3).unwrap() >= BigInt::from(1));
        assert_eq!(count_d(&tv(&[1, 0]), &tv(&[0, 0]), 3).unwrap(), BigInt::from(0));
        // every index-ϖ sublattice of a self-dual plane has type (2,0) or (1,1)
        let t = count_table(&tv(&[0, 0]), 1, 3, 0).unwrap();
        let total: BigInt = t.iter().filter(|(e, _)| e.sum() == 2).map(|(_, (d, _))| d.clone()).sum();
        assert_eq!(total, BigInt::from(10));
    }

    #[test]
    fn hecke_identity_and_constant() {
        let dom = vec![tv(&[0, 0]), tv(&[2, 0]), tv(&[1, 1])];
        let ones: BTreeMap<_, _> = dom.iter().map(|e| (e.clone(), BigInt::from(1))).collect();
        let t1 = hecke_action_gl(1, &ones, &dom, &[tv(&[0, 0])], 3).unwrap();
        assert_eq!(t1[&tv(&[0, 0])], BigInt::from(10));
        let t0 = hecke_action_gl(0, &ones, &dom, &dom, 3).unwrap();
        assert_eq!(t0, ones);
        assert!(matches!(
            hecke_action_gl(1, &ones, &dom[..1], &[tv(&[0, 0])], 3),
            Err(Error::WindowTooSmall(_))
        ));
    }
}
