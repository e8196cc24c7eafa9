//! The distinguished functions `φ_e` and exact solving in their span.
//!
//! `φ♮_e(f)` is the coefficient of `δ_e` in `str♮(Δ_φ δ_f)`. Natural
//! straightening preserves `Σ`, so only the shifts `2ε` of `Δ_φ` with
//! `2Σε = Σe - Σf` contribute and the infinite series is never truncated
//! in a way that matters.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::straighten::{straighten, StrKind};
use crate::typ::{flat_types, Region, SphericalElement, TypeVector, ZeroCount};

/// Nonnegative integer vectors of length `r` with entry sum `n`.
pub fn compositions(r: usize, n: u32) -> Vec<Vec<u32>> {
    if r == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in compositions(r - 1, n - first) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// The part of `Δ_φ δ_f` with `Σε = d`.
fn phi_layer(f: &TypeVector, d: u32) -> SphericalElement {
    let r = f.rank();
    let one_minus = ExactScalar::one() - ExactScalar::q_pow(2);
    let mut out = SphericalElement::zero(r);
    for eps in compositions(r, d) {
        let nonzero = eps.iter().filter(|&&x| x > 0).count() as u32;
        let qexp: i32 = eps.iter().enumerate().map(|(j, &x)| 2 * (r - 1 - j) as i32 * x as i32).sum();
        let w = one_minus.pow(nonzero) * ExactScalar::q_pow(qexp);
        let g = TypeVector(f.0.iter().zip(&eps).map(|(a, b)| a + 2 * *b as i32).collect());
        out.add_term_unchecked(g, &w);
    }
    out
}

/// `φ♮_e(f)`.
pub fn phi_natural_value(e: &TypeVector, f: &TypeVector) -> Result<ExactScalar> {
    if e.rank() != f.rank() {
        return Err(Error::RankMismatch { expected: e.rank(), got: f.rank() });
    }
    if !e.is_natural() {
        return Err(Error::RegionViolation(e.to_string()));
    }
    let gap = e.sum() - f.sum();
    if gap < 0 || gap % 2 != 0 {
        return Ok(ExactScalar::zero());
    }
    Ok(straighten(&phi_layer(f, (gap / 2) as u32), StrKind::Natural).coeff(e))
}

/// `φ_e` evaluated on a finite window.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PhiFunctional {
    pub e: TypeVector,
    pub values: BTreeMap<TypeVector, ExactScalar>,
}

impl PhiFunctional {
    pub fn get(&self, f: &TypeVector) -> ExactScalar {
        self.values.get(f).cloned().unwrap_or_default()
    }

    pub fn to_element(&self) -> SphericalElement {
        let mut out = SphericalElement::zero(self.e.rank());
        for (f, c) in &self.values {
            out.add_term_unchecked(f.clone(), c);
        }
        out
    }
}

pub fn phi_natural(e: &TypeVector, window: &[TypeVector]) -> Result<PhiFunctional> {
    let mut values = BTreeMap::new();
    for f in window {
        let v = phi_natural_value(e, f)?;
        if !v.is_zero() {
            values.insert(f.clone(), v);
        }
    }
    Ok(PhiFunctional { e: e.clone(), values })
}

/// `φ♭_e`: the restriction of `φ♮_e` to flat types. Its support is the
/// finite set of flat `f` with `Σf <= Σe` of the same parity.
pub fn phi_flat(e: &TypeVector) -> Result<PhiFunctional> {
    if !e.is_flat() {
        return Err(Error::RegionViolation(e.to_string()));
    }
    let s = e.sum();
    let window: Vec<TypeVector> = flat_types(e.rank(), s as i32)
        .into_iter()
        .filter(|f| f.sum() <= s && (s - f.sum()) % 2 == 0)
        .collect();
    phi_natural(e, &window)
}

/// Every `φ♭_e` of a fixed rank with `Σe <= max_sum`, computed in one pass
/// over the arguments `f`.
#[derive(Clone, Debug)]
pub struct PhiTable {
    rank: usize,
    max_sum: i64,
    phis: BTreeMap<TypeVector, SphericalElement>,
}

impl PhiTable {
    pub fn build(rank: usize, max_sum: i64) -> PhiTable {
        let mut phis: BTreeMap<TypeVector, SphericalElement> = BTreeMap::new();
        let fs: Vec<TypeVector> =
            flat_types(rank, max_sum.max(0) as i32).into_iter().filter(|f| f.sum() <= max_sum).collect();
        for f in &fs {
            let mut d = 0u32;
            while f.sum() + 2 * d as i64 <= max_sum {
                let img = straighten(&phi_layer(f, d), StrKind::Natural);
                for (e, c) in img.iter() {
                    phis.entry(e.clone()).or_insert_with(|| SphericalElement::zero(rank)).add_term_unchecked(f.clone(), c);
                }
                d += 1;
            }
        }
        PhiTable { rank, max_sum, phis }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn max_sum(&self) -> i64 {
        self.max_sum
    }

    pub fn phi(&self, e: &TypeVector) -> Result<SphericalElement> {
        if e.sum() > self.max_sum {
            return Err(Error::WindowTooSmall(format!("φ_{e} needs Σ up to {}, table holds {}", e.sum(), self.max_sum)));
        }
        Ok(self.phis.get(e).cloned().unwrap_or_else(|| SphericalElement::zero(self.rank)))
    }
}

/// Coordinates of `x` in the `φ♭` basis, by elimination from the top `Σ`
/// level down. Every index must satisfy `constraint` on its number of zeros.
pub fn phi_span_solve(
    x: &SphericalElement,
    constraint: ZeroCount,
    table: &PhiTable,
) -> Result<BTreeMap<TypeVector, ExactScalar>> {
    if x.rank() != table.rank() {
        return Err(Error::RankMismatch { expected: table.rank(), got: x.rank() });
    }
    x.check_region(Region::Flat)?;
    let mut rest = x.clone();
    let mut coords = BTreeMap::new();
    while let Some(e) = rest.support().max_by_key(|e| (e.sum(), (*e).clone())).cloned() {
        let c = rest.coeff(&e);
        let phi = table.phi(&e)?;
        if !phi.coeff(&e).is_one() {
            return Err(Error::NotInSpan(format!("φ_{e}({e}) = {} is not 1; basis is not unitriangular", phi.coeff(&e))));
        }
        if !constraint.admits(e.lambda(0)) {
            return Err(Error::NotInSpan(format!("needs φ_{e} with coefficient {c}, outside the allowed indices")));
        }
        rest.add_scaled(&phi, &-c.clone())?;
        if !rest.coeff(&e).is_zero() {
            return Err(Error::NotInSpan(format!("residue left at {e}")));
        }
        coords.insert(e, c);
    }
    Ok(coords)
}

/// `Σ_e c_e φ♭_e`.
pub fn combine(coords: &BTreeMap<TypeVector, ExactScalar>, table: &PhiTable) -> Result<SphericalElement> {
    let mut out = SphericalElement::zero(table.rank());
    for (e, c) in coords {
        out.add_scaled(&table.phi(e)?, c)?;
    }
    Ok(out)
}

/// The closed form `φ♭_{(1^a,0^b)} = Σ_i ((-q)_{b+2i}/(-q)_b) δ(1^{a-2i},0^{b+2i})`.
pub fn phi_ones_closed_form(a: usize, b: usize) -> Result<SphericalElement> {
    let mq = -ExactScalar::q();
    let den = crate::scalar::pochhammer(&mq, b as u32);
    let mut out = SphericalElement::zero(a + b);
    let mut i = 0;
    while 2 * i <= a {
        let num = crate::scalar::pochhammer(&mq, (b + 2 * i) as u32);
        out.add_term_unchecked(TypeVector::ones_zeros(a - 2 * i, b + 2 * i), &num.exact_div(&den)?);
        i += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn tv(v: &[i32]) -> TypeVector {
        TypeVector::from(v)
    }

    #[test]
    fn natural_values() {
        assert!(phi_natural_value(&tv(&[2, 1, -1]), &tv(&[2, 1, -1])).unwrap().is_one());
        let want = (ExactScalar::one() + ExactScalar::q()) * (ExactScalar::one() - ExactScalar::q_pow(2));
        assert_eq!(phi_natural_value(&tv(&[1, 1]), &tv(&[0, 0])).unwrap(), want);
        assert!(phi_natural_value(&tv(&[1, 0]), &tv(&[0, 0])).unwrap().is_zero());
    }

    #[test]
    fn flat_values() {
        assert_eq!(phi_flat(&tv(&[0, 0, 0])).unwrap().to_element(), SphericalElement::delta_of(&[0, 0, 0]));
        assert_eq!(phi_flat(&tv(&[2])).unwrap().to_element(), parse_expr("[2] + (1-q^2)*[0]").unwrap());
        for (a, b) in [(2, 1), (3, 0), (2, 2), (4, 0), (1, 1)] {
            let e = TypeVector::ones_zeros(a, b);
            assert_eq!(phi_flat(&e).unwrap().to_element(), phi_ones_closed_form(a, b).unwrap(), "a={a} b={b}");
        }
    }

    #[test]
    fn table_matches_direct() {
        let t = PhiTable::build(2, 4);
        for e in flat_types(2, 4).into_iter().filter(|e| e.sum() <= 4) {
            assert_eq!(t.phi(&e).unwrap(), phi_flat(&e).unwrap().to_element(), "{e}");
        }
        assert!(matches!(t.phi(&tv(&[5, 0])), Err(Error::WindowTooSmall(_))));
    }

    #[test]
    fn solve_examples() {
        let t = PhiTable::build(1, 4);
        let x = parse_expr("[2] - (q^2+q)*[0]").unwrap();
        let c = phi_span_solve(&x, ZeroCount::AtMost(1), &t).unwrap();
        assert_eq!(c.get(&tv(&[2])), Some(&ExactScalar::one()));
        assert_eq!(c.get(&tv(&[0])), Some(&-(ExactScalar::one() + ExactScalar::q())));
        assert_eq!(combine(&c, &t).unwrap(), x);

        let t2 = PhiTable::build(2, 2);
        let phi11 = t2.phi(&tv(&[1, 1])).unwrap();
        let c = phi_span_solve(&phi11, ZeroCount::Any, &t2).unwrap();
        assert_eq!(c.len(), 1);
        let c = phi_span_solve(&SphericalElement::delta_of(&[1, 0]), ZeroCount::AtMost(1), &t2).unwrap();
        assert_eq!(c.into_iter().collect::<Vec<_>>(), vec![(tv(&[1, 0]), ExactScalar::one())]);
        assert!(matches!(
            phi_span_solve(&SphericalElement::delta_of(&[0, 0]), ZeroCount::AtMost(1), &t2),
            Err(Error::NotInSpan(_))
        ));
    }
}
