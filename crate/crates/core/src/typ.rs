//! Type vectors and the free module they span.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TypeVector(pub Vec<i32>);

impl TypeVector {
    pub fn new(v: Vec<i32>) -> Self {
        TypeVector(v)
    }

    pub fn zeros(r: usize) -> Self {
        TypeVector(vec![0; r])
    }

    /// `(1^a, 0^b)`.
    pub fn ones_zeros(a: usize, b: usize) -> Self {
        let mut v = vec![1; a];
        v.extend(std::iter::repeat(0).take(b));
        TypeVector(v)
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[i32] {
        &self.0
    }

    pub fn sum(&self) -> i64 {
        self.0.iter().map(|&x| x as i64).sum()
    }

    /// `λ_i(e) = #{j : e_j = i}`.
    pub fn lambda(&self, i: i32) -> usize {
        self.0.iter().filter(|&&x| x == i).count()
    }

    pub fn lambda_nonzero(&self) -> usize {
        self.0.iter().filter(|&&x| x != 0).count()
    }

    /// `sum_{i<j} max(0, e_i - e_j)`; on 0/1 vectors this is the inversion count.
    pub fn inv_tilde(&self) -> i64 {
        let e = &self.0;
        let mut total = 0i64;
        for i in 0..e.len() {
            for j in i + 1..e.len() {
                total += (e[i] - e[j]).max(0) as i64;
            }
        }
        total
    }

    pub fn inv(&self) -> i64 {
        self.inv_tilde()
    }

    pub fn concat(&self, other: &TypeVector) -> TypeVector {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        TypeVector(v)
    }

    pub fn shifted(&self, eps: &[i32]) -> TypeVector {
        TypeVector(self.0.iter().zip(eps).map(|(a, b)| a + b).collect())
    }

    pub fn is_natural(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    pub fn is_flat(&self) -> bool {
        self.is_natural() && self.0.last().map_or(true, |&x| x >= 0)
    }

    pub fn max_abs(&self) -> i32 {
        self.0.iter().map(|x| x.abs()).max().unwrap_or(0)
    }
}

impl From<Vec<i32>> for TypeVector {
    fn from(v: Vec<i32>) -> Self {
        TypeVector(v)
    }
}

impl From<&[i32]> for TypeVector {
    fn from(v: &[i32]) -> Self {
        TypeVector(v.to_vec())
    }
}

impl fmt::Display for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for TypeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ZeroCount {
    Exactly(usize),
    AtMost(usize),
    AtLeast(usize),
    Any,
}

impl ZeroCount {
    pub fn admits(&self, zeros: usize) -> bool {
        match *self {
            ZeroCount::Exactly(k) => zeros == k,
            ZeroCount::AtMost(k) => zeros <= k,
            ZeroCount::AtLeast(k) => zeros >= k,
            ZeroCount::Any => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Region {
    /// Weakly decreasing sequences.
    Natural,
    /// Weakly decreasing and nonnegative.
    Flat,
    /// Flat, every nonzero entry in `[1, max]`, and a condition on the number
    /// of zeros. `max = None` means unbounded.
    Window { max: Option<i32>, zeros: ZeroCount },
}

pub fn region_check(e: &TypeVector, region: Region) -> bool {
    match region {
        Region::Natural => e.is_natural(),
        Region::Flat => e.is_flat(),
        Region::Window { max, zeros } => {
            e.is_flat()
                && max.map_or(true, |n| e.0.first().map_or(true, |&x| x <= n))
                && zeros.admits(e.lambda(0))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Gl,
    Fj,
}

/// Whether `e` is the type of a lattice in the discriminant class `delta`.
pub fn typ_image_check(e: &TypeVector, delta: u8, side: Side) -> bool {
    let parity_ok = e.sum().rem_euclid(2) == delta as i64 % 2;
    match side {
        Side::Gl => parity_ok,
        Side::Fj => parity_ok && e.0.last().map_or(true, |&x| x >= 0),
    }
}

/// A finitely supported function on `Z^rank` with exact coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SphericalElement {
    rank: usize,
    terms: BTreeMap<TypeVector, ExactScalar>,
}

impl SphericalElement {
    pub fn zero(rank: usize) -> Self {
        SphericalElement { rank, terms: BTreeMap::new() }
    }

    pub fn delta(e: TypeVector) -> Self {
        let mut out = Self::zero(e.rank());
        out.terms.insert(e, ExactScalar::one());
        out
    }

    pub fn delta_of(v: &[i32]) -> Self {
        Self::delta(TypeVector::from(v))
    }

    pub fn from_terms(rank: usize, terms: impl IntoIterator<Item = (TypeVector, ExactScalar)>) -> Result<Self> {
        let mut out = Self::zero(rank);
        for (k, c) in terms {
            out.add_term(k, &c)?;
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&TypeVector, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &TypeVector> {
        self.terms.keys()
    }

    pub fn coeff(&self, e: &TypeVector) -> ExactScalar {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, e: TypeVector, c: &ExactScalar) -> Result<()> {
        if e.rank() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: e.rank() });
        }
        self.add_term_unchecked(e, c);
        Ok(())
    }

    pub(crate) fn add_term_unchecked(&mut self, e: TypeVector, c: &ExactScalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`.
    pub fn add_scaled(&mut self, other: &SphericalElement, c: &ExactScalar) -> Result<()> {
        self.check_rank(other)?;
        if c.is_zero() {
            return Ok(());
        }
        for (k, v) in &other.terms {
            self.add_term_unchecked(k.clone(), &(v * c));
        }
        Ok(())
    }

    pub fn scale(&self, c: &ExactScalar) -> SphericalElement {
        let mut out = Self::zero(self.rank);
        if c.is_zero() {
            return out;
        }
        for (k, v) in &self.terms {
            out.terms.insert(k.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &SphericalElement) -> Result<SphericalElement> {
        let mut out = self.clone();
        out.add_scaled(other, &ExactScalar::one())?;
        Ok(out)
    }

    pub fn sub(&self, other: &SphericalElement) -> Result<SphericalElement> {
        let mut out = self.clone();
        out.add_scaled(other, &-ExactScalar::one())?;
        Ok(out)
    }

    fn check_rank(&self, other: &SphericalElement) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: other.rank });
        }
        Ok(())
    }

    /// The concatenation product.
    pub fn star(&self, other: &SphericalElement) -> SphericalElement {
        let mut out = Self::zero(self.rank + other.rank);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                out.add_term_unchecked(a.concat(b), &(ca * cb));
            }
        }
        out
    }

    /// The translation `t(eps)`.
    pub fn translate(&self, eps: &[i32]) -> Result<SphericalElement> {
        if eps.len() != self.rank {
            return Err(Error::RankMismatch { expected: self.rank, got: eps.len() });
        }
        let terms = self.terms.iter().map(|(k, v)| (k.shifted(eps), v.clone())).collect();
        Ok(SphericalElement { rank: self.rank, terms })
    }

    /// The delta-orthonormal pairing; both sides must lie in `region`.
    pub fn pair(&self, other: &SphericalElement, region: Region) -> Result<ExactScalar> {
        self.check_rank(other)?;
        self.check_region(region)?;
        other.check_region(region)?;
        let (small, big) = if self.len() <= other.len() { (self, other) } else { (other, self) };
        let mut acc = ExactScalar::zero();
        for (k, v) in &small.terms {
            if let Some(w) = big.terms.get(k) {
                acc += v * w;
            }
        }
        Ok(acc)
    }

    pub fn check_region(&self, region: Region) -> Result<()> {
        match self.terms.keys().find(|k| !region_check(k, region)) {
            Some(k) => Err(Error::RegionViolation(k.to_string())),
            None => Ok(()),
        }
    }

    /// Keeps only the terms whose key satisfies `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&TypeVector) -> bool) -> SphericalElement {
        let terms = self
            .terms
            .iter()
            .filter(|(k, _)| keep(k))
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        SphericalElement { rank: self.rank, terms }
    }

    pub fn into_terms(self) -> BTreeMap<TypeVector, ExactScalar> {
        self.terms
    }
}

impl fmt::Debug for SphericalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::expr::render(self))
    }
}

impl fmt::Display for SphericalElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::expr::render(self))
    }
}

/// All flat type vectors of rank `r` with entries in `[0, max]`, in
/// lexicographic order.
pub fn flat_types(r: usize, max: i32) -> Vec<TypeVector> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(r: usize, hi: i32, lo: i32, cur: &mut Vec<i32>, out: &mut Vec<TypeVector>) {
        if cur.len() == r {
            out.push(TypeVector(cur.clone()));
            return;
        }
        for x in lo..=hi {
            cur.push(x);
            rec(r, x, lo, cur, out);
            cur.pop();
        }
    }
    rec(r, max, 0, &mut cur, &mut out);
    out.sort();
    out
}

/// All natural type vectors of rank `r` with entries in `[lo, hi]`.
pub fn natural_types(r: usize, lo: i32, hi: i32) -> Vec<TypeVector> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(r);
    fn rec(r: usize, hi: i32, lo: i32, cur: &mut Vec<i32>, out: &mut Vec<TypeVector>) {
        if cur.len() == r {
            out.push(TypeVector(cur.clone()));
            return;
        }
        for x in lo..=hi {
            cur.push(x);
            rec(r, x, lo, cur, out);
            cur.pop();
        }
    }
    rec(r, hi, lo, &mut cur, &mut out);
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(v: &[i32]) -> SphericalElement {
        SphericalElement::delta_of(v)
    }

    #[test]
    fn star_examples() {
        assert_eq!(d(&[2]).star(&d(&[1, 0])), d(&[2, 1, 0]));
        let lhs = d(&[1]).sub(&d(&[0])).unwrap().star(&d(&[0]));
        assert_eq!(lhs, d(&[1, 0]).sub(&d(&[0, 0])).unwrap());
        let x = d(&[3, -1]).add(&d(&[0, 2]).scale(&ExactScalar::q())).unwrap();
        assert_eq!(d(&[]).star(&x), x);
    }

    #[test]
    fn translate_examples() {
        assert_eq!(d(&[0, 0]).translate(&[2, 0]).unwrap(), d(&[2, 0]));
        assert_eq!(d(&[1, 1]).translate(&[0, 0]).unwrap(), d(&[1, 1]));
        let a = d(&[1, 1]).translate(&[1, -2]).unwrap().translate(&[3, 0]).unwrap();
        assert_eq!(a, d(&[1, 1]).translate(&[4, -2]).unwrap());
        assert!(matches!(d(&[1]).translate(&[0, 0]), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn pair_examples() {
        let one = ExactScalar::one();
        assert_eq!(d(&[1, 0]).pair(&d(&[1, 0]), Region::Natural).unwrap(), one);
        assert!(d(&[1, 0]).pair(&d(&[2, 0]), Region::Natural).unwrap().is_zero());
        let x = d(&[2, 1]).scale(&ExactScalar::q()).add(&d(&[0, 0])).unwrap();
        assert_eq!(x.pair(&d(&[2, 1]), Region::Flat).unwrap(), ExactScalar::q());
        assert!(matches!(d(&[0, 1]).pair(&d(&[1, 0]), Region::Natural), Err(Error::RegionViolation(_))));
    }

    #[test]
    fn region_examples() {
        assert!(region_check(&TypeVector::from(vec![2, 1, 0]), Region::Flat));
        assert!(!region_check(&TypeVector::from(vec![0, 1]), Region::Natural));
        let w = Region::Window { max: None, zeros: ZeroCount::AtMost(1) };
        assert!(region_check(&TypeVector::from(vec![1, 1, 0]), w));
        assert!(!region_check(&TypeVector::from(vec![1, 0, 0]), w));
        let w3 = Region::Window { max: Some(2), zeros: ZeroCount::Exactly(0) };
        assert!(!region_check(&TypeVector::from(vec![3, 1]), w3));
    }

    #[test]
    fn image_examples() {
        assert!(typ_image_check(&TypeVector::from(vec![1, 1]), 0, Side::Gl));
        assert!(!typ_image_check(&TypeVector::from(vec![1, 0, 0]), 0, Side::Fj));
        assert!(typ_image_check(&TypeVector::zeros(4), 0, Side::Fj));
        assert!(!typ_image_check(&TypeVector::from(vec![2, -2]), 0, Side::Fj));
    }

    #[test]
    fn statistics() {
        let e = TypeVector::from(vec![2, -1, 0, 2]);
        assert_eq!(e.lambda(2), 2);
        assert_eq!(e.lambda_nonzero(), 3);
        assert_eq!(e.inv_tilde(), 3 + 2 + 0 + 0 + 0 + 0);
        assert_eq!(TypeVector::from(vec![1, 0, 1, 0]).inv(), 3);
    }

    #[test]
    fn enumerations() {
        assert_eq!(flat_types(2, 2).len(), 6);
        assert!(flat_types(3, 2).iter().all(|e| e.is_flat()));
        assert_eq!(natural_types(2, -1, 1).len(), 6);
    }
}
