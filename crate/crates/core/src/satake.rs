//! Symmetric polynomial identities for the Satake images of `T_r`, `T_r'`
//! and `S_r^+ S_r^-`.
//!
//! Products are expanded honestly in the monomial basis and then rewritten in
//! elementary symmetric functions by the leading-term algorithm, so each
//! check compares two independently produced expansions.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hecke::gamma_prime;
use crate::scalar::ExactScalar;

/// Polynomial in `r` variables; exponent vector -> coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, ExactScalar>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: ExactScalar) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, ExactScalar::one());
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, ExactScalar> {
        &self.terms
    }

    fn add_term(&mut self, e: Vec<u32>, c: ExactScalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(e.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &ExactScalar) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (e, d) in &self.terms {
            out.add_term(e.clone(), d * c);
        }
        out
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = MPoly::zero(self.nvars);
        for (a, c) in &self.terms {
            for (b, d) in &other.terms {
                let e = a.iter().zip(b).map(|(x, y)| x + y).collect();
                out.add_term(e, c * d);
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> MPoly {
        (0..n).fold(MPoly::constant(self.nvars, ExactScalar::one()), |acc, _| acc.mul(self))
    }

    /// Substitutes `x_i^2 -> value_i`; fails if some exponent is odd.
    pub fn substitute_squares(&self, value: &[MPoly]) -> Result<MPoly> {
        let mut out = MPoly::zero(value[0].nvars);
        for (e, c) in &self.terms {
            let mut t = MPoly::constant(out.nvars, c.clone());
            for (i, &k) in e.iter().enumerate() {
                if k % 2 != 0 {
                    return Err(Error::NotInSpan(format!("odd exponent {k} in variable {i}")));
                }
                t = t.mul(&value[i].pow(k / 2));
            }
            out = out.add(&t);
        }
        Ok(out)
    }
}

/// `e_k(x_1..x_r)`.
pub fn elementary(r: usize, k: usize) -> MPoly {
    let mut out = MPoly::zero(r);
    for mask in 0u32..(1 << r) {
        if mask.count_ones() as usize == k {
            let e = (0..r).map(|i| (mask >> i) & 1).collect();
            out.add_term(e, ExactScalar::one());
        }
    }
    out
}

/// A symmetric polynomial in elementary symmetric functions:
/// `(a_1..a_r) -> c` stands for `c * e_1^{a_1} ... e_r^{a_r}`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymmetricPoly {
    pub terms: BTreeMap<Vec<u32>, ExactScalar>,
}

impl SymmetricPoly {
    /// `c * e_k`; `k = 0` is the constant `c`.
    pub fn single(r: usize, k: usize, c: ExactScalar) -> Self {
        let mut e = vec![0; r];
        if k > 0 {
            e[k - 1] = 1;
        }
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        SymmetricPoly { terms }
    }

    pub fn add(&self, other: &SymmetricPoly) -> SymmetricPoly {
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let slot = terms.entry(e.clone()).or_default();
            *slot += c;
            if slot.is_zero() {
                terms.remove(e);
            }
        }
        SymmetricPoly { terms }
    }
}

/// Rewrites a symmetric polynomial in the elementary basis by repeatedly
/// removing the lexicographically leading monomial.
pub fn to_elementary(p: &MPoly) -> Result<SymmetricPoly> {
    let r = p.nvars;
    let es: Vec<MPoly> = (1..=r).map(|k| elementary(r, k)).collect();
    let mut rest = p.clone();
    let mut out = SymmetricPoly::default();
    while let Some((lead, c)) = rest.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
        if lead.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::NotInSpan(format!("polynomial is not symmetric (leading exponent {lead:?})")));
        }
        let a: Vec<u32> = (0..r).map(|i| lead[i] - lead.get(i + 1).copied().unwrap_or(0)).collect();
        let mut m = MPoly::constant(r, c.clone());
        for (k, &ak) in a.iter().enumerate() {
            m = m.mul(&es[k].pow(ak));
        }
        rest = rest.add(&m.scale(&-ExactScalar::one()));
        out = out.add(&SymmetricPoly { terms: BTreeMap::from([(a, c)]) });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SatakeWhich {
    Tr,
    TrPrime,
    SflatProduct,
}

/// `q + q^{-1}`.
fn c_const() -> ExactScalar {
    ExactScalar::q() + ExactScalar::q_pow(-1)
}

/// `q^{r^2} prod_i (μ_i - (q + q^{-1}))`, expanded.
pub fn sat_t_r_product(r: usize) -> MPoly {
    let c = MPoly::constant(r, c_const());
    let mut p = MPoly::constant(r, ExactScalar::q_pow((r * r) as i32));
    for i in 0..r {
        p = p.mul(&MPoly::var(r, i).add(&c.scale(&-ExactScalar::one())));
    }
    p
}

/// `q^{r^2-1} Σ_j prod_{i≠j} (μ_i - (q + q^{-1}))`, expanded.
pub fn sat_t_r_prime_product(r: usize) -> MPoly {
    let c = MPoly::constant(r, c_const());
    let mut total = MPoly::zero(r);
    for j in 0..r {
        let mut p = MPoly::constant(r, ExactScalar::q_pow((r * r) as i32 - 1));
        for i in (0..r).filter(|&i| i != j) {
            p = p.mul(&MPoly::var(r, i).add(&c.scale(&-ExactScalar::one())));
        }
        total = total.add(&p);
    }
    total
}

fn sat_s_flat(r: usize, j: usize) -> ExactScalar {
    ExactScalar::q_pow((r * r - (r - j) * (r - j)) as i32)
}

/// `Σ_i (-1)^i (q^2+1)^i q^{i^2-i} Sat(S♭_{r-i,r})`.
pub fn sat_t_r_combination(r: usize) -> SymmetricPoly {
    let q2p1 = ExactScalar::q_pow(2) + ExactScalar::one();
    (0..=r).fold(SymmetricPoly::default(), |acc, i| {
        let sign = if i % 2 == 0 { ExactScalar::one() } else { -ExactScalar::one() };
        let ii = i as i32;
        let c = sign * q2p1.pow(i as u32) * ExactScalar::q_pow(ii * ii - ii) * sat_s_flat(r, r - i);
        acc.add(&SymmetricPoly::single(r, r - i, c))
    })
}

/// `Σ_{i>=1} i (-1)^{i-1} (q^2+1)^{i-1} q^{i^2-i} Sat(S♭_{r-i,r})`.
pub fn sat_t_r_prime_combination(r: usize) -> SymmetricPoly {
    let q2p1 = ExactScalar::q_pow(2) + ExactScalar::one();
    (1..=r).fold(SymmetricPoly::default(), |acc, i| {
        let sign = if i % 2 == 1 { ExactScalar::one() } else { -ExactScalar::one() };
        let ii = i as i32;
        let c = sign
            * ExactScalar::from_int(i as i64)
            * q2p1.pow(i as u32 - 1)
            * ExactScalar::q_pow(ii * ii - ii)
            * sat_s_flat(r, r - i);
        acc.add(&SymmetricPoly::single(r, r - i, c))
    })
}

/// `Sat(S^+) Sat(S^-) = s^{2r^2} prod_i (ν_i + γ')(ν_i - γ')`, pushed to the
/// μ variables through `ν_i^2 = -μ_i - 2`.
pub fn sat_pm_product(r: usize) -> Result<MPoly> {
    let g = MPoly::constant(r, gamma_prime());
    let mut p = MPoly::constant(r, ExactScalar::s_pow((2 * r * r) as i32));
    for i in 0..r {
        let nu = MPoly::var(r, i);
        p = p.mul(&nu.add(&g)).mul(&nu.add(&g.scale(&-ExactScalar::one())));
    }
    let subs: Vec<MPoly> = (0..r)
        .map(|i| MPoly::var(r, i).scale(&-ExactScalar::one()).add(&MPoly::constant(r, ExactScalar::from_int(-2))))
        .collect();
    p.substitute_squares(&subs)
}

pub fn satake_identity_check(which: SatakeWhich, r: usize) -> Result<bool> {
    if r == 0 {
        return Err(Error::InvalidSpec("rank must be at least 1".into()));
    }
    Ok(match which {
        SatakeWhich::Tr => to_elementary(&sat_t_r_product(r))? == sat_t_r_combination(r),
        SatakeWhich::TrPrime => to_elementary(&sat_t_r_prime_product(r))? == sat_t_r_prime_combination(r),
        SatakeWhich::SflatProduct => {
            to_elementary(&sat_pm_product(r)?)? == to_elementary(&sat_t_r_product(r))?
                && to_elementary(&sat_pm_product(r)?)? == sat_t_r_combination(r)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_one_t() {
        let q = ExactScalar::q();
        let want = SymmetricPoly::single(1, 1, q.clone())
            .add(&SymmetricPoly::single(1, 0, -(ExactScalar::q_pow(2) + ExactScalar::one())));
        assert_eq!(to_elementary(&sat_t_r_product(1)).unwrap(), want);
        assert!(satake_identity_check(SatakeWhich::Tr, 1).unwrap());
    }

    #[test]
    fn identities_small_rank() {
        for r in 1..=3 {
            assert!(satake_identity_check(SatakeWhich::Tr, r).unwrap(), "Tr r={r}");
            assert!(satake_identity_check(SatakeWhich::TrPrime, r).unwrap(), "Tr' r={r}");
            assert!(satake_identity_check(SatakeWhich::SflatProduct, r).unwrap(), "pm r={r}");
        }
    }

    #[test]
    fn leading_term_algorithm() {
        // p_2 = x^2 + y^2 = e1^2 - 2 e2
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let p2 = x.mul(&x).add(&y.mul(&y));
        let s = to_elementary(&p2).unwrap();
        assert_eq!(s.terms.get(&vec![2, 0]), Some(&ExactScalar::one()));
        assert_eq!(s.terms.get(&vec![0, 1]), Some(&ExactScalar::from_int(-2)));
        assert!(to_elementary(&x).is_err());
    }

    #[test]
    fn wrong_gamma_fails() {
        // with γ = s + s^{-1} the product does not reach Sat(T_1)
        let g = ExactScalar::s() + ExactScalar::s_pow(-1);
        let gp = MPoly::constant(1, g);
        let nu = MPoly::var(1, 0);
        let p = MPoly::constant(1, ExactScalar::s_pow(2))
            .mul(&nu.add(&gp))
            .mul(&nu.add(&gp.scale(&-ExactScalar::one())));
        let sub = [MPoly::var(1, 0).scale(&-ExactScalar::one()).add(&MPoly::constant(1, ExactScalar::from_int(-2)))];
        let mu = p.substitute_squares(&sub).unwrap();
        assert_ne!(mu, sat_t_r_product(1));
    }
}
