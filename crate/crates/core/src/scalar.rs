//! Exact coefficients: Laurent polynomials in `s` over the big integers,
//! with `q = -s^2`.
//!
//! Every quantity of the calculus (powers of `q`, `sqrt(-q) = s`, the
//! products `c(k)` and `(x)_n`, Gaussian binomials) lives in this one ring.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// A Laurent polynomial `sum_k c_k s^k`.
///
/// Stored densely from the lowest exponent; the coefficient vector never
/// starts or ends with a zero, and the zero element has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct ExactScalar {
    low: i32,
    coeffs: Vec<BigInt>,
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(c: i64) -> Self {
        Self::monomial(BigInt::from(c), 0)
    }

    /// `c * s^k`.
    pub fn monomial(c: BigInt, k: i32) -> Self {
        let mut out = Self { low: k, coeffs: vec![c] };
        out.normalize();
        out
    }

    /// `s^k`.
    pub fn s_pow(k: i32) -> Self {
        Self::monomial(BigInt::one(), k)
    }

    /// The formal variable `s` with `s^2 = -q`.
    pub fn s() -> Self {
        Self::s_pow(1)
    }

    /// `q = -s^2`.
    pub fn q() -> Self {
        Self::q_pow(1)
    }

    /// `q^k = (-1)^k s^{2k}`, any integer `k`.
    pub fn q_pow(k: i32) -> Self {
        let sign = if k.rem_euclid(2) == 0 { 1 } else { -1 };
        Self::monomial(BigInt::from(sign), 2 * k)
    }

    /// `(-q)^k = s^{2k}`.
    pub fn neg_q_pow(k: i32) -> Self {
        Self::s_pow(2 * k)
    }

    /// Builds `sum_k c_k q^k` from `(k, c_k)` pairs.
    pub fn from_q_terms(terms: &[(i32, i64)]) -> Self {
        terms
            .iter()
            .fold(Self::zero(), |acc, &(k, c)| acc + Self::q_pow(k) * Self::from_int(c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Iterates over `(s-exponent, coefficient)` pairs with nonzero coefficient.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.low + i as i32, c))
    }

    pub fn coeff(&self, k: i32) -> BigInt {
        let idx = k - self.low;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }

    /// Lowest and highest s-exponent, `None` for zero.
    pub fn degree_range(&self) -> Option<(i32, i32)> {
        if self.is_zero() {
            None
        } else {
            Some((self.low, self.low + self.coeffs.len() as i32 - 1))
        }
    }

    /// True when every term has an even s-exponent, i.e. the element lies in
    /// `Z[q, q^{-1}]`.
    pub fn in_q_subring(&self) -> bool {
        self.terms().all(|(k, _)| k % 2 == 0)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Substitutes `q <- q0`. Fails with `OddPower` outside the q-subring.
    pub fn eval_q(&self, q0: i64) -> Result<BigRational> {
        let mut total = BigRational::zero();
        let base = BigRational::from_integer(BigInt::from(-q0));
        for (k, c) in self.terms() {
            if k % 2 != 0 {
                return Err(Error::OddPower(k));
            }
            let j = k / 2;
            let p = if j >= 0 {
                num_traits::pow(base.clone(), j as usize)
            } else {
                num_traits::pow(base.recip(), (-j) as usize)
            };
            total += p * BigRational::from_integer(c.clone());
        }
        Ok(total)
    }

    /// Like [`eval_q`](Self::eval_q) but insists on an integer value.
    pub fn eval_q_int(&self, q0: i64) -> Result<BigInt> {
        let v = self.eval_q(q0)?;
        if v.is_integer() {
            Ok(v.to_integer())
        } else {
            Err(Error::NonIntegral(v.to_string()))
        }
    }

    /// Exact quotient `self / d`; fails if the quotient is not a Laurent
    /// polynomial.
    pub fn exact_div(&self, d: &ExactScalar) -> Result<ExactScalar> {
        if d.is_zero() {
            return Err(Error::InexactDivision("division by zero".into()));
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let mut rem: Vec<BigInt> = self.coeffs.clone();
        let dl = d.coeffs.len();
        if rem.len() < dl {
            return Err(Error::InexactDivision(format!("{self} / {d}")));
        }
        let lead = d.coeffs.last().unwrap();
        let qlen = rem.len() - dl + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for i in (0..qlen).rev() {
            let top = &rem[i + dl - 1];
            if top.is_zero() {
                continue;
            }
            let (qc, r) = top.div_rem(lead);
            if !r.is_zero() {
                return Err(Error::InexactDivision(format!("{self} / {d}")));
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &qc * dc;
            }
            quot[i] = qc;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::InexactDivision(format!("{self} / {d}")));
        }
        let mut out = ExactScalar { low: self.low - d.low, coeffs: quot };
        out.normalize();
        Ok(out)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.low += lead_zeros as i32;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    fn add_scaled(&mut self, other: &ExactScalar, sign: i32) {
        if other.is_zero() {
            return;
        }
        if self.is_zero() {
            *self = if sign > 0 { other.clone() } else { -other.clone() };
            return;
        }
        let (olow, ohigh) = other.degree_range().unwrap();
        let (slow, shigh) = self.degree_range().unwrap();
        let low = slow.min(olow);
        let high = shigh.max(ohigh);
        if low < slow {
            let pad = (slow - low) as usize;
            let mut v = vec![BigInt::zero(); pad];
            v.append(&mut self.coeffs);
            self.coeffs = v;
            self.low = low;
        }
        self.coeffs.resize((high - self.low + 1) as usize, BigInt::zero());
        for (i, c) in other.coeffs.iter().enumerate() {
            let idx = (olow - self.low) as usize + i;
            if sign > 0 {
                self.coeffs[idx] += c;
            } else {
                self.coeffs[idx] -= c;
            }
        }
        self.normalize();
    }
}

/// `c(k) = prod_{i=1}^k (1 - q^{2i})`, with `c(0) = 1`.
pub fn c_poly(k: u32) -> ExactScalar {
    (1..=k as i32).fold(ExactScalar::one(), |acc, i| {
        acc * (ExactScalar::one() - ExactScalar::q_pow(2 * i))
    })
}

/// `(x)_n = prod_{i=1}^n (1 - x^i)`.
pub fn pochhammer(x: &ExactScalar, n: u32) -> ExactScalar {
    let mut acc = ExactScalar::one();
    let mut xp = ExactScalar::one();
    for _ in 0..n {
        xp = &xp * x;
        acc = acc * (ExactScalar::one() - xp.clone());
    }
    acc
}

/// Gaussian binomial `[n choose i]_base`, computed as an exact quotient of
/// `(base)` Pochhammer products. Zero outside `0 <= i <= n`.
pub fn gauss_binom(n: i64, i: i64, base: &ExactScalar) -> Result<ExactScalar> {
    if i < 0 || i > n || n < 0 {
        return Ok(ExactScalar::zero());
    }
    let num = pochhammer(base, n as u32);
    let den = pochhammer(base, i as u32) * pochhammer(base, (n - i) as u32);
    num.exact_div(&den)
}

impl From<i64> for ExactScalar {
    fn from(c: i64) -> Self {
        Self::from_int(c)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(mut self) -> ExactScalar {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -self.clone()
    }
}

impl AddAssign<&ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        self.add_scaled(rhs, 1);
    }
}

impl AddAssign for ExactScalar {
    fn add_assign(&mut self, rhs: ExactScalar) {
        self.add_scaled(&rhs, 1);
    }
}

impl SubAssign<&ExactScalar> for ExactScalar {
    fn sub_assign(&mut self, rhs: &ExactScalar) {
        self.add_scaled(rhs, -1);
    }
}

impl SubAssign for ExactScalar {
    fn sub_assign(&mut self, rhs: ExactScalar) {
        self.add_scaled(&rhs, -1);
    }
}

impl Add for ExactScalar {
    type Output = ExactScalar;
    fn add(mut self, rhs: ExactScalar) -> ExactScalar {
        self += &rhs;
        self
    }
}

impl Add<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for ExactScalar {
    type Output = ExactScalar;
    fn sub(mut self, rhs: ExactScalar) -> ExactScalar {
        self -= &rhs;
        self
    }
}

impl Sub<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Mul<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        if self.is_zero() || rhs.is_zero() {
            return ExactScalar::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        let mut out = ExactScalar { low: self.low + rhs.low, coeffs };
        out.normalize();
        out
    }
}

impl Mul for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: ExactScalar) -> ExactScalar {
        &self * &rhs
    }
}

impl Mul<&ExactScalar> for ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        &self * rhs
    }
}

impl MulAssign<&ExactScalar> for ExactScalar {
    fn mul_assign(&mut self, rhs: &ExactScalar) {
        *self = &*self * rhs;
    }
}

impl fmt::Display for ExactScalar {
    /// Even s-powers print as powers of `q`; odd ones as `q^k*s`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms() {
            // s^k = (-1)^j q^j s^{k - 2j} with j = floor(k / 2)
            let j = k.div_euclid(2);
            let odd = k.rem_euclid(2) == 1;
            let c = if j.rem_euclid(2) == 1 { -c.clone() } else { c.clone() };
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let mut parts: Vec<String> = Vec::new();
            match j {
                0 => {}
                1 => parts.push("q".into()),
                _ => parts.push(format!("q^{j}")),
            }
            if odd {
                parts.push("s".into());
            }
            if parts.is_empty() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{}", parts.join("*"))?;
            } else {
                write!(f, "{mag}*{}", parts.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactScalar({self})")
    }
}
