//! `O_F = Z_p[t]/(t^2 - u)` truncated mod `p^M`, with `u` a non-residue, so
//! `F/Q_p` is the unramified quadratic extension and `ϖ = p`.

use crate::error::{Error, Result};

/// `a + b t`, both coordinates in `[0, p^M)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LocalElem {
    pub a: i64,
    pub b: i64,
}

impl LocalElem {
    pub const ZERO: LocalElem = LocalElem { a: 0, b: 0 };
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalRing {
    pub p: i64,
    pub u: i64,
    pub m: u32,
    pub pm: i64,
}

fn is_prime(p: i64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

fn pow_mod(mut b: i128, mut e: u64, m: i128) -> i128 {
    let mut acc = 1i128;
    b = b.rem_euclid(m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl LocalRing {
    /// Odd prime `p`, precision `m >= 1`.
    pub fn new(p: i64, m: u32) -> Result<Self> {
        if p == 2 || !is_prime(p) {
            return Err(Error::InvalidSpec(format!("need an odd prime, got {p}")));
        }
        let pm = (p as i128).checked_pow(m).filter(|&x| x < (1i128 << 62));
        let pm = pm.ok_or_else(|| Error::PrecisionLoss(format!("p^{m} does not fit in 62 bits")))? as i64;
        let u = (2..p).find(|&u| pow_mod(u as i128, ((p - 1) / 2) as u64, p as i128) == (p - 1) as i128).unwrap();
        Ok(LocalRing { p, u, m, pm })
    }

    /// The residue field `O_F / ϖ`, of size `p^2`.
    pub fn residue(&self) -> LocalRing {
        LocalRing { m: 1, pm: self.p, ..*self }
    }

    /// Same ring at another precision.
    pub fn with_precision(&self, m: u32) -> Result<LocalRing> {
        LocalRing::new(self.p, m)
    }

    fn red(&self, x: i128) -> i64 {
        x.rem_euclid(self.pm as i128) as i64
    }

    pub fn elem(&self, a: i64, b: i64) -> LocalElem {
        LocalElem { a: self.red(a as i128), b: self.red(b as i128) }
    }

    pub fn int(&self, a: i64) -> LocalElem {
        self.elem(a, 0)
    }

    pub fn one(&self) -> LocalElem {
        self.int(1)
    }

    /// `p^k`, zero once `k >= M`.
    pub fn p_pow(&self, k: u32) -> LocalElem {
        if k >= self.m {
            LocalElem::ZERO
        } else {
            self.int(self.p.pow(k))
        }
    }

    pub fn add(&self, x: LocalElem, y: LocalElem) -> LocalElem {
        LocalElem { a: self.red(x.a as i128 + y.a as i128), b: self.red(x.b as i128 + y.b as i128) }
    }

    pub fn sub(&self, x: LocalElem, y: LocalElem) -> LocalElem {
        LocalElem { a: self.red(x.a as i128 - y.a as i128), b: self.red(x.b as i128 - y.b as i128) }
    }

    pub fn neg(&self, x: LocalElem) -> LocalElem {
        LocalElem { a: self.red(-(x.a as i128)), b: self.red(-(x.b as i128)) }
    }

    pub fn mul(&self, x: LocalElem, y: LocalElem) -> LocalElem {
        let m = self.pm as i128;
        let (a, b, c, d) = (x.a as i128, x.b as i128, y.a as i128, y.b as i128);
        let re = (a * c % m + (b * d % m) * self.u as i128 % m) % m;
        let im = (a * d % m + b * c % m) % m;
        LocalElem { a: self.red(re), b: self.red(im) }
    }

    pub fn conj(&self, x: LocalElem) -> LocalElem {
        LocalElem { a: x.a, b: self.red(-(x.b as i128)) }
    }

    /// The norm `x x̄ = a^2 - u b^2` as an element of `Z_p` (mod `p^M`).
    pub fn norm(&self, x: LocalElem) -> i64 {
        let m = self.pm as i128;
        let (a, b) = (x.a as i128, x.b as i128);
        ((a * a % m - (b * b % m) * self.u as i128 % m) % m).rem_euclid(m) as i64
    }

    fn vp(&self, mut x: i64) -> u32 {
        if x == 0 {
            return self.m;
        }
        let mut v = 0;
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }

    /// ϖ-adic valuation; `M` stands for "zero at this precision".
    pub fn val(&self, x: LocalElem) -> u32 {
        self.vp(x.a).min(self.vp(x.b))
    }

    pub fn is_zero(&self, x: LocalElem) -> bool {
        x.a == 0 && x.b == 0
    }

    pub fn is_unit(&self, x: LocalElem) -> bool {
        self.val(x) == 0
    }

    fn int_inv(&self, a: i64) -> i64 {
        // extended Euclid in i128
        let (mut r0, mut r1) = (self.pm as i128, a.rem_euclid(self.pm) as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let t = r0 / r1;
            (r0, r1) = (r1, r0 - t * r1);
            (s0, s1) = (s1, s0 - t * s1);
        }
        debug_assert_eq!(r0, 1);
        self.red(s0)
    }

    pub fn inv(&self, x: LocalElem) -> Result<LocalElem> {
        if !self.is_unit(x) {
            return Err(Error::InexactDivision(format!("{x:?} is not a unit")));
        }
        let n = self.int_inv(self.norm(x));
        Ok(self.mul(self.conj(x), self.int(n)))
    }

    /// `x / p^k` for `val(x) >= k`; the result is only meaningful mod
    /// `p^{M-k}`, which is enough when it is multiplied back by something of
    /// valuation at least `k`.
    pub fn div_p_pow(&self, x: LocalElem, k: u32) -> LocalElem {
        debug_assert!(self.val(x) >= k);
        let d = self.p.pow(k);
        LocalElem { a: x.a / d, b: x.b / d }
    }

    /// `x = p^{val} * unit`; returns the valuation and the unit (with the
    /// unit defined modulo `p^{M - val}`).
    pub fn split(&self, x: LocalElem) -> (u32, LocalElem) {
        let v = self.val(x);
        (v, self.div_p_pow(x, v))
    }

    /// Representative of `x` modulo `p^k` with both coordinates in `[0, p^k)`.
    pub fn reduce_mod(&self, x: LocalElem, k: u32) -> LocalElem {
        if k >= self.m {
            return x;
        }
        let d = self.p.pow(k);
        LocalElem { a: x.a % d, b: x.b % d }
    }

    /// All residues `a + b t` with `0 <= a, b < p^k`, in a fixed order.
    pub fn residues(&self, k: u32) -> impl Iterator<Item = LocalElem> + '_ {
        let d = self.p.pow(k.min(self.m));
        (0..d).flat_map(move |a| (0..d).map(move |b| LocalElem { a, b }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_basics() {
        let r = LocalRing::new(3, 6).unwrap();
        assert_eq!(r.u, 2);
        let x = r.elem(2, 5);
        let y = r.elem(-7, 1);
        assert_eq!(r.conj(r.mul(x, y)), r.mul(r.conj(x), r.conj(y)));
        let xi = r.inv(x).unwrap();
        assert_eq!(r.mul(x, xi), r.one());
        assert!(r.inv(r.elem(3, 6)).is_err());
        assert_eq!(r.val(r.elem(9, 27)), 2);
        assert_eq!(r.val(LocalElem::ZERO), 6);
        assert_eq!(r.residues(1).count(), 9);
        assert!(LocalRing::new(2, 3).is_err());
        assert_eq!(LocalRing::new(5, 3).unwrap().u, 2);
    }

    #[test]
    fn every_unit_norm_class() {
        // units of Z_p are norms from the unramified extension
        let r = LocalRing::new(5, 1).unwrap();
        let norms: std::collections::BTreeSet<i64> = r.residues(1).map(|x| r.norm(x)).collect();
        assert_eq!(norms.len(), 5);
    }
}
