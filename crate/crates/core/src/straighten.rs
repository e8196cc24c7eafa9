//! The three straightening maps onto decreasing (and, for the flat and phi
//! kinds, nonnegative) type vectors.
//!
//! Adjacent-pair relations are translation invariant, so the rank-2 normal
//! form of `δ(a,b)` is stored once per gap `b - a`. The flat and phi kinds add
//! a boundary relation on the last coordinate, stored once per `m` for
//! `δ(-m)`. A rank-r vector is normalized by replacing its leftmost
//! violation with the stored local normal form; every replacement makes the
//! vector lexicographically larger without leaving the box `[-M, M]^r`, so
//! the recursion is finite.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::ExactScalar;
use crate::typ::{SphericalElement, TypeVector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StrKind {
    Natural,
    Flat,
    Phi,
}

impl std::str::FromStr for StrKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "natural" => Ok(StrKind::Natural),
            "flat" => Ok(StrKind::Flat),
            "phi" => Ok(StrKind::Phi),
            _ => Err(Error::InvalidSpec(format!("unknown straightening kind {s:?}"))),
        }
    }
}

/// Where a vector fails to be normal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Violation {
    /// `e_i < e_{i+1}`.
    Pair(usize),
    /// Negative last entry.
    Boundary,
}

pub fn violations(e: &TypeVector, kind: StrKind) -> Vec<Violation> {
    let v = e.entries();
    let mut out: Vec<Violation> =
        (0..v.len().saturating_sub(1)).filter(|&i| v[i] < v[i + 1]).map(Violation::Pair).collect();
    if kind != StrKind::Natural && v.last().is_some_and(|&x| x < 0) {
        out.push(Violation::Boundary);
    }
    out
}

fn first_violation(e: &TypeVector, kind: StrKind) -> Option<Violation> {
    let v = e.entries();
    for i in 0..v.len().saturating_sub(1) {
        if v[i] < v[i + 1] {
            return Some(Violation::Pair(i));
        }
    }
    if kind != StrKind::Natural && v.last().is_some_and(|&x| x < 0) {
        return Some(Violation::Boundary);
    }
    None
}

pub fn is_normal(e: &TypeVector, kind: StrKind) -> bool {
    first_violation(e, kind).is_none()
}

/// One application of `Rel(a)` or `Rel(a,b)` to `δ(a,b)` with `a < b`,
/// as a combination of pairs.
fn pair_step(a: i32, b: i32, printed: bool) -> Vec<((i32, i32), ExactScalar)> {
    debug_assert!(a < b);
    if b == a + 1 {
        return vec![((b, a), ExactScalar::one())];
    }
    let w = ExactScalar::neg_q_pow(b - a - 1);
    let first = if printed { (a + 1, b) } else { (a + 1, b - 1) };
    vec![
        (first, ExactScalar::one()),
        ((b, a), w.clone()),
        ((b - 1, a + 1), -w),
    ]
}

/// One application of the boundary relation to `δ(-m)`, `m >= 1`.
fn boundary_step(m: i32, kind: StrKind) -> Vec<(i32, ExactScalar)> {
    debug_assert!(m >= 1);
    let q2 = ExactScalar::q_pow(2);
    match (kind, m) {
        (StrKind::Flat, 1) => vec![(1, ExactScalar::one())],
        (StrKind::Phi, 1) => vec![(1, q2)],
        (StrKind::Flat, _) => {
            let w = ExactScalar::q_pow(m - 1);
            vec![(-m + 2, ExactScalar::one()), (m, w.clone()), (m - 2, -w)]
        }
        (StrKind::Phi, _) => {
            let w = ExactScalar::q_pow(m - 1);
            vec![(-m + 2, q2.clone()), (m, &w * &q2), (m - 2, -w)]
        }
        (StrKind::Natural, _) => unreachable!("natural kind has no boundary relation"),
    }
}

/// A single local rewrite of `δ_e` at the given violation.
pub fn rewrite_once(e: &TypeVector, at: Violation, kind: StrKind, printed: bool) -> Vec<(TypeVector, ExactScalar)> {
    let v = e.entries();
    match at {
        Violation::Pair(i) => pair_step(v[i], v[i + 1], printed)
            .into_iter()
            .map(|((x, y), c)| {
                let mut w = v.to_vec();
                w[i] = x;
                w[i + 1] = y;
                (TypeVector(w), c)
            })
            .collect(),
        Violation::Boundary => {
            let m = -v[v.len() - 1];
            boundary_step(m, kind)
                .into_iter()
                .map(|(x, c)| {
                    let mut w = v.to_vec();
                    *w.last_mut().unwrap() = x;
                    (TypeVector(w), c)
                })
                .collect()
        }
    }
}

#[derive(Default)]
struct Tables {
    /// gap -> normal form of `δ(0, gap)`.
    pairs: HashMap<i32, Vec<((i32, i32), ExactScalar)>>,
    /// m -> normal form of `δ(-m)`.
    boundary: HashMap<i32, Vec<(i32, ExactScalar)>>,
    vectors: HashMap<TypeVector, SphericalElement>,
}

/// A straightening map with its memo tables.
pub struct Straightener {
    kind: StrKind,
    printed: bool,
    tables: Mutex<Tables>,
}

impl Straightener {
    pub fn new(kind: StrKind) -> Self {
        Straightener { kind, printed: false, tables: Mutex::new(Tables::default()) }
    }

    /// Uses `Rel(a,b)` exactly as printed, whose second term is
    /// `δ(a+1,b)`. It breaks homogeneity in the sum of entries and does not
    /// reproduce the worked values; kept only for comparison.
    pub fn printed_rel(kind: StrKind) -> Self {
        Straightener { kind, printed: true, tables: Mutex::new(Tables::default()) }
    }

    /// Shared instance with the corrected relation.
    pub fn shared(kind: StrKind) -> &'static Straightener {
        static CELLS: OnceLock<[Straightener; 3]> = OnceLock::new();
        let all = CELLS.get_or_init(|| {
            [Straightener::new(StrKind::Natural), Straightener::new(StrKind::Flat), Straightener::new(StrKind::Phi)]
        });
        match kind {
            StrKind::Natural => &all[0],
            StrKind::Flat => &all[1],
            StrKind::Phi => &all[2],
        }
    }

    pub fn kind(&self) -> StrKind {
        self.kind
    }

    pub fn straighten(&self, x: &SphericalElement) -> SphericalElement {
        let mut t = self.tables.lock().unwrap_or_else(|p| p.into_inner());
        let mut out = SphericalElement::zero(x.rank());
        for (e, c) in x.iter() {
            if is_normal(e, self.kind) {
                out.add_term_unchecked(e.clone(), c);
            } else {
                let nf = self.nf(e, &mut t);
                out.add_scaled(&nf, c).expect("rank preserved");
            }
        }
        out
    }

    pub fn straighten_delta(&self, e: &TypeVector) -> SphericalElement {
        self.straighten(&SphericalElement::delta(e.clone()))
    }

    fn nf(&self, e: &TypeVector, t: &mut Tables) -> SphericalElement {
        if let Some(hit) = t.vectors.get(e) {
            return hit.clone();
        }
        let Some(at) = first_violation(e, self.kind) else {
            return SphericalElement::delta(e.clone());
        };
        let v = e.entries();
        let local: Vec<(TypeVector, ExactScalar)> = match at {
            Violation::Pair(i) => {
                let (a, b) = (v[i], v[i + 1]);
                self.pair_nf(b - a, t)
                    .into_iter()
                    .map(|((x, y), c)| {
                        let mut w = v.to_vec();
                        w[i] = x + a;
                        w[i + 1] = y + a;
                        (TypeVector(w), c)
                    })
                    .collect()
            }
            Violation::Boundary => self
                .boundary_nf(-v[v.len() - 1], t)
                .into_iter()
                .map(|(x, c)| {
                    let mut w = v.to_vec();
                    *w.last_mut().unwrap() = x;
                    (TypeVector(w), c)
                })
                .collect(),
        };
        let mut out = SphericalElement::zero(e.rank());
        for (w, c) in local {
            if is_normal(&w, self.kind) {
                out.add_term_unchecked(w, &c);
            } else {
                let sub = self.nf(&w, t);
                out.add_scaled(&sub, &c).expect("rank preserved");
            }
        }
        t.vectors.insert(e.clone(), out.clone());
        out
    }

    fn pair_nf(&self, gap: i32, t: &mut Tables) -> Vec<((i32, i32), ExactScalar)> {
        if let Some(hit) = t.pairs.get(&gap) {
            return hit.clone();
        }
        let mut acc: BTreeMap<(i32, i32), ExactScalar> = BTreeMap::new();
        for ((x, y), c) in pair_step(0, gap, self.printed) {
            if x >= y {
                *acc.entry((x, y)).or_default() += &c;
            } else {
                // every step shrinks the gap, so this recursion is finite
                for ((u, w), d) in self.pair_nf(y - x, t) {
                    *acc.entry((u + x, w + x)).or_default() += &(&c * &d);
                }
            }
        }
        let out: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        t.pairs.insert(gap, out.clone());
        out
    }

    fn boundary_nf(&self, m: i32, t: &mut Tables) -> Vec<(i32, ExactScalar)> {
        if let Some(hit) = t.boundary.get(&m) {
            return hit.clone();
        }
        let mut acc: BTreeMap<i32, ExactScalar> = BTreeMap::new();
        for (x, c) in boundary_step(m, self.kind) {
            if x >= 0 {
                *acc.entry(x).or_default() += &c;
            } else {
                for (u, d) in self.boundary_nf(-x, t) {
                    *acc.entry(u).or_default() += &(&c * &d);
                }
            }
        }
        let out: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        t.boundary.insert(m, out.clone());
        out
    }
}

/// Straightening with the shared corrected-relation instance.
pub fn straighten(x: &SphericalElement, kind: StrKind) -> SphericalElement {
    Straightener::shared(kind).straighten(x)
}

/// Rule-application order for [`normalize_with`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    /// Smallest pending vector, leftmost violation.
    Leftmost,
    /// Largest pending vector, rightmost violation.
    Rightmost,
    /// Uniformly random pending vector and violation.
    Random(u64),
}

/// Normalizes by single rule applications in the order given by `strategy`,
/// without any tables. Used to test that the normal form does not depend on
/// the order.
pub fn normalize_with(x: &SphericalElement, kind: StrKind, strategy: Strategy) -> SphericalElement {
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut done = SphericalElement::zero(x.rank());
    let mut pending: BTreeMap<TypeVector, ExactScalar> = BTreeMap::new();
    let push = |pending: &mut BTreeMap<TypeVector, ExactScalar>, done: &mut SphericalElement, e: TypeVector, c: &ExactScalar| {
        if is_normal(&e, kind) {
            done.add_term_unchecked(e, c);
        } else {
            let slot = pending.entry(e.clone()).or_default();
            *slot += c;
            if slot.is_zero() {
                pending.remove(&e);
            }
        }
    };
    for (e, c) in x.iter() {
        push(&mut pending, &mut done, e.clone(), c);
    }
    while !pending.is_empty() {
        let (e, at) = match strategy {
            Strategy::Leftmost => {
                let e = pending.keys().next().unwrap().clone();
                let at = violations(&e, kind)[0];
                (e, at)
            }
            Strategy::Rightmost => {
                let e = pending.keys().next_back().unwrap().clone();
                let at = *violations(&e, kind).last().unwrap();
                (e, at)
            }
            Strategy::Random(_) => {
                let rng = rng.as_mut().unwrap();
                let idx = rng.gen_range(0..pending.len());
                let e = pending.keys().nth(idx).unwrap().clone();
                let vs = violations(&e, kind);
                let at = vs[rng.gen_range(0..vs.len())];
                (e, at)
            }
        };
        let c = pending.remove(&e).unwrap();
        for (w, d) in rewrite_once(&e, at, kind, false) {
            push(&mut pending, &mut done, w, &(&c * &d));
        }
    }
    done
}

/// A relation generator, embedded as `δ_left ★ Rel ★ δ_right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelSpec {
    /// `Rel(a) = δ(a,a+1) - δ(a+1,a)`.
    Adjacent { a: i32 },
    /// `Rel(a,b)` for `b >= a + 2`.
    Pair { a: i32, b: i32 },
    /// The flat boundary relation `Rel♭(m)`, `m >= 1`.
    Flat { m: i32 },
    /// The phi boundary relation `Relφ(m)`, `m >= 1`.
    Phi { m: i32 },
}

pub fn relation_element(spec: &RelSpec, left: &[i32], right: &[i32], printed: bool) -> Result<SphericalElement> {
    let one = ExactScalar::one();
    let core: Vec<(Vec<i32>, ExactScalar)> = match *spec {
        RelSpec::Adjacent { a } => vec![(vec![a, a + 1], one.clone()), (vec![a + 1, a], -one)],
        RelSpec::Pair { a, b } => {
            if b < a + 2 {
                return Err(Error::InvalidSpec(format!("Rel(a,b) needs b >= a+2, got ({a},{b})")));
            }
            let mut v = vec![(vec![a, b], one)];
            for ((x, y), c) in pair_step(a, b, printed) {
                v.push((vec![x, y], -c));
            }
            v
        }
        RelSpec::Flat { m } | RelSpec::Phi { m } => {
            if m < 1 {
                return Err(Error::InvalidSpec(format!("boundary relation needs m >= 1, got {m}")));
            }
            if !right.is_empty() {
                return Err(Error::InvalidSpec("boundary relations sit at the last coordinate".into()));
            }
            let kind = if matches!(spec, RelSpec::Flat { .. }) { StrKind::Flat } else { StrKind::Phi };
            let mut v = vec![(vec![-m], one)];
            for (x, c) in boundary_step(m, kind) {
                v.push((vec![x], -c));
            }
            v
        }
    };
    let l = SphericalElement::delta_of(left);
    let r = SphericalElement::delta_of(right);
    let mut mid = SphericalElement::zero(core[0].0.len());
    for (k, c) in core {
        mid.add_term_unchecked(TypeVector(k), &c);
    }
    Ok(l.star(&mid).star(&r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::parse_expr;

    fn d(v: &[i32]) -> SphericalElement {
        SphericalElement::delta_of(v)
    }

    #[test]
    fn worked_values() {
        let n = straighten(&d(&[-2, 1]), StrKind::Natural);
        assert_eq!(n, parse_expr("q^2*[1,-2] + (1-q^2)*[0,-1]").unwrap());
        let p = straighten(&d(&[-2, 1]), StrKind::Phi);
        assert_eq!(p, parse_expr("q^5*[2,1] + q^2*(1-q)*[1,0]").unwrap());
        assert_eq!(straighten(&d(&[0, 1]), StrKind::Natural), d(&[1, 0]));
        assert_eq!(straighten(&d(&[-2]), StrKind::Flat), parse_expr("q*[2] + (1-q)*[0]").unwrap());
        assert_eq!(straighten(&d(&[-2]), StrKind::Phi), parse_expr("q^3*[2] + q*(q-1)*[0]").unwrap());
        assert_eq!(straighten(&d(&[-1, 0, 0]), StrKind::Phi), parse_expr("q^2*[1,0,0]").unwrap());
    }

    #[test]
    fn flat_family() {
        // δ(-1, 1^a, 0^b) straightens onto two vectors
        for a in 0..=3usize {
            for b in 0..=2usize {
                let mut v = vec![-1];
                v.extend(TypeVector::ones_zeros(a, b).0);
                let got = straighten(&SphericalElement::delta(TypeVector(v)), StrKind::Flat);
                let mq = ExactScalar::neg_q_pow(a as i32);
                let mut want = SphericalElement::delta(TypeVector::ones_zeros(a + 1, b)).scale(&mq);
                if a >= 1 {
                    want.add_scaled(
                        &SphericalElement::delta(TypeVector::ones_zeros(a - 1, b + 2)),
                        &(ExactScalar::one() - mq),
                    )
                    .unwrap();
                }
                assert_eq!(got, want, "a={a} b={b}");
            }
        }
    }

    #[test]
    fn printed_rel_misses_worked_value() {
        let s = Straightener::printed_rel(StrKind::Natural);
        let got = s.straighten(&d(&[-2, 1]));
        assert_ne!(got, parse_expr("q^2*[1,-2] + (1-q^2)*[0,-1]").unwrap());
    }

    #[test]
    fn relation_examples() {
        assert_eq!(
            relation_element(&RelSpec::Phi { m: 1 }, &[], &[], false).unwrap(),
            parse_expr("[-1] - q^2*[1]").unwrap()
        );
        assert_eq!(
            relation_element(&RelSpec::Adjacent { a: 0 }, &[], &[], false).unwrap(),
            parse_expr("[0,1] - [1,0]").unwrap()
        );
        assert_eq!(
            relation_element(&RelSpec::Flat { m: 1 }, &[3], &[], false).unwrap(),
            parse_expr("[3,-1] - [3,1]").unwrap()
        );
        assert!(relation_element(&RelSpec::Flat { m: 1 }, &[], &[3], false).is_err());
        assert!(relation_element(&RelSpec::Pair { a: 0, b: 1 }, &[], &[], false).is_err());
    }

    #[test]
    fn boundary_relation_only_at_last_position() {
        let x = relation_element(&RelSpec::Flat { m: 1 }, &[], &[], false).unwrap().star(&d(&[3]));
        assert!(!straighten(&x, StrKind::Flat).is_zero());
    }

    #[test]
    fn strategies_agree_on_sample() {
        let x = parse_expr("[-3,2,-1] + q*[1,-4,3] - s*[0,0,-2]").unwrap();
        for kind in [StrKind::Natural, StrKind::Flat, StrKind::Phi] {
            let want = straighten(&x, kind);
            for st in [Strategy::Leftmost, Strategy::Rightmost, Strategy::Random(7)] {
                assert_eq!(normalize_with(&x, kind, st), want, "{kind:?} {st:?}");
            }
        }
    }
}
