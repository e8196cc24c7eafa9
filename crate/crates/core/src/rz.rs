//! Intersection numbers on vertex lattices of a split Hermitian space of
//! rank `2r`, computed from their closed forms.
//!
//! Lattices near the base `Λ0 = O_F^{2r}` are stored as `p^{-S} · span(h)`
//! with `h` in canonical Hermite form, so equal lattices compare equal.
//! Neighbours in the building are Lagrangians of a residue Hermitian space
//! over `F_{q^2}`.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracle::lattice::sublattice_matrices;
use crate::oracle::matrix::{self, Mat};
use crate::oracle::{HermitianLattice, LocalElem, LocalRing};
use crate::scalar::c_poly;
use crate::typ::TypeVector;

/// Scale of the working window: every lattice handled lies in `p^{-S} Λ0`.
pub const WINDOW_SCALE: i32 = 3;
const PRECISION: u32 = 16;

/// `p^{-S} · span(h)` with `(h, d)` the Hermite form and its diagonal.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vertex {
    pub h: Mat,
    pub d: Vec<u32>,
}

/// `F^{2r}` with Gram matrix `H^{⊕r}` in the basis `e_1, f_1, ..., e_r, f_r`.
#[derive(Clone, Debug)]
pub struct SplitSpace {
    pub ring: LocalRing,
    pub r: usize,
    pub gram: Mat,
}

fn c_at(k: i64, p: i64) -> Result<BigInt> {
    if k < 0 {
        return Err(Error::InvalidSpec(format!("c({k})")));
    }
    c_poly(k as u32).eval_q_int(p)
}

fn neg_q_pow(p: i64, k: u32) -> BigInt {
    BigInt::from(-p).pow(k)
}

impl SplitSpace {
    pub fn new(p: i64, r: usize) -> Result<Self> {
        if r == 0 {
            return Err(Error::InvalidSpec("rank 0".into()));
        }
        let ring = LocalRing::new(p, PRECISION)?;
        let mut gram = matrix::zeros(2 * r, 2 * r);
        for i in 0..r {
            gram[2 * i][2 * i + 1] = ring.one();
            gram[2 * i + 1][2 * i] = ring.one();
        }
        Ok(SplitSpace { ring, r, gram })
    }

    pub fn dim(&self) -> usize {
        2 * self.r
    }

    pub fn vertex(&self, basis: &Mat) -> Result<Vertex> {
        let (h, d) = matrix::hnf(&self.ring, basis)?;
        Ok(Vertex { h, d })
    }

    /// The self-dual base lattice `Λ0`.
    pub fn base(&self) -> Vertex {
        let n = self.dim();
        let b = matrix::diag(&self.ring, &vec![WINDOW_SCALE as u32; n]);
        self.vertex(&b).expect("diagonal basis")
    }

    pub fn lattice(&self, v: &Vertex) -> Result<HermitianLattice> {
        HermitianLattice::new(self.ring, self.gram.clone(), 0, v.h.clone(), WINDOW_SCALE)
    }

    pub fn typ(&self, v: &Vertex) -> Result<TypeVector> {
        self.lattice(v)?.typ()
    }

    /// Gram matrix of `p^{-S}` times the given columns, scaled by `p^{-e}`
    /// and reduced to the residue field.
    fn residue_form(&self, cols: &Mat, e: i32) -> Result<Mat> {
        let raw = matrix::gram_of(&self.ring, &self.gram, cols);
        let k = (2 * WINDOW_SCALE + e) as u32;
        let f = self.ring.residue();
        let mut out = matrix::zeros(raw.len(), raw.len());
        for (i, row) in raw.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if self.ring.val(x) < k {
                    return Err(Error::InvalidSpec("form is not integral on this lattice".into()));
                }
                let y = self.ring.div_p_pow(x, k);
                out[i][j] = f.elem(y.a, y.b);
            }
        }
        Ok(out)
    }

    /// Lattices `Y` with `pX ⊆ Y ⊆ X` and `Y/pX` Lagrangian for the residue
    /// of `p^{-e}⟨,⟩`.
    fn lagrangians(&self, x: &Vertex, e: i32) -> Result<Vec<Vertex>> {
        let form = self.residue_form(&x.h, e)?;
        let n = self.dim();
        let px = matrix::scale(&self.ring, &x.h, self.ring.p_pow(1));
        let mut out = Vec::new();
        for w in lagrangian_subspaces(&self.ring.residue(), &form, self.r) {
            // columns h·w_j followed by p·h
            let wm: Mat = (0..n).map(|a| w.iter().map(|row| row[a]).collect()).collect();
            let lifted = matrix::mul(&self.ring, &x.h, &wm);
            let gens: Mat = (0..n).map(|a| lifted[a].iter().chain(px[a].iter()).copied().collect()).collect();
            out.push(self.vertex(&gens)?);
        }
        Ok(out)
    }

    /// The `ϖΛ•` with `ϖΛ• ⊆ Λ∘ ⊆ Λ•`.
    pub fn bullets_around(&self, circ: &Vertex) -> Result<Vec<Vertex>> {
        self.lagrangians(circ, 0)
    }

    /// The self-dual `Λ∘` with `ϖΛ• ⊆ Λ∘ ⊆ Λ•`, given `m = ϖΛ•`.
    pub fn circs_around(&self, m: &Vertex) -> Result<Vec<Vertex>> {
        let mut out = Vec::new();
        for z in self.lagrangians(m, 1)? {
            // Λ∘ = p^{-1} Z
            let mut h = z.h.clone();
            for x in h.iter_mut().flatten() {
                if self.ring.val(*x) < 1 {
                    return Err(Error::WindowTooSmall("vertex leaves the working window".into()));
                }
                *x = self.ring.div_p_pow(*x, 1);
            }
            out.push(self.vertex(&h)?);
        }
        Ok(out)
    }

    /// Whether `p^{-S} · cols` lies in `v`.
    pub fn contains(&self, v: &Vertex, cols: &Mat) -> bool {
        matrix::transpose(cols).iter().all(|c| matrix::in_span(&self.ring, &v.h, &v.d, c))
    }

    /// `[v + L : v]`.
    pub fn index(&self, v: &Vertex, cols: &Mat) -> Result<u32> {
        let gens: Mat = v.h.iter().zip(cols).map(|(a, b)| a.iter().chain(b).copied().collect()).collect();
        let (_, d) = matrix::hnf(&self.ring, &gens)?;
        Ok(v.d.iter().sum::<u32>() - d.iter().sum::<u32>())
    }

    /// Whether `p^{-S} · cols` spans an integral lattice.
    pub fn is_integral(&self, cols: &Mat) -> bool {
        let g = matrix::gram_of(&self.ring, &self.gram, cols);
        g.iter().flatten().all(|&x| self.ring.val(x) >= 2 * WINDOW_SCALE as u32)
    }

    /// Type of the lattice spanned by `p^{-S} · cols` (of full column rank).
    pub fn span_type(&self, cols: &Mat) -> Result<TypeVector> {
        let g = matrix::gram_of(&self.ring, &self.gram, cols);
        let v = matrix::elementary_valuations(&self.ring, &g)?;
        Ok(TypeVector(v.into_iter().map(|x| x as i32 - 2 * WINDOW_SCALE).collect()))
    }

    /// Generators `x_i = p^{-k_i} e_i + (p^{t_i + k_i}/2) f_i`, spanning a
    /// lattice with Gram `diag(p^{t_i})` that meets `Λ0` according to `k`.
    pub fn diagonal_generators(&self, t: &TypeVector, offsets: &[u32]) -> Result<Mat> {
        if t.rank() != self.r || offsets.len() != self.r {
            return Err(Error::RankMismatch { expected: self.r, got: t.rank() });
        }
        let half = self.ring.inv(self.ring.int(2))?;
        let mut xs = matrix::zeros(self.dim(), self.r);
        for i in 0..self.r {
            let (ti, k) = (t.0[i], offsets[i] as i32);
            if ti < 0 || k > WINDOW_SCALE {
                return Err(Error::InvalidSpec(format!("entry {ti} with offset {k}")));
            }
            xs[2 * i][i] = self.ring.p_pow((WINDOW_SCALE - k) as u32);
            xs[2 * i + 1][i] = self.ring.mul(self.ring.p_pow((WINDOW_SCALE + ti + k) as u32), half);
        }
        Ok(xs)
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = combinations(n - 1, k);
    for mut c in combinations(n - 1, k - 1) {
        c.push(n - 1);
        out.push(c);
    }
    out
}

fn herm(f: &LocalRing, form: &Mat, u: &[LocalElem], v: &[LocalElem]) -> LocalElem {
    let mut acc = LocalElem::ZERO;
    for (a, &ua) in u.iter().enumerate() {
        if f.is_zero(ua) {
            continue;
        }
        for (b, &vb) in v.iter().enumerate() {
            acc = f.add(acc, f.mul(f.mul(ua, form[a][b]), f.conj(vb)));
        }
    }
    acc
}

/// Maximal isotropic subspaces of `F_{q^2}^{2r}` for a nondegenerate
/// Hermitian form, each given by its reduced row echelon basis.
pub fn lagrangian_subspaces(f: &LocalRing, form: &Mat, r: usize) -> Vec<Vec<Vec<LocalElem>>> {
    let n = form.len();
    let field: Vec<LocalElem> = f.residues(1).collect();
    let mut out = Vec::new();
    for piv in combinations(n, r) {
        let mut rows = vec![vec![LocalElem::ZERO; n]; r];
        for (j, &c) in piv.iter().enumerate() {
            rows[j][c] = f.one();
        }
        let slots: Vec<(usize, usize)> =
            (0..r).flat_map(|j| ((piv[j] + 1)..n).filter(|c| !piv.contains(c)).map(move |c| (j, c))).collect();
        lagr_fill(f, form, &field, &slots, 0, &mut rows, &mut out);
    }
    out
}

fn lagr_fill(
    f: &LocalRing,
    form: &Mat,
    field: &[LocalElem],
    slots: &[(usize, usize)],
    k: usize,
    rows: &mut Vec<Vec<LocalElem>>,
    out: &mut Vec<Vec<Vec<LocalElem>>>,
) {
    // rows whose last free entry was just assigned are checked now
    for j in 0..rows.len() {
        let end = slots.iter().filter(|s| s.0 <= j).count();
        if end == k {
            for i in 0..=j {
                if !f.is_zero(herm(f, form, &rows[j], &rows[i])) {
                    return;
                }
            }
        }
    }
    if k == slots.len() {
        out.push(rows.clone());
        return;
    }
    let (j, c) = slots[k];
    for &x in field {
        rows[j][c] = x;
        lagr_fill(f, form, field, slots, k + 1, rows, out);
    }
    rows[j][c] = LocalElem::ZERO;
}

/// `Int_L(Λ)` for a vertex lattice `Λ` of odd type `2d+1`:
/// `c(d - [Λ+L:Λ])` if `L` is integral and `L ⊆ Λ^∨`, else 0.
/// Lattices are `p^{-scale}` times the given columns.
pub fn int_closed(ring: LocalRing, gram: &Mat, scale: i32, lam: &Mat, gens: &Mat) -> Result<BigInt> {
    let lat = HermitianLattice::new(ring, gram.clone(), 0, lam.clone(), scale)?;
    let t = lat.typ()?;
    if t.0.iter().any(|&x| x != 0 && x != 1) || t.sum() % 2 != 1 {
        return Err(Error::InvalidSpec(format!("{t} is not a vertex lattice of odd type")));
    }
    let d = (t.sum() - 1) / 2;
    let g = matrix::gram_of(&ring, gram, gens);
    if g.iter().flatten().any(|&x| ring.val(x) < 2 * scale as u32) {
        return Ok(BigInt::zero());
    }
    if !lat.dual()?.contains_vectors(gens, scale)? {
        return Ok(BigInt::zero());
    }
    let (_, d0) = matrix::hnf(&ring, lam)?;
    let joined: Mat = lam.iter().zip(gens).map(|(a, b)| a.iter().chain(b).copied().collect()).collect();
    let (_, d1) = matrix::hnf(&ring, &joined)?;
    let idx = d0.iter().sum::<u32>() as i64 - d1.iter().sum::<u32>() as i64;
    c_at(d - idx, ring.p)
}

/// Which incidence correspondence to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Correspondence {
    /// `(T^{∘•} g)(Λ∘) = Σ_{ϖΛ• ⊆ Λ∘ ⊆ Λ•} g(ϖΛ•)`
    CircBullet,
    /// `(T^{•∘} g)(ϖΛ•) = Σ_{ϖΛ• ⊆ Λ∘ ⊆ Λ•} g(Λ∘)`
    BulletCirc,
    /// `I^∘ = T^{∘•} ∘ T^{•∘}`
    ICirc,
}

/// A split space with cached neighbour lists.
pub struct Building {
    pub space: SplitSpace,
    bullets: HashMap<Vertex, Vec<Vertex>>,
    circs: HashMap<Vertex, Vec<Vertex>>,
}

/// Both sides of the total intersection identity at one `Λ∘`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NablaValues {
    /// `∇_{L,ε}(Λ∘)`, one entry per sign vector, in binary order.
    pub totals: Vec<BigInt>,
    /// `T^{∘•}(c_L)(Λ∘)`
    pub rhs: BigInt,
}

impl Building {
    pub fn new(p: i64, r: usize) -> Result<Self> {
        Ok(Building { space: SplitSpace::new(p, r)?, bullets: HashMap::new(), circs: HashMap::new() })
    }

    pub fn q(&self) -> i64 {
        self.space.ring.p
    }

    pub fn bullets_of(&mut self, c: &Vertex) -> Result<Vec<Vertex>> {
        if let Some(v) = self.bullets.get(c) {
            return Ok(v.clone());
        }
        let v = self.space.bullets_around(c)?;
        self.bullets.insert(c.clone(), v.clone());
        Ok(v)
    }

    pub fn circs_of(&mut self, m: &Vertex) -> Result<Vec<Vertex>> {
        if let Some(v) = self.circs.get(m) {
            return Ok(v.clone());
        }
        let v = self.space.circs_around(m)?;
        self.circs.insert(m.clone(), v.clone());
        Ok(v)
    }

    /// Self-dual lattices sharing a `Λ•` with `Λ0`, `Λ0` first; at most
    /// `max` of them, the others chosen by `seed`.
    pub fn sample_circs(&mut self, max: usize, seed: u64) -> Result<Vec<Vertex>> {
        let base = self.space.base();
        let mut near = Vec::new();
        for m in self.bullets_of(&base)? {
            for c in self.circs_of(&m)? {
                if c != base {
                    near.push(c);
                }
            }
        }
        near.sort();
        near.dedup();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut picked: Vec<Vertex> = near.choose_multiple(&mut rng, max.saturating_sub(1)).cloned().collect();
        picked.sort();
        picked.insert(0, base);
        Ok(picked)
    }

    fn lookup<'a>(g: &'a HashMap<Vertex, BigInt>, v: &Vertex) -> Result<&'a BigInt> {
        g.get(v).ok_or_else(|| Error::WindowTooSmall("function is not given on an incident vertex".into()))
    }

    /// Applies a correspondence to `g` and evaluates at `at`. `g` must be
    /// given, zeros included, on every vertex the sum touches.
    pub fn apply(&mut self, kind: Correspondence, g: &HashMap<Vertex, BigInt>, at: &Vertex) -> Result<BigInt> {
        let mut total = BigInt::zero();
        match kind {
            Correspondence::CircBullet => {
                for m in self.bullets_of(at)? {
                    total += Self::lookup(g, &m)?;
                }
            }
            Correspondence::BulletCirc => {
                for c in self.circs_of(at)? {
                    total += Self::lookup(g, &c)?;
                }
            }
            Correspondence::ICirc => {
                for m in self.bullets_of(at)? {
                    total += self.apply(Correspondence::BulletCirc, g, &m)?;
                }
            }
        }
        Ok(total)
    }

    /// `∇∘_ε(Λ∘) = (-q)^{p(ε)}` if `L ⊆ Λ∘`, else 0.
    pub fn nabla_circ(&self, xs: &Mat, c: &Vertex, plus: u32) -> BigInt {
        if self.space.contains(c, xs) {
            neg_q_pow(self.q(), plus)
        } else {
            BigInt::zero()
        }
    }

    /// `c_L(ϖΛ•) = c(r - [ϖΛ•+L : ϖΛ•])` if `L` is integral and `L ⊆ Λ•`.
    pub fn c_bullet(&self, xs: &Mat, m: &Vertex) -> Result<BigInt> {
        let s = &self.space;
        let pxs = matrix::scale(&s.ring, xs, s.ring.p_pow(1));
        if !s.is_integral(xs) || !s.contains(m, &pxs) {
            return Ok(BigInt::zero());
        }
        c_at(s.r as i64 - s.index(m, xs)? as i64, self.q())
    }

    /// `Int_{L♯}(Λ♯)` in `V ⊕ F x0` with `⟨x0, x0⟩ = ϖ`, where
    /// `Λ♯ = ϖΛ• ⊕ O x0` and `L♯ = L + O x0`.
    pub fn int_sharp(&self, xs: &Mat, m: &Vertex) -> Result<BigInt> {
        let s = &self.space;
        let ring = s.ring;
        let n = s.dim();
        let mut gram = matrix::zeros(n + 1, n + 1);
        for i in 0..n {
            gram[i][..n].copy_from_slice(&s.gram[i]);
        }
        gram[n][n] = ring.p_pow(1);
        let px0 = ring.p_pow(WINDOW_SCALE as u32);
        let mut lam = matrix::zeros(n + 1, n + 1);
        for i in 0..n {
            lam[i][..n].copy_from_slice(&m.h[i]);
        }
        lam[n][n] = px0;
        let k = xs.first().map_or(0, |row| row.len());
        let mut gens = matrix::zeros(n + 1, k + 1);
        for i in 0..n {
            gens[i][..k].copy_from_slice(&xs[i]);
        }
        gens[n][k] = px0;
        int_closed(ring, &gram, WINDOW_SCALE, &lam, &gens)
    }

    /// `#{Λ∘ : ϖΛ• + L ⊆ Λ∘}`.
    pub fn circ_count(&mut self, xs: &Mat, m: &Vertex) -> Result<usize> {
        Ok(self.circs_of(m)?.iter().filter(|c| self.space.contains(c, xs)).count())
    }

    /// `∇•_ε(ϖΛ•) = (Int_{L♯}(Λ♯) - (-q)^{p(ε)} #{Λ∘ ⊇ ϖΛ•+L}) / (q+1)`.
    pub fn nabla_bullet(&mut self, xs: &Mat, m: &Vertex, plus: u32) -> Result<BigInt> {
        let int = self.int_sharp(xs, m)?;
        let count = BigInt::from(self.circ_count(xs, m)?);
        bullet_quotient(&int, &count, plus, self.q())
    }

    /// `∇_{L,ε} = (q+1) T^{∘•}(∇•_ε) + I^∘(∇∘_ε)` at `c` for every sign
    /// vector, and `T^{∘•}(c_L)` at `c`.
    pub fn nabla_values(&mut self, xs: &Mat, c: &Vertex) -> Result<NablaValues> {
        let q = self.q();
        let r = self.space.r;
        let bullets = self.bullets_of(c)?;
        let mut indicator: HashMap<Vertex, bool> = HashMap::new();
        let mut ints = HashMap::new();
        let mut counts = HashMap::new();
        let mut cl = HashMap::new();
        for m in &bullets {
            let mut count = 0usize;
            for c2 in self.circs_of(m)? {
                let inside = *indicator.entry(c2.clone()).or_insert_with(|| self.space.contains(&c2, xs));
                count += inside as usize;
            }
            ints.insert(m.clone(), self.int_sharp(xs, m)?);
            counts.insert(m.clone(), BigInt::from(count));
            cl.insert(m.clone(), self.c_bullet(xs, m)?);
        }
        let rhs = self.apply(Correspondence::CircBullet, &cl, c)?;
        let mut totals = Vec::with_capacity(1 << r);
        for mask in 0..(1u32 << r) {
            let plus = mask.count_ones();
            let w = neg_q_pow(q, plus);
            let circ: HashMap<Vertex, BigInt> =
                indicator.iter().map(|(v, &b)| (v.clone(), if b { w.clone() } else { BigInt::zero() })).collect();
            let mut bullet = HashMap::new();
            for m in &bullets {
                bullet.insert(m.clone(), bullet_quotient(&ints[m], &counts[m], plus, q)?);
            }
            let t = BigInt::from(q + 1) * self.apply(Correspondence::CircBullet, &bullet, c)?
                + self.apply(Correspondence::ICirc, &circ, c)?;
            totals.push(t);
        }
        Ok(NablaValues { totals, rhs })
    }
}

fn bullet_quotient(int: &BigInt, count: &BigInt, plus: u32, q: i64) -> Result<BigInt> {
    let num = int - neg_q_pow(q, plus) * count;
    let (quo, rem) = num.div_rem(&BigInt::from(q + 1));
    if !rem.is_zero() {
        return Err(Error::NonIntegral(format!("({int} - (-{q})^{plus}·{count}) / {}", q + 1)));
    }
    Ok(quo)
}

/// Kinds of vertex lattice containing a fixed full-rank lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VertexKind {
    /// self-dual `Λ∘ ⊇ L`
    Circ,
    /// `ϖΛ•` of maximal type with `L ⊆ Λ•`
    Bullet,
}

/// All vertex lattices of the given kind attached to an integral full-rank
/// `L`, by enumerating sublattices between `L` and its dual.
pub fn enumerate_vertices(l: &HermitianLattice, kind: VertexKind, cap: usize) -> Result<Vec<HermitianLattice>> {
    let t = l.typ()?;
    if t.0.iter().any(|&x| x < 0) {
        return Err(Error::NotIntegral);
    }
    let n = l.rank();
    let mut ambient = l.dual()?;
    let target = match kind {
        VertexKind::Circ => TypeVector::zeros(n),
        VertexKind::Bullet => {
            ambient.scale += 1;
            TypeVector(vec![-1; n])
        }
    };
    let gap = target.sum() - ambient.typ()?.sum();
    if gap < 0 || gap % 2 != 0 {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for c in sublattice_matrices(&l.ring, n, (gap / 2) as u32, cap)? {
        let sub = ambient.sublattice(&c)?;
        if sub.typ()? == target && sub.contains(l)? {
            if kind == VertexKind::Bullet {
                let mut m = sub;
                m.scale -= 1;
                out.push(m);
            } else {
                out.push(sub);
            }
        }
    }
    Ok(out)
}

/// `xs · U` for a random `U ∈ GL_r(O_F)`.
pub fn change_generators(ring: &LocalRing, xs: &Mat, seed: u64) -> Mat {
    use rand::Rng;
    let k = xs.first().map_or(0, |row| row.len());
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rand_elem = |rng: &mut ChaCha8Rng| ring.elem(rng.gen_range(0..ring.pm), rng.gen_range(0..ring.pm));
    let mut lower = matrix::identity(ring, k);
    let mut upper = matrix::identity(ring, k);
    for i in 0..k {
        for j in 0..i {
            lower[i][j] = rand_elem(&mut rng);
            upper[j][i] = rand_elem(&mut rng);
        }
        // a unit on the diagonal
        let mut u = rand_elem(&mut rng);
        while !ring.is_unit(u) {
            u = rand_elem(&mut rng);
        }
        upper[i][i] = u;
    }
    matrix::mul(ring, xs, &matrix::mul(ring, &lower, &upper))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lagrangian_counts() {
        // (q+1) and (q+1)(q^3+1) at q = 3
        let s1 = SplitSpace::new(3, 1).unwrap();
        assert_eq!(s1.bullets_around(&s1.base()).unwrap().len(), 4);
        let s2 = SplitSpace::new(3, 2).unwrap();
        assert_eq!(s2.bullets_around(&s2.base()).unwrap().len(), 112);
    }

    #[test]
    fn incidence_is_symmetric() {
        let s = SplitSpace::new(3, 1).unwrap();
        let base = s.base();
        for m in s.bullets_around(&base).unwrap() {
            assert_eq!(s.typ(&m).unwrap(), TypeVector(vec![1, 1]));
            let cs = s.circs_around(&m).unwrap();
            assert_eq!(cs.len(), 4);
            assert!(cs.contains(&base));
            for c in &cs {
                assert_eq!(s.typ(c).unwrap(), TypeVector(vec![0, 0]));
            }
        }
    }

    #[test]
    fn window_enumeration() {
        let ring = LocalRing::new(3, 10).unwrap();
        let l0 = crate::oracle::lattice::lattice_of_type(ring, &TypeVector(vec![0, 0]), None).unwrap();
        assert_eq!(enumerate_vertices(&l0, VertexKind::Circ, 1000).unwrap().len(), 1);
        let l = crate::oracle::lattice::lattice_of_type(ring, &TypeVector(vec![1, 1]), None).unwrap();
        assert_eq!(enumerate_vertices(&l, VertexKind::Circ, 1000).unwrap().len(), 4);
        let b = enumerate_vertices(&l, VertexKind::Bullet, 1000).unwrap();
        // L itself and, through each of the q+1 self-dual Λ∘ ⊇ L, q more
        assert_eq!(b.len(), 13);
        assert_eq!(b.iter().filter(|m| m.same_as(&l).unwrap()).count(), 1);
        let bad = crate::oracle::lattice::lattice_of_type(ring, &TypeVector(vec![0, -1]), None).unwrap();
        assert!(matches!(enumerate_vertices(&bad, VertexKind::Circ, 1000), Err(Error::NotIntegral)));
    }

    #[test]
    fn closed_forms() {
        let mut b = Building::new(3, 2).unwrap();
        let base = b.space.base();
        let xs = b.space.diagonal_generators(&TypeVector(vec![0, 0]), &[0, 0]).unwrap();
        assert_eq!(b.nabla_circ(&xs, &base, 0), BigInt::from(1));
        assert_eq!(b.nabla_circ(&xs, &base, 1), BigInt::from(-3));
        let far = b.space.diagonal_generators(&TypeVector(vec![0, 0]), &[1, 0]).unwrap();
        assert_eq!(b.nabla_circ(&far, &base, 0), BigInt::zero());
        let ms = b.bullets_of(&base).unwrap();
        let m = ms.iter().find(|m| b.space.index(m, &xs).unwrap() == 1).expect("index one");
        assert_eq!(b.c_bullet(&xs, m).unwrap(), BigInt::from(-8));
    }

    #[test]
    fn zero_function_and_missing_window() {
        let mut b = Building::new(3, 1).unwrap();
        let base = b.space.base();
        let ms = b.bullets_of(&base).unwrap();
        let zero: HashMap<Vertex, BigInt> = ms.iter().map(|m| (m.clone(), BigInt::zero())).collect();
        assert_eq!(b.apply(Correspondence::CircBullet, &zero, &base).unwrap(), BigInt::zero());
        let ones: HashMap<Vertex, BigInt> = ms.iter().map(|m| (m.clone(), BigInt::from(1))).collect();
        assert_eq!(b.apply(Correspondence::CircBullet, &ones, &base).unwrap(), BigInt::from(4));
        assert!(matches!(
            b.apply(Correspondence::ICirc, &ones, &base),
            Err(Error::WindowTooSmall(_))
        ));
    }
}
