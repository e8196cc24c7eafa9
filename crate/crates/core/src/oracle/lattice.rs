//! Hermitian lattices held at finite ϖ-adic precision.

use super::local::{LocalElem, LocalRing};
use super::matrix::{self, Mat};
use crate::error::{Error, Result};
use crate::typ::TypeVector;

/// `p^{-scale} · span(columns of basis)` inside `F^r` with the Hermitian
/// form `⟨x, y⟩ = p^{-form_shift} x^T G ȳ`.
#[derive(Clone, Debug)]
pub struct HermitianLattice {
    pub ring: LocalRing,
    pub form: Mat,
    pub form_shift: i32,
    pub basis: Mat,
    pub scale: i32,
}

impl HermitianLattice {
    pub fn new(ring: LocalRing, form: Mat, form_shift: i32, basis: Mat, scale: i32) -> Result<Self> {
        let r = form.len();
        if form.iter().any(|row| row.len() != r) || basis.len() != r || basis.iter().any(|row| row.len() != r) {
            return Err(Error::InvalidSpec("form and basis must be square of the same size".into()));
        }
        for i in 0..r {
            for j in 0..r {
                if form[i][j] != ring.conj(form[j][i]) {
                    return Err(Error::InvalidSpec("form is not conjugate-symmetric".into()));
                }
            }
        }
        Ok(HermitianLattice { ring, form, form_shift, basis, scale })
    }

    /// The standard lattice `O_F^r` for the Gram matrix `gram` (entries may be
    /// given with a common power `p^{-shift}` pulled out).
    pub fn standard(ring: LocalRing, gram: Mat, shift: i32) -> Result<Self> {
        let r = gram.len();
        Self::new(ring, gram, shift, matrix::identity(&ring, r), 0)
    }

    pub fn rank(&self) -> usize {
        self.form.len()
    }

    /// Gram matrix of the basis, without the `p^{-form_shift - 2 scale}` factor.
    pub fn raw_gram(&self) -> Mat {
        matrix::gram_of(&self.ring, &self.form, &self.basis)
    }

    /// Sorted decreasing elementary divisor valuations of the Gram matrix.
    pub fn typ(&self) -> Result<TypeVector> {
        let vals = matrix::elementary_valuations(&self.ring, &self.raw_gram())?;
        if let Some(&top) = vals.first() {
            if top + 1 >= self.ring.m {
                return Err(Error::PrecisionLoss(format!("valuation {top} at precision {}", self.ring.m)));
            }
        }
        let shift = self.form_shift + 2 * self.scale;
        Ok(TypeVector(vals.into_iter().map(|v| v as i32 - shift).collect()))
    }

    /// `Λ^∨ = {x : ⟨x, Λ⟩ ⊆ O_F}`.
    pub fn dual(&self) -> Result<HermitianLattice> {
        let ring = &self.ring;
        // rows of A are the functionals x -> (x^T G b̄_j)
        let a = matrix::transpose(&matrix::mul(ring, &self.form, &matrix::conj(ring, &self.basis)));
        let (vals, q) = matrix::smith(ring, &a)?;
        let d = *vals.iter().max().unwrap_or(&0);
        if d + 1 >= ring.m {
            return Err(Error::PrecisionLoss(format!("dual needs valuation {d} at precision {}", ring.m)));
        }
        let mut basis = q;
        for row in basis.iter_mut() {
            for (j, x) in row.iter_mut().enumerate() {
                *x = ring.mul(*x, ring.p_pow(d - vals[j]));
            }
        }
        let scale = d as i32 - self.scale - self.form_shift;
        HermitianLattice::new(*ring, self.form.clone(), self.form_shift, basis, scale)
    }

    /// Canonical key: the Hermite form after moving to scale `at`.
    pub fn key_at(&self, at: i32) -> Result<(Mat, Vec<u32>)> {
        let k = at - self.scale;
        if k < 0 {
            return Err(Error::InvalidSpec("cannot lower the scale".into()));
        }
        let b = matrix::scale(&self.ring, &self.basis, self.ring.p_pow(k as u32));
        matrix::hnf(&self.ring, &b)
    }

    pub fn same_as(&self, other: &HermitianLattice) -> Result<bool> {
        let at = self.scale.max(other.scale);
        Ok(self.key_at(at)? == other.key_at(at)?)
    }

    pub fn contains(&self, other: &HermitianLattice) -> Result<bool> {
        let at = self.scale.max(other.scale);
        let (h, d) = self.key_at(at)?;
        let ob = matrix::scale(&self.ring, &other.basis, self.ring.p_pow((at - other.scale) as u32));
        let cols = matrix::transpose(&ob);
        Ok(cols.iter().all(|c| matrix::in_span(&self.ring, &h, &d, c)))
    }

    /// Whether every column of `p^{-scale} · cols` lies in the lattice.
    pub fn contains_vectors(&self, cols: &Mat, scale: i32) -> Result<bool> {
        let at = self.scale.max(scale);
        let (h, d) = self.key_at(at)?;
        let v = matrix::scale(&self.ring, cols, self.ring.p_pow((at - scale) as u32));
        Ok(matrix::transpose(&v).iter().all(|c| matrix::in_span(&self.ring, &h, &d, c)))
    }

    /// The sublattice spanned by `basis · c`.
    pub fn sublattice(&self, c: &Mat) -> Result<HermitianLattice> {
        let b = matrix::mul(&self.ring, &self.basis, c);
        HermitianLattice::new(self.ring, self.form.clone(), self.form_shift, b, self.scale)
    }

    /// Same lattice at precision `m`.
    pub fn at_precision(&self, m: u32) -> Result<HermitianLattice> {
        let ring = self.ring.with_precision(m)?;
        HermitianLattice::new(
            ring,
            matrix::recast(&ring, &self.form),
            self.form_shift,
            matrix::recast(&ring, &self.basis),
            self.scale,
        )
    }
}

/// `O_F^r` with Gram `diag(p^{f_i})`. In the unramified case every unit is a
/// norm, so this one Gram matrix realizes every type and no unit twist is
/// needed; `delta` only restricts the discriminant parity.
pub fn lattice_of_type(ring: LocalRing, f: &TypeVector, delta: Option<u8>) -> Result<HermitianLattice> {
    if let Some(d) = delta {
        if f.sum().rem_euclid(2) != d as i64 % 2 {
            return Err(Error::NoSuchType(format!("{f} in class {d}")));
        }
    }
    let k = (-f.0.iter().copied().min().unwrap_or(0)).max(0);
    let pows: Vec<u32> = f.0.iter().map(|&x| (x + k) as u32).collect();
    HermitianLattice::standard(ring, matrix::diag(&ring, &pows), k)
}

/// All column Hermite forms of full-rank sublattices of `O_F^r` of
/// colength `n`; each sublattice appears exactly once.
pub fn sublattice_matrices(ring: &LocalRing, r: usize, n: u32, cap: usize) -> Result<Vec<Mat>> {
    let q = (ring.p * ring.p) as u128;
    let mut total: u128 = 0;
    let diags = compositions_u32(r, n);
    for a in &diags {
        let exp: u32 = a.iter().enumerate().map(|(i, &ai)| ai * (r - 1 - i) as u32).sum();
        total += q.pow(exp);
    }
    if total > cap as u128 {
        return Err(Error::CapExceeded(format!("{total} sublattices of colength {n} in rank {r}")));
    }
    let mut out = Vec::with_capacity(total as usize);
    for a in diags {
        let mut base = matrix::zeros(r, r);
        for i in 0..r {
            base[i][i] = ring.p_pow(a[i]);
        }
        let slots: Vec<(usize, usize)> = (0..r).flat_map(|i| (i + 1..r).map(move |j| (i, j))).collect();
        fill(ring, &a, &slots, 0, &mut base, &mut out);
    }
    Ok(out)
}

fn fill(ring: &LocalRing, a: &[u32], slots: &[(usize, usize)], k: usize, cur: &mut Mat, out: &mut Vec<Mat>) {
    if k == slots.len() {
        out.push(cur.clone());
        return;
    }
    let (i, j) = slots[k];
    for x in ring.residues(a[i]).collect::<Vec<LocalElem>>() {
        cur[i][j] = x;
        fill(ring, a, slots, k + 1, cur, out);
    }
    cur[i][j] = LocalElem::ZERO;
}

fn compositions_u32(r: usize, n: u32) -> Vec<Vec<u32>> {
    crate::phi::compositions(r, n)
}

/// Sublattices `L ⊆ Λ` with `Λ/L ≅ ⊕ O_F/ϖ^{shape_j}` (shape entries > 0).
pub fn enumerate_sublattices(lat: &HermitianLattice, shape: &[u32], cap: usize) -> Result<Vec<HermitianLattice>> {
    let r = lat.rank();
    let mut want: Vec<u32> = shape.iter().copied().filter(|&x| x > 0).collect();
    want.sort_unstable_by(|a, b| b.cmp(a));
    if want.len() > r {
        return Ok(vec![]);
    }
    let n: u32 = want.iter().sum();
    let mut out = Vec::new();
    for c in sublattice_matrices(&lat.ring, r, n, cap)? {
        let mut got: Vec<u32> = matrix::elementary_valuations(&lat.ring, &c)?.into_iter().filter(|&x| x > 0).collect();
        got.sort_unstable_by(|a, b| b.cmp(a));
        if got == want {
            out.push(lat.sublattice(&c)?);
        }
    }
    Ok(out)
}
