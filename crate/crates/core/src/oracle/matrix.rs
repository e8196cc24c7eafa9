//! Dense matrices over the truncated local ring: Smith and Hermite forms.

use super::local::{LocalElem, LocalRing};
use crate::error::{Error, Result};

/// Row-major matrix.
pub type Mat = Vec<Vec<LocalElem>>;

pub fn zeros(rows: usize, cols: usize) -> Mat {
    vec![vec![LocalElem::ZERO; cols]; rows]
}

pub fn identity(ring: &LocalRing, n: usize) -> Mat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = ring.one();
    }
    m
}

pub fn diag(ring: &LocalRing, pows: &[u32]) -> Mat {
    let mut m = zeros(pows.len(), pows.len());
    for (i, &k) in pows.iter().enumerate() {
        m[i][i] = ring.p_pow(k);
    }
    m
}

pub fn mul(ring: &LocalRing, a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    let mut out = zeros(n, m);
    for i in 0..n {
        for l in 0..k {
            let x = a[i][l];
            if ring.is_zero(x) {
                continue;
            }
            for j in 0..m {
                out[i][j] = ring.add(out[i][j], ring.mul(x, b[l][j]));
            }
        }
    }
    out
}

pub fn transpose(a: &Mat) -> Mat {
    if a.is_empty() {
        return vec![];
    }
    (0..a[0].len()).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn conj(ring: &LocalRing, a: &Mat) -> Mat {
    a.iter().map(|row| row.iter().map(|&x| ring.conj(x)).collect()).collect()
}

pub fn scale(ring: &LocalRing, a: &Mat, c: LocalElem) -> Mat {
    a.iter().map(|row| row.iter().map(|&x| ring.mul(x, c)).collect()).collect()
}

/// Reinterprets the entries at another precision (entries are reduced).
pub fn recast(to: &LocalRing, a: &Mat) -> Mat {
    a.iter().map(|row| row.iter().map(|x| to.elem(x.a, x.b)).collect()).collect()
}

/// `B^T G B̄`: the Gram matrix of the columns of `b`.
pub fn gram_of(ring: &LocalRing, g: &Mat, b: &Mat) -> Mat {
    mul(ring, &mul(ring, &transpose(b), g), &conj(ring, b))
}

fn min_val_pos(ring: &LocalRing, a: &Mat, from: usize) -> Option<(usize, usize, u32)> {
    let mut best: Option<(usize, usize, u32)> = None;
    for (i, row) in a.iter().enumerate().skip(from) {
        for (j, &x) in row.iter().enumerate().skip(from) {
            let v = ring.val(x);
            if v < ring.m && best.map_or(true, |(_, _, bv)| v < bv) {
                best = Some((i, j, v));
                if v == 0 {
                    return best;
                }
            }
        }
    }
    best
}

/// Smith form `P A Q = diag(p^{v_i})`. Returns the valuations, in pivot
/// order (nondecreasing), and `Q`. Fails if the matrix is singular at this
/// precision.
pub fn smith(ring: &LocalRing, a: &Mat) -> Result<(Vec<u32>, Mat)> {
    let mut a = a.clone();
    let n = a.len();
    let m = if n == 0 { 0 } else { a[0].len() };
    let mut q = identity(ring, m);
    let mut vals = Vec::new();
    for k in 0..n.min(m) {
        let Some((pi, pj, v)) = min_val_pos(ring, &a, k) else {
            return Err(Error::PrecisionLoss(format!("matrix is singular mod p^{}", ring.m)));
        };
        a.swap(k, pi);
        for row in a.iter_mut() {
            row.swap(k, pj);
        }
        for row in q.iter_mut() {
            row.swap(k, pj);
        }
        let (_, unit) = ring.split(a[k][k]);
        let uinv = ring.inv(unit)?;
        // clear column k below the pivot with row operations
        for i in k + 1..n {
            if ring.is_zero(a[i][k]) {
                continue;
            }
            let f = ring.mul(ring.div_p_pow(a[i][k], v), uinv);
            for j in k..m {
                a[i][j] = ring.sub(a[i][j], ring.mul(f, a[k][j]));
            }
        }
        // clear row k right of the pivot with column operations
        for j in k + 1..m {
            if ring.is_zero(a[k][j]) {
                continue;
            }
            let f = ring.mul(ring.div_p_pow(a[k][j], v), uinv);
            for i in k..n {
                a[i][j] = ring.sub(a[i][j], ring.mul(f, a[i][k]));
            }
            for row in q.iter_mut() {
                row[j] = ring.sub(row[j], ring.mul(f, row[k]));
            }
        }
        vals.push(v);
    }
    Ok((vals, q))
}

/// Valuations of the elementary divisors, sorted decreasingly.
pub fn elementary_valuations(ring: &LocalRing, a: &Mat) -> Result<Vec<u32>> {
    let (mut v, _) = smith(ring, a)?;
    v.sort_unstable_by(|x, y| y.cmp(x));
    Ok(v)
}

/// Rank of the reduction mod ϖ.
pub fn rank_mod_p(ring: &LocalRing, a: &Mat) -> usize {
    let f = ring.residue();
    let mut a = recast(&f, a);
    let n = a.len();
    let m = if n == 0 { 0 } else { a[0].len() };
    let mut rank = 0;
    for col in 0..m {
        let Some(piv) = (rank..n).find(|&i| !f.is_zero(a[i][col])) else { continue };
        a.swap(rank, piv);
        let inv = f.inv(a[rank][col]).expect("nonzero in a field");
        for i in 0..n {
            if i != rank && !f.is_zero(a[i][col]) {
                let c = f.mul(a[i][col], inv);
                for j in col..m {
                    a[i][j] = f.sub(a[i][j], f.mul(c, a[rank][j]));
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Canonical column Hermite form of the column span of an `r x m` matrix of
/// rank `r`: upper triangular, diagonal `p^{a_i}`, entries right of the
/// diagonal in row `i` reduced modulo `p^{a_i}`.
pub fn hnf(ring: &LocalRing, a: &Mat) -> Result<(Mat, Vec<u32>)> {
    let r = a.len();
    let mut cols: Vec<Vec<LocalElem>> = transpose(a);
    let mut out: Vec<Vec<LocalElem>> = vec![vec![]; r];
    let mut diag = vec![0u32; r];
    for i in (0..r).rev() {
        let piv = (0..cols.len())
            .filter(|&j| !ring.is_zero(cols[j][i]))
            .min_by_key(|&j| ring.val(cols[j][i]))
            .ok_or_else(|| Error::PrecisionLoss(format!("column span has rank < {r} mod p^{}", ring.m)))?;
        let mut pc = cols.swap_remove(piv);
        let (v, unit) = ring.split(pc[i]);
        if v + 1 >= ring.m {
            return Err(Error::PrecisionLoss(format!("pivot valuation {v} too close to precision {}", ring.m)));
        }
        let uinv = ring.inv(unit)?;
        for x in pc.iter_mut() {
            *x = ring.mul(*x, uinv);
        }
        for c in cols.iter_mut() {
            if ring.is_zero(c[i]) {
                continue;
            }
            let f = ring.div_p_pow(c[i], v);
            for k in 0..=i {
                c[k] = ring.sub(c[k], ring.mul(f, pc[k]));
            }
        }
        diag[i] = v;
        out[i] = pc;
    }
    if cols.iter().any(|c| c.iter().any(|&x| !ring.is_zero(x))) {
        return Err(Error::PrecisionLoss("leftover columns after Hermite reduction".into()));
    }
    // out[i] is column i; reduce above-diagonal entries, lowest row first
    for j in 0..r {
        for i in (0..j).rev() {
            let x = out[j][i];
            let rep = ring.reduce_mod(x, diag[i]);
            let f = ring.div_p_pow(ring.sub(x, rep), diag[i]);
            if ring.is_zero(f) {
                continue;
            }
            let ci = out[i].clone();
            for k in 0..=i {
                out[j][k] = ring.sub(out[j][k], ring.mul(f, ci[k]));
            }
        }
    }
    // exact diagonal p^{a_i} after scaling by units
    for (i, col) in out.iter().enumerate() {
        debug_assert_eq!(col[i], ring.p_pow(diag[i]));
    }
    Ok((transpose(&out), diag))
}

/// Whether column `x` lies in the span of the upper-triangular Hermite
/// basis `h` with diagonal valuations `diag`.
pub fn in_span(ring: &LocalRing, h: &Mat, diag: &[u32], x: &[LocalElem]) -> bool {
    let r = h.len();
    let mut x = x.to_vec();
    for i in (0..r).rev() {
        if ring.is_zero(x[i]) {
            continue;
        }
        if ring.val(x[i]) < diag[i] {
            return false;
        }
        let c = ring.div_p_pow(x[i], diag[i]);
        for k in 0..=i {
            x[k] = ring.sub(x[k], ring.mul(c, h[k][i]));
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smith_of_diagonal() {
        let r = LocalRing::new(3, 8).unwrap();
        let a = diag(&r, &[2, 1]);
        assert_eq!(elementary_valuations(&r, &a).unwrap(), vec![2, 1]);
        let mut b = a.clone();
        b[0][1] = r.int(3);
        b[1][0] = r.int(3);
        // [[9,3],[3,3]] has det 18 (val 2) and content 3
        assert_eq!(elementary_valuations(&r, &b).unwrap(), vec![1, 1]);
    }

    #[test]
    fn hermite_is_canonical() {
        let r = LocalRing::new(3, 8).unwrap();
        let a = vec![vec![r.int(3), r.elem(1, 2)], vec![r.int(0), r.int(9)]];
        let (h, d) = hnf(&r, &a).unwrap();
        // mixing columns with a unimodular matrix gives the same form
        let u = vec![vec![r.elem(2, 1), r.int(1)], vec![r.int(5), r.int(1)]];
        let det = r.sub(r.mul(u[0][0], u[1][1]), r.mul(u[0][1], u[1][0]));
        assert!(r.is_unit(det));
        let (h2, d2) = hnf(&r, &mul(&r, &a, &u)).unwrap();
        assert_eq!((h, d), (h2, d2));
    }

    #[test]
    fn rank_reduction() {
        let r = LocalRing::new(5, 4).unwrap();
        assert_eq!(rank_mod_p(&r, &diag(&r, &[0, 1, 0])), 2);
        assert_eq!(rank_mod_p(&r, &identity(&r, 3)), 3);
    }
}
