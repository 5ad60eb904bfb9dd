//! Row reduction, null spaces and subspaces over a finite field, plus small
//! square matrices with entries in raw field encoding.

use std::cmp::Ordering;

use serde::Serialize;

use crate::ff::Field;

/// Reduces `rows` in place to reduced row echelon form; returns pivot columns.
pub fn rref(f: &Field, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| rows[i][c] != 0) else {
            continue;
        };
        rows.swap(r, p);
        let inv = f.inv(rows[r][c]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][c] != 0 {
                let factor = rows[i][c];
                for j in 0..ncols {
                    let v = f.mul(factor, rows[r][j]);
                    rows[i][j] = f.sub(rows[i][j], v);
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    pivots
}

/// Basis of `{x : A x = 0}` for `A` given by rows of length `ncols`.
pub fn nullspace(f: &Field, rows: &[Vec<u64>], ncols: usize) -> Vec<Vec<u64>> {
    let mut m: Vec<Vec<u64>> = rows.to_vec();
    let pivots = if m.is_empty() { Vec::new() } else { rref(f, &mut m) };
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![0u64; ncols];
            v[fc] = 1;
            for (row, &pc) in m.iter().zip(&pivots) {
                v[pc] = f.neg(row[fc]);
            }
            v
        })
        .collect()
}

pub fn rank(f: &Field, rows: &[Vec<u64>]) -> usize {
    let mut m = rows.to_vec();
    if m.is_empty() {
        return 0;
    }
    rref(f, &mut m).len()
}

/// A subspace of `F^n` stored by its reduced echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    pub basis: Vec<Vec<u64>>,
    pub pivots: Vec<usize>,
}

impl Subspace {
    pub fn span(f: &Field, vectors: &[Vec<u64>]) -> Subspace {
        let mut basis = vectors.to_vec();
        let pivots = if basis.is_empty() { Vec::new() } else { rref(f, &mut basis) };
        Subspace { basis, pivots }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn contains(&self, f: &Field, v: &[u64]) -> bool {
        let mut w = v.to_vec();
        for (row, &pc) in self.basis.iter().zip(&self.pivots) {
            let c = w[pc];
            if c != 0 {
                for (x, &r) in w.iter_mut().zip(row) {
                    *x = f.sub(*x, f.mul(c, r));
                }
            }
        }
        w.iter().all(|&x| x == 0)
    }

    /// Key compatible with the enumeration order of [`enumerate_subspaces`].
    pub fn order_key(&self) -> (Vec<usize>, Vec<u64>) {
        let free: Vec<u64> = self
            .basis
            .iter()
            .flat_map(|row| {
                let pivots = &self.pivots;
                row.iter().enumerate().filter(move |(c, _)| !pivots.contains(c)).map(|(_, &x)| x).collect::<Vec<_>>()
            })
            .collect();
        (self.pivots.clone(), free)
    }

    pub fn cmp_order(&self, other: &Subspace) -> Ordering {
        self.order_key().cmp(&other.order_key())
    }
}

/// Number of `k`-dimensional subspaces of `F_q^n` (Gaussian binomial), or
/// `None` on overflow.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let q = q as u128;
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num = num.checked_mul(q.checked_pow(n - i)?.checked_sub(1)?)?;
        den = den.checked_mul(q.checked_pow(i + 1)?.checked_sub(1)?)?;
    }
    Some(num / den)
}

/// Calls `visit` on every `k`-dimensional subspace of `F_q^n` in a fixed
/// order (pivot sets lexicographically, then free entries row-major in raw
/// order). Stops early when `visit` returns `false`.
pub fn enumerate_subspaces(f: &Field, n: usize, k: usize, mut visit: impl FnMut(&Subspace) -> bool) {
    let q = f.order();
    for pivots in combinations(n, k) {
        // free slots: in row i, columns c > pivots[i] that are not pivots
        let slots: Vec<(usize, usize)> = (0..k)
            .flat_map(|i| {
                let pv = pivots.clone();
                (pivots[i] + 1..n).filter(move |c| !pv.contains(c)).map(move |c| (i, c))
            })
            .collect();
        let mut digits = vec![0u64; slots.len()];
        loop {
            let mut basis = vec![vec![0u64; n]; k];
            for (i, &pc) in pivots.iter().enumerate() {
                basis[i][pc] = 1;
            }
            for (&(i, c), &d) in slots.iter().zip(&digits) {
                basis[i][c] = d;
            }
            let s = Subspace { basis, pivots: pivots.clone() };
            if !visit(&s) {
                return;
            }
            // Increment the last slot fastest so enumeration follows order_key.
            let mut carried_out = true;
            for d in digits.iter_mut().rev() {
                *d += 1;
                if *d < q {
                    carried_out = false;
                    break;
                }
                *d = 0;
            }
            if carried_out {
                break;
            }
        }
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// An `N x N` matrix with raw-encoded entries, row-major.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SqMat<const N: usize>(pub [[u64; N]; N]);

pub type Mat4 = SqMat<4>;
pub type Mat2 = SqMat<2>;

impl<const N: usize> SqMat<N> {
    pub fn zero() -> Self {
        SqMat([[0; N]; N])
    }

    pub fn identity() -> Self {
        Self::scalar(1)
    }

    pub fn scalar(a: u64) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.0[i][i] = a;
        }
        m
    }

    pub fn diag(entries: [u64; N]) -> Self {
        let mut m = Self::zero();
        for i in 0..N {
            m.0[i][i] = entries[i];
        }
        m
    }

    pub fn from_rows(rows: &[Vec<u64>]) -> Option<Self> {
        if rows.len() != N || rows.iter().any(|r| r.len() != N) {
            return None;
        }
        let mut m = Self::zero();
        for i in 0..N {
            m.0[i].copy_from_slice(&rows[i]);
        }
        Some(m)
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.0.iter().map(|r| r.to_vec()).collect()
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        (0..N).map(|i| self.0[i][j]).collect()
    }

    pub fn mul(&self, f: &Field, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for i in 0..N {
            for j in 0..N {
                let mut acc = 0;
                for k in 0..N {
                    let a = self.0[i][k];
                    if a != 0 {
                        acc = f.add(acc, f.mul(a, rhs.0[k][j]));
                    }
                }
                out.0[i][j] = acc;
            }
        }
        out
    }

    pub fn mul_vec(&self, f: &Field, v: &[u64]) -> Vec<u64> {
        (0..N).map(|i| (0..N).fold(0, |acc, k| f.add(acc, f.mul(self.0[i][k], v[k])))).collect()
    }

    pub fn add(&self, f: &Field, rhs: &Self) -> Self {
        let mut out = *self;
        for i in 0..N {
            for j in 0..N {
                out.0[i][j] = f.add(self.0[i][j], rhs.0[i][j]);
            }
        }
        out
    }

    pub fn scale(&self, f: &Field, a: u64) -> Self {
        let mut out = *self;
        for row in out.0.iter_mut() {
            for x in row.iter_mut() {
                *x = f.mul(*x, a);
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zero();
        for i in 0..N {
            for j in 0..N {
                out.0[i][j] = self.0[j][i];
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// `Some(a)` when the matrix equals `a * I`.
    pub fn as_scalar(&self) -> Option<u64> {
        let a = self.0[0][0];
        (*self == Self::scalar(a)).then_some(a)
    }

    pub fn pow(&self, f: &Field, mut e: u64) -> Self {
        let mut acc = Self::identity();
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(f, &b);
            }
            b = b.mul(f, &b);
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self, f: &Field) -> Option<Self> {
        let mut aug: Vec<Vec<u64>> = (0..N)
            .map(|i| {
                let mut r = self.0[i].to_vec();
                r.extend((0..N).map(|j| u64::from(i == j)));
                r
            })
            .collect();
        let pivots = rref(f, &mut aug);
        if pivots.len() < N || pivots[N - 1] != N - 1 {
            return None;
        }
        let mut out = Self::zero();
        for i in 0..N {
            out.0[i].copy_from_slice(&aug[i][N..]);
        }
        Some(out)
    }

    pub fn det(&self, f: &Field) -> u64 {
        principal_minor(f, &self.0, &(0..N).collect::<Vec<_>>())
    }

    /// Coefficients `[e_1, ..., e_N]` with characteristic polynomial
    /// `x^N - e_1 x^{N-1} + e_2 x^{N-2} - ...`; `e_k` is the sum of the
    /// principal `k x k` minors, valid in every characteristic.
    pub fn char_coeffs(&self, f: &Field) -> Vec<u64> {
        (1..=N)
            .map(|k| combinations(N, k).iter().fold(0, |acc, idx| f.add(acc, principal_minor(f, &self.0, idx))))
            .collect()
    }

    /// Smallest `n >= 1` with `self^n = I`; `None` past `limit`.
    pub fn order(&self, f: &Field, limit: u64) -> Option<u64> {
        let mut x = *self;
        for n in 1..=limit {
            if x.is_identity() {
                return Some(n);
            }
            x = x.mul(f, self);
        }
        None
    }

    /// Multiplicative order of the image in `PGL_N`: smallest `n` with
    /// `self^n` scalar.
    pub fn projective_order(&self, f: &Field, limit: u64) -> Option<u64> {
        let mut x = *self;
        for n in 1..=limit {
            if x.as_scalar().is_some() {
                return Some(n);
            }
            x = x.mul(f, self);
        }
        None
    }
}

/// Determinant of the principal submatrix on `idx` by cofactor expansion.
fn principal_minor<const N: usize>(f: &Field, m: &[[u64; N]; N], idx: &[usize]) -> u64 {
    fn det_rec<const N: usize>(f: &Field, m: &[[u64; N]; N], rows: &[usize], cols: &[usize]) -> u64 {
        if rows.len() == 1 {
            return m[rows[0]][cols[0]];
        }
        let r0 = rows[0];
        let mut acc = 0;
        for (j, &c) in cols.iter().enumerate() {
            let a = m[r0][c];
            if a == 0 {
                continue;
            }
            let sub_cols: Vec<usize> = cols.iter().copied().filter(|&x| x != c).collect();
            let minor = det_rec(f, m, &rows[1..], &sub_cols);
            let term = f.mul(a, minor);
            acc = if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }
    det_rec(f, m, idx, idx)
}

/// Serialized as nested lists of raw-encoded entries.
impl<const N: usize> Serialize for SqMat<N> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;

    #[test]
    fn subspace_counts_match_gaussian_binomial() {
        for &(l, r) in &[(2u64, 1u32), (3, 1), (2, 2)] {
            let f = make_field(l, r, None).unwrap();
            for k in 1..=3 {
                let mut n = 0u128;
                let mut last: Option<Subspace> = None;
                enumerate_subspaces(&f, 4, k, |s| {
                    if let Some(prev) = &last {
                        assert_eq!(prev.cmp_order(s), Ordering::Less);
                    }
                    last = Some(s.clone());
                    n += 1;
                    true
                });
                assert_eq!(Some(n), gaussian_binomial(4, k as u32, f.order()));
            }
        }
    }

    #[test]
    fn inverse_and_charpoly() {
        let f = make_field(5, 1, None).unwrap();
        let m = Mat4::from_rows(&[vec![1, 2, 0, 0], vec![3, 4, 0, 1], vec![0, 0, 2, 0], vec![1, 0, 0, 2]]).unwrap();
        let inv = m.inverse(&f).unwrap();
        assert!(m.mul(&f, &inv).is_identity());
        let e = m.char_coeffs(&f);
        assert_eq!(e[0], f.from_int(9));
        assert_eq!(e[3], m.det(&f));
        // Cayley-Hamilton.
        let m2 = m.mul(&f, &m);
        let m3 = m2.mul(&f, &m);
        let m4 = m3.mul(&f, &m);
        let mut acc = m4;
        acc = acc.add(&f, &m3.scale(&f, f.neg(e[0])));
        acc = acc.add(&f, &m2.scale(&f, e[1]));
        acc = acc.add(&f, &m.scale(&f, f.neg(e[2])));
        acc = acc.add(&f, &Mat4::scalar(e[3]));
        assert_eq!(acc, Mat4::zero());
    }

    #[test]
    fn nullspace_dimension() {
        let f = make_field(3, 1, None).unwrap();
        let rows = vec![vec![1, 1, 0, 0], vec![0, 0, 1, 2]];
        let ns = nullspace(&f, &rows, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for r in &rows {
                let dot = r.iter().zip(v).fold(0, |a, (&x, &y)| f.add(a, f.mul(x, y)));
                assert_eq!(dot, 0);
            }
        }
    }
}
