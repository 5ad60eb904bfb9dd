//! Invariant quadratic forms in characteristic 2.

use serde::Serialize;

use super::AschError;
use crate::ff::Field;
use crate::gsp4core::{symplectic_basis, SubgroupClosure};
use crate::linalg::{nullspace, Mat4};

/// Monomials indexing quadratic form coefficients.
pub const MONOMIALS: [(usize, usize); 10] =
    [(0, 3), (1, 2), (0, 1), (0, 2), (1, 3), (2, 3), (0, 0), (1, 1), (2, 2), (3, 3)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OrthogonalType {
    Plus,
    Minus,
    None,
}

/// A quadratic form `Q(x) = sum coeffs[k] x_i x_j` over [`MONOMIALS`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuadraticForm {
    pub coeffs: [u64; 10],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrthogonalResult {
    pub kind: OrthogonalType,
    pub form: Option<QuadraticForm>,
    /// Dimension of the space of invariant quadratic forms.
    pub solution_dim: usize,
}

impl QuadraticForm {
    /// Upper-triangular matrix `U` with `Q(x) = x^T U x`.
    pub fn upper(&self) -> Mat4 {
        let mut u = Mat4::zero();
        for (&(i, j), &c) in MONOMIALS.iter().zip(&self.coeffs) {
            u.0[i][j] = c;
        }
        u
    }

    pub fn eval(&self, f: &Field, x: &[u64]) -> u64 {
        MONOMIALS.iter().zip(&self.coeffs).fold(0, |acc, (&(i, j), &c)| f.add(acc, f.mul(c, f.mul(x[i], x[j]))))
    }

    /// Polar form `B(x, y) = Q(x + y) - Q(x) - Q(y)` as a matrix.
    pub fn polar(&self, f: &Field) -> Mat4 {
        let u = self.upper();
        u.add(f, &u.transpose())
    }

    pub fn is_invariant(&self, f: &Field, g: &Mat4) -> bool {
        poly_coeffs(f, &g.transpose().mul(f, &self.upper()).mul(f, g)) == self.coeffs
    }
}

/// Coefficients of `x^T A x` over [`MONOMIALS`].
fn poly_coeffs(f: &Field, a: &Mat4) -> [u64; 10] {
    let mut out = [0u64; 10];
    for (k, &(i, j)) in MONOMIALS.iter().enumerate() {
        out[k] = if i == j { a.0[i][i] } else { f.add(a.0[i][j], a.0[j][i]) };
    }
    out
}

/// Absolute trace to the prime field (characteristic 2).
fn absolute_trace(f: &Field, x: u64) -> u64 {
    let mut t = 0;
    let mut p = x;
    for _ in 0..f.degree() {
        t = f.add(t, p);
        p = f.mul(p, p);
    }
    t
}

/// Plus or minus type of a nondegenerate form via the Arf invariant of a
/// symplectic basis of its polar form.
pub fn form_type(f: &Field, q: &QuadraticForm) -> OrthogonalType {
    let Ok(p) = symplectic_basis(f, &q.polar(f)) else {
        return OrthogonalType::None;
    };
    let col = |j: usize| p.col(j);
    // columns are (u1, u2, v2, v1)
    let arf = f.add(f.mul(q.eval(f, &col(0)), q.eval(f, &col(3))), f.mul(q.eval(f, &col(1)), q.eval(f, &col(2))));
    if absolute_trace(f, arf) == 0 {
        OrthogonalType::Plus
    } else {
        OrthogonalType::Minus
    }
}

/// Nonzero vectors plus zero where `Q` vanishes.
pub fn zero_count(f: &Field, q: &QuadraticForm) -> u64 {
    let n = f.order();
    (0..n.pow(4)).filter(|&k| q.eval(f, &[k % n, k / n % n, k / n / n % n, k / n / n / n]) == 0).count() as u64
}

/// Invariant quadratic forms of the generators, classified by type.
pub fn test_orthogonal_generators(f: &Field, gens: &[Mat4]) -> Result<OrthogonalResult, AschError> {
    if f.characteristic() != 2 {
        return Err(AschError::WrongCharacteristic(f.characteristic()));
    }
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for g in gens {
        let images: Vec<[u64; 10]> = (0..10)
            .map(|k| {
                let mut unit = [0u64; 10];
                unit[k] = 1;
                let u = QuadraticForm { coeffs: unit }.upper();
                let mut c = poly_coeffs(f, &g.transpose().mul(f, &u).mul(f, g));
                c[k] = f.sub(c[k], 1);
                c
            })
            .collect();
        for e in 0..10 {
            rows.push(images.iter().map(|c| c[e]).collect());
        }
    }
    let basis: Vec<Vec<u64>> = if rows.is_empty() {
        (0..10).map(|k| (0..10).map(|j| u64::from(j == k)).collect()).collect()
    } else {
        nullspace(f, &rows, 10)
    };
    let solution_dim = basis.len();
    let q = f.order() as u128;
    let total = q.checked_pow(solution_dim as u32).unwrap_or(u128::MAX).min(1 << 22);
    for idx in 1..total {
        let mut coeffs = [0u64; 10];
        let mut k = idx;
        for v in &basis {
            let c = (k % q) as u64;
            k /= q;
            for (x, &y) in coeffs.iter_mut().zip(v) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        let form = QuadraticForm { coeffs };
        if form.polar(f).det(f) != 0 {
            let kind = form_type(f, &form);
            return Ok(OrthogonalResult { kind, form: Some(form), solution_dim });
        }
    }
    Ok(OrthogonalResult { kind: OrthogonalType::None, form: None, solution_dim })
}

pub fn test_orthogonal(g: &SubgroupClosure) -> Result<OrthogonalResult, AschError> {
    g.inner.require_complete()?;
    test_orthogonal_generators(g.field(), &g.generator_matrices())
}
