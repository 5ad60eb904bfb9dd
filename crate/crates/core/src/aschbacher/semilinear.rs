//! Quadratic extension fields inside the centralizer algebra.

use serde::Serialize;

use super::AschError;
use crate::ff::Field;
use crate::gsp4core::SubgroupClosure;
use crate::linalg::{nullspace, Mat4};

/// Bound on centralizer elements visited.
pub const CENTRALIZER_CAP: u128 = 1 << 22;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemilinearStructure {
    /// `X` with `X^2 = a X + b`, the quadratic irreducible over the ground field.
    pub generator: Mat4,
    pub a: u64,
    pub b: u64,
    /// Dimension of the centralizer algebra of the subgroup that commutes with `X`.
    pub centralizer_dim: usize,
    /// Whether `X` commutes with all of the group (rather than an index-two subgroup).
    pub centralizes_whole_group: bool,
}

/// Basis of `{X : X g = g X for all g}`.
pub fn centralizer_basis(f: &Field, gens: &[Mat4]) -> Vec<Mat4> {
    let mut rows = Vec::new();
    for g in gens {
        for i in 0..4 {
            for j in 0..4 {
                // (Xg - gX)_{ij} = sum_k X_{ik} g_{kj} - g_{ik} X_{kj}
                let mut row = vec![0u64; 16];
                for k in 0..4 {
                    row[i * 4 + k] = f.add(row[i * 4 + k], g.0[k][j]);
                    row[k * 4 + j] = f.sub(row[k * 4 + j], g.0[i][k]);
                }
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return (0..16).map(unit).collect();
    }
    nullspace(f, &rows, 16)
        .into_iter()
        .map(|v| {
            let mut m = Mat4::zero();
            for k in 0..16 {
                m.0[k / 4][k % 4] = v[k];
            }
            m
        })
        .collect()
}

fn unit(k: usize) -> Mat4 {
    let mut m = Mat4::zero();
    m.0[k / 4][k % 4] = 1;
    m
}

/// `(u, v)` with `y = u x + v I`, for non-scalar `x`.
fn span_coords(f: &Field, x: &Mat4, y: &Mat4) -> Option<(u64, u64)> {
    if x.as_scalar().is_some() {
        return None;
    }
    let off = (0..16).map(|k| (k / 4, k % 4)).find(|&(i, j)| i != j && x.0[i][j] != 0);
    let u = match off {
        Some((i, j)) => f.div(y.0[i][j], x.0[i][j])?,
        None => {
            let j = (1..4).find(|&j| x.0[j][j] != x.0[0][0])?;
            f.div(f.sub(y.0[j][j], y.0[0][0]), f.sub(x.0[j][j], x.0[0][0]))?
        }
    };
    let v = f.sub(y.0[0][0], f.mul(u, x.0[0][0]));
    (*y == x.scale(f, u).add(f, &Mat4::scalar(v))).then_some((u, v))
}

/// `(a, b)` with `x^2 = a x + b` when `x` is non-scalar and quadratic.
fn quadratic_relation(f: &Field, x: &Mat4) -> Option<(u64, u64)> {
    span_coords(f, x, &x.mul(f, x))
}

/// Whether `x^2 - a x - b` has no root in the field.
pub fn quadratic_irreducible(f: &Field, a: u64, b: u64) -> bool {
    if f.characteristic() == 2 {
        if a == 0 {
            return false;
        }
        // x = a y turns it into y^2 + y + b / a^2; irreducible iff the
        // absolute trace of b / a^2 is nonzero.
        let c = f.div(b, f.mul(a, a)).unwrap();
        let mut t = 0;
        let mut p = c;
        for _ in 0..f.degree() {
            t = f.add(t, p);
            p = f.mul(p, p);
        }
        return t != 0;
    }
    let disc = f.add(f.mul(a, a), f.mul(f.from_int(4), b));
    f.sqrt_all(disc).is_empty()
}

/// First non-scalar `X` in the span of `basis` (coefficient vectors in
/// lexicographic order) generating a quadratic field and passing `extra`.
fn search(f: &Field, basis: &[Mat4], extra: &dyn Fn(&Mat4) -> bool) -> Result<Option<(Mat4, u64, u64)>, AschError> {
    let q = f.order() as u128;
    let d = basis.len() as u32;
    let total = q.checked_pow(d).unwrap_or(u128::MAX);
    if total > CENTRALIZER_CAP {
        return Err(AschError::CentralizerTooLarge { dim: basis.len(), q: f.order() });
    }
    let mut coeffs = vec![0u64; basis.len()];
    for idx in 1..total {
        let mut k = idx;
        for c in coeffs.iter_mut().rev() {
            *c = (k % q) as u64;
            k /= q;
        }
        let x = basis
            .iter()
            .zip(&coeffs)
            .fold(Mat4::zero(), |acc, (m, &c)| if c == 0 { acc } else { acc.add(f, &m.scale(f, c)) });
        if let Some((a, b)) = quadratic_relation(f, &x) {
            if quadratic_irreducible(f, a, b) && extra(&x) {
                return Ok(Some((x, a, b)));
            }
        }
    }
    Ok(None)
}

/// First monic irreducible `x^2 - a x - b` in raw order of `(a, b)`.
fn first_irreducible_quadratic(f: &Field) -> (u64, u64) {
    f.elements()
        .flat_map(|a| f.elements().map(move |b| (a, b)))
        .find(|&(a, b)| quadratic_irreducible(f, a, b))
        .expect("every finite field has a quadratic extension")
}

/// `g X g^-1` lies in `F[X]`.
fn normalizes(f: &Field, g: &Mat4, x: &Mat4) -> bool {
    let conj = g.mul(f, x).mul(f, &g.inverse(f).expect("invertible"));
    span_coords(f, x, &conj).is_some()
}

/// Checks a returned structure against the group generators.
pub fn verify_structure(f: &Field, gens: &[Mat4], s: &SemilinearStructure) -> bool {
    let x = &s.generator;
    let rel = x.mul(f, x) == x.scale(f, s.a).add(f, &Mat4::scalar(s.b));
    let irreducible = quadratic_irreducible(f, s.a, s.b);
    let compatible = if s.centralizes_whole_group {
        gens.iter().all(|g| g.mul(f, x) == x.mul(f, g))
    } else {
        gens.iter().all(|g| normalizes(f, g, x))
    };
    rel && irreducible && compatible
}

/// A matrix generating a copy of `F_{q^2}` centralized by the group or by a
/// subgroup of index two that the whole group normalizes.
pub fn find_semilinear_structure(g: &SubgroupClosure) -> Result<Option<SemilinearStructure>, AschError> {
    g.inner.require_complete()?;
    let f = g.field();
    let gens = g.generator_matrices();

    let basis = centralizer_basis(f, &gens);
    if basis.len() == 16 {
        // Scalar group: every quadratic subfield of M_4 is centralized.
        let (a, b) = first_irreducible_quadratic(f);
        let mut x = Mat4::zero();
        for blk in [0, 2] {
            x.0[blk][blk + 1] = b;
            x.0[blk + 1][blk] = 1;
            x.0[blk + 1][blk + 1] = a;
        }
        return Ok(Some(SemilinearStructure {
            generator: x,
            a,
            b,
            centralizer_dim: 16,
            centralizes_whole_group: true,
        }));
    }
    if let Some((x, a, b)) = search(f, &basis, &|_| true)? {
        return Ok(Some(SemilinearStructure {
            generator: x,
            a,
            b,
            centralizer_dim: basis.len(),
            centralizes_whole_group: true,
        }));
    }

    for sigma in g.inner.sign_characters() {
        let members = g.inner.kernel_of(sigma);
        let sub_gens = g.inner.subgroup_generators(&members);
        let sub_basis = centralizer_basis(f, &sub_gens);
        if sub_basis.len() == basis.len() {
            continue;
        }
        let found = search(f, &sub_basis, &|x| gens.iter().all(|h| normalizes(f, h, x)))?;
        if let Some((x, a, b)) = found {
            return Ok(Some(SemilinearStructure {
                generator: x,
                a,
                b,
                centralizer_dim: sub_basis.len(),
                centralizes_whole_group: false,
            }));
        }
    }
    Ok(None)
}
