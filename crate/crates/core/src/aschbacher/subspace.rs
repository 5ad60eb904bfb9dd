//! Invariant subspaces and stabilized decompositions by exhaustive scan.
//!
//! When the group contains an element with four distinct eigenvalues in the
//! ground field, every invariant subspace is a sum of its eigenlines, so only
//! those sums are tested; the answer is still exhaustive.

use serde::Serialize;

use super::AschError;
use crate::ff::Field;
use crate::gsp4core::{standard_form, SubgroupClosure, SymplecticForm};
use crate::linalg::{enumerate_subspaces, gaussian_binomial, nullspace, rank, Mat4, Subspace};

/// Default bound on the number of subspaces a brute-force scan may visit.
pub const DEFAULT_SUBSPACE_CAP: u128 = 2_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Singularity {
    TotallySingular,
    NonSingular,
    Neither,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantSubspace {
    pub basis: Vec<Vec<u64>>,
    pub kind: Singularity,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub v1: Vec<Vec<u64>>,
    pub v2: Vec<Vec<u64>>,
}

pub fn is_invariant(f: &Field, gens: &[Mat4], w: &Subspace) -> bool {
    gens.iter().all(|g| w.basis.iter().all(|b| w.contains(f, &g.mul_vec(f, b))))
}

pub fn singularity(f: &Field, basis: &[Vec<u64>]) -> Singularity {
    let form = SymplecticForm { matrix: standard_form(f) };
    let gram: Vec<Vec<u64>> = basis.iter().map(|x| basis.iter().map(|y| form.pair(f, x, y)).collect()).collect();
    match rank(f, &gram) {
        0 => Singularity::TotallySingular,
        r if r == basis.len() => Singularity::NonSingular,
        _ => Singularity::Neither,
    }
}

/// Roots in `F` of `x^4 - e1 x^3 + e2 x^2 - e3 x + e4`, by evaluation.
fn split_roots(f: &Field, e: &[u64]) -> Vec<u64> {
    f.elements()
        .filter(|&x| {
            let x2 = f.mul(x, x);
            let x3 = f.mul(x2, x);
            let v = f.add(f.sub(f.mul(x3, x), f.mul(e[0], x3)), f.sub(f.mul(e[1], x2), f.sub(f.mul(e[2], x), e[3])));
            v == 0
        })
        .collect()
}

/// Eigenvectors of some element with four distinct eigenvalues in `F`.
fn eigenbasis(f: &Field, sample: &[Mat4]) -> Option<Vec<Vec<u64>>> {
    let q = f.order();
    if q < 5 {
        return None;
    }
    let budget = (40_000_000 / q).clamp(1, 4096) as usize;
    for x in sample.iter().take(budget) {
        let roots = split_roots(f, &x.char_coeffs(f));
        if roots.len() == 4 {
            let vecs = roots
                .iter()
                .map(|&lam| {
                    let shifted = x.add(f, &Mat4::scalar(f.neg(lam)));
                    nullspace(f, &shifted.rows(), 4).remove(0)
                })
                .collect();
            return Some(vecs);
        }
    }
    None
}

/// All (or the first) `gens`-invariant subspaces of dimension `dim`, in
/// enumeration order.
pub fn invariant_subspaces(
    f: &Field,
    gens: &[Mat4],
    sample: &[Mat4],
    dim: usize,
    cap: u128,
    first_only: bool,
) -> Result<Vec<Subspace>, AschError> {
    if let Some(eig) = eigenbasis(f, sample) {
        let mut found: Vec<Subspace> = (0u32..16)
            .filter(|m| m.count_ones() as usize == dim)
            .map(|m| {
                let vs: Vec<Vec<u64>> = (0..4).filter(|i| m >> i & 1 == 1).map(|i| eig[i].clone()).collect();
                Subspace::span(f, &vs)
            })
            .filter(|w| is_invariant(f, gens, w))
            .collect();
        found.sort_by(|a, b| a.cmp_order(b));
        if first_only {
            found.truncate(1);
        }
        return Ok(found);
    }
    let count = gaussian_binomial(4, dim as u32, f.order()).unwrap_or(u128::MAX);
    if count > cap {
        return Err(AschError::TooManySubspaces { count, cap });
    }
    let mut found = Vec::new();
    enumerate_subspaces(f, 4, dim, |w| {
        if is_invariant(f, gens, w) {
            found.push(w.clone());
            return !first_only;
        }
        true
    });
    Ok(found)
}

/// First invariant subspace of the given dimension, or `None` (a proof of
/// non-existence, since the scan is exhaustive).
pub fn find_invariant_subspace(
    g: &SubgroupClosure,
    dim: usize,
    cap: u128,
) -> Result<Option<InvariantSubspace>, AschError> {
    g.inner.require_complete()?;
    if !(1..=3).contains(&dim) {
        return Err(AschError::BadDimension(dim));
    }
    let f = g.field();
    let found = invariant_subspaces(f, &g.generator_matrices(), g.elements(), dim, cap, true)?;
    Ok(found.into_iter().next().map(|w| InvariantSubspace { kind: singularity(f, &w.basis), basis: w.basis }))
}

/// True when no line, plane or 3-space is invariant.
pub fn is_irreducible(g: &SubgroupClosure, cap: u128) -> Result<bool, AschError> {
    for dim in 1..=3 {
        if find_invariant_subspace(g, dim, cap)?.is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn complementary(f: &Field, a: &Subspace, b: &Subspace) -> bool {
    let mut rows = a.basis.clone();
    rows.extend(b.basis.iter().cloned());
    rank(f, &rows) == 4
}

fn image(f: &Field, g: &Mat4, w: &Subspace) -> Subspace {
    let vs: Vec<Vec<u64>> = w.basis.iter().map(|b| g.mul_vec(f, b)).collect();
    Subspace::span(f, &vs)
}

/// Checks that every generator maps `{v1, v2}` to itself.
pub fn permutes_pair(f: &Field, gens: &[Mat4], v1: &Subspace, v2: &Subspace) -> bool {
    complementary(f, v1, v2)
        && gens.iter().all(|g| {
            let (a, b) = (image(f, g, v1), image(f, g, v2));
            (&a == v1 && &b == v2) || (&a == v2 && &b == v1)
        })
}

/// A pair of complementary planes permuted by the group, or `None`.
///
/// The stabilizer of `V1` has index one or two. Index one means two
/// complementary invariant planes; index two means `V1` is invariant under
/// the kernel of a sign character and `V2 = g V1` for `g` outside it.
pub fn find_imprimitivity(g: &SubgroupClosure, cap: u128) -> Result<Option<Decomposition>, AschError> {
    g.inner.require_complete()?;
    let f = g.field();
    let gens = g.generator_matrices();
    let witness = |v1: &Subspace, v2: &Subspace| {
        let (v1, v2) = if v1.cmp_order(v2).is_le() { (v1, v2) } else { (v2, v1) };
        Decomposition { v1: v1.basis.clone(), v2: v2.basis.clone() }
    };

    let planes = invariant_subspaces(f, &gens, g.elements(), 2, cap, false)?;
    for (i, a) in planes.iter().enumerate() {
        for b in &planes[i + 1..] {
            if complementary(f, a, b) {
                return Ok(Some(witness(a, b)));
            }
        }
    }

    for sigma in g.inner.sign_characters() {
        let members = g.inner.kernel_of(sigma);
        let sub_gens = g.inner.subgroup_generators(&members);
        let sample: Vec<Mat4> = members.iter().map(|&i| g.elements()[i]).collect();
        let outside = gens[sigma.trailing_zeros() as usize];
        for v1 in invariant_subspaces(f, &sub_gens, &sample, 2, cap, false)? {
            let v2 = image(f, &outside, &v1);
            if permutes_pair(f, &gens, &v1, &v2) {
                return Ok(Some(witness(&v1, &v2)));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use crate::gsp4core::{close_subgroup, sp4_generators, GroupElement, DEFAULT_CLOSURE_CAP};

    #[test]
    fn trivial_group_returns_first_line() {
        let f = make_field(3, 1, None).unwrap();
        let g = close_subgroup(&f, &[], 10);
        let w = find_invariant_subspace(&g, 1, DEFAULT_SUBSPACE_CAP).unwrap().unwrap();
        assert_eq!(w.basis, vec![vec![1, 0, 0, 0]]);
        assert_eq!(w.kind, Singularity::TotallySingular);
    }

    #[test]
    fn sp4_2_is_irreducible_and_primitive() {
        let f = make_field(2, 1, None).unwrap();
        let g = close_subgroup(&f, &sp4_generators(&f), DEFAULT_CLOSURE_CAP);
        for dim in 1..=3 {
            assert_eq!(find_invariant_subspace(&g, dim, DEFAULT_SUBSPACE_CAP).unwrap(), None);
        }
        assert_eq!(find_imprimitivity(&g, DEFAULT_SUBSPACE_CAP).unwrap(), None);
    }

    #[test]
    fn block_group_with_swap() {
        let f = make_field(5, 1, None).unwrap();
        // diag(A, B) preserving the form, plus the swap of the two hyperbolic planes.
        let blk = GroupElement::new(&f, Mat4::diag([2, 3, 2, 3])).unwrap();
        let swap = GroupElement::new(
            &f,
            Mat4::from_rows(&[vec![0, 1, 0, 0], vec![1, 0, 0, 0], vec![0, 0, 0, 1], vec![0, 0, 1, 0]]).unwrap(),
        )
        .unwrap();
        let g = close_subgroup(&f, &[blk, swap], 1000);
        let d = find_imprimitivity(&g, DEFAULT_SUBSPACE_CAP).unwrap().unwrap();
        let gens = g.generator_matrices();
        assert!(permutes_pair(&f, &gens, &Subspace::span(&f, &d.v1), &Subspace::span(&f, &d.v2)));
    }

    #[test]
    fn diagonal_group_first_plane() {
        let f = make_field(5, 1, None).unwrap();
        let g = GroupElement::new(&f, Mat4::diag([2, 1, 1, 3])).unwrap();
        let g = close_subgroup(&f, &[g], 100);
        let w = find_invariant_subspace(&g, 2, DEFAULT_SUBSPACE_CAP).unwrap().unwrap();
        assert_eq!(w.basis, vec![vec![1, 0, 0, 0], vec![0, 1, 0, 0]]);
        assert_eq!(w.kind, Singularity::TotallySingular);
    }

    #[test]
    fn cap_is_enforced() {
        let f = make_field(2, 1, None).unwrap();
        let g = close_subgroup(&f, &sp4_generators(&f), DEFAULT_CLOSURE_CAP);
        assert!(matches!(find_invariant_subspace(&g, 2, 10), Err(AschError::TooManySubspaces { .. })));
    }
}
