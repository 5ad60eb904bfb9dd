//! `GSp(4)` over a finite field with respect to the fixed antidiagonal form
//!
//! ```text
//!     [  0  J ]          [ 0 1 ]
//!     [ -J  0 ]   ,  J = [ 1 0 ]
//! ```
//!
//! together with breadth-first subgroup closure and order bookkeeping.

use std::collections::{BTreeMap, HashMap};

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;
use crate::ff::{FfError, Field, FieldSpec};
use crate::linalg::{nullspace, Mat4, SqMat};

/// Default cap on closure size.
pub const DEFAULT_CLOSURE_CAP: usize = 10_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GspError {
    #[error("matrix is not a symplectic similitude for the fixed form")]
    NotSimilitude,
    #[error("operation needs a complete closure, but the closure was truncated at {0} elements")]
    TruncatedClosure(usize),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("expected 4x4 matrices with entries in the field")]
    BadShape,
    #[error("form is not alternating and nondegenerate")]
    BadForm,
    #[error("no alternating nondegenerate form is preserved up to scalars")]
    NoInvariantForm,
    #[error(transparent)]
    Field(#[from] FfError),
}

/// The fixed form: pairs `(e1, e4)` and `(e2, e3)` with `<e1,e4> = <e2,e3> = 1`.
pub fn standard_form(f: &Field) -> Mat4 {
    let m1 = f.neg(1);
    SqMat([[0, 0, 0, 1], [0, 0, 1, 0], [0, m1, 0, 0], [m1, 0, 0, 0]])
}

/// A nondegenerate alternating form on `F^4`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymplecticForm {
    pub matrix: Mat4,
}

impl SymplecticForm {
    pub fn new(f: &Field, matrix: Mat4) -> Result<Self, GspError> {
        if !is_alternating(f, &matrix) || matrix.det(f) == 0 {
            return Err(GspError::BadForm);
        }
        Ok(SymplecticForm { matrix })
    }

    pub fn standard(f: &Field) -> Self {
        SymplecticForm { matrix: standard_form(f) }
    }

    pub fn pair(&self, f: &Field, x: &[u64], y: &[u64]) -> u64 {
        let my = self.matrix.mul_vec(f, y);
        x.iter().zip(&my).fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }
}

/// Zero diagonal and `X^T = -X`; in characteristic 2 this is exactly
/// "alternating".
pub fn is_alternating(f: &Field, x: &Mat4) -> bool {
    (0..4).all(|i| x.0[i][i] == 0 && (0..4).all(|j| x.0[i][j] == f.neg(x.0[j][i])))
}

/// The scalar `c` with `g^T X g = c X`, if any.
pub fn similitude_for_form(f: &Field, g: &Mat4, form: &Mat4) -> Option<u64> {
    let m = g.transpose().mul(f, form).mul(f, g);
    let (i, j) = (0..16).map(|k| (k / 4, k % 4)).find(|&(i, j)| form.0[i][j] != 0)?;
    let c = f.div(m.0[i][j], form.0[i][j])?;
    (c != 0 && m == form.scale(f, c)).then_some(c)
}

/// Similitude factor with respect to the fixed form.
pub fn similitude_factor(f: &Field, g: &Mat4) -> Result<u64, GspError> {
    similitude_for_form(f, g, &standard_form(f)).ok_or(GspError::NotSimilitude)
}

/// An element of `GSp(4, F)` with its cached similitude factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupElement {
    pub matrix: Mat4,
    pub similitude: u64,
}

impl GroupElement {
    pub fn new(f: &Field, matrix: Mat4) -> Result<Self, GspError> {
        let similitude = similitude_factor(f, &matrix)?;
        Ok(GroupElement { matrix, similitude })
    }

    pub fn identity() -> Self {
        GroupElement { matrix: Mat4::identity(), similitude: 1 }
    }

    pub fn mul(&self, f: &Field, rhs: &GroupElement) -> GroupElement {
        GroupElement { matrix: self.matrix.mul(f, &rhs.matrix), similitude: f.mul(self.similitude, rhs.similitude) }
    }

    pub fn inverse(&self, f: &Field) -> GroupElement {
        GroupElement {
            matrix: self.matrix.inverse(f).expect("similitudes are invertible"),
            similitude: f.inv(self.similitude).expect("similitude is nonzero"),
        }
    }

    pub fn conjugate_by(&self, f: &Field, p: &GroupElement) -> GroupElement {
        p.inverse(f).mul(f, self).mul(f, p)
    }
}

/// Breadth-first closure of a finite matrix group.
///
/// Elements are keyed by their full entry array, so membership is exact.
/// Besides the elements, the closure records for every element the parity
/// vector of generator letters along its BFS word and the relations among
/// those parities; these determine all homomorphisms to `{±1}`, i.e. the
/// subgroups of index two.
#[derive(Clone, Debug)]
pub struct MatrixClosure<const N: usize> {
    pub field: Field,
    pub generators: Vec<SqMat<N>>,
    pub elements: Vec<SqMat<N>>,
    index: HashMap<SqMat<N>, usize>,
    parity: Vec<u64>,
    relations: Vec<u64>,
    pub truncated: bool,
}

impl<const N: usize> MatrixClosure<N> {
    pub fn new(field: &Field, generators: &[SqMat<N>], cap: usize) -> Self {
        let track_parity = generators.len() <= 64;
        let mut elements = vec![SqMat::<N>::identity()];
        let mut index = HashMap::new();
        index.insert(SqMat::<N>::identity(), 0);
        let mut parity = vec![0u64];
        let mut relations: Vec<u64> = Vec::new();
        let mut truncated = false;
        let mut i = 0;
        'bfs: while i < elements.len() {
            let x = elements[i];
            for (k, s) in generators.iter().enumerate() {
                let y = x.mul(field, s);
                let par = if track_parity { parity[i] ^ (1u64 << k) } else { 0 };
                match index.get(&y) {
                    Some(&j) => insert_xor_basis(&mut relations, parity[j] ^ par),
                    None => {
                        if elements.len() >= cap {
                            truncated = true;
                            break 'bfs;
                        }
                        index.insert(y, elements.len());
                        elements.push(y);
                        parity.push(par);
                    }
                }
            }
            i += 1;
        }
        MatrixClosure {
            field: field.clone(),
            generators: generators.to_vec(),
            elements,
            index,
            parity,
            relations,
            truncated,
        }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, m: &SqMat<N>) -> bool {
        self.index.contains_key(m)
    }

    pub fn position(&self, m: &SqMat<N>) -> Option<usize> {
        self.index.get(m).copied()
    }

    pub fn require_complete(&self) -> Result<(), GspError> {
        if self.truncated {
            Err(GspError::TruncatedClosure(self.elements.len()))
        } else {
            Ok(())
        }
    }

    pub fn scalars(&self) -> Vec<u64> {
        let mut s: Vec<u64> = self.elements.iter().filter_map(SqMat::as_scalar).collect();
        s.sort_unstable();
        s
    }

    pub fn projective_order(&self) -> Result<usize, GspError> {
        self.require_complete()?;
        Ok(self.order() / self.scalars().len())
    }

    /// Order of each element, by walking powers inside the closure.
    pub fn element_orders(&self) -> Result<Vec<u64>, GspError> {
        self.require_complete()?;
        let limit = self.order() as u64;
        Ok(self
            .elements
            .iter()
            .map(|g| g.order(&self.field, limit).expect("element orders divide the group order"))
            .collect())
    }

    pub fn element_orders_histogram(&self) -> Result<BTreeMap<u64, u64>, GspError> {
        let mut h = BTreeMap::new();
        for o in self.element_orders()? {
            *h.entry(o).or_insert(0) += 1;
        }
        Ok(h)
    }

    /// Least common multiple of element orders.
    pub fn exponent(&self) -> Result<u64, GspError> {
        Ok(self.element_orders()?.into_iter().fold(1, arith::lcm))
    }

    /// Every nontrivial homomorphism to `{±1}` as a bitmask `σ` over the
    /// generators: the generator `k` maps to `-1` iff bit `k` of `σ` is set.
    pub fn sign_characters(&self) -> Vec<u64> {
        let k = self.generators.len();
        if k == 0 || k > 20 || self.truncated {
            return Vec::new();
        }
        (1u64..1 << k).filter(|&s| self.relations.iter().all(|&r| (r & s).count_ones() % 2 == 0)).collect()
    }

    /// Indices of elements in the kernel of the sign character `sigma`.
    pub fn kernel_of(&self, sigma: u64) -> Vec<usize> {
        (0..self.elements.len()).filter(|&i| (self.parity[i] & sigma).count_ones() % 2 == 0).collect()
    }

    /// A small generating set for the subgroup on `members`, built greedily
    /// in enumeration order.
    pub fn subgroup_generators(&self, members: &[usize]) -> Vec<SqMat<N>> {
        let mut gens: Vec<SqMat<N>> = Vec::new();
        let mut current = MatrixClosure::new(&self.field, &gens, usize::MAX);
        for &i in members {
            let x = self.elements[i];
            if !current.contains(&x) {
                gens.push(x);
                current = MatrixClosure::new(&self.field, &gens, usize::MAX);
                if current.order() == members.len() {
                    break;
                }
            }
        }
        gens
    }
}

fn insert_xor_basis(basis: &mut Vec<u64>, mut v: u64) {
    for &b in basis.iter() {
        v = v.min(v ^ b);
    }
    if v != 0 {
        basis.push(v);
        basis.sort_unstable_by(|a, b| b.cmp(a));
    }
}

/// A finite subgroup of `GSp(4, F)` generated by explicit similitudes.
#[derive(Clone, Debug)]
pub struct SubgroupClosure {
    pub generators: Vec<GroupElement>,
    pub inner: MatrixClosure<4>,
}

impl SubgroupClosure {
    pub fn field(&self) -> &Field {
        &self.inner.field
    }

    pub fn order(&self) -> usize {
        self.inner.order()
    }

    pub fn truncated(&self) -> bool {
        self.inner.truncated
    }

    pub fn elements(&self) -> &[Mat4] {
        &self.inner.elements
    }

    pub fn generator_matrices(&self) -> Vec<Mat4> {
        self.generators.iter().map(|g| g.matrix).collect()
    }
}

pub fn close_subgroup(f: &Field, gens: &[GroupElement], cap: usize) -> SubgroupClosure {
    let mats: Vec<Mat4> = gens.iter().map(|g| g.matrix).collect();
    SubgroupClosure { generators: gens.to_vec(), inner: MatrixClosure::new(f, &mats, cap) }
}

pub fn projective_order(g: &SubgroupClosure) -> Result<usize, GspError> {
    g.inner.projective_order()
}

pub fn element_orders_histogram(g: &SubgroupClosure) -> Result<BTreeMap<u64, u64>, GspError> {
    g.inner.element_orders_histogram()
}

fn prime_power_parts(q: u64) -> Result<(u64, u32), GspError> {
    if q < 2 {
        return Err(GspError::NotPrimePower(q));
    }
    let f = arith::factorize(q);
    if f.len() != 1 {
        return Err(GspError::NotPrimePower(q));
    }
    Ok(f[0])
}

/// `|Sp(4, F_q)| = q^4 (q^2 - 1)(q^4 - 1)`.
pub fn sp4_order(q: u64) -> Result<u128, GspError> {
    prime_power_parts(q)?;
    let q = q as u128;
    Ok(q.pow(4) * (q * q - 1) * (q.pow(4) - 1))
}

/// `|PSp(4, F_q)|`.
pub fn psp4_order(q: u64) -> Result<u128, GspError> {
    let (l, _) = prime_power_parts(q)?;
    Ok(sp4_order(q)? / if l == 2 { 1 } else { 2 })
}

/// `|GSp(4, F_q)| = (q - 1) |Sp(4, F_q)|`.
pub fn gsp4_order(q: u64) -> Result<u128, GspError> {
    Ok((q as u128 - 1) * sp4_order(q)?)
}

/// The symplectic transvection `x ↦ x + a <x, v> v`.
pub fn transvection(f: &Field, v: &[u64; 4], a: u64) -> Mat4 {
    let omega = standard_form(f);
    let w = omega.mul_vec(f, v);
    let mut m = Mat4::identity();
    for i in 0..4 {
        for j in 0..4 {
            m.0[i][j] = f.add(m.0[i][j], f.mul(a, f.mul(v[i], w[j])));
        }
    }
    m
}

/// Transvection generators of `Sp(4, F)`: root vectors `e_i`, the mixed
/// vectors `e1 + e2`, `e1 + e3`, each scaled by every power-basis element of
/// `F` over its prime field.
pub fn sp4_generators(f: &Field) -> Vec<GroupElement> {
    let vectors: [[u64; 4]; 6] = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1], [1, 1, 0, 0], [1, 0, 1, 0]];
    let l = f.characteristic();
    let mut out = Vec::new();
    for v in &vectors {
        for i in 0..f.degree() {
            let a = l.pow(i);
            out.push(GroupElement { matrix: transvection(f, v, a), similitude: 1 });
        }
    }
    out
}

/// `diag(1, 1, c, c)`, a similitude with factor `c`.
pub fn similitude_torus(c: u64) -> GroupElement {
    GroupElement { matrix: Mat4::diag([1, 1, c, c]), similitude: c }
}

/// A pseudo-random element of `GSp(4, F)` from a word in the standard
/// generators and a similitude torus element.
pub fn random_gsp_element<R: Rng>(f: &Field, rng: &mut R) -> GroupElement {
    let gens = sp4_generators(f);
    let mut x = similitude_torus(rng.gen_range(1..f.order()));
    for _ in 0..40 {
        let g = &gens[rng.gen_range(0..gens.len())];
        x = x.mul(f, g);
    }
    x
}

/// Alternating forms `X` with `g^T X g = c_g X` for every generator, where
/// `c_g` ranges over square roots of `det g`. Returns the first
/// nondegenerate solution (normalized so its first nonzero entry is 1)
/// together with the similitude factors, preferring `c_g = 1` choices.
pub fn recover_invariant_form(f: &Field, gens: &[Mat4]) -> Option<(Mat4, Vec<u64>)> {
    let roots: Vec<Vec<u64>> = gens
        .iter()
        .map(|g| {
            let mut r = f.sqrt_all(g.det(f));
            r.sort_by_key(|&c| (c != 1, c));
            r
        })
        .collect();
    if roots.iter().any(Vec::is_empty) {
        return None;
    }
    let pairs: Vec<(usize, usize)> = (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
    let basis_form = |k: usize| {
        let (i, j) = pairs[k];
        let mut b = Mat4::zero();
        b.0[i][j] = 1;
        b.0[j][i] = f.neg(1);
        b
    };
    let mut choice = vec![0usize; gens.len()];
    loop {
        let mut rows: Vec<Vec<u64>> = Vec::new();
        for (g, (&ci, rs)) in gens.iter().zip(choice.iter().zip(&roots)) {
            let c = rs[ci];
            let images: Vec<Mat4> = (0..6)
                .map(|k| {
                    let b = basis_form(k);
                    let gb = g.transpose().mul(f, &b).mul(f, g);
                    gb.add(f, &b.scale(f, f.neg(c)))
                })
                .collect();
            for e in 0..16 {
                rows.push(images.iter().map(|m| m.0[e / 4][e % 4]).collect());
            }
        }
        let ns = nullspace(f, &rows, 6);
        if let Some(x) = first_nondegenerate(f, &ns, &basis_form) {
            let sims = choice.iter().zip(&roots).map(|(&ci, rs)| rs[ci]).collect();
            return Some((normalize_first_nonzero(f, &x), sims));
        }
        // next choice of square roots
        let mut k = 0;
        loop {
            if k == choice.len() {
                return None;
            }
            choice[k] += 1;
            if choice[k] < roots[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

fn first_nondegenerate(f: &Field, ns: &[Vec<u64>], basis_form: &dyn Fn(usize) -> Mat4) -> Option<Mat4> {
    if ns.is_empty() {
        return None;
    }
    let q = f.order() as u128;
    let total = q.checked_pow(ns.len() as u32).unwrap_or(u128::MAX).min(1 << 20);
    for idx in 1..total {
        let mut coeffs = vec![0u64; ns.len()];
        let mut k = idx;
        for c in coeffs.iter_mut() {
            *c = (k % q) as u64;
            k /= q;
        }
        let mut x = Mat4::zero();
        for (c, v) in coeffs.iter().zip(ns) {
            for (kk, &vk) in v.iter().enumerate() {
                x = x.add(f, &basis_form(kk).scale(f, f.mul(*c, vk)));
            }
        }
        if x.det(f) != 0 {
            return Some(x);
        }
    }
    None
}

fn normalize_first_nonzero(f: &Field, x: &Mat4) -> Mat4 {
    let lead = x.0.iter().flatten().copied().find(|&a| a != 0).unwrap_or(1);
    x.scale(f, f.inv(lead).unwrap())
}

/// A basis change `P` with `P^T X P` equal to the fixed form.
pub fn symplectic_basis(f: &Field, form: &Mat4) -> Result<Mat4, GspError> {
    let sf = SymplecticForm::new(f, *form)?;
    let mut remaining: Vec<Vec<u64>> = (0..4).map(|i| (0..4).map(|j| u64::from(i == j)).collect()).collect();
    let mut pairs: Vec<(Vec<u64>, Vec<u64>)> = Vec::new();
    while pairs.len() < 2 {
        let u = remaining.remove(0);
        let pos = remaining.iter().position(|v| sf.pair(f, &u, v) != 0).ok_or(GspError::BadForm)?;
        let v = remaining.remove(pos);
        let s = f.inv(sf.pair(f, &u, &v)).unwrap();
        let v: Vec<u64> = v.iter().map(|&a| f.mul(a, s)).collect();
        // Project the rest onto the orthogonal complement of <u, v>.
        remaining = remaining
            .into_iter()
            .map(|w| {
                let a = sf.pair(f, &w, &v); // coefficient along u
                let b = sf.pair(f, &u, &w); // coefficient along v
                (0..4).map(|i| f.sub(f.sub(w[i], f.mul(a, u[i])), f.mul(b, v[i]))).collect()
            })
            .collect();
        pairs.push((u, v));
    }
    let (u1, v1) = &pairs[0];
    let (u2, v2) = &pairs[1];
    let cols = [u1, u2, v2, v1];
    let mut p = Mat4::zero();
    for (j, c) in cols.iter().enumerate() {
        for i in 0..4 {
            p.0[i][j] = c[i];
        }
    }
    Ok(p)
}

/// Rewrites matrices preserving an alternating form up to scalars in the
/// fixed-form coordinates. Returns the conjugated group elements and the
/// basis change `P` (new = `P^-1 g P`).
pub fn into_standard_coordinates(f: &Field, gens: &[Mat4]) -> Result<(Vec<GroupElement>, Mat4), GspError> {
    let (form, _) = recover_invariant_form(f, gens).ok_or(GspError::NoInvariantForm)?;
    let p = symplectic_basis(f, &form)?;
    let pinv = p.inverse(f).ok_or(GspError::BadForm)?;
    let out = gens.iter().map(|g| GroupElement::new(f, pinv.mul(f, g).mul(f, &p))).collect::<Result<Vec<_>, _>>()?;
    Ok((out, p))
}

/// Wire form of a generator set: entries are coefficient lists.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeneratorFile {
    pub field: FieldSpec,
    pub generators: Vec<Vec<Vec<Vec<u64>>>>,
}

impl GeneratorFile {
    pub fn from_elements(f: &Field, gens: &[Mat4]) -> Self {
        GeneratorFile {
            field: f.spec().clone(),
            generators: gens
                .iter()
                .map(|g| g.0.iter().map(|row| row.iter().map(|&x| f.coeffs(x)).collect()).collect())
                .collect(),
        }
    }

    pub fn load(&self) -> Result<(Field, Vec<GroupElement>), GspError> {
        let f = self.field.build()?;
        let mut out = Vec::new();
        for g in &self.generators {
            if g.len() != 4 || g.iter().any(|r| r.len() != 4) {
                return Err(GspError::BadShape);
            }
            let mut m = Mat4::zero();
            for i in 0..4 {
                for j in 0..4 {
                    m.0[i][j] = f.from_coeffs(&g[i][j])?;
                }
            }
            out.push(GroupElement::new(&f, m)?);
        }
        Ok((f, out))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn similitude_of_identity_and_scalars() {
        let f = make_field(5, 1, None).unwrap();
        assert_eq!(similitude_factor(&f, &Mat4::identity()).unwrap(), 1);
        for a in 1..5 {
            assert_eq!(similitude_factor(&f, &Mat4::scalar(a)).unwrap(), f.mul(a, a));
        }
    }

    #[test]
    fn non_similitude_detected_by_congruence() {
        let f = make_field(5, 1, None).unwrap();
        let m = Mat4::diag([1, 2, 1, 1]);
        let omega = standard_form(&f);
        let direct = m.transpose().mul(&f, &omega).mul(&f, &m);
        assert!((1..5).all(|c| direct != omega.scale(&f, c)));
        assert_eq!(similitude_factor(&f, &m), Err(GspError::NotSimilitude));
    }

    #[test]
    fn sp4_closure_orders() {
        for &l in &[2u64, 3] {
            let f = make_field(l, 1, None).unwrap();
            let g = close_subgroup(&f, &sp4_generators(&f), DEFAULT_CLOSURE_CAP);
            assert!(!g.truncated());
            assert_eq!(g.order() as u128, sp4_order(l).unwrap());
        }
        assert_eq!(sp4_order(2).unwrap(), 720);
        assert_eq!(sp4_order(3).unwrap(), 51840);
        assert_eq!(sp4_order(1), Err(GspError::NotPrimePower(1)));
        assert_eq!(sp4_order(6), Err(GspError::NotPrimePower(6)));
    }

    #[test]
    fn sp4_3_projective_order() {
        let f = make_field(3, 1, None).unwrap();
        let g = close_subgroup(&f, &sp4_generators(&f), DEFAULT_CLOSURE_CAP);
        assert_eq!(projective_order(&g).unwrap(), 25920);
    }

    #[test]
    fn scalar_group() {
        let f = make_field(3, 1, None).unwrap();
        let minus = GroupElement::new(&f, Mat4::scalar(2)).unwrap();
        let g = close_subgroup(&f, &[minus], 100);
        assert_eq!(g.order(), 2);
        assert_eq!(projective_order(&g).unwrap(), 1);
    }

    #[test]
    fn transvection_histogram() {
        let f = make_field(3, 1, None).unwrap();
        let t = GroupElement::new(&f, transvection(&f, &[1, 0, 0, 0], 1)).unwrap();
        let g = close_subgroup(&f, &[t], 100);
        let h = element_orders_histogram(&g).unwrap();
        assert_eq!(h, BTreeMap::from([(1, 1), (3, 2)]));
        let triv = close_subgroup(&f, &[], 100);
        assert_eq!(element_orders_histogram(&triv).unwrap(), BTreeMap::from([(1, 1)]));
    }

    #[test]
    fn truncation_is_reported() {
        let f = make_field(3, 1, None).unwrap();
        let g = close_subgroup(&f, &sp4_generators(&f), 100);
        assert!(g.truncated());
        assert_eq!(g.order(), 100);
        assert!(matches!(projective_order(&g), Err(GspError::TruncatedClosure(_))));
    }

    #[test]
    fn sign_characters_of_sp4_2() {
        // Sp(4,2) ≅ S6 has exactly one subgroup of index two.
        let f = make_field(2, 1, None).unwrap();
        let g = close_subgroup(&f, &sp4_generators(&f), DEFAULT_CLOSURE_CAP);
        let sigmas = g.inner.sign_characters();
        assert_eq!(sigmas.len(), 1);
        assert_eq!(g.inner.kernel_of(sigmas[0]).len(), 360);
    }

    #[test]
    fn symplectic_basis_normalizes_forms() {
        let f = make_field(7, 1, None).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let p = random_gsp_element(&f, &mut rng).matrix;
            let x = p.transpose().mul(&f, &standard_form(&f)).mul(&f, &p);
            let b = symplectic_basis(&f, &x).unwrap();
            assert_eq!(b.transpose().mul(&f, &x).mul(&f, &b), standard_form(&f));
        }
    }

    #[test]
    fn generator_file_round_trip() {
        let f = make_field(2, 2, None).unwrap();
        let gens: Vec<Mat4> = sp4_generators(&f).iter().map(|g| g.matrix).collect();
        let file = GeneratorFile::from_elements(&f, &gens);
        let text = serde_json::to_string(&file).unwrap();
        let back: GeneratorFile = serde_json::from_str(&text).unwrap();
        let (f2, loaded) = back.load().unwrap();
        assert_eq!(f2, f);
        assert_eq!(loaded.iter().map(|g| g.matrix).collect::<Vec<_>>(), gens);
    }
}
