//! Dickson's list for finite subgroups of `GL(2, F_q)`, up to scalars.

use serde::Serialize;

use super::AschError;
use crate::arith;
use crate::ff::{make_field, Field};
use crate::gsp4core::MatrixClosure;
use crate::linalg::Mat2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Gl2Label {
    Borel,
    Dihedral,
    /// Labelled by the subfield order `q' = l^s`.
    Psl2(u64),
    Pgl2(u64),
    A4,
    S4,
    A5,
}

impl std::fmt::Display for Gl2Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Gl2Label::Psl2(s) => write!(f, "PSL2({s})"),
            Gl2Label::Pgl2(s) => write!(f, "PGL2({s})"),
            other => write!(f, "{other:?}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Gl2Witness {
    /// A common eigenvector over the ground field.
    Eigenvector(Vec<u64>),
    /// Two lines over the quadratic extension, given by spanning vectors,
    /// permuted by every generator.
    LinePair { extension_degree: u32, first: Vec<u64>, second: Vec<u64> },
    /// Projective order and exponent certificate.
    Order { projective_order: usize, projective_exponent: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Gl2Class {
    pub label: Gl2Label,
    pub order: usize,
    pub projective_order: usize,
    pub witness: Gl2Witness,
}

fn common_eigenvector(f: &Field, gens: &[Mat2]) -> Option<Vec<u64>> {
    let mut lines = std::iter::once(vec![0u64, 1]).chain(f.elements().map(|x| vec![1, x]));
    lines.find(|v| gens.iter().all(|g| is_eigen(f, g, v)))
}

fn is_eigen(f: &Field, g: &Mat2, v: &[u64]) -> bool {
    let w = g.mul_vec(f, v);
    f.sub(f.mul(w[0], v[1]), f.mul(w[1], v[0])) == 0
}

fn same_line(f: &Field, a: &[u64], b: &[u64]) -> bool {
    f.sub(f.mul(a[0], b[1]), f.mul(a[1], b[0])) == 0
}

/// Embeds the generators into the quadratic extension.
fn extend(f: &Field, gens: &[Mat2]) -> Result<(Field, Vec<Mat2>), AschError> {
    let big = make_field(f.characteristic(), 2 * f.degree(), None)?;
    let emb = f.embedding_into(&big)?;
    let lifted = gens
        .iter()
        .map(|g| {
            let mut m = *g;
            for row in m.0.iter_mut() {
                for x in row.iter_mut() {
                    *x = emb.apply(*x);
                }
            }
            m
        })
        .collect();
    Ok((big, lifted))
}

fn permutes(f: &Field, gens: &[Mat2], a: &[u64], b: &[u64]) -> bool {
    gens.iter().all(|g| {
        let (ga, gb) = (g.mul_vec(f, a), g.mul_vec(f, b));
        (same_line(f, &ga, a) && same_line(f, &gb, b)) || (same_line(f, &ga, b) && same_line(f, &gb, a))
    })
}

/// A pair of distinct lines over `F_{q^2}` permuted by all generators.
fn line_pair(f: &Field, gens: &[Mat2]) -> Result<Option<(Vec<u64>, Vec<u64>)>, AschError> {
    let (big, lifted) = extend(f, gens)?;
    let pts: Vec<Vec<u64>> = std::iter::once(vec![0u64, 1]).chain(big.elements().map(|x| vec![1, x])).collect();
    // A non-scalar generator g fixes or swaps the two lines, so both are
    // eigenlines of g² unless g² is scalar.
    let anchor = lifted.iter().find(|g| g.as_scalar().is_none());
    let Some(anchor) = anchor else {
        return Ok(Some((pts[0].clone(), pts[1].clone())));
    };
    let sq = anchor.mul(&big, anchor);
    let pool: Vec<&Vec<u64>> = if sq.as_scalar().is_some() {
        pts.iter().collect()
    } else {
        pts.iter().filter(|v| is_eigen(&big, &sq, v)).collect()
    };
    for (i, a) in pool.iter().enumerate() {
        for b in &pool[i + 1..] {
            if permutes(&big, &lifted, a, b) {
                return Ok(Some(((*a).clone(), (*b).clone())));
            }
        }
    }
    Ok(None)
}

fn psl2_order(q: u128) -> u128 {
    q * (q * q - 1) / if q % 2 == 0 { 1 } else { 2 }
}

fn pgl2_order(q: u128) -> u128 {
    q * (q * q - 1)
}

/// Classifies a closed subgroup of `GL(2, F_q)` by Dickson's theorem.
pub fn classify_gl2(h: &MatrixClosure<2>) -> Result<Gl2Class, AschError> {
    h.require_complete()?;
    let f = &h.field;
    let order = h.order();
    let projective_order = h.projective_order()?;
    let gens = &h.generators;
    let class = |label, witness| Gl2Class { label, order, projective_order, witness };

    if let Some(v) = common_eigenvector(f, gens) {
        return Ok(class(Gl2Label::Borel, Gl2Witness::Eigenvector(v)));
    }
    if let Some((a, b)) = line_pair(f, gens)? {
        let extension_degree = 2 * f.degree();
        return Ok(class(Gl2Label::Dihedral, Gl2Witness::LinePair { extension_degree, first: a, second: b }));
    }
    let projective_exponent = projective_exponent(h);
    let witness = Gl2Witness::Order { projective_order, projective_exponent };
    let l = f.characteristic() as u128;
    let po = projective_order as u128;
    for s in arith::divisors(f.degree() as u64).into_iter().rev() {
        let qs = l.pow(s as u32);
        if po == psl2_order(qs) {
            return Ok(class(Gl2Label::Psl2(qs as u64), witness));
        }
        if po == pgl2_order(qs) {
            return Ok(class(Gl2Label::Pgl2(qs as u64), witness));
        }
    }
    let label = match (projective_order, projective_exponent) {
        (12, 6) => Gl2Label::A4,
        (24, 12) => Gl2Label::S4,
        (60, 30) => Gl2Label::A5,
        _ => return Err(AschError::Unclassified { projective_order }),
    };
    Ok(class(label, witness))
}

fn projective_exponent(h: &MatrixClosure<2>) -> u64 {
    let limit = h.order() as u64;
    h.elements.iter().map(|g| g.projective_order(&h.field, limit).expect("finite group")).fold(1, arith::lcm)
}

/// Re-checks a classification witness against the generators.
pub fn verify_gl2(h: &MatrixClosure<2>, c: &Gl2Class) -> Result<bool, AschError> {
    let f = &h.field;
    Ok(match &c.witness {
        Gl2Witness::Eigenvector(v) => h.generators.iter().all(|g| is_eigen(f, g, v)),
        Gl2Witness::LinePair { first, second, .. } => {
            let (big, lifted) = extend(f, &h.generators)?;
            !same_line(&big, first, second) && permutes(&big, &lifted, first, second)
        }
        Gl2Witness::Order { projective_order, projective_exponent: e } => {
            *projective_order == h.projective_order()? && *e == projective_exponent(h)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::SqMat;

    fn closure(l: u64, r: u32, gens: &[Mat2]) -> MatrixClosure<2> {
        let f = make_field(l, r, None).unwrap();
        MatrixClosure::new(&f, gens, 1_000_000)
    }

    #[test]
    fn upper_triangular_is_borel() {
        let h = closure(5, 1, &[SqMat([[2, 1], [0, 3]]), SqMat([[1, 1], [0, 1]])]);
        let c = classify_gl2(&h).unwrap();
        assert_eq!(c.label, Gl2Label::Borel);
        assert_eq!(c.witness, Gl2Witness::Eigenvector(vec![1, 0]));
        assert!(verify_gl2(&h, &c).unwrap());
    }

    #[test]
    fn sl2_5_is_psl2_5() {
        let h = closure(5, 1, &[SqMat([[1, 1], [0, 1]]), SqMat([[1, 0], [1, 1]])]);
        assert_eq!(h.order(), 120);
        let c = classify_gl2(&h).unwrap();
        assert_eq!(c.label, Gl2Label::Psl2(5));
        assert_eq!(c.projective_order, 60);
        assert!(verify_gl2(&h, &c).unwrap());
    }

    #[test]
    fn nonsplit_torus_is_dihedral() {
        // x^2 - x - 3 is irreducible over F_5; its companion generates a
        // non-split torus.
        let f = make_field(5, 1, None).unwrap();
        let t = SqMat([[0, 3], [1, 1]]);
        let h = MatrixClosure::new(&f, &[t], 1000);
        let c = classify_gl2(&h).unwrap();
        assert_eq!(c.label, Gl2Label::Dihedral);
        assert!(verify_gl2(&h, &c).unwrap());
    }

    #[test]
    fn gl2_3_is_pgl2_3() {
        // PGL(2,3) is also S4; the PGL2 label wins.
        let h = closure(3, 1, &[SqMat([[1, 1], [0, 1]]), SqMat([[0, 1], [1, 0]]), SqMat([[2, 0], [0, 1]])]);
        assert_eq!(h.order(), 48);
        assert_eq!(classify_gl2(&h).unwrap().label, Gl2Label::Pgl2(3));
    }
}
