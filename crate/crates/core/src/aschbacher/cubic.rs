//! Stabilizers of a twisted cubic: groups conjugate into `λ · Symm³(GL(2))`.
//!
//! With `h = [[a, c], [b, d]]` the symmetric cube is
//!
//! ```text
//!     [ a³     a²c          ac²          c³   ]
//!     [ 3a²b   a²d + 2abc   bc² + 2acd   3c²d ]
//!     [ 3ab²   b²c + 2abd   ad² + 2bcd   3cd² ]
//!     [ b³     b²d          bd²          d³   ]
//! ```
//!
//! whose columns are images of the curve `ν(u:v) = (u³, 3u²v, 3uv², v³)`.

use std::collections::HashMap;

use serde::Serialize;

use super::subspace::DEFAULT_SUBSPACE_CAP;
use super::AschError;
use crate::ff::Field;
use crate::gsp4core::{similitude_factor, SubgroupClosure};
use crate::linalg::{nullspace, rank, Mat2, Mat4, SqMat};

pub fn symm3(f: &Field, h: &Mat2) -> Mat4 {
    let [[a, c], [b, d]] = h.0;
    let m = |x: u64, y: u64| f.mul(x, y);
    let m3 = |x: u64, y: u64, z: u64| f.mul(f.mul(x, y), z);
    let three = f.from_int(3);
    let two = f.from_int(2);
    SqMat([
        [m3(a, a, a), m3(a, a, c), m3(a, c, c), m3(c, c, c)],
        [
            m(three, m3(a, a, b)),
            f.add(m3(a, a, d), m(two, m3(a, b, c))),
            f.add(m3(b, c, c), m(two, m3(a, c, d))),
            m(three, m3(c, c, d)),
        ],
        [
            m(three, m3(a, b, b)),
            f.add(m3(b, b, c), m(two, m3(a, b, d))),
            f.add(m3(a, d, d), m(two, m3(b, c, d))),
            m(three, m3(c, d, d)),
        ],
        [m3(b, b, b), m3(b, b, d), m3(b, d, d), m3(d, d, d)],
    ])
}

/// The polynomial relation among charpoly coefficients of every
/// `λ Symm³(h)`: with `e1` the trace, `e2` the second coefficient and `c`
/// the similitude (so `e4 = c²`),
///
/// ```text
/// R = (e1² + e2 - 2c)² c - 3 (e1² + e2 - 2c)(e2 - c) c + (2c - e2)(e2 - c)²
/// ```
///
/// vanishes identically.
pub fn symm3_residual(f: &Field, e1: u64, e2: u64, c: u64) -> u64 {
    let two_c = f.add(c, c);
    let s = f.sub(f.add(f.mul(e1, e1), e2), two_c);
    let t = f.sub(e2, c);
    let u = f.sub(two_c, e2);
    let term1 = f.mul(f.mul(s, s), c);
    let term2 = f.mul(f.from_int(3), f.mul(f.mul(s, t), c));
    let term3 = f.mul(u, f.mul(t, t));
    f.add(f.sub(term1, term2), term3)
}

/// Necessary condition for `m` (with similitude `c`) to be `λ Symm³(h)`:
/// symplectic charpoly shape `e3 = c e1`, `e4 = c²`, and `R = 0`.
pub fn has_symm3_shape(f: &Field, m: &Mat4, c: u64) -> bool {
    let e = m.char_coeffs(f);
    e[2] == f.mul(c, e[0]) && e[3] == f.mul(c, c) && symm3_residual(f, e[0], e[1], c) == 0
}

/// `(λ, h)` with `m = λ Symm³(h)`, normalized by `a = 1`, or `b = 1` when
/// `a = 0`.
pub fn symm3_preimage(f: &Field, m: &Mat4) -> Option<(u64, Mat2)> {
    let three = f.from_int(3);
    let (lam, h) = if m.0[0][0] != 0 {
        let lam = m.0[0][0];
        let b = f.div(m.0[1][0], f.mul(three, lam))?;
        let c = f.div(m.0[0][1], lam)?;
        let d = f.sub(f.div(m.0[1][1], lam)?, f.mul(f.from_int(2), f.mul(b, c)));
        (lam, SqMat([[1, c], [b, d]]))
    } else {
        let lam = m.0[3][0];
        if lam == 0 {
            return None;
        }
        let c = f.div(m.0[2][1], lam)?;
        let d = f.div(m.0[3][1], lam)?;
        (lam, SqMat([[0, c], [1, d]]))
    };
    (h.det(f) != 0 && symm3(f, &h).scale(f, lam) == *m).then_some((lam, h))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TwistedCubicData {
    /// `P` with `P^-1 g P = λ_g Symm³(h_g)` for every generator `g`.
    pub conjugator: Mat4,
    /// `(λ_g, h_g)` per generator.
    pub preimages: Vec<(u64, Mat2)>,
}

pub fn verify_twisted_cubic(f: &Field, gens: &[Mat4], data: &TwistedCubicData) -> bool {
    let Some(pinv) = data.conjugator.inverse(f) else {
        return false;
    };
    gens.len() == data.preimages.len()
        && gens
            .iter()
            .zip(&data.preimages)
            .all(|(g, (lam, h))| pinv.mul(f, g).mul(f, &data.conjugator) == symm3(f, h).scale(f, *lam))
}

fn preimages_under(f: &Field, gens: &[Mat4], p: &Mat4) -> Option<Vec<(u64, Mat2)>> {
    let pinv = p.inverse(f)?;
    gens.iter().map(|g| symm3_preimage(f, &pinv.mul(f, g).mul(f, p))).collect()
}

type Point = [u64; 4];

fn normalize(f: &Field, v: &[u64]) -> Point {
    let lead = v.iter().copied().find(|&x| x != 0).expect("nonzero vector");
    let inv = f.inv(lead).unwrap();
    let mut out = [0u64; 4];
    for (o, &x) in out.iter_mut().zip(v) {
        *o = f.mul(x, inv);
    }
    out
}

fn projective_points(f: &Field) -> Vec<Point> {
    let q = f.order();
    let mut pts = Vec::new();
    for lead in 0..4 {
        let free = 3 - lead;
        for idx in 0..q.pow(free as u32) {
            let mut p = [0u64; 4];
            p[lead] = 1;
            let mut k = idx;
            for slot in (lead + 1..4).rev() {
                p[slot] = k % q;
                k /= q;
            }
            pts.push(p);
        }
    }
    pts
}

/// Orbits of the group on projective points, each sorted, ordered by
/// smallest point.
fn point_orbits(f: &Field, gens: &[Mat4]) -> Vec<Vec<Point>> {
    let pts = projective_points(f);
    let index: HashMap<Point, usize> = pts.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut seen = vec![false; pts.len()];
    let mut orbits = Vec::new();
    for start in 0..pts.len() {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut orbit = vec![pts[start]];
        let mut i = 0;
        while i < orbit.len() {
            let x = orbit[i];
            for g in gens {
                let y = normalize(f, &g.mul_vec(f, &x));
                let j = index[&y];
                if !seen[j] {
                    seen[j] = true;
                    orbit.push(y);
                }
            }
            i += 1;
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    orbits
}

/// Solves for `P = [α p1 | c2 | c3 | β p2]` sending `ν(1:0), ν(0:1), ν(1:1),
/// ν(1:t), ν(1:t')` to multiples of `p1, ..., p5`.
fn reconstruct(f: &Field, pts: &[Point], t: u64, t2: u64) -> Vec<Mat4> {
    // unknowns: α, β, γ, δ, ε, c2[0..4], c3[0..4]
    let three = f.from_int(3);
    let mut rows = Vec::new();
    for (k, (&s, p)) in [1u64, t, t2].iter().zip(&pts[2..5]).enumerate() {
        let s2 = f.mul(s, s);
        let s3 = f.mul(s2, s);
        for i in 0..4 {
            let mut row = vec![0u64; 13];
            row[0] = pts[0][i];
            row[1] = f.mul(s3, pts[1][i]);
            row[2 + k] = f.neg(p[i]);
            row[5 + i] = f.mul(three, s);
            row[9 + i] = f.mul(three, s2);
            rows.push(row);
        }
    }
    nullspace(f, &rows, 13)
        .into_iter()
        .map(|v| {
            let mut p = Mat4::zero();
            for i in 0..4 {
                p.0[i][0] = f.mul(v[0], pts[0][i]);
                p.0[i][1] = v[5 + i];
                p.0[i][2] = v[9 + i];
                p.0[i][3] = f.mul(v[1], pts[1][i]);
            }
            p
        })
        .collect()
}

fn in_general_position(f: &Field, pts: &[Point]) -> bool {
    let n = pts.len().min(6);
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let rows: Vec<Vec<u64>> = [a, b, c, d].iter().map(|&i| pts[i].to_vec()).collect();
                    if rank(f, &rows) < 4 {
                        return false;
                    }
                }
            }
        }
    }
    true
}

/// Point sets of size `q + 1` made of whole orbits, in DFS order.
fn candidate_sets(orbits: &[Vec<Point>], target: usize, limit: usize) -> Vec<Vec<Point>> {
    let small: Vec<&Vec<Point>> = orbits.iter().filter(|o| o.len() <= target).collect();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn dfs(
        small: &[&Vec<Point>],
        start: usize,
        remaining: usize,
        chosen: &mut Vec<usize>,
        out: &mut Vec<Vec<Point>>,
        limit: usize,
    ) {
        if out.len() >= limit {
            return;
        }
        if remaining == 0 {
            let mut set: Vec<Point> = chosen.iter().flat_map(|&i| small[i].iter().copied()).collect();
            set.sort_unstable();
            out.push(set);
            return;
        }
        for i in start..small.len() {
            if small[i].len() <= remaining {
                chosen.push(i);
                dfs(small, i + 1, remaining - small[i].len(), chosen, out, limit);
                chosen.pop();
            }
        }
    }
    dfs(&small, 0, target, &mut chosen, &mut out, limit);
    out
}

/// Bound on orbit unions tried in the exact stage.
pub const CANDIDATE_LIMIT: usize = 20_000;

/// Two-stage twisted-cubic test: the charpoly shape of every element, then
/// an explicit conjugator onto `λ Symm³` for the generators.
pub fn test_twisted_cubic(g: &SubgroupClosure) -> Result<Option<TwistedCubicData>, AschError> {
    g.inner.require_complete()?;
    let f = g.field();
    if f.characteristic() < 5 {
        return Err(AschError::WrongCharacteristic(f.characteristic()));
    }
    for m in g.elements() {
        let c = similitude_factor(f, m)?;
        if !has_symm3_shape(f, m, c) {
            return Ok(None);
        }
    }
    let gens = g.generator_matrices();
    if gens.iter().all(|m| m.as_scalar().is_some()) {
        let preimages = gens.iter().map(|m| (m.as_scalar().unwrap(), Mat2::identity())).collect();
        return Ok(Some(TwistedCubicData { conjugator: Mat4::identity(), preimages }));
    }

    let q = f.order();
    let n_points = (q as u128).pow(3) + (q as u128).pow(2) + q as u128 + 1;
    if n_points > DEFAULT_SUBSPACE_CAP {
        return Err(AschError::TooManySubspaces { count: n_points, cap: DEFAULT_SUBSPACE_CAP });
    }
    let orbits = point_orbits(f, &gens);
    let params: Vec<u64> = f.elements().filter(|&t| t != 0 && t != 1).collect();
    for set in candidate_sets(&orbits, q as usize + 1, CANDIDATE_LIMIT) {
        if !in_general_position(f, &set) {
            continue;
        }
        for &t in &params {
            for &t2 in params.iter().filter(|&&x| x != t) {
                for p in reconstruct(f, &set, t, t2) {
                    if p.det(f) == 0 {
                        continue;
                    }
                    if let Some(preimages) = preimages_under(f, &gens, &p) {
                        return Ok(Some(TwistedCubicData { conjugator: p, preimages }));
                    }
                }
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use crate::gsp4core::{close_subgroup, into_standard_coordinates, MatrixClosure, DEFAULT_CLOSURE_CAP};

    #[test]
    fn residual_vanishes_on_every_symm3() {
        // Oracle: all invertible h over F_5 and F_7, every scalar λ.
        for &l in &[5u64, 7] {
            let f = make_field(l, 1, None).unwrap();
            for a in 0..l {
                for b in 0..l {
                    for c in 0..l {
                        for d in 0..l {
                            let h = SqMat([[a, c], [b, d]]);
                            if h.det(&f) == 0 {
                                continue;
                            }
                            for lam in 1..l {
                                let m = symm3(&f, &h).scale(&f, lam);
                                let det = h.det(&f);
                                let sim = f.mul(f.mul(lam, lam), f.pow(det, 3));
                                assert!(has_symm3_shape(&f, &m, sim), "h = {h:?}, λ = {lam}");
                                let (lam2, h2) = symm3_preimage(&f, &m).unwrap();
                                assert_eq!(symm3(&f, &h2).scale(&f, lam2), m);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn trace_of_symm3() {
        // trace of Symm³(h) = T³ - 2 T D with T = tr h, D = det h
        let f = make_field(7, 1, None).unwrap();
        let h = SqMat([[1, 6], [1, 0]]); // T = 1, D = 1
        let e = symm3(&f, &h).char_coeffs(&f);
        assert_eq!(e[0], f.from_int(-1));
        let h = SqMat([[2, 6], [1, 0]]); // T = 2, D = 1
        assert_eq!(symm3(&f, &h).char_coeffs(&f)[0], 4);
    }

    #[test]
    fn residual_is_not_identically_zero() {
        let f = make_field(7, 1, None).unwrap();
        // charpoly (x - 1)(x - 2)(x - 4)(x - 1/... ) from diag with c = 1
        let m = Mat4::diag([2, 3, 5, 4]);
        let c = similitude_factor(&f, &m).unwrap();
        assert_eq!(c, 1);
        assert!(!has_symm3_shape(&f, &m, c));
    }

    fn gl2_5() -> Vec<Mat2> {
        vec![SqMat([[2, 0], [0, 1]]), SqMat([[4, 1], [4, 0]])]
    }

    #[test]
    fn symm3_gl2_5_is_recognized() {
        let f = make_field(5, 1, None).unwrap();
        let h = MatrixClosure::new(&f, &gl2_5(), 10_000);
        assert_eq!(h.order(), 480);
        let raw: Vec<Mat4> = gl2_5().iter().map(|h| symm3(&f, h)).collect();
        let (gens, _) = into_standard_coordinates(&f, &raw).unwrap();
        let g = close_subgroup(&f, &gens, DEFAULT_CLOSURE_CAP);
        assert_eq!(g.order(), 480);
        assert_eq!(g.inner.projective_order().unwrap(), 120);
        let data = test_twisted_cubic(&g).unwrap().unwrap();
        assert!(verify_twisted_cubic(&f, &g.generator_matrices(), &data));
    }

    #[test]
    fn cyclic_symm3_of_order_eight() {
        let f = make_field(5, 1, None).unwrap();
        let h = (0..625u64)
            .map(|k| SqMat([[k % 5, k / 5 % 5], [k / 25 % 5, k / 125]]))
            .find(|h| h.det(&f) != 0 && h.order(&f, 100) == Some(8))
            .unwrap();
        let (gens, _) = into_standard_coordinates(&f, &[symm3(&f, &h)]).unwrap();
        let g = close_subgroup(&f, &gens, DEFAULT_CLOSURE_CAP);
        let data = test_twisted_cubic(&g).unwrap().unwrap();
        assert!(verify_twisted_cubic(&f, &g.generator_matrices(), &data));
    }

    #[test]
    fn trivial_group_and_characteristic_gate() {
        let f = make_field(5, 1, None).unwrap();
        let g = close_subgroup(&f, &[], 10);
        let data = test_twisted_cubic(&g).unwrap().unwrap();
        assert_eq!(data.conjugator, Mat4::identity());
        let f3 = make_field(3, 1, None).unwrap();
        let g3 = close_subgroup(&f3, &[], 10);
        assert_eq!(test_twisted_cubic(&g3), Err(AschError::WrongCharacteristic(3)));
    }
}
