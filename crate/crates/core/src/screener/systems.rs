//! Synthetic compatible systems for testing the screener.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::CompatibleSystem;
use crate::arith;

/// `[a1, a2, a3, a4, a6]` of `y² + xy + y = x³ + x² - 10x - 10`, conductor 15.
pub const CONDUCTOR_15_CURVE: [i64; 5] = [1, 1, 1, -10, -10];

/// `a_p = p + 1 - #E(F_p)` by point counting, for `p` of good reduction.
pub fn elliptic_ap(curve: &[i64; 5], p: u64) -> i64 {
    let [a1, a2, a3, a4, a6] = curve.map(|c| arith::rem_euclid(c as i128, p));
    let m = |a: u64, b: u64| arith::mul_mod(a, b, p);
    let mut affine = 0u64;
    for x in 0..p {
        let rhs = (m(m(x, x), x) + m(a2, m(x, x)) + m(a4, x) + a6) % p;
        for y in 0..p {
            let lhs = (m(y, y) + m(a1, m(x, y)) + m(a3, y)) % p;
            if lhs == rhs {
                affine += 1;
            }
        }
    }
    p as i64 + 1 - (affine as i64 + 1)
}

/// Coefficients `(e1, e2, e3, e4)` of the charpoly of `Symm³` of a 2×2
/// matrix with trace `a` and determinant `b`.
pub fn symm3_coefficients(a: i128, b: i128) -> [i128; 4] {
    let e1 = a * a * a - 2 * a * b;
    let e2 = a.pow(4) * b - 3 * a * a * b * b + 2 * b.pow(3);
    [e1, e2, b.pow(3) * e1, b.pow(6)]
}

fn quartic(e: [i128; 4]) -> [i128; 5] {
    [1, -e[0], e[1], -e[2], e[3]]
}

/// `Symm³` of the 2-dimensional system with traces `a_p` and determinants
/// `p^(m2+1)`, for `p <= bound` outside `S`. Weights become `(2 m2, m2)`.
pub fn make_symm3_system(curve: &[i64; 5], s: &[u64], conductor: u64, m2: u32, bound: u64) -> CompatibleSystem {
    let s: BTreeSet<u64> = s.iter().copied().collect();
    let frobenius = arith::primes_up_to(bound)
        .into_iter()
        .filter(|p| !s.contains(p))
        .map(|p| {
            let a = elliptic_ap(curve, p) as i128;
            let b = (p as i128).pow(m2 + 1);
            (p, quartic(symm3_coefficients(a, b)))
        })
        .collect();
    CompatibleSystem {
        s,
        conductor: conductor.pow(3),
        m1: 2 * m2,
        m2,
        omega: BTreeMap::new(),
        trivial_character: true,
        frobenius,
    }
}

/// `P_p = (X - 1)(X - p^(m2+1))(X - p^(m1+2))(X - p^(m1+m2+3))`, unramified.
pub fn trivial_system(m1: u32, m2: u32, bound: u64) -> CompatibleSystem {
    let frobenius = arith::primes_up_to(bound)
        .into_iter()
        .map(|p| {
            let p = p as i128;
            let roots = [1, p.pow(m2 + 1), p.pow(m1 + 2), p.pow(m1 + m2 + 3)];
            let mut c = vec![1i128];
            for r in roots {
                let mut next = vec![0i128; c.len() + 1];
                for (i, &x) in c.iter().enumerate() {
                    next[i] += x;
                    next[i + 1] -= x * r;
                }
                c = next;
            }
            (p as u64, [c[0], c[1], c[2], c[3], c[4]])
        })
        .collect();
    CompatibleSystem {
        s: BTreeSet::new(),
        conductor: 1,
        m1,
        m2,
        omega: BTreeMap::new(),
        trivial_character: true,
        frobenius,
    }
}

/// Weights `(1, 0)`, `S = {2, 3}`, with `a_p` and `b_p` drawn uniformly from
/// the Weil ranges `|a_p| <= 4 p²`, `|b_p| <= 6 p⁴`.
pub fn make_generic_system(seed: u64, bound: u64) -> CompatibleSystem {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let s: BTreeSet<u64> = [2, 3].into_iter().collect();
    let frobenius = arith::primes_up_to(bound)
        .into_iter()
        .filter(|p| !s.contains(p))
        .map(|p| {
            let pp = p as i128;
            let e = pp.pow(4);
            let a = rng.gen_range(-4 * pp * pp..=4 * pp * pp);
            let b = rng.gen_range(-6 * e..=6 * e);
            (p, [1, -a, b, -a * e, e * e])
        })
        .collect();
    CompatibleSystem { s, conductor: 6, m1: 1, m2: 0, omega: BTreeMap::new(), trivial_character: true, frobenius }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aschbacher::cubic::symm3;
    use crate::ff::make_field;
    use crate::linalg::Mat2;

    #[test]
    fn conductor_15_traces() {
        let ap: Vec<i64> = [2, 7, 11, 13, 17].iter().map(|&p| elliptic_ap(&CONDUCTOR_15_CURVE, p)).collect();
        assert_eq!(ap, vec![-1, 0, -4, -2, 2]);
    }

    #[test]
    fn symm3_traces() {
        assert_eq!(symm3_coefficients(1, 1)[0], -1);
        assert_eq!(symm3_coefficients(2, 1)[0], 4);
        assert_eq!(symm3_coefficients(0, 5)[0], 0);
    }

    #[test]
    fn coefficients_match_matrix_expansion() {
        // Charpoly of the explicit Symm³ matrix of the companion of x² - a x + b.
        for l in [7u64, 11, 13] {
            let f = make_field(l, 1, None).unwrap();
            for a in 0..l {
                for b in 1..l {
                    let h = Mat2::from_rows(&[vec![0, f.neg(b)], vec![1, a]]).unwrap();
                    let got = symm3(&f, &h).char_coeffs(&f);
                    let want = symm3_coefficients(a as i128, b as i128).map(|x| f.from_int(x));
                    assert_eq!(got.to_vec(), want.to_vec(), "l={l} a={a} b={b}");
                }
            }
        }
    }

    #[test]
    fn generic_system_is_seeded() {
        assert_eq!(make_generic_system(5, 100), make_generic_system(5, 100));
        assert_ne!(make_generic_system(5, 100), make_generic_system(6, 100));
    }
}
