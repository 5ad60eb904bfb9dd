//! Tame inertia at `ℓ` and exclusion of the small exceptional images.

use serde::Serialize;

use super::{CompatibleSystem, ScreenError};
use crate::arith;
use crate::aschbacher::SMALL_ORDERS_ODD;
use crate::ff::poly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PatternKind {
    Ordinary,
    Level2Top,
    Level2Middle,
    Level2Both,
}

/// `χ` is the cyclotomic character; `ψ` a fundamental character of level 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum CharacterKind {
    Chi,
    Psi,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalEntry {
    pub character: CharacterKind,
    pub exponent: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InertiaPattern {
    pub kind: PatternKind,
    pub diagonal: [DiagonalEntry; 4],
    /// Order of the image of a tame inertia generator in `PGL(4)`.
    pub projective_order: u64,
}

impl InertiaPattern {
    pub fn exponents(&self) -> [u64; 4] {
        self.diagonal.map(|d| d.exponent)
    }

    /// Diagonal as powers of `ψ` modulo `ℓ² - 1`, sorted.
    pub fn psi_exponents(&self, l: u64) -> [u64; 4] {
        let modulus = l * l - 1;
        let mut out = self.diagonal.map(|d| match d.character {
            CharacterKind::Chi => d.exponent * (l + 1) % modulus,
            CharacterKind::Psi => d.exponent % modulus,
        });
        out.sort_unstable();
        out
    }
}

fn projective_order(l: u64, psi: &[u64; 4]) -> u64 {
    let modulus = l * l - 1;
    let g = psi[1..].iter().fold(modulus, |g, &e| arith::gcd(g, (e + modulus - psi[0]) % modulus));
    modulus / g
}

/// The four possible diagonals of `ρ̄|I_ℓ` for weights `(m1, m2)`.
pub fn inertia_patterns(m1: u32, m2: u32, l: u64) -> Result<Vec<InertiaPattern>, ScreenError> {
    let w = (m1 + m2 + 3) as u64;
    if l < 3 || l - 1 <= w {
        return Err(ScreenError::HypothesisViolated { l_minus_1: l.saturating_sub(1), w });
    }
    let (a, b) = ((m2 + 1) as u64, (m1 + 2) as u64);
    let chi = |e| DiagonalEntry { character: CharacterKind::Chi, exponent: e };
    let psi = |e| DiagonalEntry { character: CharacterKind::Psi, exponent: e };
    let top = [psi(w), psi(w * l)];
    let middle = [psi(a + b * l), psi(b + a * l)];
    let raw = [
        (PatternKind::Ordinary, [chi(0), chi(a), chi(b), chi(w)]),
        (PatternKind::Level2Top, [top[0], top[1], chi(a), chi(b)]),
        (PatternKind::Level2Middle, [chi(0), chi(w), middle[0], middle[1]]),
        (PatternKind::Level2Both, [top[0], top[1], middle[0], middle[1]]),
    ];
    Ok(raw
        .into_iter()
        .map(|(kind, diagonal)| {
            let mut p = InertiaPattern { kind, diagonal, projective_order: 0 };
            p.projective_order = projective_order(l, &p.psi_exponents(l));
            p
        })
        .collect())
}

fn derivative(f: &[u64], l: u64) -> Vec<u64> {
    poly::trim(f.iter().enumerate().skip(1).map(|(i, &c)| arith::mul_mod(i as u64 % l, c, l)).collect())
}

/// Order of `x` in `(F_l[x]/P)^* / F_l^*` for squarefree `P` with `P(0) != 0`.
///
/// When `P` is the characteristic polynomial of `ρ̄(Frob_p)` and is
/// squarefree, this is the order of `ρ̄(Frob_p)` in `PGL(4, F_l)`.
pub fn frobenius_projective_order(p_low: &[u64], l: u64) -> Option<u64> {
    let f = poly::monic(p_low, l);
    if f[0] == 0 || poly::degree(&poly::gcd(&f, &derivative(&f, l), l)) != Some(0) {
        return None;
    }
    let is_scalar = |n: u64| poly::degree(&poly::pow_mod_poly(&[0, 1], n as u128, &f, l)) == Some(0);
    let mut n = poly::factor_degrees(&f, l).into_iter().fold(1u64, |acc, d| arith::lcm(acc, l.pow(d as u32) - 1));
    for (r, _) in arith::factorize(n) {
        while n % r == 0 && is_scalar(n / r) {
            n /= r;
        }
    }
    Some(n)
}

#[derive(Clone, Debug, Serialize)]
pub struct PatternExclusion {
    pub kind: PatternKind,
    pub projective_order: u64,
    /// Small-group orders divisible by the inertia order.
    pub compatible_orders: Vec<u128>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SmallGroupOutcome {
    pub flagged: bool,
    pub patterns: Vec<PatternExclusion>,
    /// `(p, n)`: `ρ̄(Frob_p)` has projective order `n`, dividing none of the
    /// small-group orders.
    pub frobenius_witness: Option<(u64, u64)>,
}

fn compatible_orders(n: u64) -> Vec<u128> {
    SMALL_ORDERS_ODD.iter().copied().filter(|&o| o % n as u128 == 0).collect()
}

/// A small exceptional image needs an element of each order realized by
/// inertia and by Frobenius. The exponent of each small group is bounded by
/// its order, so this can only over-flag.
pub fn small_group_exclusion(sys: &CompatibleSystem, l: u64, sample: &[u64]) -> Result<SmallGroupOutcome, ScreenError> {
    let patterns: Vec<PatternExclusion> = inertia_patterns(sys.m1, sys.m2, l)?
        .into_iter()
        .map(|p| PatternExclusion {
            kind: p.kind,
            projective_order: p.projective_order,
            compatible_orders: compatible_orders(p.projective_order),
        })
        .collect();
    let by_inertia = patterns.iter().all(|p| p.compatible_orders.is_empty());
    let frobenius_witness = if by_inertia {
        None
    } else {
        sample.iter().find_map(|&p| {
            let n = frobenius_projective_order(&sys.reduce(p, l)?, l)?;
            compatible_orders(n).is_empty().then_some((p, n))
        })
    };
    Ok(SmallGroupOutcome { flagged: !by_inertia && frobenius_witness.is_none(), patterns, frobenius_witness })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ff::make_field;
    use crate::linalg::Mat4;

    #[test]
    fn patterns_at_eleven() {
        let pats = inertia_patterns(0, 0, 11).unwrap();
        assert_eq!(pats[0].exponents(), [0, 1, 2, 3]);
        assert_eq!(pats[1].exponents(), [3, 33, 1, 2]);
        assert_eq!(pats[2].exponents(), [0, 3, 23, 13]);
        assert_eq!(pats[3].exponents(), [3, 33, 23, 13]);
        for i in 0..4 {
            for j in i + 1..4 {
                assert_ne!(pats[i].psi_exponents(11), pats[j].psi_exponents(11));
            }
        }
        assert_eq!(pats[0].projective_order, 10);
    }

    #[test]
    fn hypothesis_gate() {
        assert!(matches!(inertia_patterns(1, 0, 5), Err(ScreenError::HypothesisViolated { l_minus_1: 4, w: 4 })));
        assert!(inertia_patterns(1, 0, 7).is_ok());
    }

    #[test]
    fn large_ell_needs_no_frobenius() {
        let sys = super::super::trivial_system(0, 0, 20);
        let out = small_group_exclusion(&sys, 5081, &[]).unwrap();
        assert!(!out.flagged);
        assert!(out.frobenius_witness.is_none());
    }

    #[test]
    fn order_bound_never_fires_above_threshold() {
        // Brute force over weights and primes l with l - 1 > 5040 (m1 + m2 + 3).
        for (m1, m2) in [(0u32, 0u32), (1, 0), (1, 1), (2, 1)] {
            let w = (m1 + m2 + 3) as u64;
            let start = 5040 * w + 2;
            let primes: Vec<u64> = (start..).filter(|&x| arith::is_prime(x)).take(5).collect();
            for l in primes {
                for p in inertia_patterns(m1, m2, l).unwrap() {
                    assert!(p.projective_order > 5040, "({m1},{m2}) l={l} {:?}", p.kind);
                }
            }
        }
    }

    #[test]
    fn projective_order_matches_companion_matrix() {
        let l = 7;
        let f = make_field(l, 1, None).unwrap();
        for coeffs in [[3u64, 1, 4, 1, 1], [1, 2, 0, 5, 1], [6, 0, 0, 0, 1], [2, 3, 1, 0, 1]] {
            let Some(n) = frobenius_projective_order(&coeffs, l) else { continue };
            let mut rows = vec![vec![0u64; 4]; 4];
            for i in 0..3 {
                rows[i + 1][i] = 1;
            }
            for (i, row) in rows.iter_mut().enumerate() {
                row[3] = f.neg(coeffs[i]);
            }
            let c = Mat4::from_rows(&rows).unwrap();
            assert_eq!(c.projective_order(&f, 10_000), Some(n));
        }
    }

    #[test]
    fn repeated_roots_give_no_witness() {
        // (x - 1)^2 (x - 2)(x - 3) over F_7
        let f = poly::mul(&poly::mul(&[6, 1], &[6, 1], 7), &poly::mul(&[5, 1], &[4, 1], 7), 7);
        assert_eq!(frobenius_projective_order(&f, 7), None);
    }
}
