//! Prime parameters `(p, q)` and `(p, 281, q, q')` for maximally induced
//! local data, and an independent certificate checker.
//!
//! "`q` splits completely in `Q(i, √p_1, ..., √p_m)`" is encoded as
//! `q ≡ 1 mod 4` together with `(p_j | q) = 1` for each `p_j`; for `p_j = 2`
//! this is `q ≡ ±1 mod 8`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{self, is_prime, legendre, pow_mod, sqrt_minus_one};

pub const P_PRIME: u64 = 281;

/// Default bound on candidates examined by a search.
pub const DEFAULT_SEARCH_CAP: u64 = 1_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PrimesError {
    #[error("search exhausted after {bound} candidates ({progress})")]
    SearchExhausted { bound: u64, progress: String },
    #[error("281 divides N = {0}")]
    DividesN(u64),
    #[error("{0} must be positive")]
    NotPositive(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub name: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairCertificate {
    #[serde(rename = "N")]
    pub n: i64,
    pub p: i64,
    pub q: i64,
    #[serde(default)]
    pub checked_conditions: Vec<Condition>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadCertificate {
    #[serde(rename = "N")]
    pub n: i64,
    pub k: i64,
    #[serde(rename = "M")]
    pub m: i64,
    pub p: i64,
    pub p_prime: i64,
    pub q: i64,
    pub q_prime: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Certificate {
    Pair(PairCertificate),
    Quad(QuadCertificate),
}

/// Primes `≡ 1 mod 4` above `lower`, ascending.
fn primes_1_mod_4_above(lower: u64) -> impl Iterator<Item = u64> {
    (lower + 1..).filter(|&n| n % 4 == 1 && is_prime(n))
}

/// Candidates `x > lower` with `x² ≡ -1 mod p`, ascending: the two residue
/// classes `±√-1 mod p` merged.
fn sqrt_minus_one_candidates(p: u64, lower: u64) -> impl Iterator<Item = u64> {
    let roots = sqrt_minus_one(p);
    let base = lower / p * p;
    (0u64..)
        .flat_map(move |j| {
            let roots = roots.clone();
            roots.into_iter().map(move |r| base + j * p + r)
        })
        .filter(move |&x| x > lower)
}

fn splits_completely(q: u64, small_primes: &[u64]) -> bool {
    q % 4 == 1 && small_primes.iter().all(|&pi| legendre(pi as i128, q) == 1)
}

/// Smallest `p ≡ 1 mod 4` above `max(N, 7)` (and at least `p_min`), then the
/// smallest admissible `q`.
pub fn search_pair(n: u64, p_min: Option<u64>, cap: u64) -> Result<PairCertificate, PrimesError> {
    if n == 0 {
        return Err(PrimesError::NotPositive("N"));
    }
    let lower = n.max(7).max(p_min.unwrap_or(0).saturating_sub(1));
    let p = primes_1_mod_4_above(lower).next().expect("infinitely many primes ≡ 1 mod 4");
    let divisors = arith::prime_divisors(n);
    for (examined, q) in sqrt_minus_one_candidates(p, 4).enumerate() {
        if examined as u64 >= cap {
            return Err(PrimesError::SearchExhausted {
                bound: cap,
                progress: format!("p = {p}, last q candidate {q}"),
            });
        }
        if q != p && is_prime(q) && splits_completely(q, &divisors) {
            let mut cert = PairCertificate { n: n as i64, p: p as i64, q: q as i64, checked_conditions: Vec::new() };
            cert.checked_conditions = verify_pair(&cert);
            return Ok(cert);
        }
    }
    unreachable!()
}

/// `M = max(N, 24k + 1) + 1`, the smallest `p`, then `q` and `q'` in
/// increasing order, `q` first; a `q` is abandoned only if no `q'` within
/// the remaining budget is a square mod `q`.
pub fn search_quad(n: u64, k: u64, cap: u64) -> Result<QuadCertificate, PrimesError> {
    if n == 0 {
        return Err(PrimesError::NotPositive("N"));
    }
    if k == 0 {
        return Err(PrimesError::NotPositive("k"));
    }
    if n % P_PRIME == 0 {
        return Err(PrimesError::DividesN(n));
    }
    let m = n.max(24 * k + 1) + 1;
    let p = primes_1_mod_4_above(m.max(7)).find(|&p| p != P_PRIME).unwrap();
    let small = arith::primes_up_to(m);
    let small_prime: Vec<u64> = small.iter().copied().filter(|&x| x != P_PRIME).collect();
    let mut examined = 0u64;
    let exhausted = |examined: u64, what: String| PrimesError::SearchExhausted { bound: examined, progress: what };

    let q_prime_ok = |x: u64, q: u64| x != p && x != q && is_prime(x) && splits_completely(x, &small_prime);
    for q in sqrt_minus_one_candidates(p, m) {
        examined += 1;
        if examined > cap {
            return Err(exhausted(cap, format!("M = {m}, p = {p}, q candidates up to {q}")));
        }
        if q == P_PRIME || !is_prime(q) || !splits_completely(q, &small) {
            continue;
        }
        for qp in sqrt_minus_one_candidates(P_PRIME, m) {
            examined += 1;
            if examined > cap {
                return Err(exhausted(cap, format!("M = {m}, p = {p}, q = {q}, q' candidates up to {qp}")));
            }
            if q_prime_ok(qp, q) && legendre(qp as i128, q) == 1 {
                return Ok(QuadCertificate {
                    n: n as i64,
                    k: k as i64,
                    m: m as i64,
                    p: p as i64,
                    p_prime: P_PRIME as i64,
                    q: q as i64,
                    q_prime: qp as i64,
                });
            }
        }
    }
    unreachable!()
}

// Independent checks: trial-division primality and Euler's criterion.

fn prime_by_trial(n: i64) -> bool {
    n > 1 && arith::is_prime_trial(n as u64)
}

/// `(a | q)` by Euler's criterion, `q` an odd prime.
fn euler_symbol(a: i64, q: i64) -> i8 {
    let q = q as u64;
    match pow_mod(a.rem_euclid(q as i64) as u64, (q - 1) / 2, q) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

fn residue_condition(x: i64, primes: &[i64]) -> bool {
    x > 2
        && x % 4 == 1
        && primes.iter().all(|&pi| if pi == 2 { x % 8 == 1 || x % 8 == 7 } else { euler_symbol(pi, x) == 1 })
}

fn small_primes_trial(bound: i64) -> Vec<i64> {
    (2..=bound.max(1)).filter(|&x| prime_by_trial(x)).collect()
}

fn cond(name: &str, pass: bool) -> Condition {
    Condition { name: name.to_string(), pass }
}

pub fn verify_pair(c: &PairCertificate) -> Vec<Condition> {
    let (n, p, q) = (c.n, c.p, c.q);
    let divisors: Vec<i64> =
        if n >= 1 { (2..=n).filter(|&d| n % d == 0 && prime_by_trial(d)).collect() } else { Vec::new() };
    vec![
        cond("N >= 1", n >= 1),
        cond("p prime", prime_by_trial(p)),
        cond("p ≡ 1 mod 4", p.rem_euclid(4) == 1),
        cond("p > max(N, 7)", p > n.max(7)),
        cond("q prime", prime_by_trial(q)),
        cond("q >= 5 and q != p", q >= 5 && q != p),
        cond("q² ≡ -1 mod p", p > 1 && ((q as i128 * q as i128 + 1) % p as i128) == 0),
        cond("q splits in Q(i, √p_j), p_j | N", prime_by_trial(q) && residue_condition(q, &divisors)),
    ]
}

pub fn verify_quad(c: &QuadCertificate) -> Vec<Condition> {
    let (n, k, m, p, pp, q, qp) = (c.n, c.k, c.m, c.p, c.p_prime, c.q, c.q_prime);
    let sane = n >= 1 && k >= 1 && m >= 1;
    let primes_m = if sane { small_primes_trial(m) } else { Vec::new() };
    let primes_m_no_pp: Vec<i64> = primes_m.iter().copied().filter(|&x| x != pp).collect();
    let all_prime = [p, q, qp].iter().all(|&x| prime_by_trial(x)) && pp == 281;
    let distinct = {
        let mut v = vec![p, pp, q, qp];
        v.sort_unstable();
        v.dedup();
        v.len() == 4
    };
    vec![
        cond("N >= 1, k >= 1, 281 ∤ N", sane && n % 281 != 0),
        cond("M = max(N, 24k+1) + 1", sane && m == n.max(24 * k + 1) + 1),
        cond("p' = 281; p, q, q' prime", all_prime),
        cond("p ≡ 1 mod 4, p > max(M, 7)", p.rem_euclid(4) == 1 && p > m.max(7)),
        cond("p, p', q, q' pairwise distinct", distinct),
        cond("i: q, q' > M", q > m && qp > m),
        cond("ii: q' is a square mod q", all_prime && q > 2 && euler_symbol(qp, q) == 1),
        cond(
            "iii: q² ≡ -1 mod p, q'² ≡ -1 mod p'",
            p > 1
                && pp > 1
                && (q as i128 * q as i128 + 1) % p as i128 == 0
                && (qp as i128 * qp as i128 + 1) % pp as i128 == 0,
        ),
        cond("iv: q splits in Q(i, √p_j), p_j <= M", all_prime && residue_condition(q, &primes_m)),
        cond("v: q' splits in Q(i, √p_j), p_j <= M, p_j != p'", all_prime && residue_condition(qp, &primes_m_no_pp)),
    ]
}

pub fn verify_certificate(c: &Certificate) -> Vec<Condition> {
    match c {
        Certificate::Pair(p) => verify_pair(p),
        Certificate::Quad(q) => verify_quad(q),
    }
}

pub fn all_pass(conditions: &[Condition]) -> bool {
    conditions.iter().all(|c| c.pass)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_examples() {
        let c = search_pair(1, None, DEFAULT_SEARCH_CAP).unwrap();
        assert_eq!((c.p, c.q), (13, 5));
        assert!(all_pass(&c.checked_conditions));
        let c = search_pair(1, Some(14), DEFAULT_SEARCH_CAP).unwrap();
        assert_eq!((c.p, c.q), (17, 13));
        assert!(all_pass(&verify_pair(&PairCertificate { n: 1, p: 13, q: 5, checked_conditions: vec![] })));
    }

    #[test]
    fn pair_with_divisors_of_n() {
        let c = search_pair(30, None, DEFAULT_SEARCH_CAP).unwrap();
        assert_eq!(c.p, 37);
        let q = c.q as u64;
        assert_eq!(q % 8, 1);
        assert!(all_pass(&c.checked_conditions));
        // brute-force minimality
        let smaller = (5..q).filter(|&x| {
            is_prime(x) && (x * x + 1) % 37 == 0 && x % 8 == 1 && legendre(3, x) == 1 && legendre(5, x) == 1
        });
        assert_eq!(smaller.count(), 0);
    }

    #[test]
    fn quad_example() {
        let c = search_quad(1, 1, DEFAULT_SEARCH_CAP).unwrap();
        assert_eq!((c.m, c.p, c.p_prime), (26, 29, 281));
        assert!(c.q_prime % 281 == 53 || c.q_prime % 281 == 228);
        let v = verify_quad(&c);
        assert!(all_pass(&v), "{v:?}");
    }

    #[test]
    fn quad_rejects_multiples_of_281() {
        assert_eq!(search_quad(562, 1, 10).unwrap_err(), PrimesError::DividesN(562));
    }

    #[test]
    fn tampered_q_prime_fails() {
        let mut c = search_quad(1, 1, DEFAULT_SEARCH_CAP).unwrap();
        c.q_prime += 2;
        assert!(!all_pass(&verify_quad(&c)));
    }

    #[test]
    fn search_cap_is_reported() {
        assert!(matches!(search_quad(1, 1, 3), Err(PrimesError::SearchExhausted { .. })));
    }

    #[test]
    fn certificate_json_round_trip() {
        let c = Certificate::Quad(search_quad(1, 1, DEFAULT_SEARCH_CAP).unwrap());
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.contains("\"kind\":\"quad\"") && s.contains("\"M\":26"));
        let back: Certificate = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn euler_criterion_agrees_with_jacobi() {
        for &q in &[5i64, 13, 29, 281, 1009] {
            for a in 1..60 {
                if a % q != 0 {
                    assert_eq!(euler_symbol(a, q), legendre(a as i128, q as u64));
                }
            }
        }
    }
}
