//! Machine-integer number theory: modular powers, primality, factoring by
//! trial division, Jacobi/Legendre/Kronecker symbols and multiplicative orders.

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Reduces a signed integer into `[0, m)`.
pub fn rem_euclid(a: i128, m: u64) -> u64 {
    a.rem_euclid(m as i128) as u64
}

/// Primality by trial division. Only meant for small inputs (field
/// characteristics, certificate re-checks below 10^12).
pub fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n % 2 == 0 || n % 3 == 0 {
        return false;
    }
    let mut d = 5u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 || n % (d + 2) == 0 {
            return false;
        }
        d += 6;
    }
    true
}

/// Deterministic Miller-Rabin, valid for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n % p == 0 {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'outer: for &a in &BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'outer;
            }
        }
        return false;
    }
    true
}

/// Prime factorization `[(p, e), ...]` by trial division, primes ascending.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                ds.push(ds[i] * pk);
            }
        }
    }
    ds.sort_unstable();
    ds
}

/// Primes `<= n` by the sieve of Eratosthenes.
pub fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

/// Multiplicative order of `a` modulo `m`, or `None` when `gcd(a, m) != 1`.
pub fn multiplicative_order(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(1);
    }
    if gcd(a % m, m) != 1 {
        return None;
    }
    // phi(m) from the factorization, then descend through its prime divisors.
    let phi = factorize(m).iter().fold(1u64, |acc, &(p, e)| acc * (p - 1) * p.pow(e - 1));
    let mut ord = phi;
    for (p, _) in factorize(phi) {
        while ord % p == 0 && pow_mod(a, ord / p, m) == 1 {
            ord /= p;
        }
    }
    Some(ord)
}

/// Jacobi symbol `(a | n)` for odd positive `n`.
pub fn jacobi(a: i128, n: u64) -> i8 {
    assert!(n % 2 == 1, "jacobi symbol needs an odd modulus");
    let mut a = rem_euclid(a, n);
    let mut n = n;
    let mut sign = 1i8;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if n % 8 == 3 || n % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            sign = -sign;
        }
        a %= n;
    }
    if n == 1 {
        sign
    } else {
        0
    }
}

/// Legendre symbol `(a | p)` for a prime `p`, including `p = 2`
/// (where it is `0` for even `a` and `1` otherwise).
pub fn legendre(a: i128, p: u64) -> i8 {
    if p == 2 {
        return if a.rem_euclid(2) == 0 { 0 } else { 1 };
    }
    jacobi(a, p)
}

/// Kronecker symbol `(d | n)` for a prime `n`; at `n = 2` this is the
/// classical extension by `d mod 8`.
pub fn kronecker_prime(d: i64, n: u64) -> i8 {
    if n == 2 {
        return match d.rem_euclid(8) {
            0 | 2 | 4 | 6 => 0,
            1 | 7 => 1,
            _ => -1,
        };
    }
    jacobi(d as i128, n)
}

/// Square roots of `-1` modulo an odd prime `p` (empty when `p ≡ 3 mod 4`).
pub fn sqrt_minus_one(p: u64) -> Vec<u64> {
    if p % 4 != 1 {
        return Vec::new();
    }
    // Any non-residue c gives c^((p-1)/4) as a root.
    let mut c = 2u64;
    while jacobi(c as i128, p) != -1 {
        c += 1;
    }
    let r = pow_mod(c, (p - 1) / 4, p);
    let mut roots = vec![r, p - r];
    roots.sort_unstable();
    roots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000u64 {
            assert_eq!(is_prime(n), is_prime_trial(n), "n = {n}");
        }
        assert!(is_prime(18_446_744_073_709_551_557));
        assert!(!is_prime(3_215_031_751));
    }

    #[test]
    fn order_of_two_mod_281() {
        assert_eq!(multiplicative_order(2, 281), Some(70));
        assert_eq!(multiplicative_order(5, 13), Some(4));
        assert_eq!(multiplicative_order(2, 17), Some(8));
        assert_eq!(multiplicative_order(3, 9), None);
    }

    #[test]
    fn jacobi_against_euler_criterion() {
        for &p in &[3u64, 5, 7, 11, 13, 101, 281] {
            for a in -50i128..50 {
                let euler = pow_mod(rem_euclid(a, p), (p - 1) / 2, p);
                let expect = match euler {
                    0 => 0,
                    1 => 1,
                    _ => -1,
                };
                assert_eq!(legendre(a, p), expect, "({a}|{p})");
            }
        }
    }

    #[test]
    fn kronecker_at_two() {
        assert_eq!(kronecker_prime(-4, 2), 0);
        assert_eq!(kronecker_prime(5, 2), -1);
        assert_eq!(kronecker_prime(-7, 2), 1);
    }

    #[test]
    fn sqrt_minus_one_mod_281() {
        assert_eq!(sqrt_minus_one(281), vec![53, 228]);
        assert_eq!(sqrt_minus_one(13), vec![5, 8]);
        assert!(sqrt_minus_one(7).is_empty());
    }

    #[test]
    fn divisors_and_factorization() {
        assert_eq!(factorize(5040), vec![(2, 4), (3, 2), (5, 1), (7, 1)]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(primes_up_to(26), vec![2, 3, 5, 7, 11, 13, 17, 19, 23]);
    }
}
