//! Dense polynomials over a prime field `F_l`, coefficients low-to-high.
//!
//! Used for modulus validation and for factorization patterns of Frobenius
//! characteristic polynomials reduced mod `l`.

use crate::arith::{mul_mod, pow_mod};

pub type Poly = Vec<u64>;

pub fn trim(mut f: Poly) -> Poly {
    while f.len() > 1 && *f.last().unwrap() == 0 {
        f.pop();
    }
    if f.is_empty() {
        f.push(0);
    }
    f
}

pub fn degree(f: &[u64]) -> Option<usize> {
    f.iter().rposition(|&c| c != 0)
}

pub fn from_signed(coeffs: &[i128], l: u64) -> Poly {
    trim(coeffs.iter().map(|&c| crate::arith::rem_euclid(c, l)).collect())
}

pub fn sub(f: &[u64], g: &[u64], l: u64) -> Poly {
    let n = f.len().max(g.len());
    let out = (0..n)
        .map(|i| {
            let a = f.get(i).copied().unwrap_or(0);
            let b = g.get(i).copied().unwrap_or(0);
            (a + l - b) % l
        })
        .collect();
    trim(out)
}

pub fn mul(f: &[u64], g: &[u64], l: u64) -> Poly {
    let mut out = vec![0u64; f.len() + g.len() - 1];
    for (i, &a) in f.iter().enumerate() {
        if a == 0 {
            continue;
        }
        for (j, &b) in g.iter().enumerate() {
            out[i + j] = (out[i + j] + mul_mod(a, b, l)) % l;
        }
    }
    trim(out)
}

/// Division with remainder; `g` must be nonzero.
pub fn divrem(f: &[u64], g: &[u64], l: u64) -> (Poly, Poly) {
    let dg = degree(g).expect("division by the zero polynomial");
    let inv_lead = pow_mod(g[dg], l - 2, l);
    let mut r: Vec<u64> = f.to_vec();
    let df = match degree(&r) {
        Some(d) if d >= dg => d,
        _ => return (vec![0], trim(r)),
    };
    let mut q = vec![0u64; df - dg + 1];
    for k in (dg..=df).rev() {
        let c = mul_mod(r[k], inv_lead, l);
        if c == 0 {
            continue;
        }
        q[k - dg] = c;
        for (j, &b) in g.iter().enumerate().take(dg + 1) {
            let idx = k - dg + j;
            r[idx] = (r[idx] + l - mul_mod(c, b, l)) % l;
        }
    }
    (trim(q), trim(r))
}

pub fn rem(f: &[u64], g: &[u64], l: u64) -> Poly {
    divrem(f, g, l).1
}

pub fn monic(f: &[u64], l: u64) -> Poly {
    match degree(f) {
        None => vec![0],
        Some(d) => {
            let inv = pow_mod(f[d], l - 2, l);
            trim(f.iter().map(|&c| mul_mod(c, inv, l)).collect())
        }
    }
}

pub fn gcd(f: &[u64], g: &[u64], l: u64) -> Poly {
    let mut a = trim(f.to_vec());
    let mut b = trim(g.to_vec());
    while degree(&b).is_some() {
        let r = rem(&a, &b, l);
        a = b;
        b = r;
    }
    monic(&a, l)
}

/// `base^exp mod m`.
pub fn pow_mod_poly(base: &[u64], mut exp: u128, m: &[u64], l: u64) -> Poly {
    let mut acc: Poly = vec![1];
    let mut b = rem(base, m, l);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = rem(&mul(&acc, &b, l), m, l);
        }
        b = rem(&mul(&b, &b, l), m, l);
        exp >>= 1;
    }
    acc
}

/// Multiset of irreducible factor degrees (with multiplicity), ascending.
///
/// Distinct-degree splitting: after removing all factors of degree `< d`,
/// `gcd(f, x^(l^d) - x)` is the product of the distinct degree-`d` factors;
/// repeated gcds peel off multiplicities.
pub fn factor_degrees(f: &[u64], l: u64) -> Vec<usize> {
    let mut f = monic(f, l);
    let mut out = Vec::new();
    let mut d = 1usize;
    let mut x_pow: Poly = vec![0, 1]; // x^(l^(d-1)) mod f, updated lazily
    while let Some(df) = degree(&f) {
        if df == 0 {
            break;
        }
        if 2 * d > df {
            out.push(df);
            break;
        }
        x_pow = pow_mod_poly(&x_pow, l as u128, &f, l);
        let probe = sub(&x_pow, &[0, 1], l);
        let mut g = gcd(&f, &probe, l);
        while let Some(dg) = degree(&g) {
            if dg == 0 {
                break;
            }
            for _ in 0..dg / d {
                out.push(d);
            }
            f = divrem(&f, &g, l).0;
            g = gcd(&f, &g, l);
        }
        x_pow = rem(&x_pow, &f, l);
        d += 1;
    }
    out.sort_unstable();
    out
}

pub fn is_irreducible(f: &[u64], l: u64) -> bool {
    match degree(f) {
        None | Some(0) => false,
        Some(d) => factor_degrees(f, l) == vec![d],
    }
}

pub fn eval(f: &[u64], x: u64, l: u64) -> u64 {
    f.iter().rev().fold(0, |acc, &c| (mul_mod(acc, x, l) + c) % l)
}
