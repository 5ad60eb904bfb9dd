//! Orders of the Suzuki groups `Sz(2^r)`, which exist only for odd `r`.

use num_bigint::BigUint;

use crate::arith::{mul_mod, pow_mod};

/// `2^{2r} (2^{2r} + 1)(2^r - 1)`.
pub fn suzuki_order(r: u32) -> BigUint {
    let one = BigUint::from(1u32);
    let two_r = BigUint::from(1u32) << r;
    let two_2r = BigUint::from(1u32) << (2 * r);
    &two_2r * (&two_2r + &one) * (two_r - one)
}

/// The order formula reduced mod `m`, without big integers.
pub fn suzuki_order_mod(r: u32, m: u64) -> u64 {
    let a = pow_mod(2, r as u64, m);
    let b = mul_mod(a, a, m);
    mul_mod(mul_mod(b, (b + 1) % m, m), (a + m - 1) % m, m)
}

/// Odd `r <= r_max` with `p` dividing `|Sz(2^r)|`.
pub fn suzuki_divisibility(p: u64, r_max: u32) -> Vec<u32> {
    (1..=r_max).step_by(2).filter(|&r| suzuki_order_mod(r, p) == 0).collect()
}

/// Every `r <= r_max`, odd or even, with `p` dividing the order formula.
pub fn formula_divisibility(p: u64, r_max: u32) -> Vec<u32> {
    (1..=r_max).filter(|&r| suzuki_order_mod(r, p) == 0).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_orders() {
        assert_eq!(suzuki_order(1), BigUint::from(20u32));
        assert_eq!(suzuki_order(3), BigUint::from(29120u32));
        assert_eq!(suzuki_order(5), BigUint::from(32_537_600u64));
    }

    #[test]
    fn modular_reduction_matches_exact_order() {
        for r in 1..=60 {
            let exact = suzuki_order(r);
            for &m in &[5u64, 13, 281, 1_000_003] {
                let expect = (&exact % BigUint::from(m)).to_u64_digits().first().copied().unwrap_or(0);
                assert_eq!(suzuki_order_mod(r, m), expect, "r = {r}, m = {m}");
            }
        }
    }

    #[test]
    fn never_divisible_by_281() {
        assert!(suzuki_divisibility(281, 1000).is_empty());
        assert_eq!(suzuki_divisibility(5, 3), vec![1, 3]);
        // 2 has order 70 mod 281, so only multiples of 70 (all even) appear.
        assert!(formula_divisibility(281, 1000).iter().all(|r| r % 70 == 0));
        assert_eq!(formula_divisibility(281, 200), vec![70, 140]);
    }
}
