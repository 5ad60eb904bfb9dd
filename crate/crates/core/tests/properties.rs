use proptest::prelude::*;

use gsp4::arith::{is_prime, legendre};
use gsp4::aschbacher::cubic::{has_symm3_shape, symm3};
use gsp4::ff::make_field;
use gsp4::gsp4core::{similitude_factor, GroupElement};
use gsp4::linalg::SqMat;
use gsp4::screener::{inertia_patterns, symm3_coefficients};

fn prime_1_mod_4() -> impl Strategy<Value = u64> {
    (5u64..5000).prop_filter("prime ≡ 1 mod 4", |&n| n % 4 == 1 && is_prime(n))
}

fn odd_prime(lo: u64, hi: u64) -> impl Strategy<Value = u64> {
    (lo..hi).prop_filter("odd prime", |&n| n % 2 == 1 && is_prime(n))
}

proptest! {
    #[test]
    fn reciprocity_for_primes_1_mod_4(a in prime_1_mod_4(), b in prime_1_mod_4()) {
        prop_assume!(a != b);
        prop_assert_eq!(legendre(a as i128, b), legendre(b as i128, a));
    }

    #[test]
    fn symm3_trace_and_shape(l in odd_prime(5, 60), a in 0u64..60, c in 0u64..60, b in 0u64..60, d in 0u64..60) {
        let f = make_field(l, 1, None).unwrap();
        let h = SqMat([[a % l, c % l], [b % l, d % l]]);
        let det = h.det(&f);
        prop_assume!(det != 0);
        let m = symm3(&f, &h);
        let tr = f.add(h.0[0][0], h.0[1][1]);
        let want = symm3_coefficients(tr as i128, det as i128).map(|x| f.from_int(x));
        prop_assert_eq!(m.char_coeffs(&f).to_vec(), want.to_vec());
        prop_assert!(has_symm3_shape(&f, &m, f.pow(det, 3)));
    }

    #[test]
    fn symm3_determinant(l in odd_prime(5, 30), entries in proptest::array::uniform4(0u64..30)) {
        let f = make_field(l, 1, None).unwrap();
        let h = SqMat([[entries[0] % l, entries[1] % l], [entries[2] % l, entries[3] % l]]);
        prop_assume!(h.det(&f) != 0);
        // det(Symm³ h) = det(h)^6
        let m = symm3(&f, &h);
        prop_assert_eq!(m.det(&f), f.pow(h.det(&f), 6));
    }

    #[test]
    fn inertia_patterns_pairwise_distinct(m2 in 0u32..4, extra in 0u32..4, l in odd_prime(3, 400)) {
        let m1 = m2 + extra;
        let w = (m1 + m2 + 3) as u64;
        match inertia_patterns(m1, m2, l) {
            Err(_) => prop_assert!(l - 1 <= w),
            Ok(p) => {
                prop_assert!(l - 1 > w);
                for i in 0..4 {
                    for j in i + 1..4 {
                        prop_assert_ne!(p[i].psi_exponents(l), p[j].psi_exponents(l));
                    }
                }
            }
        }
    }

    #[test]
    fn diagonal_similitudes(l in odd_prime(3, 50), x in 1u64..50, y in 1u64..50, c in 1u64..50) {
        let f = make_field(l, 1, None).unwrap();
        let (x, y, c) = (x % l, y % l, c % l);
        prop_assume!(x != 0 && y != 0 && c != 0);
        let g = gsp4::linalg::Mat4::diag([x, y, f.div(c, y).unwrap(), f.div(c, x).unwrap()]);
        prop_assert_eq!(similitude_factor(&f, &g).unwrap(), c);
        prop_assert!(GroupElement::new(&f, g).is_ok());
    }
}
