//! Per-`ℓ` tests: irreducibility witness, induced trace test, Symm³ shape.

use std::collections::BTreeMap;

use serde::Serialize;

use super::{CompatibleSystem, SampleConfig, ScreenError};
use crate::arith;
use crate::aschbacher::symm3_residual;
use crate::ff::{make_field, poly};

#[derive(Clone, Debug, Serialize)]
pub struct IrreducibilityOutcome {
    /// A prime `p` with `P_p` irreducible mod `ℓ`; proves `ρ̄` irreducible.
    pub witness: Option<u64>,
    /// Counts of factor-degree patterns such as `"1+1+2"`.
    pub factor_types: BTreeMap<String, usize>,
}

pub fn irreducibility_witness(
    sys: &CompatibleSystem,
    l: u64,
    sample: &[u64],
) -> Result<IrreducibilityOutcome, ScreenError> {
    if sample.is_empty() {
        return Err(ScreenError::NoData);
    }
    let mut factor_types = BTreeMap::new();
    for &p in sample {
        let Some(f) = sys.reduce(p, l) else { continue };
        let degrees = poly::factor_degrees(&f, l);
        if degrees == [4] {
            return Ok(IrreducibilityOutcome { witness: Some(p), factor_types });
        }
        let key = degrees.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("+");
        *factor_types.entry(key).or_insert(0) += 1;
    }
    Ok(IrreducibilityOutcome { witness: None, factor_types })
}

/// Fundamental discriminants ramified only at `-1`, the primes of `S` and
/// optionally `ℓ`, with `|D| <= bound`, sorted by `(|D|, D)`.
pub fn candidate_discriminants(s: &[u64], l: Option<u64>, bound: i64) -> Vec<i64> {
    let mut units: Vec<i64> = vec![-1];
    units.extend(s.iter().map(|&p| p as i64));
    if let Some(l) = l {
        if !s.contains(&l) {
            units.push(l as i64);
        }
    }
    let mut out = Vec::new();
    for mask in 1u32..(1 << units.len()) {
        let mut d: i128 = 1;
        for (i, &u) in units.iter().enumerate() {
            if mask >> i & 1 == 1 {
                d *= u as i128;
            }
        }
        if d == 1 {
            continue;
        }
        let disc = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        if disc.abs() <= bound as i128 {
            out.push(disc as i64);
        }
    }
    out.sort_by_key(|&d| (d.abs(), d));
    out.dedup();
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct InducedOutcome {
    pub d: i64,
    pub flagged: bool,
    pub inert_samples: usize,
    /// An inert `p` with `a_p ≢ 0 mod ℓ`.
    pub witness: Option<u64>,
    /// Set when no sampled prime is inert in `Q(√D)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

fn kronecker(d: i64, p: u64) -> i8 {
    arith::kronecker_prime(d, p)
}

pub fn induced_test(sys: &CompatibleSystem, l: u64, sample: &[u64], cfg: &SampleConfig) -> Vec<InducedOutcome> {
    let s: Vec<u64> = sys.s.iter().copied().collect();
    let ell = cfg.ramified_at_ell.then_some(l);
    candidate_discriminants(&s, ell, cfg.disc_bound)
        .into_iter()
        .map(|d| {
            let inert: Vec<u64> = sample.iter().copied().filter(|&p| kronecker(d, p) == -1).collect();
            let witness = inert.iter().copied().find(|&p| arith::rem_euclid(sys.trace(p).unwrap_or(0), l) != 0);
            let error = inert.is_empty().then(|| ScreenError::NoInertSamples(d).to_string());
            InducedOutcome {
                d,
                flagged: !inert.is_empty() && witness.is_none(),
                inert_samples: inert.len(),
                witness,
                error,
            }
        })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct Symm3Outcome {
    pub flagged: bool,
    pub weight_gate: bool,
    /// A sampled `p` whose `P_p mod ℓ` lacks the Symm³ eigenvalue shape.
    pub shape_failure: Option<u64>,
}

/// Weight gate `m1 = 2 m2`, then the coefficient identities of
/// `λ Symm³(h)` at every sampled `p`.
pub fn symm3_test(sys: &CompatibleSystem, l: u64, sample: &[u64]) -> Symm3Outcome {
    let weight_gate = sys.m1 == 2 * sys.m2;
    if !weight_gate {
        return Symm3Outcome { flagged: false, weight_gate, shape_failure: None };
    }
    let f = make_field(l, 1, None).expect("l is prime");
    let shape_failure = sample.iter().copied().find(|&p| {
        let c = sys.frobenius[&p];
        let e1 = f.from_int(-c[1]);
        let e2 = f.from_int(c[2]);
        let e = f.from_int(sys.similitude(p).unwrap_or(0));
        let e3 = f.from_int(-c[3]);
        let e4 = f.from_int(c[4]);
        !(e3 == f.mul(e, e1) && e4 == f.mul(e, e) && symm3_residual(&f, e1, e2, e) == 0)
    });
    Symm3Outcome { flagged: shape_failure.is_none(), weight_gate, shape_failure }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::screener::{make_generic_system, make_symm3_system, screen, trivial_system, CONDUCTOR_15_CURVE};

    #[test]
    fn discriminants_from_two_and_three() {
        assert_eq!(candidate_discriminants(&[2, 3], None, 1000), vec![-3, -4, -8, 8, 12, -24, 24]);
        assert_eq!(candidate_discriminants(&[], Some(5), 100), vec![-4, 5, -20]);
    }

    #[test]
    fn vanishing_at_three_mod_four_flags_gaussian_field() {
        let mut sys = make_generic_system(7, 200);
        let keys: Vec<u64> = sys.frobenius.keys().copied().collect();
        for p in keys.into_iter().filter(|p| p % 4 == 3) {
            let c = sys.frobenius.get_mut(&p).unwrap();
            c[1] = 0;
            c[3] = 0;
        }
        let sample = sys.sample(13, None);
        let out = induced_test(&sys, 13, &sample, &SampleConfig::default());
        let d4 = out.iter().find(|o| o.d == -4).unwrap();
        assert!(d4.flagged && d4.inert_samples > 10);
        assert!(out.iter().filter(|o| o.d != -4).all(|o| !o.flagged));
    }

    #[test]
    fn generic_system_clears_induced_flags() {
        let sys = make_generic_system(1, 200);
        let sample = sys.sample(29, None);
        assert!(induced_test(&sys, 29, &sample, &SampleConfig::default())
            .iter()
            .all(|o| !o.flagged && o.witness.is_some()));
    }

    #[test]
    fn symm3_system_flagged_and_weight_gate() {
        let mut sys = make_symm3_system(&CONDUCTOR_15_CURVE, &[3, 5], 15, 0, 200);
        for l in [7, 11, 13, 97] {
            let sample = sys.sample(l, None);
            assert!(symm3_test(&sys, l, &sample).flagged);
        }
        sys.m1 = 1;
        let sample = sys.sample(7, None);
        let out = symm3_test(&sys, 7, &sample);
        assert!(!out.flagged && !out.weight_gate);
    }

    #[test]
    fn generic_system_fails_shape_gate() {
        let mut sys = make_generic_system(3, 200);
        sys.m1 = 2;
        sys.m2 = 1;
        let rejected = [11u64, 13, 17, 19, 23, 29]
            .iter()
            .filter(|&&l| symm3_test(&sys, l, &sys.sample(l, None)).shape_failure.is_some())
            .count();
        assert_eq!(rejected, 6);
    }

    #[test]
    fn trivial_system_has_no_irreducible_witness() {
        let sys = trivial_system(0, 0, 100);
        let out = irreducibility_witness(&sys, 11, &sys.sample(11, None)).unwrap();
        assert!(out.witness.is_none());
        assert_eq!(out.factor_types.keys().collect::<Vec<_>>(), vec!["1+1+1+1"]);
    }

    #[test]
    fn symm3_factor_types_avoid_irreducible() {
        let sys = make_symm3_system(&CONDUCTOR_15_CURVE, &[3, 5], 15, 0, 300);
        let report = screen(&sys, 7, 97, &SampleConfig::default()).unwrap();
        for e in &report.entries {
            assert!(e.flags.contains(&crate::screener::Flag::PossiblySymm3));
            assert!(e.evidence.irreducibility.factor_types.keys().all(|k| k != "4"));
        }
    }
}
